import { ApiClient, ApiError, InflightRegistry } from "./api.js";
import {
  ConsoleState,
  acknowledgeAlert,
  applyError,
  applyNotifications,
  applySaved,
  initialState,
  nextPollDelay,
  pollFailed,
  pollSucceeded,
  refreshTrip,
  showHome,
  showTrip,
  toggleChecked,
} from "./state.js";
import { renderApp } from "./render.js";

/** Wire the console into a root element.
 *
 * Single event loop: every user action and the 2s poll funnel through
 * setState/rerender. The render is a plain innerHTML swap, skipped when the
 * markup didn't change so in-progress typing survives background polls.
 */
export function mount(root: HTMLElement, api: ApiClient): void {
  let state: ConsoleState = initialState();
  let lastHtml = "";
  let pollTimer: number | undefined;
  const inflight = new InflightRegistry();

  function rerender(): void {
    const html = renderApp(state);
    if (html !== lastHtml) {
      lastHtml = html;
      root.innerHTML = html;
    }
  }

  function setState(next: ConsoleState): void {
    if (next !== state) {
      state = next;
      rerender();
    }
  }

  function fail(err: unknown): void {
    if (err instanceof ApiError) {
      setState(applyError(state, { code: err.code, message: err.message, details: err.details }));
    } else {
      setState(applyError(state, { code: "UNEXPECTED", message: String(err) }));
    }
  }

  // --- polling ----------------------------------------------------------

  function schedulePoll(): void {
    window.clearTimeout(pollTimer);
    pollTimer = window.setTimeout(() => void runPoll(), nextPollDelay(state.pollFailures));
  }

  async function runPoll(): Promise<void> {
    try {
      const events = await inflight.run("poll:notifications", () => api.pollNotifications());
      let next = applyNotifications(state, events);
      if (next.view === "trip" && next.trip) {
        const tripId = next.trip.id;
        const trip = await inflight.run(`poll:trip:${tripId}`, () => api.getTrip(tripId));
        next = refreshTrip(next, trip);
      }
      setState(pollSucceeded(next));
    } catch {
      setState(pollFailed(state));
    } finally {
      schedulePoll();
    }
  }

  // --- actions ----------------------------------------------------------

  async function submitEmail(form: HTMLFormElement): Promise<void> {
    const text = (form.elements.namedItem("email_text") as HTMLTextAreaElement).value.trim();
    const consent = (form.elements.namedItem("consent") as HTMLInputElement).checked;
    if (!text) {
      setState(applyError(state, { code: "EMPTY_DOCUMENT", message: "Paste an email first." }));
      return;
    }
    if (!consent) {
      // same envelope the server would send, but no request leaves the page
      setState(
        applyError(state, {
          code: "CONSENT_REQUIRED",
          message: "Tick the consent box to let the trip details reach the providers.",
        }),
      );
      return;
    }
    try {
      const trip = await inflight.run("create", () => api.createTrip(text, consent));
      setState(showTrip(state, trip));
    } catch (err) {
      fail(err);
    }
  }

  async function openTrip(tripId: string): Promise<void> {
    try {
      const trip = await inflight.run(`trip:${tripId}`, () => api.getTrip(tripId));
      setState(showTrip(state, trip));
    } catch (err) {
      fail(err);
    }
  }

  async function goHome(): Promise<void> {
    try {
      const trips = await inflight.run("trips", () => api.listTrips());
      setState(showHome(state, trips));
    } catch (err) {
      fail(err);
    }
  }

  async function saveSelection(): Promise<void> {
    if (!state.trip) {
      return;
    }
    try {
      const trip = await inflight.run("save", () => api.saveSelection(state.trip!.id, state.checked));
      setState(applySaved(state, trip));
    } catch (err) {
      fail(err); // checkboxes stay exactly as the user left them
    }
  }

  // --- event delegation -------------------------------------------------

  root.addEventListener("submit", (event) => {
    const form = event.target as HTMLFormElement;
    if (form.dataset.action === "submit-email") {
      event.preventDefault();
      void submitEmail(form);
    }
  });

  root.addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!button) {
      return;
    }
    switch (button.dataset.action) {
      case "open-trip":
        void openTrip(button.dataset.trip ?? "");
        break;
      case "back":
        void goHome();
        break;
      case "save-selection":
        void saveSelection();
        break;
      case "ack-alert":
        setState(acknowledgeAlert(state));
        break;
    }
  });

  root.addEventListener("change", (event) => {
    const box = event.target as HTMLInputElement;
    if (box.dataset.item !== undefined) {
      setState(toggleChecked(state, box.dataset.item, box.checked));
    }
  });

  rerender();
  void goHome();
  schedulePoll();
}

const rootElement = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootElement) {
  mount(rootElement, new ApiClient(""));
}
