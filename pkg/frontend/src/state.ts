import type { ErrorBody, NotificationEvent, TripSummary } from "./types.js";

/** Everything a view needs to render.
 *
 * The state is assembled purely from gateway responses — the console never
 * computes recommendations, missed items, or schedules on its own. The one
 * rule it does enforce is structural: the checkbox set is always a subset
 * of the names currently on screen.
 */
export interface ConsoleState {
  view: "home" | "trip";
  trips: TripSummary[];
  trip: TripSummary | null;
  checked: string[];
  error: ErrorBody | null;
  notice: string | null;
  notifications: NotificationEvent[];
  acknowledged: string[];
  pollFailures: number;
}

export function initialState(): ConsoleState {
  return {
    view: "home",
    trips: [],
    trip: null,
    checked: [],
    error: null,
    notice: null,
    notifications: [],
    acknowledged: [],
    pollFailures: 0,
  };
}

export function displayedNames(trip: TripSummary | null): string[] {
  return trip ? trip.recommendations.map((r) => r.name) : [];
}

/** Checkbox state is derived from the server's stored selection, so a
 * reload reproduces exactly what was saved. */
function deriveChecked(trip: TripSummary): string[] {
  const selection = new Set(trip.selection ?? []);
  return displayedNames(trip).filter((name) => selection.has(name));
}

export function showHome(state: ConsoleState, trips: TripSummary[]): ConsoleState {
  return { ...state, view: "home", trips, trip: null, checked: [], error: null };
}

export function showTrip(state: ConsoleState, trip: TripSummary): ConsoleState {
  return {
    ...state,
    view: "trip",
    trip,
    checked: deriveChecked(trip),
    error: null,
    notice: null,
  };
}

/** Background refresh: take the server's newer trip but keep the user's
 * unsaved checkbox edits (trimmed to names still on screen). */
export function refreshTrip(state: ConsoleState, trip: TripSummary): ConsoleState {
  const names = trip.recommendations.map((r) => r.name);
  return { ...state, trip, checked: state.checked.filter((n) => names.includes(n)) };
}

/** Flip one checkbox. Names not on the displayed list are ignored. */
export function toggleChecked(state: ConsoleState, name: string, on: boolean): ConsoleState {
  const names = displayedNames(state.trip);
  if (!names.includes(name)) {
    return state;
  }
  const checked = on
    ? names.filter((n) => n === name || state.checked.includes(n))
    : state.checked.filter((n) => n !== name);
  return { ...state, checked };
}

export function applySaved(state: ConsoleState, trip: TripSummary): ConsoleState {
  const count = trip.selection?.length ?? 0;
  const notice =
    count === 0
      ? "Empty selection saved — nothing will be tracked, every alert will be empty."
      : `${count} item${count === 1 ? "" : "s"} to remind`;
  return { ...state, trip, checked: deriveChecked(trip), error: null, notice };
}

/** Server-side rejection: show the envelope, keep the checkboxes as they were. */
export function applyError(state: ConsoleState, error: ErrorBody): ConsoleState {
  return { ...state, error };
}

export function clearError(state: ConsoleState): ConsoleState {
  return { ...state, error: null, notice: null };
}

export function applyNotifications(
  state: ConsoleState,
  events: NotificationEvent[],
): ConsoleState {
  const seen = new Set(state.notifications.map((e) => e.event_id));
  const fresh = events.filter((e) => !seen.has(e.event_id));
  if (fresh.length === 0) {
    return state;
  }
  return { ...state, notifications: [...state.notifications, ...fresh] };
}

/** The ALERT banner for the active trip, unless the user dismissed it. */
export function activeAlert(state: ConsoleState): NotificationEvent | null {
  if (!state.trip) {
    return null;
  }
  const tripId = state.trip.id;
  const alerts = state.notifications.filter(
    (e) => e.kind === "ALERT" && e.trip_id === tripId && !state.acknowledged.includes(e.event_id),
  );
  return alerts.length ? alerts[alerts.length - 1] : null;
}

export function acknowledgeAlert(state: ConsoleState): ConsoleState {
  const alert = activeAlert(state);
  if (!alert) {
    return state;
  }
  return { ...state, acknowledged: [...state.acknowledged, alert.event_id] };
}

// --- polling -------------------------------------------------------------

export const POLL_INTERVAL_MS = 2000;
export const POLL_FAILURES_SURFACED = 3;
const POLL_MAX_DELAY_MS = 30000;

export function pollSucceeded(state: ConsoleState): ConsoleState {
  return state.pollFailures === 0 ? state : { ...state, pollFailures: 0 };
}

export function pollFailed(state: ConsoleState): ConsoleState {
  return { ...state, pollFailures: state.pollFailures + 1 };
}

/** Connectivity trouble is only surfaced once it looks real. */
export function pollProblemVisible(state: ConsoleState): boolean {
  return state.pollFailures >= POLL_FAILURES_SURFACED;
}

/** 2s cadence, doubled per consecutive failure, capped at 30s. */
export function nextPollDelay(failures: number): number {
  return Math.min(POLL_INTERVAL_MS * 2 ** failures, POLL_MAX_DELAY_MS);
}
