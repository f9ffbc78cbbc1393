import type {
  NotificationEvent,
  Recommendation,
  SessionSummary,
  TripSummary,
} from "./types.js";
import type { ConsoleState } from "./state.js";
import { activeAlert, pollProblemVisible } from "./state.js";

/** Render-to-string views. Pure functions of the state: same state in,
 * byte-identical markup out, which keeps them snapshot-testable. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function errorBanner(state: ConsoleState): string {
  if (!state.error) {
    return "";
  }
  const { code, message } = state.error;
  return `<div class="banner banner-error" role="alert">` +
    `<strong>${escapeHtml(code)}</strong> ${escapeHtml(message)}</div>`;
}

function noticeBanner(state: ConsoleState): string {
  if (!state.notice) {
    return "";
  }
  return `<div class="banner banner-notice">${escapeHtml(state.notice)}</div>`;
}

function pollBanner(state: ConsoleState): string {
  if (!pollProblemVisible(state)) {
    return "";
  }
  return `<div class="banner banner-warn">Connection trouble — retrying in the background ` +
    `(${state.pollFailures} failed polls)</div>`;
}

export function renderAlertBanner(alert: NotificationEvent | null): string {
  if (!alert) {
    return "";
  }
  const items = alert.payload.length
    ? `<ul class="alert-items">${alert.payload
        .map((item) => `<li>${escapeHtml(item)}</li>`)
        .join("")}</ul>`
    : `<p>Nothing missed — everything you selected was seen while packing.</p>`;
  return `<div class="banner banner-alert" role="alert" data-event="${escapeHtml(alert.event_id)}">` +
    `<strong>Departure alert</strong> — still not packed:` +
    items +
    `<button type="button" data-action="ack-alert">Acknowledge</button>` +
    `</div>`;
}

// --- home ----------------------------------------------------------------

function tripRow(trip: TripSummary): string {
  const it = trip.itinerary;
  return `<li><button type="button" data-action="open-trip" data-trip="${escapeHtml(trip.id)}">` +
    `${escapeHtml(it.destination)} — ${escapeHtml(it.arrival)}` +
    ` <span class="badge badge-state">${trip.state}</span></button></li>`;
}

export function renderHome(state: ConsoleState): string {
  const trips = state.trips.length
    ? `<ul class="trip-list">${state.trips.map(tripRow).join("")}</ul>`
    : `<p class="placeholder">No trips yet — paste an invitation email above.</p>`;
  return `${pollBanner(state)}${errorBanner(state)}
<section class="card">
  <h2>New trip</h2>
  <form data-action="submit-email">
    <textarea name="email_text" rows="10" placeholder="Paste the invitation email here"></textarea>
    <label class="consent">
      <input type="checkbox" name="consent" />
      Allow the destination and travel dates to be sent to search and weather providers
    </label>
    <button type="submit">Build recommendations</button>
  </form>
</section>
<section class="card">
  <h2>Trips</h2>
  ${trips}
</section>`;
}

// --- trip detail ---------------------------------------------------------

function groupBySource(recs: Recommendation[]): Map<string, Recommendation[]> {
  // first-appearance order, so the groups come out exactly as the API
  // ordered them (EMAIL_NOTE, then WEATHER, then REVIEW)
  const groups = new Map<string, Recommendation[]>();
  for (const rec of recs) {
    const bucket = groups.get(rec.source);
    if (bucket) {
      bucket.push(rec);
    } else {
      groups.set(rec.source, [rec]);
    }
  }
  return groups;
}

function checklistItem(rec: Recommendation, checked: string[], confirmed: string[]): string {
  const isChecked = checked.includes(rec.name) ? " checked" : "";
  const tick = confirmed.includes(rec.name) ? ` <span class="tick" title="seen while packing">✓</span>` : "";
  return `<li><label title="${escapeHtml(rec.evidence)}">` +
    `<input type="checkbox" data-item="${escapeHtml(rec.name)}"${isChecked} />` +
    ` ${escapeHtml(rec.name)}${tick}</label></li>`;
}

function renderRecommendations(state: ConsoleState): string {
  const trip = state.trip!;
  const confirmed = trip.session?.confirmed ?? [];
  const sections: string[] = [];
  for (const [source, recs] of groupBySource(trip.recommendations)) {
    sections.push(
      `<h3 class="group-${source}">${source}</h3>` +
        `<ul class="checklist">${recs
          .map((rec) => checklistItem(rec, state.checked, confirmed))
          .join("")}</ul>`,
    );
  }
  return sections.join("\n");
}

export function renderProgress(session: SessionSummary | null): string {
  if (!session) {
    return `<p class="placeholder">Packing not started.</p>`;
  }
  return `<dl class="progress">
  <dt>Frames accepted</dt><dd>${session.accepted}</dd>
  <dt>Rejected (blurred)</dt><dd>${session.rejected_blur}</dd>
  <dt>Confirmed</dt><dd>${session.confirmed.map(escapeHtml).join(", ") || "—"}</dd>
</dl>`;
}

function selectionBadge(trip: TripSummary): string {
  if (trip.selection === null) {
    return "";
  }
  const n = trip.selection.length;
  return `<span class="badge badge-selection">${n} item${n === 1 ? "" : "s"} to remind</span>`;
}

function notificationRows(state: ConsoleState): string {
  const tripId = state.trip!.id;
  const rows = state.notifications
    .filter((e) => e.trip_id === tripId && e.kind === "RECOMMEND")
    .map(
      (e) =>
        `<li><span class="badge">${e.kind}</span> fired ${escapeHtml(e.fire_at)} — ` +
        `${e.payload.length} recommendations</li>`,
    );
  return rows.length
    ? `<ul class="notifications">${rows.join("")}</ul>`
    : `<p class="placeholder">No notifications delivered yet.</p>`;
}

export function renderTripDetail(state: ConsoleState): string {
  const trip = state.trip!;
  const it = trip.itinerary;
  return `${pollBanner(state)}${renderAlertBanner(activeAlert(state))}${errorBanner(state)}${noticeBanner(state)}
<nav><button type="button" data-action="back">&larr; All trips</button></nav>
<section class="card">
  <h2>${escapeHtml(it.destination)}
    <span class="badge badge-state">${trip.state}</span>
    ${selectionBadge(trip)}
  </h2>
  <p class="itinerary">Arrive ${escapeHtml(it.arrival)} · depart ${escapeHtml(it.departure)}` +
    `${it.departure_defaulted ? " (assumed)" : ""} · leave home ${escapeHtml(it.depart_home_at)}</p>
</section>
<section class="card">
  <h2>Pack list</h2>
  ${renderRecommendations(state)}
  <button type="button" data-action="save-selection">Save selection</button>
</section>
<section class="card">
  <h2>Packing session</h2>
  ${renderProgress(trip.session)}
</section>
<section class="card">
  <h2>Notifications</h2>
  ${notificationRows(state)}
</section>`;
}

export function renderApp(state: ConsoleState): string {
  return state.view === "home" ? renderHome(state) : renderTripDetail(state);
}
