import type { NotificationEvent, Recommendation, TripSummary } from "../src/types.js";

export function rec(name: string, source: Recommendation["source"], evidence = ""): Recommendation {
  return { name, source, evidence };
}

/** A trip shaped like the gateway's Newport response, trimmed to the
 * fields the console actually renders. */
export function makeTrip(overrides: Partial<TripSummary> = {}): TripSummary {
  return {
    id: "t1",
    state: "RECOMMENDED",
    itinerary: {
      destination: "Newport",
      arrival: "2020-11-25",
      departure: "2020-12-02",
      departure_defaulted: true,
      depart_home_at: "2020-11-25T09:00:00+00:00",
    },
    recommendations: [
      rec("id", "EMAIL_NOTE", "Don't forget to bring your student ID Card."),
      rec("card", "EMAIL_NOTE", "Don't forget to bring your student ID Card."),
      rec("jacket", "EMAIL_NOTE", "don't forget to bring jacket"),
      rec("light sweaters", "WEATHER", "MIN_TEMP_COOL"),
      rec("gloves", "WEATHER", "MIN_TEMP_COOL"),
      rec("water", "REVIEW", "Bring water and a hat."),
      rec("hat", "REVIEW", "Bring water and a hat."),
      rec("camera", "REVIEW", "Don't forget to bring a camera."),
    ],
    selection: null,
    session: null,
    events: [],
    ...overrides,
  };
}

export function makeAlert(overrides: Partial<NotificationEvent> = {}): NotificationEvent {
  return {
    event_id: "t1:alert",
    trip_id: "t1",
    kind: "ALERT",
    fire_at: "2020-11-25T08:00:00+00:00",
    payload: ["id", "card"],
    fired: true,
    ...overrides,
  };
}
