/** Shapes of the gateway's JSON responses. The console renders these
 * verbatim — every value on screen is traceable to one of these fields. */

export type TripState =
  | "CREATED"
  | "RECOMMENDED"
  | "SELECTED"
  | "PACKING"
  | "ALERTED";

export type Source = "EMAIL_NOTE" | "WEATHER" | "REVIEW";

export interface Itinerary {
  destination: string;
  arrival: string;
  departure: string;
  departure_defaulted: boolean;
  depart_home_at: string;
}

export interface Recommendation {
  name: string;
  source: Source;
  evidence: string;
}

export interface SessionSummary {
  accepted: number;
  rejected_blur: number;
  confirmed: string[];
}

export interface NotificationEvent {
  event_id: string;
  trip_id: string;
  kind: "RECOMMEND" | "ALERT";
  fire_at: string;
  payload: string[];
  fired: boolean;
}

export interface TripSummary {
  id: string;
  state: TripState;
  itinerary: Itinerary;
  recommendations: Recommendation[];
  selection: string[] | null;
  session: SessionSummary | null;
  events: NotificationEvent[];
}

export interface ErrorBody {
  code: string;
  message: string;
  details?: Record<string, unknown>;
}
