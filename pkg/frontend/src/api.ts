import type { ErrorBody, NotificationEvent, TripSummary } from "./types.js";

/** Error raised for any non-2xx response (or a dead network).
 *
 * The gateway wraps domain failures as {"error": {code, message, details}};
 * that envelope is surfaced as-is so views can show code + message inline.
 */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly details: Record<string, unknown>;

  constructor(code: string, message: string, status = 0, details: Record<string, unknown> = {}) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
    this.details = details;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let body: { error?: ErrorBody } = {};
  try {
    body = await response.json();
  } catch {
    // non-JSON error page; fall through to the generic error below
  }
  if (body.error && typeof body.error.code === "string") {
    return new ApiError(body.error.code, body.error.message, response.status, body.error.details ?? {});
  }
  return new ApiError("HTTP_ERROR", `request failed with status ${response.status}`, response.status);
}

/** Thin client for the gateway. Configuration is the base URL, nothing else. */
export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, {
        headers: { "Content-Type": "application/json" },
        ...init,
      });
    } catch (err) {
      const message = err instanceof Error ? err.message : String(err);
      throw new ApiError("NETWORK", message);
    }
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  createTrip(emailText: string, consent: boolean, receivedAt?: string): Promise<TripSummary> {
    return this.request("/trips", {
      method: "POST",
      body: JSON.stringify({
        email_text: emailText,
        consent,
        ...(receivedAt ? { received_at: receivedAt } : {}),
      }),
    });
  }

  listTrips(): Promise<TripSummary[]> {
    return this.request("/trips");
  }

  getTrip(tripId: string): Promise<TripSummary> {
    return this.request(`/trips/${encodeURIComponent(tripId)}`);
  }

  saveSelection(tripId: string, items: string[]): Promise<TripSummary> {
    return this.request(`/trips/${encodeURIComponent(tripId)}/selection`, {
      method: "POST",
      body: JSON.stringify({ items }),
    });
  }

  previewAlert(tripId: string): Promise<NotificationEvent> {
    return this.request(`/trips/${encodeURIComponent(tripId)}/alert`);
  }

  pollNotifications(): Promise<NotificationEvent[]> {
    return this.request("/notifications");
  }
}

/** One in-flight request per view key.
 *
 * The poll loop and user actions can race; a second call with the same key
 * while the first is pending just joins it instead of issuing another fetch.
 */
export class InflightRegistry {
  private pending = new Map<string, Promise<unknown>>();

  run<T>(key: string, task: () => Promise<T>): Promise<T> {
    const existing = this.pending.get(key);
    if (existing) {
      return existing as Promise<T>;
    }
    const promise = task().finally(() => {
      this.pending.delete(key);
    });
    this.pending.set(key, promise);
    return promise;
  }

  has(key: string): boolean {
    return this.pending.has(key);
  }
}
