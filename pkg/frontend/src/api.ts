// Thin fetch client for the session service. All errors are normalized to
// ApiError with the server's {"error": ...} message when available.

import type { SessionView } from "./model.js";

export class ApiError extends Error {
  status: number;
  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

export interface ScenarioDescriptor {
  name: string;
  dim: number | null;
  measurements: string[];
  description: string;
}

export interface MeasureResponse {
  event: import("./model.js").MeasurementEvent;
  session: SessionView;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(url, init);
  } catch (e) {
    throw new ApiError(0, "service unreachable");
  }
  const text = await resp.text();
  let body: unknown = null;
  try {
    body = text ? JSON.parse(text) : null;
  } catch {
    body = null;
  }
  if (!resp.ok) {
    const msg =
      body && typeof body === "object" && "error" in (body as object)
        ? String((body as { error: unknown }).error)
        : `request failed (${resp.status})`;
    throw new ApiError(resp.status, msg);
  }
  return body as T;
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  async listScenarios(): Promise<ScenarioDescriptor[]> {
    const body = await request<{ scenarios: ScenarioDescriptor[] }>(
      `${this.baseUrl}/api/scenarios`,
    );
    return body.scenarios;
  }

  createSession(scenario: string, seed?: number, dim?: number): Promise<SessionView> {
    return request(`${this.baseUrl}/api/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ scenario, seed, dim }),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return request(`${this.baseUrl}/api/sessions/${id}`);
  }

  measure(id: string, measurement: string): Promise<MeasureResponse> {
    return request(`${this.baseUrl}/api/sessions/${id}/measurements`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ measurement }),
    });
  }

  deleteSession(id: string): Promise<void> {
    return request(`${this.baseUrl}/api/sessions/${id}`, { method: "DELETE" });
  }
}
