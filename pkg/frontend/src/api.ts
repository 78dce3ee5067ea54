/** Typed fetch client for the annotation service. Every view reads and
 * writes through this module only; no labeling logic lives client-side. */

import type {
  AuditEntry,
  DecisionBody,
  IterationBody,
  IterationReport,
  KeywordBody,
  KeywordResult,
  NetworkResponse,
  QueueResponse,
  SessionInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export class ApiClient {
  constructor(
    public baseUrl: string,
    public token?: string,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const headers: Record<string, string> = {
      "Content-Type": "application/json",
      ...(this.token ? { "X-Auth-Token": this.token } : {}),
    };
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, { ...init, headers });
    } catch (err) {
      throw new ApiError(0, `server unreachable (${String(err)})`);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (body.detail !== undefined) detail = JSON.stringify(body.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private async requestText(path: string): Promise<string> {
    const headers = this.token ? { "X-Auth-Token": this.token } : undefined;
    const response = await fetch(this.baseUrl + path, { headers });
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return await response.text();
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  session(): Promise<SessionInfo> {
    return this.request("/session");
  }

  queue(status?: "pending" | "decided", limit?: number): Promise<QueueResponse> {
    const params = new URLSearchParams();
    if (status) params.set("status", status);
    if (limit !== undefined) params.set("limit", String(limit));
    const qs = params.toString();
    return this.request(`/queue${qs ? "?" + qs : ""}`);
  }

  postDecision(body: DecisionBody): Promise<Record<string, unknown>> {
    return this.request("/decisions", { method: "POST", body: JSON.stringify(body) });
  }

  postIteration(body: IterationBody): Promise<IterationReport> {
    return this.request("/iterations", { method: "POST", body: JSON.stringify(body) });
  }

  postKeyword(body: KeywordBody): Promise<KeywordResult> {
    return this.request("/keywords", { method: "POST", body: JSON.stringify(body) });
  }

  network(): Promise<NetworkResponse> {
    return this.request("/network");
  }

  networkCompare(ref: string): Promise<Record<string, unknown>> {
    return this.request(`/network/compare?ref=${encodeURIComponent(ref)}`);
  }

  heatmapCsv(): Promise<string> {
    return this.requestText("/heatmap?format=csv");
  }

  audit(since = 0): Promise<{ entries: AuditEntry[] }> {
    return this.request(`/audit?since=${since}`);
  }
}
