/** Thin typed client over the assist-service JSON API.
 *
 * Every verdict and board fact shown in the UI originates here; the client
 * performs no puzzle reasoning of its own.
 */

import type {
  FamiliesResponse,
  Family,
  HintResponse,
  MoveResponse,
  SessionState,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Service-reported failure: HTTP status plus the {error, detail} body. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
    this.name = "ApiError";
  }
}

/** Transport failure: the request never produced a service response. */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
    this.name = "NetworkError";
  }
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    private readonly baseUrl: string = "",
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  families(): Promise<FamiliesResponse> {
    return this.request<FamiliesResponse>("GET", "/families");
  }

  createSession(family: Family, size: number, seed?: number): Promise<SessionState> {
    const body: Record<string, unknown> = { family, size };
    if (seed !== undefined) {
      body["seed"] = seed;
    }
    return this.request<SessionState>("POST", "/sessions", body);
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.request<SessionState>("GET", `/sessions/${sessionId}`);
  }

  move(sessionId: string, cell: number, value: number): Promise<MoveResponse> {
    return this.request<MoveResponse>("POST", `/sessions/${sessionId}/moves`, { cell, value });
  }

  undo(sessionId: string): Promise<SessionState> {
    return this.request<SessionState>("POST", `/sessions/${sessionId}/undo`);
  }

  hint(sessionId: string): Promise<HintResponse> {
    return this.request<HintResponse>("GET", `/sessions/${sessionId}/hint`);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { accept: "application/json" } };
    if (body !== undefined) {
      init.headers = { ...init.headers, "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (cause) {
      throw new NetworkError(cause);
    }
    if (!response.ok) {
      let code = "HttpError";
      let detail = `${response.status} ${response.statusText}`.trim();
      try {
        const parsed = (await response.json()) as { error?: string; detail?: string };
        if (parsed.error) {
          code = parsed.error;
        }
        if (parsed.detail) {
          detail = parsed.detail;
        }
      } catch {
        // non-JSON error body: keep the HTTP-level description
      }
      throw new ApiError(response.status, code, detail);
    }
    return (await response.json()) as T;
  }
}
