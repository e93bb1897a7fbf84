/** Thin typed client for the repair session service. */

import type { DemoRecord, SessionResult, Snapshot } from "./protocol.js";

export class ApiError extends Error {}

/** The service could not be reached at all (network refused, DNS, ...). */
export class ServiceUnreachable extends ApiError {}

/** The session id is unknown to the service (expired or never existed). */
export class SessionGone extends ApiError {}

/** An answer was sent while no question was outstanding. */
export class NoOutstandingQuestion extends ApiError {}

/** Any other non-2xx reply. */
export class RequestFailed extends ApiError {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

async function errorDetail(resp: Response): Promise<string> {
  try {
    const data: unknown = await resp.json();
    if (
      typeof data === "object" &&
      data !== null &&
      typeof (data as { detail?: unknown }).detail === "string"
    ) {
      return (data as { detail: string }).detail;
    }
  } catch {
    // non-JSON body, fall through to the status line
  }
  return `${resp.status} ${resp.statusText}`;
}

export class SessionClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // wrap the global so it is not called with the client as `this`
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchFn(this.baseUrl + path, {
        method,
        headers:
          body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ServiceUnreachable(`service unreachable: ${String(err)}`);
    }
    if (resp.ok) {
      return (await resp.json()) as T;
    }
    const detail = await errorDetail(resp);
    if (resp.status === 404) throw new SessionGone(detail);
    if (resp.status === 409) throw new NoOutstandingQuestion(detail);
    throw new RequestFailed(resp.status, detail);
  }

  demoRecords(): Promise<DemoRecord[]> {
    return this.request("GET", "/demo/records");
  }

  createSession(record: string): Promise<Snapshot> {
    return this.request("POST", "/sessions", { record });
  }

  question(sessionId: string): Promise<Snapshot> {
    return this.request("GET", `/sessions/${sessionId}/question`);
  }

  answer(sessionId: string, reply: "yes" | "no"): Promise<Snapshot> {
    return this.request("POST", `/sessions/${sessionId}/answer`, {
      answer: reply,
    });
  }

  abort(sessionId: string): Promise<Snapshot> {
    return this.request("POST", `/sessions/${sessionId}/abort`);
  }

  result(sessionId: string): Promise<SessionResult> {
    return this.request("GET", `/sessions/${sessionId}/result`);
  }
}
