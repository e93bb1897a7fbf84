import { describe, expect, it } from "vitest";

import {
  NoOutstandingQuestion,
  RequestFailed,
  ServiceUnreachable,
  SessionClient,
  SessionGone,
  type FetchLike,
} from "../src/client.js";

interface Call {
  url: string;
  init?: RequestInit;
}

function fetchStub(
  responder: (url: string, init?: RequestInit) => Response | Error,
): { fetch: FetchLike; calls: Call[] } {
  const calls: Call[] = [];
  const fetch: FetchLike = (url, init) => {
    calls.push({ url, init });
    const out = responder(url, init);
    if (out instanceof Error) return Promise.reject(out);
    return Promise.resolve(out);
  };
  return { fetch, calls };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

const snapshot = {
  session_id: "s1",
  status: "awaiting-answer",
  utterance: ["i", "am", "free"],
  text: "Is your sentence mainly about someone being free?",
  hypothesis_summary: "top-level frame <free>",
  ilt: "((sentence-type *fragment))",
  ilt_pretty: "((sentence-type *fragment))",
  ilt_paraphrase: "",
  chunks: [],
  transcript: [],
  questions_used: 0,
};

describe("SessionClient", () => {
  it("posts the record to /sessions and returns the first snapshot", async () => {
    const { fetch, calls } = fetchStub(() => json(snapshot));
    const client = new SessionClient("http://svc:1234", fetch);
    const view = await client.createSession("utterance: (i am free)");
    expect(view.session_id).toBe("s1");
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("http://svc:1234/sessions");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      record: "utterance: (i am free)",
    });
  });

  it("normalizes a trailing slash in the base url", async () => {
    const { fetch, calls } = fetchStub(() => json([]));
    await new SessionClient("http://svc:1234/", fetch).demoRecords();
    expect(calls[0].url).toBe("http://svc:1234/demo/records");
    expect(calls[0].init?.method).toBe("GET");
    expect(calls[0].init?.body).toBeUndefined();
  });

  it("sends answers as JSON to the session's answer endpoint", async () => {
    const { fetch, calls } = fetchStub(() => json(snapshot));
    await new SessionClient("http://svc:1234", fetch).answer("s1", "no");
    expect(calls[0].url).toBe("http://svc:1234/sessions/s1/answer");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ answer: "no" });
  });

  it("wraps network failures as ServiceUnreachable", async () => {
    const { fetch } = fetchStub(() => new TypeError("fetch failed"));
    const client = new SessionClient("http://svc:1234", fetch);
    await expect(client.question("s1")).rejects.toBeInstanceOf(
      ServiceUnreachable,
    );
  });

  it("maps 404 to SessionGone with the service's detail text", async () => {
    const { fetch } = fetchStub(() =>
      json({ detail: "unknown session nope" }, 404),
    );
    const client = new SessionClient("http://svc:1234", fetch);
    await expect(client.result("nope")).rejects.toThrow(
      "unknown session nope",
    );
    await expect(client.result("nope")).rejects.toBeInstanceOf(SessionGone);
  });

  it("maps 409 to NoOutstandingQuestion", async () => {
    const { fetch } = fetchStub(() =>
      json({ detail: "no outstanding question to answer" }, 409),
    );
    const client = new SessionClient("http://svc:1234", fetch);
    await expect(client.answer("s1", "yes")).rejects.toBeInstanceOf(
      NoOutstandingQuestion,
    );
  });

  it("reports other failures with their status code", async () => {
    const { fetch } = fetchStub(() =>
      json({ detail: "expected exactly one record, got 2" }, 400),
    );
    const client = new SessionClient("http://svc:1234", fetch);
    const failure = await client.createSession("bad").then(
      () => null,
      (err: unknown) => err,
    );
    expect(failure).toBeInstanceOf(RequestFailed);
    expect((failure as RequestFailed).status).toBe(400);
    expect((failure as RequestFailed).message).toBe(
      "expected exactly one record, got 2",
    );
  });

  it("falls back to the status line when the error body is not JSON", async () => {
    const { fetch } = fetchStub(
      () => new Response("boom", { status: 500, statusText: "Server Error" }),
    );
    const client = new SessionClient("http://svc:1234", fetch);
    await expect(client.demoRecords()).rejects.toThrow("500 Server Error");
  });
});
