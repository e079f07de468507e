import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import {
  ServiceError,
  createPersona,
  getQuestions,
  markQuestion,
  sendChat,
} from "../src/api.js";
import { setApiBase } from "../src/config.js";

const fetchMock = vi.fn();

beforeEach(() => {
  setApiBase("http://service.test");
  vi.stubGlobal("fetch", fetchMock);
  fetchMock.mockReset();
});

afterEach(() => {
  vi.unstubAllGlobals();
});

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("api client", () => {
  it("sends the creation request with the canonical spaced key", async () => {
    fetchMock.mockResolvedValue(
      jsonResponse({
        description: "d",
        system_prompt: "s",
        assistant_message: "a",
        persona_id: "p-1",
      }),
    );
    await createPersona("Employment", {
      name: "Emily",
      age: 34,
      occupation: "School assistant",
      medicalCondition: "Down Syndrome",
    });
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe("http://service.test/api/personas");
    const body = JSON.parse((init as RequestInit).body as string);
    expect(body.profile["Medical Condition"]).toBe("Down Syndrome");
    expect(body.theme).toBe("Employment");
  });

  it("surfaces the error envelope as a ServiceError", async () => {
    fetchMock.mockResolvedValue(
      jsonResponse(
        { error: { code: "schema_violation", message: "bad age", field: "profile.age" } },
        400,
      ),
    );
    const failure = await createPersona("Employment", {
      name: "Emily",
      age: 34,
      occupation: "x",
      medicalCondition: "y",
    }).catch((e) => e);
    expect(failure).toBeInstanceOf(ServiceError);
    expect(failure.status).toBe(400);
    expect(failure.code).toBe("schema_violation");
    expect(failure.field).toBe("profile.age");
    expect(failure.retryable).toBe(false);
  });

  it("marks 502 provider failures as retryable", async () => {
    fetchMock.mockResolvedValue(
      jsonResponse(
        {
          error: {
            code: "provider_failure",
            message: "backend down",
            field: null,
            retryable: true,
          },
        },
        502,
      ),
    );
    const failure = await sendChat("p-1", null, "hello").catch((e) => e);
    expect(failure).toBeInstanceOf(ServiceError);
    expect(failure.retryable).toBe(true);
  });

  it("treats network failures as retryable", async () => {
    fetchMock.mockRejectedValue(new TypeError("fetch failed"));
    const failure = await sendChat("p-1", null, "hello").catch((e) => e);
    expect(failure).toBeInstanceOf(ServiceError);
    expect(failure.status).toBe(0);
    expect(failure.retryable).toBe(true);
  });

  it("repeats the ability query parameter per selection", async () => {
    fetchMock.mockResolvedValue(jsonResponse([]));
    await getQuestions("Employment", ["Memory Skills", "Teamwork"]);
    const [url] = fetchMock.mock.calls[0]!;
    expect(url).toContain("theme=Employment");
    expect(url).toContain("ability=Memory+Skills");
    expect(url).toContain("ability=Teamwork");
  });

  it("sends marked flag on unmark", async () => {
    fetchMock.mockResolvedValue(jsonResponse({ conversation_id: "c", marked: [] }));
    await markQuestion("c", 2, false);
    const [, init] = fetchMock.mock.calls[0]!;
    expect(JSON.parse((init as RequestInit).body as string)).toEqual({
      turn_index: 2,
      marked: false,
    });
  });

  it("omits conversation_id until one exists", async () => {
    fetchMock.mockResolvedValue(
      jsonResponse({ assistant_message: { role: "assistant", content: "hi" } }),
    );
    await sendChat("p-1", null, "hello");
    const [, init] = fetchMock.mock.calls[0]!;
    const body = JSON.parse((init as RequestInit).body as string);
    expect("conversation_id" in body).toBe(false);
    expect(body.context).toEqual([{ role: "user", content: "hello" }]);
  });
});
