import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ScannerApi } from "../src/api.js";
import { ScanController } from "../src/controller.js";

const VERDICT_BODY = {
  title: "مقال-1",
  page_url: "https://arz.wikipedia.org/wiki/%D9%85%D9%82%D8%A7%D9%84-1",
  metadata: {
    total_edits: 38,
    total_editors: 5,
    top_editors: [["UserA", 9]],
    total_bytes: 52_000,
    total_characters: 16_000,
    total_words: 2_600,
    creator_name: "Samira",
    creation_date: "2015-06-01",
  },
  label: "human-generated",
  score: 0.0123456,
  model_id: "abc123",
  summary: "نص.",
  summary_source: "stored-text",
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function makeController(fetchFn: typeof fetch, debounceMs = 250) {
  const renders: string[] = [];
  const api = new ScannerApi("http://service.test", fetchFn);
  const controller = new ScanController(api, (c) => renders.push(c.html()), debounceMs);
  return { controller, renders };
}

describe("suggestion flow", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  it("debounces keystrokes to one request after 250ms", async () => {
    const calls: string[] = [];
    const fetchFn = vi.fn(async (url: RequestInfo | URL) => {
      calls.push(String(url));
      return jsonResponse({ results: [{ title: "مقال-1", score: 1.0 }] });
    });
    const { controller } = makeController(fetchFn as typeof fetch);
    controller.handleInput("م");
    controller.handleInput("مق");
    controller.handleInput("مقال");
    expect(calls).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(249);
    expect(calls).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(2);
    expect(calls).toHaveLength(1);
    expect(calls[0]).toContain(encodeURIComponent("مقال"));
    expect(controller.view.suggestions[0]?.title).toBe("مقال-1");
  });

  it("issues no request for an empty query and clears suggestions", async () => {
    const fetchFn = vi.fn(async () =>
      jsonResponse({ results: [{ title: "x", score: 1 }] }),
    );
    const { controller } = makeController(fetchFn as typeof fetch);
    controller.handleInput("عنوان");
    await vi.advanceTimersByTimeAsync(300);
    expect(controller.view.suggestions).toHaveLength(1);
    controller.handleInput("");
    await vi.advanceTimersByTimeAsync(300);
    expect(fetchFn).toHaveBeenCalledTimes(1);
    expect(controller.view.suggestions).toHaveLength(0);
  });

  it("newest keystroke wins over a slow in-flight request", async () => {
    let resolveSlow: ((r: Response) => void) | null = null;
    const fetchFn = vi.fn((url: RequestInfo | URL, init?: RequestInit) => {
      const q = new URL(String(url)).searchParams.get("q");
      if (q === "old") {
        return new Promise<Response>((resolve) => {
          resolveSlow = resolve;
          init?.signal?.addEventListener("abort", () =>
            resolve(jsonResponse({ results: [] })),
          );
        });
      }
      return Promise.resolve(
        jsonResponse({ results: [{ title: "new-title", score: 1 }] }),
      );
    });
    const { controller } = makeController(fetchFn as typeof fetch);
    controller.handleInput("old");
    await vi.advanceTimersByTimeAsync(251);
    controller.handleInput("new");
    await vi.advanceTimersByTimeAsync(251);
    resolveSlow?.(jsonResponse({ results: [{ title: "stale", score: 1 }] }));
    await vi.advanceTimersByTimeAsync(1);
    expect(controller.view.suggestions.map((s) => s.title)).toEqual(["new-title"]);
  });

  it("shows an error banner and no stale suggestions when the service dies", async () => {
    let healthy = true;
    const fetchFn = vi.fn(async () => {
      if (!healthy) {
        throw new TypeError("fetch failed");
      }
      return jsonResponse({ results: [{ title: "قديم", score: 1 }] });
    });
    const { controller } = makeController(fetchFn as typeof fetch);
    controller.handleInput("قد");
    await vi.advanceTimersByTimeAsync(251);
    expect(controller.view.suggestions).toHaveLength(1);
    healthy = false;
    controller.handleInput("قديم");
    await vi.advanceTimersByTimeAsync(251);
    expect(controller.view.suggestions).toHaveLength(0);
    expect(controller.view.error?.retryable).toBe(true);
    expect(controller.html()).toContain("error-banner");
    expect(controller.html()).toContain("retry");
  });
});

describe("scan flow", () => {
  it("renders the badge only after a successful scan", async () => {
    const fetchFn = vi.fn(async () => jsonResponse(VERDICT_BODY));
    const { controller, renders } = makeController(fetchFn as typeof fetch, 0);
    expect(controller.html()).not.toContain("badge");
    await controller.selectTitle("مقال-1");
    expect(controller.view.verdict?.label).toBe("human-generated");
    const html = controller.html();
    expect(html).toContain("human-generated (0.012)");
    expect(html).toContain("Total edits");
    expect(renders.some((r) => r.includes("Scanning"))).toBe(true);
  });

  it("keeps one scan in flight at a time", async () => {
    let inFlight = 0;
    let peak = 0;
    const fetchFn = vi.fn(async () => {
      inFlight += 1;
      peak = Math.max(peak, inFlight);
      await new Promise((resolve) => setTimeout(resolve, 5));
      inFlight -= 1;
      return jsonResponse(VERDICT_BODY);
    });
    const { controller } = makeController(fetchFn as typeof fetch, 0);
    const first = controller.selectTitle("مقال-1");
    const second = controller.selectTitle("مقال-2");
    await Promise.all([first, second]);
    expect(peak).toBe(1);
    expect(fetchFn).toHaveBeenCalledTimes(1);
  });

  it("names the missing field on a schema mismatch", async () => {
    const broken = { ...VERDICT_BODY } as Record<string, unknown>;
    delete broken.score;
    const fetchFn = vi.fn(async () => jsonResponse(broken));
    const { controller } = makeController(fetchFn as typeof fetch, 0);
    await controller.selectTitle("مقال-1");
    expect(controller.view.error?.message).toContain("score");
  });

  it("surfaces upstream failures with a retry affordance", async () => {
    let failures = 1;
    const fetchFn = vi.fn(async () => {
      if (failures > 0) {
        failures -= 1;
        return jsonResponse({ detail: "upstream fetch failed (retry may succeed)" }, 502);
      }
      return jsonResponse(VERDICT_BODY);
    });
    const { controller } = makeController(fetchFn as typeof fetch, 0);
    await controller.selectTitle("مقال-1");
    expect(controller.view.error?.retryable).toBe(true);
    expect(controller.view.verdict).toBeNull();
    await controller.retry();
    expect(controller.view.error).toBeNull();
    expect(controller.view.verdict?.title).toBe("مقال-1");
  });
});
