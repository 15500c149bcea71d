import { describe, expect, it, vi } from "vitest";

import { ScannerApi, ServiceError } from "../src/api.js";
import {
  SchemaMismatchError,
  parseMetadata,
  parseSearchResults,
  parseVerdict,
} from "../src/types.js";

const META = {
  total_edits: 7,
  total_editors: 3,
  top_editors: [["UserA", 4]],
  total_bytes: 900,
  total_characters: 420,
  total_words: 80,
  creator_name: "Samira",
  creation_date: "2014-03-02",
};

describe("parsers", () => {
  it("accepts a complete metadata document", () => {
    expect(parseMetadata(META).total_edits).toBe(7);
  });

  it.each(["total_edits", "total_editors", "top_editors", "total_bytes",
           "total_characters", "total_words", "creator_name"])(
    "names %s when it is missing",
    (field) => {
      const doc = { ...META } as Record<string, unknown>;
      delete doc[field];
      try {
        parseMetadata(doc);
        expect.unreachable("should have thrown");
      } catch (err) {
        expect(err).toBeInstanceOf(SchemaMismatchError);
        expect((err as SchemaMismatchError).field).toBe(field);
      }
    },
  );

  it("allows a null creation_date", () => {
    expect(parseMetadata({ ...META, creation_date: null }).creation_date).toBeNull();
  });

  it("names the verdict field that is missing", () => {
    const doc = {
      title: "t", page_url: "u", metadata: META, label: "human-generated",
      score: 0.1, model_id: "m",
    } as Record<string, unknown>;
    delete doc.label;
    expect(() => parseVerdict(doc)).toThrowError(/label/);
  });

  it("rejects a search payload without results", () => {
    expect(() => parseSearchResults({})).toThrowError(/results/);
  });
});

describe("client", () => {
  it("percent-encodes titles in urls", async () => {
    const urls: string[] = [];
    const fetchFn = vi.fn(async (url: RequestInfo | URL) => {
      urls.push(String(url));
      return new Response(JSON.stringify({ title: "بذرة", metadata: META }), {
        status: 200,
      });
    });
    const api = new ScannerApi("http://s.test/", fetchFn as typeof fetch);
    await api.metadata("بذرة-469");
    expect(urls[0]).toBe(
      "http://s.test/article/%D8%A8%D8%B0%D8%B1%D8%A9-469/metadata",
    );
  });

  it("maps http errors to ServiceError with the detail", async () => {
    const fetchFn = vi.fn(async () =>
      new Response(JSON.stringify({ detail: "no cached metadata (retry may succeed)" }),
                   { status: 502 }),
    );
    const api = new ScannerApi("http://s.test", fetchFn as typeof fetch);
    try {
      await api.scan("x");
      expect.unreachable("should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(ServiceError);
      expect((err as ServiceError).status).toBe(502);
      expect((err as ServiceError).retryable).toBe(true);
      expect((err as ServiceError).message).toContain("retry may succeed");
    }
  });

  it("marks 4xx responses non-retryable", async () => {
    const fetchFn = vi.fn(async () =>
      new Response(JSON.stringify({ detail: "bad request" }), { status: 400 }),
    );
    const api = new ScannerApi("http://s.test", fetchFn as typeof fetch);
    await expect(api.search("q")).rejects.toMatchObject({ retryable: false });
  });

  it("posts the scan title as json", async () => {
    let captured: RequestInit | undefined;
    const fetchFn = vi.fn(async (_url: RequestInfo | URL, init?: RequestInit) => {
      captured = init;
      return new Response(JSON.stringify({
        title: "t", page_url: "u", metadata: META,
        label: "human-generated", score: 0.2, model_id: "m",
        summary: "", summary_source: "",
      }), { status: 200 });
    });
    const api = new ScannerApi("http://s.test", fetchFn as typeof fetch);
    await api.scan("مقال");
    expect(captured?.method).toBe("POST");
    expect(JSON.parse(String(captured?.body))).toEqual({ title: "مقال" });
  });
});
