// Thin typed client over the scanner service endpoints. All classification
// happens server-side; this module only moves JSON.

import {
  ArticleMetadata,
  ScanVerdict,
  SearchResult,
  parseMetadata,
  parseSearchResults,
  parseVerdict,
} from "./types.js";

export class ServiceError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.status = status;
  }

  /** Network drops and upstream (5xx) failures are worth retrying;
   *  client mistakes are not. */
  get retryable(): boolean {
    return this.status === 0 || this.status >= 500;
  }
}

export type FetchLike = typeof fetch;

export class ScannerApi {
  readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn: FetchLike = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ServiceError(0, `service unreachable: ${String(err)}`);
    }
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      // non-JSON error bodies fall through to the status check
    }
    if (!response.ok) {
      const detail =
        (body as { detail?: string } | null)?.detail ?? response.statusText;
      throw new ServiceError(response.status, detail);
    }
    return body;
  }

  async health(): Promise<{ status: string; model_id: string }> {
    return (await this.request("/health")) as { status: string; model_id: string };
  }

  async search(
    query: string,
    limit = 10,
    signal?: AbortSignal,
  ): Promise<SearchResult[]> {
    const q = encodeURIComponent(query);
    const body = await this.request(`/search?q=${q}&limit=${limit}`, { signal });
    return parseSearchResults(body);
  }

  async metadata(title: string): Promise<ArticleMetadata> {
    const body = await this.request(
      `/article/${encodeURIComponent(title)}/metadata`,
    );
    return parseMetadata((body as { metadata: unknown }).metadata);
  }

  async scan(title: string): Promise<ScanVerdict> {
    const body = await this.request("/scan", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ title }),
    });
    return parseVerdict(body);
  }

  async model(): Promise<Record<string, unknown>> {
    return (await this.request("/model")) as Record<string, unknown>;
  }
}
