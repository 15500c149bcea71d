// Service payload shapes and strict parsers. A malformed response must
// surface the exact missing field so the UI error state can name it.

export interface ArticleMetadata {
  total_edits: number;
  total_editors: number;
  top_editors: [string, number][];
  total_bytes: number;
  total_characters: number;
  total_words: number;
  creator_name: string;
  creation_date: string | null;
}

export interface ScanVerdict {
  title: string;
  page_url: string;
  metadata: ArticleMetadata;
  label: string;
  score: number;
  model_id: string;
  summary: string;
  summary_source: string;
}

export interface SearchResult {
  title: string;
  score: number;
}

export class SchemaMismatchError extends Error {
  readonly field: string;

  constructor(field: string) {
    super(`service response is missing field: ${field}`);
    this.field = field;
  }
}

function req<T>(doc: Record<string, unknown>, field: string, kind: string): T {
  const value = doc[field];
  if (value === undefined || (kind !== "nullable" && value === null)) {
    throw new SchemaMismatchError(field);
  }
  return value as T;
}

export function parseMetadata(raw: unknown): ArticleMetadata {
  if (typeof raw !== "object" || raw === null) {
    throw new SchemaMismatchError("metadata");
  }
  const doc = raw as Record<string, unknown>;
  return {
    total_edits: req<number>(doc, "total_edits", "number"),
    total_editors: req<number>(doc, "total_editors", "number"),
    top_editors: req<[string, number][]>(doc, "top_editors", "array"),
    total_bytes: req<number>(doc, "total_bytes", "number"),
    total_characters: req<number>(doc, "total_characters", "number"),
    total_words: req<number>(doc, "total_words", "number"),
    creator_name: req<string>(doc, "creator_name", "string"),
    creation_date: req<string | null>(doc, "creation_date", "nullable"),
  };
}

export function parseVerdict(raw: unknown): ScanVerdict {
  if (typeof raw !== "object" || raw === null) {
    throw new SchemaMismatchError("verdict");
  }
  const doc = raw as Record<string, unknown>;
  return {
    title: req<string>(doc, "title", "string"),
    page_url: req<string>(doc, "page_url", "string"),
    metadata: parseMetadata(req<unknown>(doc, "metadata", "object")),
    label: req<string>(doc, "label", "string"),
    score: req<number>(doc, "score", "number"),
    model_id: req<string>(doc, "model_id", "string"),
    summary: (doc["summary"] as string) ?? "",
    summary_source: (doc["summary_source"] as string) ?? "",
  };
}

export function parseSearchResults(raw: unknown): SearchResult[] {
  if (typeof raw !== "object" || raw === null) {
    throw new SchemaMismatchError("results");
  }
  const results = (raw as Record<string, unknown>)["results"];
  if (!Array.isArray(results)) {
    throw new SchemaMismatchError("results");
  }
  return results.map((entry) => {
    const doc = entry as Record<string, unknown>;
    return {
      title: req<string>(doc, "title", "string"),
      score: req<number>(doc, "score", "number"),
    };
  });
}
