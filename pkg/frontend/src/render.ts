// Pure HTML renderers. Every displayed value comes verbatim from a service
// response; nothing here derives labels or compares scores.

import { ArticleMetadata, ScanVerdict, SearchResult } from "./types.js";
import { textDirection } from "./rtl.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function renderSuggestions(results: SearchResult[]): string {
  if (results.length === 0) {
    return `<ul class="suggestions" hidden></ul>`;
  }
  const items = results
    .map((r) => {
      const title = escapeHtml(r.title);
      return `<li class="suggestion" role="option" dir="${textDirection(r.title)}" data-title="${title}">${title}</li>`;
    })
    .join("");
  return `<ul class="suggestions" role="listbox">${items}</ul>`;
}

// Table rows in fixed order: the five counters, then creator and date.
const METADATA_ROWS: [keyof ArticleMetadata, string][] = [
  ["total_edits", "Total edits"],
  ["total_editors", "Total editors"],
  ["total_bytes", "Total bytes"],
  ["total_characters", "Total characters"],
  ["total_words", "Total words"],
  ["creator_name", "Creator"],
  ["creation_date", "Created"],
];

export function metadataRows(meta: ArticleMetadata): [string, string][] {
  return METADATA_ROWS.map(([key, label]) => {
    const value = meta[key];
    return [label, value === null ? "" : String(value)];
  });
}

export function renderMetadataTable(meta: ArticleMetadata): string {
  const rows = metadataRows(meta)
    .map(
      ([label, value]) =>
        `<tr><th scope="row">${escapeHtml(label)}</th>` +
        `<td dir="${textDirection(value)}">${escapeHtml(value)}</td></tr>`,
    )
    .join("");
  return `<table class="metadata"><tbody>${rows}</tbody></table>`;
}

export function renderVerdictBadge(label: string, score: number): string {
  const kind = label === "template-translated" ? "badge-template" : "badge-human";
  return (
    `<span class="badge ${kind}">` +
    `${escapeHtml(label)} (${score.toFixed(3)})</span>`
  );
}

export function renderSummary(summary: string, pageUrl: string): string {
  const dir = textDirection(summary);
  const body = summary
    ? `<p class="summary" dir="${dir}">${escapeHtml(summary)}</p>`
    : "";
  return (
    `${body}<a class="article-link" href="${escapeHtml(pageUrl)}" ` +
    `target="_blank" rel="noopener">Read the full article</a>`
  );
}

export function renderError(message: string, retryable: boolean): string {
  const retry = retryable
    ? `<button class="retry" type="button">Retry</button>`
    : "";
  return `<div class="error-banner" role="alert">${escapeHtml(message)}${retry}</div>`;
}

export function renderVerdictPanel(verdict: ScanVerdict): string {
  return (
    `<section class="verdict-panel">` +
    `<h2 dir="${textDirection(verdict.title)}">${escapeHtml(verdict.title)}</h2>` +
    renderVerdictBadge(verdict.label, verdict.score) +
    renderMetadataTable(verdict.metadata) +
    renderSummary(verdict.summary, verdict.page_url) +
    `</section>`
  );
}
