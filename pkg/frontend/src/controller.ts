// View-state machine for the scanner page, kept DOM-free so it is fully
// testable: the host passes a render callback and wires events to the
// handler methods.

import { ScannerApi, ServiceError } from "./api.js";
import { debounce } from "./debounce.js";
import {
  renderError,
  renderSuggestions,
  renderVerdictPanel,
} from "./render.js";
import { ScanVerdict, SearchResult } from "./types.js";

export interface UiScanView {
  query: string;
  suggestions: SearchResult[];
  selectedTitle: string | null;
  verdict: ScanVerdict | null;
  error: { message: string; retryable: boolean } | null;
  scanning: boolean;
}

export class ScanController {
  readonly view: UiScanView = {
    query: "",
    suggestions: [],
    selectedTitle: null,
    verdict: null,
    error: null,
    scanning: false,
  };

  private readonly api: ScannerApi;
  private readonly onRender: (controller: ScanController) => void;
  private readonly suggestDebounced: (() => void) & { cancel: () => void };
  private suggestAbort: AbortController | null = null;

  constructor(
    api: ScannerApi,
    onRender: (controller: ScanController) => void,
    debounceMs = 250,
  ) {
    this.api = api;
    this.onRender = onRender;
    this.suggestDebounced = debounce(() => {
      void this.fetchSuggestions();
    }, debounceMs);
  }

  /** Keystroke handler: debounced suggestion fetch; empty input issues none. */
  handleInput(query: string): void {
    this.view.query = query;
    if (!query.trim()) {
      this.suggestDebounced.cancel();
      this.suggestAbort?.abort();
      this.view.suggestions = [];
      this.render();
      return;
    }
    this.suggestDebounced();
  }

  private async fetchSuggestions(): Promise<void> {
    // latest-wins: a new request cancels whatever is still in flight
    this.suggestAbort?.abort();
    const abort = new AbortController();
    this.suggestAbort = abort;
    try {
      const results = await this.api.search(this.view.query, 10, abort.signal);
      if (abort.signal.aborted) {
        return;
      }
      this.view.suggestions = results;
      this.view.error = null;
    } catch (err) {
      if (abort.signal.aborted) {
        return;
      }
      this.view.suggestions = []; // never show stale suggestions
      this.view.error = {
        message: err instanceof Error ? err.message : String(err),
        retryable: !(err instanceof ServiceError) || err.retryable,
      };
    }
    this.render();
  }

  /** Suggestion click: run the scan flow; one scan in flight at a time. */
  async selectTitle(title: string): Promise<void> {
    if (this.view.scanning) {
      return;
    }
    this.view.selectedTitle = title;
    this.view.suggestions = [];
    this.view.verdict = null;
    this.view.error = null;
    this.view.scanning = true;
    this.render();
    try {
      this.view.verdict = await this.api.scan(title);
    } catch (err) {
      this.view.error = {
        message: err instanceof Error ? err.message : String(err),
        retryable: !(err instanceof ServiceError) || err.retryable,
      };
    } finally {
      this.view.scanning = false;
    }
    this.render();
  }

  /** Retry affordance on the error banner. */
  async retry(): Promise<void> {
    if (this.view.selectedTitle) {
      await this.selectTitle(this.view.selectedTitle);
    } else if (this.view.query.trim()) {
      await this.fetchSuggestions();
    }
  }

  /** Full page body for the current state. */
  html(): string {
    const parts: string[] = [];
    parts.push(renderSuggestions(this.view.suggestions));
    if (this.view.error) {
      parts.push(renderError(this.view.error.message, this.view.error.retryable));
    }
    if (this.view.scanning) {
      parts.push(`<p class="scanning">Scanning…</p>`);
    }
    if (this.view.verdict) {
      parts.push(renderVerdictPanel(this.view.verdict));
    }
    return parts.join("\n");
  }

  private render(): void {
    this.onRender(this);
  }
}
