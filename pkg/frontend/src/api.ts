/**
 * Typed client for the sketchsearch HTTP API.
 *
 * Every mutating request carries a fresh nonce.  If the request dies at the
 * network level (fetch rejects — connection refused, mid-flight drop) we
 * retry with the *same* nonce; the server deduplicates on it, so a retry can
 * never double-apply a stroke or a commit.  HTTP error statuses are not
 * retried — those are real answers.
 */

export interface Prediction {
  category: string;
  confidence: number;
}

export interface ResultRow {
  id: string;
  score: number;
  thumb: string;
  full: string;
}

export interface ResultsPage {
  page: number;
  total: number;
  results: ResultRow[];
}

export interface StrokeResponse {
  top3: Prediction[];
  noop: boolean;
}

export interface DoneResponse extends ResultsPage {
  committed: { category: string; bbox: number[] };
  noop: boolean;
}

export interface RemoveLastResponse extends ResultsPage {
  noop: boolean;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export function newNonce(): string {
  const c = globalThis.crypto;
  if (c && typeof c.randomUUID === "function") return c.randomUUID();
  return Date.now().toString(36) + "-" + Math.random().toString(36).slice(2);
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export interface ApiOptions {
  base?: string;
  fetchFn?: typeof fetch;
  /** extra attempts after the first, on network failure only */
  retries?: number;
  retryDelayMs?: number;
  onRetry?: (attempt: number, err: unknown) => void;
}

export class Api {
  private base: string;
  private fetchFn: typeof fetch;
  private retries: number;
  private retryDelayMs: number;
  onRetry: (attempt: number, err: unknown) => void;

  constructor(opts: ApiOptions = {}) {
    this.base = (opts.base ?? "").replace(/\/$/, "");
    this.fetchFn = opts.fetchFn ?? fetch.bind(globalThis);
    this.retries = opts.retries ?? 3;
    this.retryDelayMs = opts.retryDelayMs ?? 250;
    this.onRetry = opts.onRetry ?? (() => {});
  }

  async createSession(): Promise<string> {
    const data = (await this.post("/api/session", {})) as { session_id: string };
    return data.session_id;
  }

  stroke(sessionId: string, points: number[][]): Promise<StrokeResponse> {
    return this.post("/api/stroke", { session_id: sessionId, points }) as Promise<StrokeResponse>;
  }

  undoStroke(sessionId: string): Promise<StrokeResponse> {
    return this.post("/api/stroke/undo", { session_id: sessionId }) as Promise<StrokeResponse>;
  }

  redoStroke(sessionId: string): Promise<StrokeResponse> {
    return this.post("/api/stroke/redo", { session_id: sessionId }) as Promise<StrokeResponse>;
  }

  elementDone(sessionId: string, chosen?: string): Promise<DoneResponse> {
    const body: Record<string, unknown> = { session_id: sessionId };
    if (chosen) body.chosen = chosen;
    return this.post("/api/element/done", body) as Promise<DoneResponse>;
  }

  removeLast(sessionId: string): Promise<RemoveLastResponse> {
    return this.post("/api/element/remove-last", {
      session_id: sessionId,
    }) as Promise<RemoveLastResponse>;
  }

  async results(sessionId: string, page: number): Promise<ResultsPage> {
    const q = new URLSearchParams({ session_id: sessionId, page: String(page) });
    const resp = await this.fetchFn(`${this.base}/api/results?${q}`);
    return (await this.decode(resp)) as ResultsPage;
  }

  feedback(sessionId: string, vote: "up" | "down"): Promise<{ ok: boolean }> {
    return this.post("/api/feedback", { session_id: sessionId, vote }) as Promise<{ ok: boolean }>;
  }

  screenUrl(path: string): string {
    return this.base + path;
  }

  /** POST with a nonce; network-level failures retry with the same nonce. */
  private async post(path: string, body: Record<string, unknown>): Promise<unknown> {
    const payload = JSON.stringify({ ...body, nonce: newNonce() });
    let lastErr: unknown;
    for (let attempt = 0; attempt <= this.retries; attempt++) {
      if (attempt > 0) {
        this.onRetry(attempt, lastErr);
        await sleep(this.retryDelayMs * attempt);
      }
      let resp: Response;
      try {
        resp = await this.fetchFn(this.base + path, {
          method: "POST",
          headers: { "content-type": "application/json" },
          body: payload,
        });
      } catch (err) {
        lastErr = err;
        continue;
      }
      return this.decode(resp);
    }
    throw lastErr;
  }

  private async decode(resp: Response): Promise<unknown> {
    if (resp.ok) return resp.json();
    let code = "http_" + resp.status;
    let message = resp.statusText;
    try {
      const doc = (await resp.json()) as { error?: { code?: string; message?: string } };
      if (doc.error) {
        code = doc.error.code ?? code;
        message = doc.error.message ?? message;
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, code, message);
  }
}
