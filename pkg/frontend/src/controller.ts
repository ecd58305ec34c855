/**
 * Session controller: every user gesture funnels through here.
 *
 * Server calls are serialized through a single promise chain, so at most one
 * mutating request is in flight per session; gestures fired while a request
 * is pending simply queue behind it.  Failures never throw out of a gesture —
 * they land in `state.toast` and the mirror is rolled back where needed.
 */

import { Api, ApiError } from "./api.js";
import type { DoneResponse, ResultsPage, StrokeResponse } from "./api.js";
import { Store, canCommit, canRedo, canRemoveLast, canUndo, pageCount } from "./state.js";
import type { Stroke } from "./state.js";

export class SessionController {
  private chain: Promise<void> = Promise.resolve();
  private pending = 0;

  constructor(
    private api: Api,
    public store: Store,
  ) {}

  /** Resolves once every queued request has settled. */
  idle(): Promise<void> {
    return this.chain;
  }

  start(): Promise<void> {
    return this.enqueue(async () => {
      await this.ensureSession();
    });
  }

  strokeFinished(points: Stroke): Promise<void> {
    if (points.length < 2) return Promise.resolve();
    // show the stroke immediately; the request may still be queued
    this.store.update((s) => ({
      ...s,
      strokes: [...s.strokes, points],
      redoStrokes: [],
    }));
    return this.enqueue(async () => {
      const sid = await this.ensureSession();
      try {
        const resp = await this.api.stroke(sid, points);
        this.applyTop3(resp);
      } catch (err) {
        // the server never saw this stroke; take it back off the canvas
        this.store.update((s) => ({
          ...s,
          strokes: s.strokes.filter((st) => st !== points),
        }));
        throw err;
      }
    });
  }

  undo(): Promise<void> {
    if (!canUndo(this.store.get())) return Promise.resolve();
    return this.enqueue(async () => {
      const sid = await this.ensureSession();
      const resp = await this.api.undoStroke(sid);
      this.store.update((s) => {
        if (resp.noop) {
          // server disagrees that there was anything to undo; trust it
          return { ...s, strokes: [], top3: resp.top3 };
        }
        const strokes = s.strokes.slice();
        const popped = strokes.pop();
        return {
          ...s,
          strokes,
          redoStrokes: popped ? [...s.redoStrokes, popped] : s.redoStrokes,
          top3: resp.top3,
        };
      });
    });
  }

  redo(): Promise<void> {
    if (!canRedo(this.store.get())) return Promise.resolve();
    return this.enqueue(async () => {
      const sid = await this.ensureSession();
      const resp = await this.api.redoStroke(sid);
      this.store.update((s) => {
        if (resp.noop) {
          return { ...s, redoStrokes: [], top3: resp.top3 };
        }
        const redoStrokes = s.redoStrokes.slice();
        const restored = redoStrokes.pop();
        return {
          ...s,
          redoStrokes,
          strokes: restored ? [...s.strokes, restored] : s.strokes,
          top3: resp.top3,
        };
      });
    });
  }

  /** Commit the current doodle ("icon done") and refresh the ranking. */
  done(chosen?: string): Promise<void> {
    if (!canCommit(this.store.get())) return Promise.resolve();
    return this.enqueue(async () => {
      const sid = await this.ensureSession();
      const resp: DoneResponse = await this.api.elementDone(sid, chosen);
      this.store.update((s) => ({
        ...s,
        committed: [
          ...s.committed,
          { category: resp.committed.category, bbox: resp.committed.bbox, strokes: s.strokes },
        ],
        strokes: [],
        redoStrokes: [],
        top3: [],
        page: { page: resp.page, total: resp.total, results: resp.results },
        selected: null,
      }));
    });
  }

  removeLast(): Promise<void> {
    if (!canRemoveLast(this.store.get())) return Promise.resolve();
    return this.enqueue(async () => {
      const sid = await this.ensureSession();
      const resp = await this.api.removeLast(sid);
      this.store.update((s) => ({
        ...s,
        committed: resp.noop ? [] : s.committed.slice(0, -1),
        page: { page: resp.page, total: resp.total, results: resp.results },
        selected: null,
      }));
    });
  }

  goToPage(target: number): Promise<void> {
    return this.enqueue(async () => {
      const s = this.store.get();
      if (s.page === null) return;
      const pages = pageCount(s);
      const page = Math.max(0, Math.min(target, Math.max(pages - 1, 0)));
      const sid = await this.ensureSession();
      const resp: ResultsPage = await this.api.results(sid, page);
      this.store.update((st) => ({ ...st, page: resp, selected: null }));
    });
  }

  nextPage(): Promise<void> {
    const p = this.store.get().page;
    return p ? this.goToPage(p.page + 1) : Promise.resolve();
  }

  prevPage(): Promise<void> {
    const p = this.store.get().page;
    return p ? this.goToPage(p.page - 1) : Promise.resolve();
  }

  vote(v: "up" | "down"): Promise<void> {
    return this.enqueue(async () => {
      const sid = await this.ensureSession();
      await this.api.feedback(sid, v);
      this.toast(v === "up" ? "thanks — noted" : "noted; sorry about that");
    });
  }

  /** Drop everything and open a fresh session. */
  newSearch(): Promise<void> {
    return this.enqueue(async () => {
      const sid = await this.api.createSession();
      this.store.update((s) => ({
        ...s,
        sessionId: sid,
        strokes: [],
        redoStrokes: [],
        committed: [],
        top3: [],
        page: null,
        selected: null,
      }));
    });
  }

  toggleCheatsheet(): void {
    this.store.update((s) => ({ ...s, cheatsheetOpen: !s.cheatsheetOpen }));
  }

  select(row: import("./api.js").ResultRow | null): void {
    this.store.update((s) => ({ ...s, selected: row }));
  }

  toast(message: string | null): void {
    this.store.update((s) => ({ ...s, toast: message }));
  }

  private applyTop3(resp: StrokeResponse): void {
    this.store.update((s) => ({ ...s, top3: resp.top3 }));
  }

  private async ensureSession(): Promise<string> {
    const sid = this.store.get().sessionId;
    if (sid !== null) return sid;
    const fresh = await this.api.createSession();
    this.store.update((s) => ({ ...s, sessionId: fresh }));
    return fresh;
  }

  private enqueue(job: () => Promise<void>): Promise<void> {
    this.pending += 1;
    this.store.update((s) => (s.busy ? s : { ...s, busy: true }));
    const run = this.chain.then(job);
    this.chain = run
      .catch((err) => {
        this.toast(describeError(err));
      })
      .finally(() => {
        this.pending -= 1;
        if (this.pending === 0) {
          this.store.update((s) => ({ ...s, busy: false }));
        }
      });
    return this.chain;
  }
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    if (err.code === "unknown_session") return "session expired — start a new search";
    return err.message;
  }
  return "can't reach the server — stroke not saved";
}
