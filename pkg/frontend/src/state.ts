/**
 * Client-side mirror of one drawing session.
 *
 * The server owns the truth; this store is the optimistic copy the UI renders
 * from.  Button enablement (undo / redo / remove-last) is reconciled from the
 * no-op flags the server sends back, so the controls can never promise an
 * action the server would refuse.
 */

import type { Prediction, ResultRow, ResultsPage } from "./api.js";

export const CANVAS_W = 450;
export const CANVAS_H = 800;
export const PAGE_SIZE = 80;

export type Stroke = number[][];

export interface CommittedElement {
  category: string;
  bbox: number[]; // cx, cy, w, h in logical canvas units
  strokes: Stroke[];
}

export interface UiState {
  sessionId: string | null;
  /** strokes of the in-progress doodle, logical 450x800 coords */
  strokes: Stroke[];
  /** strokes available to redo (most recent undo last) */
  redoStrokes: Stroke[];
  committed: CommittedElement[];
  top3: Prediction[];
  page: ResultsPage | null;
  selected: ResultRow | null;
  cheatsheetOpen: boolean;
  busy: boolean;
  toast: string | null;
}

export function initialState(): UiState {
  return {
    sessionId: null,
    strokes: [],
    redoStrokes: [],
    committed: [],
    top3: [],
    page: null,
    selected: null,
    cheatsheetOpen: true,
    busy: false,
    toast: null,
  };
}

export function canUndo(s: UiState): boolean {
  return s.strokes.length > 0;
}

export function canRedo(s: UiState): boolean {
  return s.redoStrokes.length > 0;
}

export function canCommit(s: UiState): boolean {
  return s.strokes.length > 0;
}

export function canRemoveLast(s: UiState): boolean {
  return s.committed.length > 0;
}

export function pageCount(s: UiState): number {
  if (s.page === null || s.page.total === 0) return 0;
  return Math.ceil(s.page.total / PAGE_SIZE);
}

export type Listener = (s: UiState) => void;

export class Store {
  private state: UiState = initialState();
  private listeners: Listener[] = [];

  get(): UiState {
    return this.state;
  }

  update(fn: (s: UiState) => UiState): void {
    this.state = fn(this.state);
    for (const listener of this.listeners) listener(this.state);
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    fn(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }
}
