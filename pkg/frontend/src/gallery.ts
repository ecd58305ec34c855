/**
 * Result-gallery rendering: thumbnail grid, page label, enlarged preview.
 * Pure string builders — the ui module owns the event wiring.
 */

import type { ResultRow } from "./api.js";
import { PAGE_SIZE, pageCount } from "./state.js";
import type { UiState } from "./state.js";

export function galleryHtml(state: UiState): string {
  if (state.page === null) {
    return `<p class="gallery-hint">Commit an element (button or <kbd>d</kbd>) to search.</p>`;
  }
  if (state.page.results.length === 0) {
    return `<p class="gallery-hint">No results — the query is empty.</p>`;
  }
  return state.page.results
    .map(
      (r, i) => `
      <figure class="thumb" data-idx="${i}" title="score ${r.score.toFixed(4)}">
        <img src="${escapeAttr(r.thumb)}" alt="screen ${escapeAttr(r.id)}" loading="lazy"/>
        <figcaption>${escapeHtml(r.id)}</figcaption>
      </figure>`,
    )
    .join("");
}

export function pageLabel(state: UiState): string {
  const pages = pageCount(state);
  if (state.page === null || pages === 0) return "";
  const first = state.page.page * PAGE_SIZE + 1;
  const last = state.page.page * PAGE_SIZE + state.page.results.length;
  return `page ${state.page.page + 1} of ${pages} · results ${first}–${last} of ${state.page.total}`;
}

export function previewHtml(state: UiState, urlOf: (path: string) => string): string {
  const row = state.selected;
  if (row === null) {
    return `<p class="preview-hint">Click a result to enlarge it here.</p>`;
  }
  return `
    <img src="${escapeAttr(urlOf(row.full))}" alt="screen ${escapeAttr(row.id)} full size"/>
    <p class="preview-meta">${escapeHtml(row.id)} · score ${row.score.toFixed(4)}</p>`;
}

export function rowAt(state: UiState, idx: number): ResultRow | null {
  if (state.page === null) return null;
  return state.page.results[idx] ?? null;
}

export function escapeHtml(str: string): string {
  return str.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function escapeAttr(str: string): string {
  return escapeHtml(str).replace(/"/g, "&quot;");
}
