/**
 * DOM shell: builds the page, wires gestures to the session controller, and
 * re-renders from store updates.  All behavior lives in controller.ts; this
 * module is only markup and plumbing.
 */

import { Api } from "./api.js";
import { SketchPad } from "./canvas.js";
import { renderCheatsheet } from "./cheatsheet.js";
import { SessionController } from "./controller.js";
import { galleryHtml, pageLabel, previewHtml, rowAt } from "./gallery.js";
import { Store, canCommit, canRedo, canRemoveLast, canUndo, pageCount } from "./state.js";
import type { UiState } from "./state.js";

const PAGE_HTML = `
  <aside class="side">
    <section class="panel" id="cheat-panel">
      <header class="panel-head">
        <h2>Cheat sheet</h2>
        <button id="cheat-toggle" type="button">hide</button>
      </header>
      <div id="cheat-body"></div>
    </section>
    <section class="panel">
      <header class="panel-head"><h2>Enlarged view</h2></header>
      <div id="preview" class="preview"></div>
    </section>
  </aside>

  <main class="board">
    <div class="toolbar">
      <button id="undo" type="button">undo</button>
      <button id="redo" type="button">redo</button>
      <button id="remove-last" type="button">remove last</button>
      <span class="flex-gap"></span>
      <span id="busy" class="busy-dot" title="talking to the server"></span>
      <button id="done" type="button" class="primary">icon done <kbd>d</kbd></button>
    </div>
    <div class="phone">
      <canvas id="pad" width="450" height="800"></canvas>
    </div>
    <div class="readout">
      <ol id="top3" class="top3"></ol>
      <div id="committed" class="chips"></div>
    </div>
  </main>

  <section class="results">
    <header class="results-head">
      <button id="prev" type="button">&#171; previous</button>
      <span id="page-label"></span>
      <button id="next" type="button">next &#187;</button>
    </header>
    <div id="gallery" class="gallery"></div>
    <footer class="results-foot">
      <span class="votes">
        <button id="vote-up" type="button" title="these results are good">&#128077;</button>
        <button id="vote-down" type="button" title="these results are bad">&#128078;</button>
      </span>
      <button id="new-search" type="button">new search</button>
    </footer>
  </section>

  <div id="toast" class="toast" hidden></div>
`;

export interface App {
  controller: SessionController;
  store: Store;
  destroy: () => void;
}

export function buildApp(root: HTMLElement, api: Api = new Api()): App {
  const store = new Store();
  const controller = new SessionController(api, store);
  // surface retry attempts as a non-blocking toast
  api.onRetry = () => controller.toast("connection hiccup — retrying…");

  root.classList.add("app");
  root.innerHTML = PAGE_HTML;
  const el = <T extends HTMLElement>(id: string): T => {
    const node = root.querySelector<T>("#" + id);
    if (node === null) throw new Error(`missing #${id}`);
    return node;
  };

  el("cheat-body").innerHTML = renderCheatsheet();

  const pad = new SketchPad(el<HTMLCanvasElement>("pad"), (pts) => {
    void controller.strokeFinished(pts);
  });

  el("undo").addEventListener("click", () => void controller.undo());
  el("redo").addEventListener("click", () => void controller.redo());
  el("remove-last").addEventListener("click", () => void controller.removeLast());
  el("done").addEventListener("click", () => void controller.done());
  el("prev").addEventListener("click", () => void controller.prevPage());
  el("next").addEventListener("click", () => void controller.nextPage());
  el("vote-up").addEventListener("click", () => void controller.vote("up"));
  el("vote-down").addEventListener("click", () => void controller.vote("down"));
  el("new-search").addEventListener("click", () => void controller.newSearch());
  el("cheat-toggle").addEventListener("click", () => controller.toggleCheatsheet());

  // clicking a live guess commits the sketch as that category
  el("top3").addEventListener("click", (e) => {
    const row = (e.target as HTMLElement).closest("[data-cat]");
    if (row instanceof HTMLElement && row.dataset.cat) {
      void controller.done(row.dataset.cat);
    }
  });

  el("gallery").addEventListener("click", (e) => {
    const fig = (e.target as HTMLElement).closest("[data-idx]");
    if (fig instanceof HTMLElement) {
      controller.select(rowAt(store.get(), Number(fig.dataset.idx)));
    }
  });

  const doc = root.ownerDocument;
  const onKey = (e: KeyboardEvent) => {
    if (e.key !== "d" && e.key !== "D") return;
    const t = e.target as HTMLElement | null;
    if (t && (t.tagName === "INPUT" || t.tagName === "TEXTAREA" || t.isContentEditable)) return;
    void controller.done();
  };
  doc.addEventListener("keydown", onKey);

  let toastTimer: ReturnType<typeof setTimeout> | null = null;
  const render = (s: UiState) => {
    el<HTMLButtonElement>("undo").disabled = !canUndo(s);
    el<HTMLButtonElement>("redo").disabled = !canRedo(s);
    el<HTMLButtonElement>("remove-last").disabled = !canRemoveLast(s);
    el<HTMLButtonElement>("done").disabled = !canCommit(s);
    el<HTMLButtonElement>("prev").disabled = s.page === null || s.page.page <= 0;
    el<HTMLButtonElement>("next").disabled = s.page === null || s.page.page >= pageCount(s) - 1;
    el<HTMLButtonElement>("vote-up").disabled = s.page === null;
    el<HTMLButtonElement>("vote-down").disabled = s.page === null;
    el("busy").classList.toggle("on", s.busy);

    // the server's confidences, verbatim — never re-scaled client-side
    el("top3").innerHTML = s.top3
      .map(
        (p) => `<li data-cat="${p.category}" title="commit as ${p.category}">
          <b>${(p.confidence * 100).toFixed(1)}%</b> ${p.category}</li>`,
      )
      .join("");
    el("committed").innerHTML = s.committed
      .map((c, i) => {
        const last = i === s.committed.length - 1 ? " last" : "";
        return `<span class="chip${last}">${c.category}</span>`;
      })
      .join("");

    el("gallery").innerHTML = galleryHtml(s);
    el("page-label").textContent = pageLabel(s);
    el("preview").innerHTML = previewHtml(s, (p) => api.screenUrl(p));
    el("cheat-body").hidden = !s.cheatsheetOpen;
    el("cheat-toggle").textContent = s.cheatsheetOpen ? "hide" : "show";

    const toast = el("toast");
    toast.hidden = s.toast === null;
    toast.textContent = s.toast ?? "";
    if (s.toast !== null) {
      if (toastTimer !== null) clearTimeout(toastTimer);
      toastTimer = setTimeout(() => controller.toast(null), 4000);
    }
    pad.setScene(s);
  };
  const unsubscribe = store.subscribe(render);

  void controller.start();

  return {
    controller,
    store,
    destroy: () => {
      doc.removeEventListener("keydown", onKey);
      unsubscribe();
      if (toastTimer !== null) clearTimeout(toastTimer);
    },
  };
}
