// @vitest-environment jsdom
/**
 * DOM wiring tests against a scripted in-process fake of the HTTP API.
 * The fake mimics the server's session semantics (stroke/undo/redo stacks,
 * no-op flags, paging) so the UI's disabled states can be checked end to end
 * without a network.
 */

import { afterEach, beforeAll, beforeEach, describe, expect, it, vi } from "vitest";

import { Api } from "../src/api.js";
import { buildApp } from "../src/ui.js";
import type { App } from "../src/ui.js";
import { drawStroke, silenceMissingCanvas } from "./drive.js";

beforeAll(silenceMissingCanvas);

const TOP3 = [
  { category: "slider", confidence: 0.62 },
  { category: "switch", confidence: 0.21 },
  { category: "left_arrow", confidence: 0.09 },
];

const TOTAL = 160; // two pages of 80

interface Call {
  path: string;
  body: Record<string, unknown> | null;
}

function fakeBackend() {
  const calls: Call[] = [];
  let strokes = 0;
  let redo = 0;
  let committed = 0;
  let sessions = 0;
  let searched = false;

  const resultsPage = (page: number) => ({
    page,
    total: committed > 0 ? TOTAL : 0,
    results:
      committed > 0
        ? Array.from({ length: 80 }, (_, i) => ({
            id: `p${page}-${i}`,
            score: 1 - (page * 80 + i) / 1000,
            thumb: `/screens/p${page}-${i}/thumb`,
            full: `/screens/p${page}-${i}/full`,
          }))
        : [],
  });

  const fetchFn = vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
    const u = new URL(String(url), "http://fake");
    const body = init?.body ? (JSON.parse(String(init.body)) as Record<string, unknown>) : null;
    calls.push({ path: u.pathname, body });
    const json = (data: unknown, status = 200) =>
      new Response(JSON.stringify(data), { status });

    switch (u.pathname) {
      case "/api/session":
        sessions += 1;
        strokes = redo = committed = 0;
        searched = false;
        return json({ session_id: `sess${sessions}` });
      case "/api/stroke":
        strokes += 1;
        redo = 0;
        return json({ top3: TOP3, noop: false });
      case "/api/stroke/undo": {
        const noop = strokes === 0;
        if (!noop) {
          strokes -= 1;
          redo += 1;
        }
        return json({ noop, top3: strokes > 0 ? TOP3 : [] });
      }
      case "/api/stroke/redo": {
        const noop = redo === 0;
        if (!noop) {
          redo -= 1;
          strokes += 1;
        }
        return json({ noop, top3: strokes > 0 ? TOP3 : [] });
      }
      case "/api/element/done": {
        if (strokes === 0) {
          return json({ error: { code: "empty_sketch", message: "nothing drawn" } }, 409);
        }
        committed += 1;
        strokes = 0;
        redo = 0;
        searched = true;
        const chosen = (body?.chosen as string | undefined) ?? TOP3[0].category;
        return json({
          ...resultsPage(0),
          committed: { category: chosen, bbox: [100, 100, 50, 50] },
          noop: false,
        });
      }
      case "/api/element/remove-last": {
        const noop = committed === 0;
        if (!noop) committed -= 1;
        return json({ ...resultsPage(0), noop });
      }
      case "/api/results": {
        if (!searched) {
          return json({ error: { code: "no_search_yet", message: "no search yet" } }, 409);
        }
        return json(resultsPage(Number(u.searchParams.get("page") ?? "0")));
      }
      case "/api/feedback":
        return json({ ok: true, noop: false });
      default:
        return json({ error: { code: "unknown", message: u.pathname } }, 404);
    }
  });

  return {
    fetchFn,
    calls,
    posts: (path: string) => calls.filter((c) => c.path === path),
  };
}

const STROKE = [
  [100, 100],
  [150, 130],
  [200, 100],
];

describe("page shell", () => {
  let app: App;
  let backend: ReturnType<typeof fakeBackend>;
  let root: HTMLElement;

  beforeEach(async () => {
    root = document.createElement("div");
    document.body.appendChild(root);
    backend = fakeBackend();
    app = buildApp(root, new Api({ fetchFn: backend.fetchFn as unknown as typeof fetch }));
    await app.controller.idle();
  });

  afterEach(() => {
    app.destroy();
    root.remove();
  });

  const button = (id: string) => root.querySelector<HTMLButtonElement>("#" + id)!;
  const canvas = () => root.querySelector<HTMLCanvasElement>("#pad")!;

  it("renders the canvas, the controls, and all 23 cheat-sheet entries", () => {
    expect(canvas()).not.toBeNull();
    expect(root.querySelectorAll(".cheat-entry")).toHaveLength(23);
    const note = root.querySelector(".cheat-note")!.textContent!;
    expect(note).toContain("squiggle");
    expect(note).toContain("square");
    expect(note.toLowerCase()).toContain("text button");
    // nothing drawn yet: everything that would mutate the sketch is off
    expect(button("done").disabled).toBe(true);
    expect(button("undo").disabled).toBe(true);
    expect(button("redo").disabled).toBe(true);
    expect(button("remove-last").disabled).toBe(true);
    expect(button("vote-up").disabled).toBe(true);
  });

  it("the cheat sheet collapses and reopens", () => {
    const body = root.querySelector<HTMLElement>("#cheat-body")!;
    expect(body.hidden).toBe(false);
    button("cheat-toggle").click();
    expect(body.hidden).toBe(true);
    expect(button("cheat-toggle").textContent).toBe("show");
    button("cheat-toggle").click();
    expect(body.hidden).toBe(false);
  });

  it("drawing three strokes issues exactly three stroke requests", async () => {
    drawStroke(canvas(), STROKE);
    drawStroke(canvas(), STROKE.map(([x, y]) => [x, y + 60]));
    drawStroke(canvas(), STROKE.map(([x, y]) => [x, y + 120]));
    await app.controller.idle();
    expect(backend.posts("/api/stroke")).toHaveLength(3);
  });

  it("shows the three live guesses with the server's confidences", async () => {
    drawStroke(canvas(), STROKE);
    await app.controller.idle();
    const rows = [...root.querySelectorAll("#top3 li")];
    expect(rows).toHaveLength(3);
    expect(rows[0].textContent).toContain("slider");
    expect(rows[0].textContent).toContain("62.0%");
    expect(rows[1].textContent).toContain("21.0%");
    expect(rows[2].textContent).toContain("9.0%");
  });

  it("the d key commits and the gallery fills with one page of thumbnails", async () => {
    drawStroke(canvas(), STROKE);
    await app.controller.idle();
    document.dispatchEvent(new KeyboardEvent("keydown", { key: "d", bubbles: true }));
    await app.controller.idle();
    expect(backend.posts("/api/element/done")).toHaveLength(1);
    expect(root.querySelectorAll("#gallery .thumb")).toHaveLength(80);
    expect(root.querySelector("#committed")!.textContent).toContain("slider");
    expect(root.querySelector("#page-label")!.textContent).toContain("page 1 of 2");
  });

  it("the d key does nothing while the sketch is empty", async () => {
    document.dispatchEvent(new KeyboardEvent("keydown", { key: "d", bubbles: true }));
    await app.controller.idle();
    expect(backend.posts("/api/element/done")).toHaveLength(0);
  });

  it("clicking a live guess commits as that category", async () => {
    drawStroke(canvas(), STROKE);
    await app.controller.idle();
    const second = root.querySelectorAll<HTMLElement>("#top3 li")[1];
    second.click();
    await app.controller.idle();
    const done = backend.posts("/api/element/done");
    expect(done).toHaveLength(1);
    expect(done[0].body?.chosen).toBe("switch");
    expect(root.querySelector("#committed")!.textContent).toContain("switch");
  });

  it("undo and redo buttons track the server's stacks", async () => {
    drawStroke(canvas(), STROKE);
    await app.controller.idle();
    expect(button("undo").disabled).toBe(false);
    expect(button("redo").disabled).toBe(true);

    button("undo").click();
    await app.controller.idle();
    expect(button("undo").disabled).toBe(true); // only stroke is gone
    expect(button("redo").disabled).toBe(false);
    expect(root.querySelectorAll("#top3 li")).toHaveLength(0); // empty sketch

    button("redo").click();
    await app.controller.idle();
    expect(button("undo").disabled).toBe(false);
    expect(button("redo").disabled).toBe(true);
  });

  it("pagination: next, then previous, shows the same page again", async () => {
    drawStroke(canvas(), STROKE);
    await app.controller.idle();
    button("done").click();
    await app.controller.idle();
    const firstPage = root.querySelector("#gallery")!.innerHTML;
    expect(button("prev").disabled).toBe(true);

    button("next").click();
    await app.controller.idle();
    expect(root.querySelector("#page-label")!.textContent).toContain("page 2 of 2");
    expect(button("next").disabled).toBe(true);
    expect(root.querySelector("#gallery")!.innerHTML).not.toBe(firstPage);

    button("prev").click();
    await app.controller.idle();
    expect(root.querySelector("#gallery")!.innerHTML).toBe(firstPage);
  });

  it("clicking a thumbnail enlarges it on the left at full resolution", async () => {
    drawStroke(canvas(), STROKE);
    await app.controller.idle();
    button("done").click();
    await app.controller.idle();
    const sixth = root.querySelectorAll<HTMLElement>("#gallery .thumb")[5];
    sixth.click();
    const img = root.querySelector<HTMLImageElement>("#preview img")!;
    expect(img).not.toBeNull();
    expect(img.getAttribute("src")).toBe("/screens/p0-5/full");
    expect(root.querySelector("#preview")!.textContent).toContain("p0-5");
  });

  it("votes post feedback with the session", async () => {
    drawStroke(canvas(), STROKE);
    await app.controller.idle();
    button("done").click();
    await app.controller.idle();
    button("vote-up").click();
    await app.controller.idle();
    const votes = backend.posts("/api/feedback");
    expect(votes).toHaveLength(1);
    expect(votes[0].body?.vote).toBe("up");
    expect(votes[0].body?.session_id).toBe("sess1");
  });

  it("remove-last trims the committed chips and disables itself at zero", async () => {
    drawStroke(canvas(), STROKE);
    await app.controller.idle();
    button("done").click();
    await app.controller.idle();
    expect(button("remove-last").disabled).toBe(false);
    button("remove-last").click();
    await app.controller.idle();
    expect(root.querySelector("#committed")!.textContent).toBe("");
    expect(button("remove-last").disabled).toBe(true);
  });

  it("new search opens a fresh session and clears canvas and gallery", async () => {
    drawStroke(canvas(), STROKE);
    await app.controller.idle();
    button("done").click();
    await app.controller.idle();
    button("new-search").click();
    await app.controller.idle();
    expect(backend.posts("/api/session")).toHaveLength(2);
    expect(app.store.get().sessionId).toBe("sess2");
    expect(root.querySelectorAll("#gallery .thumb")).toHaveLength(0);
    expect(root.querySelector("#gallery")!.textContent).toContain("Commit an element");
    expect(root.querySelector("#committed")!.textContent).toBe("");
    expect(root.querySelector("#page-label")!.textContent).toBe("");
  });
});
