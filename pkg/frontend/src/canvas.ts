/**
 * Freehand sketch pad over a <canvas>.
 *
 * Pointer events cover mouse, touch, and pen.  Everything is captured in the
 * canvas's logical 450x800 coordinate space no matter the CSS size or device
 * pixel ratio — the server only ever sees logical coordinates.
 */

import { CANVAS_H, CANVAS_W } from "./state.js";
import type { CommittedElement, Stroke, UiState } from "./state.js";

const INK = "#1d3557";
const GHOST = "#9aa7b5";
const LIVE = "#e07a2f";

export class SketchPad {
  private ctx: CanvasRenderingContext2D | null;
  private live: Stroke | null = null;
  private strokes: Stroke[] = [];
  private committed: CommittedElement[] = [];
  private frame: number | null = null;

  constructor(
    private canvas: HTMLCanvasElement,
    private onStroke: (points: Stroke) => void,
  ) {
    this.ctx = canvas.getContext("2d");
    canvas.addEventListener("pointerdown", (e) => this.down(e));
    canvas.addEventListener("pointermove", (e) => this.move(e));
    canvas.addEventListener("pointerup", (e) => this.up(e));
    canvas.addEventListener("pointercancel", (e) => this.up(e));
    if (typeof window !== "undefined") {
      window.addEventListener("resize", () => this.fitBackingStore());
    }
    this.fitBackingStore();
  }

  /** Mirror the store: committed elements ghosted, current doodle in ink. */
  setScene(state: UiState): void {
    this.strokes = state.strokes;
    this.committed = state.committed;
    this.schedule();
  }

  private toLogical(e: PointerEvent | MouseEvent): [number, number] {
    const rect = this.canvas.getBoundingClientRect();
    // zero-sized rect (hidden, or a non-layouting test DOM): treat client
    // coordinates as logical ones directly
    const sx = rect.width > 0 ? CANVAS_W / rect.width : 1;
    const sy = rect.height > 0 ? CANVAS_H / rect.height : 1;
    const x = (e.clientX - rect.left) * sx;
    const y = (e.clientY - rect.top) * sy;
    return [clamp(x, 0, CANVAS_W), clamp(y, 0, CANVAS_H)];
  }

  private down(e: PointerEvent | MouseEvent): void {
    e.preventDefault();
    if ("pointerId" in e && this.canvas.setPointerCapture) {
      try {
        this.canvas.setPointerCapture(e.pointerId);
      } catch {
        // capture is best-effort; drawing works without it
      }
    }
    this.live = [this.toLogical(e)];
    this.schedule();
  }

  private move(e: PointerEvent | MouseEvent): void {
    if (this.live === null) return;
    this.live.push(this.toLogical(e));
    this.schedule();
  }

  private up(e: PointerEvent | MouseEvent): void {
    if (this.live === null) return;
    const pts = this.live;
    this.live = null;
    pts.push(this.toLogical(e));
    if (pts.length >= 2 && strokeSpan(pts) > 0) {
      this.onStroke(pts.map(([x, y]) => [round2(x), round2(y)]));
    }
    this.schedule();
  }

  private fitBackingStore(): void {
    const rect = this.canvas.getBoundingClientRect();
    const dpr = typeof devicePixelRatio === "number" ? devicePixelRatio : 1;
    const w = rect.width > 0 ? Math.round(rect.width * dpr) : CANVAS_W;
    const h = rect.height > 0 ? Math.round(rect.height * dpr) : CANVAS_H;
    if (this.canvas.width !== w) this.canvas.width = w;
    if (this.canvas.height !== h) this.canvas.height = h;
    this.schedule();
  }

  private schedule(): void {
    if (typeof requestAnimationFrame !== "function") {
      this.paint();
      return;
    }
    if (this.frame !== null) return;
    this.frame = requestAnimationFrame(() => {
      this.frame = null;
      this.paint();
    });
  }

  private paint(): void {
    const ctx = this.ctx;
    if (ctx === null) return; // non-rendering DOM (tests)
    ctx.setTransform(this.canvas.width / CANVAS_W, 0, 0, this.canvas.height / CANVAS_H, 0, 0);
    ctx.clearRect(0, 0, CANVAS_W, CANVAS_H);
    ctx.lineCap = "round";
    ctx.lineJoin = "round";
    for (const el of this.committed) {
      ctx.strokeStyle = GHOST;
      ctx.lineWidth = 2;
      for (const s of el.strokes) this.path(ctx, s);
    }
    ctx.strokeStyle = INK;
    ctx.lineWidth = 3;
    for (const s of this.strokes) this.path(ctx, s);
    if (this.live !== null && this.live.length > 1) {
      ctx.strokeStyle = LIVE;
      ctx.lineWidth = 3;
      this.path(ctx, this.live);
    }
  }

  private path(ctx: CanvasRenderingContext2D, stroke: Stroke): void {
    if (stroke.length < 2) return;
    ctx.beginPath();
    ctx.moveTo(stroke[0][0], stroke[0][1]);
    for (let i = 1; i < stroke.length; i++) {
      ctx.lineTo(stroke[i][0], stroke[i][1]);
    }
    ctx.stroke();
  }
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, v));
}

function round2(v: number): number {
  return Math.round(v * 100) / 100;
}

function strokeSpan(pts: Stroke): number {
  let span = 0;
  for (const [x, y] of pts) {
    span = Math.max(span, Math.abs(x - pts[0][0]), Math.abs(y - pts[0][1]));
  }
  return span;
}
