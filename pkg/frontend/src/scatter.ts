/** Rank scatter plot: y = overall rank, x = rank restricted to one
 * resolution. Brushing a rectangle replaces the global brushed set. */

import type { Pulse, ResolutionLabel } from "./types.js";
import type { ViewState, ViewStateSnapshot } from "./state.js";
import { applyFilter } from "./filter.js";

export const WIDGET_COLORS = ["#1f77b4", "#ff7f0e"]; // blue, orange

interface Dot {
  id: number;
  x: number;
  y: number;
  widget: number;
}

export class ScatterPlot {
  private dots: Dot[] = [];
  private dragStart: [number, number] | null = null;
  private dragEnd: [number, number] | null = null;
  private pulsesByWidget: Pulse[][] = [[], []];

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly state: ViewState,
    readonly resolution: ResolutionLabel,
  ) {
    state.subscribe((snap) => this.render(snap));
    canvas.addEventListener("mousedown", (e) => {
      this.dragStart = this.local(e);
      this.dragEnd = null;
    });
    canvas.addEventListener("mousemove", (e) => {
      if (this.dragStart) {
        this.dragEnd = this.local(e);
        this.render(this.state.snapshot());
      }
    });
    canvas.addEventListener("mouseup", (e) => {
      if (!this.dragStart) return;
      this.dragEnd = this.local(e);
      this.state.setBrushed(this.idsInBrush());
      this.dragStart = this.dragEnd = null;
    });
  }

  setPulses(widget: number, pulses: Pulse[]): void {
    this.pulsesByWidget[widget] = pulses;
    this.render(this.state.snapshot());
  }

  private local(e: MouseEvent): [number, number] {
    const r = this.canvas.getBoundingClientRect();
    return [e.clientX - r.left, e.clientY - r.top];
  }

  private idsInBrush(): number[] {
    if (!this.dragStart || !this.dragEnd) return [];
    const [x1, y1] = this.dragStart;
    const [x2, y2] = this.dragEnd;
    const [lo, hi] = [Math.min(x1, x2), Math.max(x1, x2)];
    const [to, bo] = [Math.min(y1, y2), Math.max(y1, y2)];
    return this.dots
      .filter((d) => d.x >= lo && d.x <= hi && d.y >= to && d.y <= bo)
      .map((d) => d.id);
  }

  private render(snap: ViewStateSnapshot): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const w = this.canvas.width;
    const h = this.canvas.height;
    ctx.clearRect(0, 0, w, h);
    ctx.strokeStyle = "#ccc";
    ctx.strokeRect(0.5, 0.5, w - 1, h - 1);
    ctx.fillStyle = "#666";
    ctx.font = "11px sans-serif";
    ctx.fillText(this.resolution, 6, 14);

    let maxRank = 0;
    for (let wi = 0; wi < 2; wi++) {
      for (const p of applyFilter(this.pulsesByWidget[wi], snap.filter)) {
        maxRank = Math.max(maxRank, p.rank,
          p.resolution_ranks[this.resolution] ?? 0);
      }
    }
    const scale = maxRank > 0 ? (Math.min(w, h) - 20) / maxRank : 1;

    this.dots = [];
    for (let wi = 0; wi < 2; wi++) {
      for (const p of applyFilter(this.pulsesByWidget[wi], snap.filter)) {
        const rx = p.resolution_ranks[this.resolution];
        if (rx === undefined) continue;
        const x = 10 + rx * scale;
        const y = h - 10 - p.rank * scale;
        this.dots.push({ id: p.id, x, y, widget: wi });
        const selected = snap.brushed.has(p.id);
        ctx.beginPath();
        ctx.arc(x, y, selected ? 5 : 3, 0, 2 * Math.PI);
        ctx.fillStyle = WIDGET_COLORS[wi];
        ctx.globalAlpha = selected || snap.brushed.size === 0 ? 1.0 : 0.25;
        ctx.fill();
        ctx.globalAlpha = 1.0;
        if (snap.hovered === p.id) {
          ctx.strokeStyle = "#000";
          ctx.stroke();
        }
      }
    }

    if (this.dragStart && this.dragEnd) {
      const [x1, y1] = this.dragStart;
      const [x2, y2] = this.dragEnd;
      ctx.strokeStyle = "#555";
      ctx.setLineDash([4, 3]);
      ctx.strokeRect(Math.min(x1, x2), Math.min(y1, y2),
        Math.abs(x2 - x1), Math.abs(y2 - y1));
      ctx.setLineDash([]);
    }
  }
}
