/** Beat viewer: one row per brushed pulse, sorted by rank and alternating
 * between the two compared datasets; each row is a function-beat line plot
 * stacked over the circle strip for the chosen resolution. */

import type { Catalog, Pulse, ResolutionLabel } from "./types.js";
import type { ViewState, ViewStateSnapshot } from "./state.js";
import { STRIP_HEX, functionSeries, stripFor } from "./beats.js";
import { WIDGET_COLORS } from "./scatter.js";

export interface BeatRow {
  pulse: Pulse;
  widget: number;
}

/** Rows sorted by descending rank, alternating widgets when both have a
 * pulse at the next position. */
export function orderRows(byWidget: [Pulse[], Pulse[]]): BeatRow[] {
  const queues = byWidget.map((ps) =>
    [...ps].sort((a, b) => b.rank - a.rank || a.id - b.id),
  );
  const rows: BeatRow[] = [];
  let turn = 0;
  while (queues[0].length || queues[1].length) {
    if (!queues[turn].length) turn = 1 - turn;
    const pulse = queues[turn].shift()!;
    rows.push({ pulse, widget: turn });
    turn = 1 - turn;
  }
  return rows;
}

export class BeatViewer {
  private catalogs: [Catalog | null, Catalog | null] = [null, null];
  resolution: ResolutionLabel = "Hour";
  showRaw = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly state: ViewState,
  ) {
    state.subscribe((snap) => this.render(snap));
  }

  setCatalog(widget: 0 | 1, catalog: Catalog): void {
    this.catalogs[widget] = catalog;
    this.render(this.state.snapshot());
  }

  private render(snap: ViewStateSnapshot): void {
    this.root.textContent = "";
    const byWidget: [Pulse[], Pulse[]] = [[], []];
    for (let w = 0; w < 2; w++) {
      const cat = this.catalogs[w];
      if (!cat) continue;
      byWidget[w] = cat.pulses.filter((p) => snap.brushed.has(p.id));
    }
    for (const row of orderRows(byWidget)) {
      this.root.appendChild(this.renderRow(row));
    }
  }

  private renderRow(row: BeatRow): HTMLElement {
    const div = document.createElement("div");
    div.className = "beat-row";
    const label = document.createElement("span");
    label.textContent =
      `#${row.pulse.id} rank ${row.pulse.rank.toFixed(3)}`;
    label.style.color = WIDGET_COLORS[row.widget];
    div.appendChild(label);

    const strip = stripFor(row.pulse.beats, this.resolution);
    const series = functionSeries(row.pulse.beats, this.resolution,
      this.showRaw);
    const canvas = document.createElement("canvas");
    const cell = 18;
    canvas.width = strip.length * cell;
    canvas.height = 60;
    const ctx = canvas.getContext("2d");
    if (ctx) {
      const maxV = Math.max(...series, 1e-12);
      ctx.strokeStyle = WIDGET_COLORS[row.widget];
      ctx.beginPath();
      series.forEach((v, k) => {
        const x = k * cell + cell / 2;
        const y = 38 - (v / maxV) * 34;
        if (k === 0) ctx.moveTo(x, y);
        else ctx.lineTo(x, y);
      });
      ctx.stroke();
      strip.forEach((color, k) => {
        ctx.beginPath();
        ctx.arc(k * cell + cell / 2, 50, cell / 2 - 2, 0, 2 * Math.PI);
        ctx.fillStyle = STRIP_HEX[color];
        ctx.fill();
        ctx.strokeStyle = "#888";
        ctx.stroke();
      });
    }
    div.appendChild(canvas);
    return div;
  }
}
