/** Map widget: field heat map plus pulse footprints (circles of radius
 * epsilon around member vertices). Clicking a footprint toggles it in the
 * global brushed set; drawing with the stethoscope tool records a lon/lat
 * polygon ring. */

import type { Catalog, CityInfo, FieldPayload, RingPoint } from "./types.js";
import type { ViewState, ViewStateSnapshot } from "./state.js";
import { WIDGET_COLORS } from "./scatter.js";
import { applyFilter } from "./filter.js";

export class MapView {
  private catalog: Catalog | null = null;
  private city: CityInfo | null = null;
  private fieldData: FieldPayload | null = null;
  private drawing = false;
  private ring: RingPoint[] = [];

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly state: ViewState,
    readonly widget: 0 | 1,
    private readonly onStethoscope: (ring: RingPoint[]) => void,
  ) {
    state.subscribe((snap) => this.render(snap));
    canvas.addEventListener("click", (e) => this.onClick(e));
  }

  setData(city: CityInfo, catalog: Catalog, field: FieldPayload | null):
      void {
    this.city = city;
    this.catalog = catalog;
    this.fieldData = field;
    this.render(this.state.snapshot());
  }

  startStethoscope(): void {
    this.drawing = true;
    this.ring = [];
  }

  finishStethoscope(): void {
    this.drawing = false;
    if (this.ring.length >= 3) this.onStethoscope(this.ring);
    this.ring = [];
  }

  /** Mesh-frame meters to canvas pixels. */
  private toPx(x: number, y: number): [number, number] {
    const c = this.city!;
    const w = (c.mesh.nx - 1) * c.mesh.spacing_m;
    const h = (c.mesh.ny - 1) * c.mesh.spacing_m;
    const s = Math.min(this.canvas.width / w, this.canvas.height / h);
    return [x * s, this.canvas.height - y * s];
  }

  private toLonLat(px: number, py: number): RingPoint {
    const c = this.city!;
    const b = c.config.bounds;
    const w = (c.mesh.nx - 1) * c.mesh.spacing_m;
    const h = (c.mesh.ny - 1) * c.mesh.spacing_m;
    const s = Math.min(this.canvas.width / w, this.canvas.height / h);
    const x = px / s;
    const y = (this.canvas.height - py) / s;
    const lon = b.west + (x / w) * (b.east - b.west);
    const lat = b.south + (y / h) * (b.north - b.south);
    return [lon, lat];
  }

  private onClick(e: MouseEvent): void {
    if (!this.city || !this.catalog) return;
    const r = this.canvas.getBoundingClientRect();
    const px = e.clientX - r.left;
    const py = e.clientY - r.top;
    if (this.drawing) {
      this.ring.push(this.toLonLat(px, py));
      this.render(this.state.snapshot());
      return;
    }
    const eps = this.catalog.epsilon_m;
    for (const p of this.catalog.pulses) {
      const [cx, cy] = this.toPx(p.representative.x, p.representative.y);
      const [ex] = this.toPx(p.representative.x + eps, p.representative.y);
      if (Math.hypot(px - cx, py - cy) <= Math.max(ex - cx, 6)) {
        this.state.toggleBrushed(p.id);
        return;
      }
    }
    this.state.clearBrush();
  }

  private render(snap: ViewStateSnapshot): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx || !this.city || !this.catalog) return;
    const cw = this.canvas.width;
    const ch = this.canvas.height;
    ctx.clearRect(0, 0, cw, ch);
    ctx.fillStyle = "#f4f2ee"; // basemap placeholder
    ctx.fillRect(0, 0, cw, ch);

    const widgetState = snap.widgets[this.widget];
    if (widgetState.heatmap && this.fieldData) {
      this.renderHeatmap(ctx, this.fieldData);
    }

    const eps = this.catalog.epsilon_m;
    const visible = applyFilter(this.catalog.pulses, snap.filter);
    for (const p of visible) {
      const selected = snap.brushed.has(p.id);
      for (const v of p.member_vertices) {
        const vx = (v % this.city.mesh.nx) * this.city.mesh.spacing_m;
        const vy = Math.floor(v / this.city.mesh.nx) *
          this.city.mesh.spacing_m;
        const [cx, cy] = this.toPx(vx, vy);
        const [ex] = this.toPx(vx + eps, vy);
        ctx.beginPath();
        ctx.arc(cx, cy, Math.max(ex - cx, 3), 0, 2 * Math.PI);
        ctx.fillStyle = WIDGET_COLORS[this.widget];
        ctx.globalAlpha = selected ? 0.75 : snap.brushed.size ? 0.15 : 0.4;
        ctx.fill();
        ctx.globalAlpha = 1.0;
        if (snap.hovered === p.id) {
          ctx.strokeStyle = "#000";
          ctx.stroke();
        }
      }
    }

    if (this.ring.length > 0) {
      ctx.beginPath();
      for (let k = 0; k < this.ring.length; k++) {
        const [lon, lat] = this.ring[k];
        const b = this.city.config.bounds;
        const w = (this.city.mesh.nx - 1) * this.city.mesh.spacing_m;
        const h = (this.city.mesh.ny - 1) * this.city.mesh.spacing_m;
        const x = ((lon - b.west) / (b.east - b.west)) * w;
        const y = ((lat - b.south) / (b.north - b.south)) * h;
        const [px, py] = this.toPx(x, y);
        if (k === 0) ctx.moveTo(px, py);
        else ctx.lineTo(px, py);
      }
      ctx.strokeStyle = "#c0392b";
      ctx.lineWidth = 2;
      ctx.stroke();
      ctx.lineWidth = 1;
    }
  }

  private renderHeatmap(ctx: CanvasRenderingContext2D, f: FieldPayload):
      void {
    const { nx, ny, spacing_m: s, values } = f;
    for (let j = 0; j < ny; j++) {
      for (let i = 0; i < nx; i++) {
        const v = values[j * nx + i];
        if (v < 0.01) continue; // transparent near zero
        const [px, py] = this.toPx(i * s, j * s);
        const [qx] = this.toPx((i + 1) * s, j * s);
        ctx.fillStyle = `rgba(200, 30, 30, ${Math.min(v, 1) * 0.6})`;
        ctx.fillRect(px - (qx - px) / 2, py - (qx - px) / 2, qx - px,
          qx - px);
      }
    }
  }
}
