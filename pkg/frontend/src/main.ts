/** Application wiring: two map widgets, three linked scatter plots
 * (Hour, Day, Month), beat viewer, time filter, and stethoscope. */

import { ApiClient, ApiError, RequestSequencer } from "./api.js";
import { ViewState } from "./state.js";
import { ScatterPlot } from "./scatter.js";
import { MapView } from "./mapview.js";
import { BeatViewer } from "./beatview.js";
import { closeRing, isValidRing, layoutResults } from "./stethoscope.js";
import type { ResolutionLabel, RingPoint } from "./types.js";

const SCATTER_RESOLUTIONS: ResolutionLabel[] = ["Hour", "Day", "Month"];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export async function bootstrap(baseUrl: string): Promise<void> {
  const api = new ApiClient(baseUrl);
  const state = new ViewState();
  const seq = new RequestSequencer();

  const cities = await api.cities();
  if (cities.length === 0) throw new Error("no cities available");
  const cityA = cities[0];
  const cityB = cities[1] ?? cities[0];
  state.setWidget(0, { city: cityA.name });
  state.setWidget(1, { city: cityB.name });

  const scatters = SCATTER_RESOLUTIONS.map(
    (res) =>
      new ScatterPlot(el<HTMLCanvasElement>(`scatter-${res.toLowerCase()}`),
        state, res),
  );

  const runStethoscope = async (ring: RingPoint[]) => {
    if (!isValidRing(ring)) return;
    state.setStethoscope(ring);
    const mySeq = seq.next();
    try {
      const snap = state.snapshot();
      const groups = await api.similarity({
        source_city: snap.widgets[0].city,
        scenario: snap.widgets[0].scenario,
        part: snap.widgets[0].part,
        region: closeRing(ring),
        target_city: snap.widgets[1].city,
      });
      if (seq.accept(mySeq)) state.setSimilarity(groups);
    } catch (err) {
      if (err instanceof ApiError) {
        el("status").textContent = `${err.code}: ${err.message}`;
      }
    }
  };

  const maps: [MapView, MapView] = [
    new MapView(el<HTMLCanvasElement>("map-0"), state, 0, runStethoscope),
    new MapView(el<HTMLCanvasElement>("map-1"), state, 1, runStethoscope),
  ];
  const beatViewer = new BeatViewer(el("beats"), state);

  const loadWidget = async (w: 0 | 1) => {
    const ws = state.snapshot().widgets[w];
    const city = cities.find((c) => c.name === ws.city);
    if (!city) return;
    const mySeq = seq.next();
    const catalog = await api.catalog(ws.city, ws.scenario, ws.part);
    const field = ws.heatmap
      ? await api.field(ws.city, ws.scenario, ws.part, ws.resolution,
          ws.step)
      : null;
    if (!seq.accept(mySeq)) return;
    maps[w].setData(city, catalog, field);
    beatViewer.setCatalog(w, catalog);
    for (const s of scatters) s.setPulses(w, catalog.pulses);
  };

  state.subscribe((snap) => {
    const rows = layoutResults(snap.similarity ?? []);
    const out = el("similarity");
    out.textContent = "";
    for (const row of rows) {
      const div = document.createElement("div");
      div.textContent =
        `source #${row.source} (rank ${row.sourceRank.toFixed(3)}): ` +
        row.matches.map(([t, m]) => `#${t}@${m.toFixed(3)}`).join("  ");
      div.addEventListener("click", () =>
        state.setBrushed(row.matches.map(([t]) => t)),
      );
      out.appendChild(div);
    }
  });

  el("stethoscope-start").addEventListener("click", () =>
    maps[0].startStethoscope(),
  );
  el("stethoscope-done").addEventListener("click", () =>
    maps[0].finishStethoscope(),
  );
  el("clear-brush").addEventListener("click", () => state.clearBrush());

  await loadWidget(0);
  await loadWidget(1);
}

declare global {
  interface Window {
    urbanPulseBootstrap: typeof bootstrap;
  }
}

if (typeof window !== "undefined") {
  window.urbanPulseBootstrap = bootstrap;
}
