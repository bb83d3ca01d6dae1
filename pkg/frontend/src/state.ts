/** Central view state with linked selection.
 *
 * Every view (maps, scatter plots, beat viewer) renders from this store
 * and never keeps its own copy of the brushed set, so the linked-selection
 * invariant holds by construction: after any interaction all views see the
 * same id set.
 */

import type {
  ResolutionLabel,
  RingPoint,
  SimilarityGroup,
} from "./types.js";

export type FilterCondition = "maxima" | "significant";

export interface TimeFilter {
  resolution: ResolutionLabel;
  /** Inclusive step range. */
  from: number;
  to: number;
  condition: FilterCondition;
}

export interface WidgetState {
  city: string;
  scenario: string;
  part: string;
  resolution: ResolutionLabel;
  step: number;
  heatmap: boolean;
}

export interface ViewStateSnapshot {
  widgets: [WidgetState, WidgetState];
  brushed: ReadonlySet<number>;
  hovered: number | null;
  filter: TimeFilter | null;
  stethoscope: RingPoint[];
  similarity: SimilarityGroup[] | null;
}

export type Listener = (state: ViewStateSnapshot) => void;

const DEFAULT_WIDGET: WidgetState = {
  city: "",
  scenario: "Default",
  part: "Default",
  resolution: "Hour",
  step: 12,
  heatmap: true,
};

export class ViewState {
  private widgets: [WidgetState, WidgetState] = [
    { ...DEFAULT_WIDGET },
    { ...DEFAULT_WIDGET },
  ];
  private brushed = new Set<number>();
  private hovered: number | null = null;
  private filter: TimeFilter | null = null;
  private stethoscope: RingPoint[] = [];
  private similarity: SimilarityGroup[] | null = null;
  private listeners: Listener[] = [];

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  snapshot(): ViewStateSnapshot {
    return {
      widgets: [{ ...this.widgets[0] }, { ...this.widgets[1] }],
      brushed: new Set(this.brushed),
      hovered: this.hovered,
      filter: this.filter ? { ...this.filter } : null,
      stethoscope: this.stethoscope.map((p) => [p[0], p[1]]),
      similarity: this.similarity,
    };
  }

  private notify(): void {
    const snap = this.snapshot();
    for (const fn of this.listeners) fn(snap);
  }

  /** Replace the brushed set; called by whichever view the user brushed. */
  setBrushed(ids: Iterable<number>): void {
    this.brushed = new Set(ids);
    this.notify();
  }

  toggleBrushed(id: number): void {
    if (this.brushed.has(id)) this.brushed.delete(id);
    else this.brushed.add(id);
    this.notify();
  }

  clearBrush(): void {
    this.brushed.clear();
    this.notify();
  }

  setHovered(id: number | null): void {
    this.hovered = id;
    this.notify();
  }

  setWidget(index: 0 | 1, patch: Partial<WidgetState>): void {
    this.widgets[index] = { ...this.widgets[index], ...patch };
    this.notify();
  }

  setFilter(filter: TimeFilter | null): void {
    this.filter = filter;
    this.notify();
  }

  setStethoscope(ring: RingPoint[]): void {
    this.stethoscope = ring;
    this.notify();
  }

  setSimilarity(groups: SimilarityGroup[] | null): void {
    this.similarity = groups;
    this.notify();
  }
}
