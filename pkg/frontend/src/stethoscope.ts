/** Stethoscope query helpers: polygon ring handling and result layout.
 *
 * The polygon is drawn in lon/lat and sent as a closed ring; the server
 * performs the selection and the similarity math. The client only orders
 * the rendered rows: groups by descending source rank, matches within a
 * group left to right by ascending measure.
 */

import type { RingPoint, SimilarityGroup } from "./types.js";

export function closeRing(ring: RingPoint[]): RingPoint[] {
  if (ring.length === 0) return [];
  const [fx, fy] = ring[0];
  const [lx, ly] = ring[ring.length - 1];
  if (fx === lx && fy === ly) return ring.slice();
  return [...ring, [fx, fy]];
}

/** A drawable polygon needs at least 3 distinct points. */
export function isValidRing(ring: RingPoint[]): boolean {
  const distinct = new Set(closeRing(ring).slice(0, -1).map(
    (p) => `${p[0]},${p[1]}`,
  ));
  return distinct.size >= 3;
}

export interface ResultRow {
  source: number;
  sourceRank: number;
  /** (target id, measure) pairs, ascending measure. */
  matches: [number, number][];
}

export function layoutResults(groups: SimilarityGroup[]): ResultRow[] {
  const rows = groups.map((g) => ({
    source: g.source,
    sourceRank: g.source_rank,
    matches: g.matches
      .map((m): [number, number] => [m.target, m.measure])
      .sort((a, b) => a[1] - b[1] || a[0] - b[0]),
  }));
  rows.sort((a, b) => b.sourceRank - a.sourceRank || a.source - b.source);
  return rows;
}
