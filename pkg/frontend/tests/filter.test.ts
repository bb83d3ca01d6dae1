import { describe, expect, it } from "vitest";

import { applyFilter, passesFilter } from "../src/filter.js";
import { orderRows } from "../src/beatview.js";
import { RequestSequencer } from "../src/api.js";
import type { Pulse } from "../src/types.js";

function makePulse(id: number, rank: number, hourBits: number[]): Pulse {
  return {
    id,
    member_vertices: [id],
    representative: { lat: 40, lon: -74, x: 0, y: 0 },
    beats: {
      Hour: {
        significant: hourBits,
        maxima: hourBits.map((b, k) => b || (k % 2 ? 1 : 0)),
        function: hourBits.map((b) => b * 0.8),
        function_raw: hourBits.map((b) => b * 8),
      },
    },
    feature: [],
    rank,
    resolution_ranks: { Hour: rank / 2 },
  };
}

const bits = (on: number[]) => {
  const out = new Array(24).fill(0);
  for (const k of on) out[k] = 1;
  return out;
};

describe("time filter", () => {
  const lunch = makePulse(0, 2, bits([11, 12, 13]));
  const morning = makePulse(1, 1, bits([7, 8]));

  it("keeps pulses whose bit beat is 1 over the whole range", () => {
    const f = { resolution: "Hour" as const, from: 11, to: 13,
      condition: "significant" as const };
    expect(passesFilter(lunch, f)).toBe(true);
    expect(passesFilter(morning, f)).toBe(false);
    expect(applyFilter([lunch, morning], f)).toEqual([lunch]);
  });

  it("a partial overlap does not pass", () => {
    const f = { resolution: "Hour" as const, from: 10, to: 12,
      condition: "significant" as const };
    expect(passesFilter(lunch, f)).toBe(false);
  });

  it("maxima condition uses the maxima bits", () => {
    // hour 11 is a maximum of `morning` (odd step) but not significant
    const f = { resolution: "Hour" as const, from: 11, to: 11,
      condition: "maxima" as const };
    expect(passesFilter(morning, f)).toBe(true);
    expect(passesFilter(morning, { ...f, condition: "significant" }))
      .toBe(false);
  });

  it("missing resolution or bad range never passes", () => {
    const f = { resolution: "Day" as const, from: 0, to: 1,
      condition: "significant" as const };
    expect(passesFilter(lunch, f)).toBe(false);
    expect(passesFilter(lunch, { resolution: "Hour", from: 20, to: 30,
      condition: "significant" })).toBe(false);
  });

  it("null filter is the identity", () => {
    expect(applyFilter([lunch, morning], null)).toEqual([lunch, morning]);
  });
});

describe("beat row ordering", () => {
  it("sorts by rank and alternates between the two datasets", () => {
    const a = [makePulse(0, 5, bits([])), makePulse(1, 3, bits([]))];
    const b = [makePulse(2, 4, bits([]))];
    const rows = orderRows([a, b]);
    expect(rows.map((r) => [r.pulse.id, r.widget])).toEqual([
      [0, 0],
      [2, 1],
      [1, 0],
    ]);
  });
});

describe("request sequencing", () => {
  it("stale responses lose, later responses win", () => {
    const seq = new RequestSequencer();
    const first = seq.next();
    const second = seq.next();
    expect(seq.accept(second)).toBe(true);
    expect(seq.accept(first)).toBe(false);
  });
});
