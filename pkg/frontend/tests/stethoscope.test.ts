import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { closeRing, isValidRing, layoutResults } from "../src/stethoscope.js";
import type { RingPoint, SimilarityGroup } from "../src/types.js";

describe("polygon ring handling", () => {
  it("closes an open ring", () => {
    const ring: RingPoint[] = [[0, 0], [1, 0], [1, 1]];
    expect(closeRing(ring)).toEqual([[0, 0], [1, 0], [1, 1], [0, 0]]);
  });

  it("leaves a closed ring unchanged", () => {
    const ring: RingPoint[] = [[0, 0], [1, 0], [1, 1], [0, 0]];
    expect(closeRing(ring)).toEqual(ring);
  });

  it("rejects degenerate rings", () => {
    expect(isValidRing([])).toBe(false);
    expect(isValidRing([[0, 0], [1, 1]])).toBe(false);
    expect(isValidRing([[0, 0], [1, 1], [0, 0]])).toBe(false);
    expect(isValidRing([[0, 0], [1, 0], [1, 1]])).toBe(true);
  });
});

describe("result layout", () => {
  it("orders groups by descending source rank, matches by ascending measure",
    () => {
      const groups: SimilarityGroup[] = [
        {
          source: 4,
          source_rank: 1.2,
          matches: [
            { target: 7, measure: 0.9 },
            { target: 2, measure: 0.1 },
          ],
        },
        {
          source: 1,
          source_rank: 3.0,
          matches: [{ target: 5, measure: 0.4 }],
        },
      ];
      const rows = layoutResults(groups);
      expect(rows.map((r) => r.source)).toEqual([1, 4]);
      expect(rows[1].matches).toEqual([
        [2, 0.1],
        [7, 0.9],
      ]);
    });

  it("breaks rank ties by source id and measure ties by target id", () => {
    const groups: SimilarityGroup[] = [
      { source: 9, source_rank: 2.0, matches: [] },
      {
        source: 3,
        source_rank: 2.0,
        matches: [
          { target: 8, measure: 0.5 },
          { target: 1, measure: 0.5 },
        ],
      },
    ];
    const rows = layoutResults(groups);
    expect(rows.map((r) => r.source)).toEqual([3, 9]);
    expect(rows[0].matches).toEqual([
      [1, 0.5],
      [8, 0.5],
    ]);
  });
});

describe("similarity round trip", () => {
  it("posts a closed ring and returns renderable groups", async () => {
    const calls: { url: string; body: unknown }[] = [];
    const response: SimilarityGroup[] = [
      {
        source: 0,
        source_rank: 2.5,
        matches: [
          { target: 3, measure: 0.2 },
          { target: 1, measure: 0.7 },
        ],
      },
    ];
    const api = new ApiClient("http://test", async (url, init) => {
      calls.push({ url, body: JSON.parse(init?.body ?? "null") });
      return { ok: true, status: 200, json: async () => response };
    });
    const ring: RingPoint[] = [
      [-74.0, 40.7],
      [-73.9, 40.7],
      [-73.9, 40.8],
    ];
    const groups = await api.similarity({
      source_city: "nyc",
      scenario: "Default",
      part: "Default",
      region: closeRing(ring),
      target_city: "sf",
    });
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("http://test/similarity");
    const sent = calls[0].body as { region: RingPoint[] };
    expect(sent.region[0]).toEqual(sent.region[sent.region.length - 1]);
    const rows = layoutResults(groups);
    expect(rows[0].matches.map(([, m]) => m)).toEqual([0.2, 0.7]);
  });

  it("surfaces server errors with their code", async () => {
    const api = new ApiClient("http://test", async () => ({
      ok: false,
      status: 400,
      json: async () => ({
        code: "invalid_polygon",
        message: "polygon needs at least 3 distinct points",
      }),
    }));
    await expect(
      api.similarity({
        source_city: "nyc",
        scenario: "Default",
        part: "Default",
        region: [[0, 0], [1, 1]],
        target_city: "sf",
      }),
    ).rejects.toMatchObject({ status: 400, code: "invalid_polygon" });
  });
});
