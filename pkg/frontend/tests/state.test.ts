import { describe, expect, it } from "vitest";

import { ViewState } from "../src/state.js";

describe("linked selection", () => {
  it("brushing propagates the same id set to every subscribed view", () => {
    const state = new ViewState();
    const seen: Set<number>[] = [];
    // two maps and a beat viewer, each recording what it would render
    for (let k = 0; k < 3; k++) {
      state.subscribe((snap) => {
        seen[k] = new Set(snap.brushed);
      });
    }
    state.setBrushed([3, 1, 7]);
    expect(seen).toHaveLength(3);
    for (const s of seen) {
      expect([...s].sort()).toEqual([1, 3, 7]);
    }
    state.setBrushed([2]);
    for (const s of seen) {
      expect([...s]).toEqual([2]);
    }
  });

  it("toggle adds and removes a single id", () => {
    const state = new ViewState();
    state.setBrushed([1]);
    state.toggleBrushed(2);
    expect([...state.snapshot().brushed].sort()).toEqual([1, 2]);
    state.toggleBrushed(1);
    expect([...state.snapshot().brushed]).toEqual([2]);
  });

  it("snapshots are isolated from later mutations", () => {
    const state = new ViewState();
    state.setBrushed([5]);
    const snap = state.snapshot();
    state.clearBrush();
    expect([...snap.brushed]).toEqual([5]);
    expect(state.snapshot().brushed.size).toBe(0);
  });

  it("widget patches do not disturb the brush", () => {
    const state = new ViewState();
    state.setBrushed([9]);
    state.setWidget(1, { city: "sf", step: 3 });
    const snap = state.snapshot();
    expect([...snap.brushed]).toEqual([9]);
    expect(snap.widgets[1].city).toBe("sf");
    expect(snap.widgets[1].step).toBe(3);
    expect(snap.widgets[0].city).toBe("");
  });

  it("unsubscribe stops notifications", () => {
    const state = new ViewState();
    let calls = 0;
    const off = state.subscribe(() => calls++);
    state.setBrushed([1]);
    off();
    state.setBrushed([2]);
    expect(calls).toBe(1);
  });
});
