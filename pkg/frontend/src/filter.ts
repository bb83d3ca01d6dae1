/** Time filter: keep pulses whose chosen bit beat is 1 over a whole
 * inclusive step range. The filter color encodes the condition. */

import type { Pulse } from "./types.js";
import type { TimeFilter } from "./state.js";

export const FILTER_COLORS: Record<TimeFilter["condition"], string> = {
  maxima: "#90ee90",
  significant: "#1e6b1e",
};

export function passesFilter(pulse: Pulse, filter: TimeFilter): boolean {
  const beats = pulse.beats[filter.resolution];
  if (!beats) return false;
  const bits =
    filter.condition === "significant" ? beats.significant : beats.maxima;
  if (filter.from > filter.to || filter.to >= bits.length) return false;
  for (let k = filter.from; k <= filter.to; k++) {
    if (!bits[k]) return false;
  }
  return true;
}

export function applyFilter(pulses: Pulse[], filter: TimeFilter | null):
    Pulse[] {
  if (!filter) return pulses;
  return pulses.filter((p) => passesFilter(p, filter));
}
