/** Beat-strip color mapping and strip construction.
 *
 * Each step renders as a circle: white if the location is not a maximum,
 * light green if it is a maximum, dark green if that maximum is
 * high-persistent (significant). Significance implies maximum membership,
 * so a dark circle never appears where the maxima bit is 0.
 */

import type { PulseBeats, ResolutionBeats, ResolutionLabel } from "./types.js";
import { RESOLUTION_STEPS } from "./types.js";

export type StripColor = "white" | "lightgreen" | "darkgreen";

export const STRIP_HEX: Record<StripColor, string> = {
  white: "#ffffff",
  lightgreen: "#90ee90",
  darkgreen: "#1e6b1e",
};

export function stepColor(significant: number, maxima: number): StripColor {
  if (significant) return "darkgreen";
  if (maxima) return "lightgreen";
  return "white";
}

export function buildStrip(beats: ResolutionBeats): StripColor[] {
  return beats.maxima.map((m, k) => stepColor(beats.significant[k], m));
}

export function stripFor(
  beats: PulseBeats,
  resolution: ResolutionLabel,
): StripColor[] {
  const b = beats[resolution];
  if (!b) return new Array<StripColor>(RESOLUTION_STEPS[resolution]).fill(
    "white",
  );
  return buildStrip(b);
}

/** Function-beat series for the line plot above the strip. */
export function functionSeries(
  beats: PulseBeats,
  resolution: ResolutionLabel,
  raw: boolean,
): number[] {
  const b = beats[resolution];
  if (!b) return [];
  return raw ? b.function_raw : b.function;
}
