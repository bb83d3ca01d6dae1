/** Shared types mirroring the HTTP API payloads. */

export type ResolutionLabel = "All" | "Month" | "Day" | "Hour";

export const RESOLUTION_ORDER: ResolutionLabel[] = [
  "All",
  "Month",
  "Day",
  "Hour",
];

export const RESOLUTION_STEPS: Record<ResolutionLabel, number> = {
  All: 1,
  Month: 12,
  Day: 7,
  Hour: 24,
};

export interface ResolutionBeats {
  significant: number[];
  maxima: number[];
  function: number[];
  function_raw: number[];
}

export type PulseBeats = Partial<Record<ResolutionLabel, ResolutionBeats>>;

export interface PulseRepresentative {
  lat: number;
  lon: number;
  x: number;
  y: number;
}

export interface Pulse {
  id: number;
  member_vertices: number[];
  representative: PulseRepresentative;
  beats: PulseBeats;
  feature: number[];
  rank: number;
  resolution_ranks: Partial<Record<ResolutionLabel, number>>;
}

export interface Catalog {
  version: number;
  city: string;
  scenario: { family: string; part: string };
  threshold: number;
  epsilon_m: number;
  digest: string;
  pulses: Pulse[];
}

export interface CityInfo {
  name: string;
  config: {
    name: string;
    bounds: { south: number; west: number; north: number; east: number };
    spacing_m: number;
    epsilon_m: number;
    utc_offset_minutes: number;
  };
  mesh: { nx: number; ny: number; spacing_m: number };
  scenarios: Record<string, string[]>;
  digest: string;
}

export interface FieldPayload {
  nx: number;
  ny: number;
  spacing_m: number;
  resolution: ResolutionLabel;
  step: number;
  resolution_max: number;
  normalized: boolean;
  values: number[];
}

export interface SimilarityMatch {
  target: number;
  measure: number;
}

export interface SimilarityGroup {
  source: number;
  source_rank: number;
  matches: SimilarityMatch[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
}

/** Lon/lat vertex of a stethoscope polygon. */
export type RingPoint = [number, number];
