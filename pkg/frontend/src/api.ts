/** Thin typed client over the read-only HTTP API.
 *
 * The UI computes no analytics: every number rendered comes from these
 * calls. Errors are surfaced as ApiError with the server's {code, message}.
 */

import type {
  ApiErrorBody,
  Catalog,
  CityInfo,
  FieldPayload,
  PulseBeats,
  ResolutionLabel,
  RingPoint,
  SimilarityGroup,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path);
    return this.unwrap<T>(res);
  }

  private async unwrap<T>(res: {
    ok: boolean;
    status: number;
    json(): Promise<unknown>;
  }): Promise<T> {
    const body = await res.json();
    if (!res.ok) {
      const err = body as ApiErrorBody;
      throw new ApiError(res.status, err.code ?? "error", err.message ?? "");
    }
    return body as T;
  }

  cities(): Promise<CityInfo[]> {
    return this.get("/cities");
  }

  catalog(city: string, scenario: string, part: string): Promise<Catalog> {
    const q = new URLSearchParams({ scenario, part });
    return this.get(`/cities/${encodeURIComponent(city)}/pulses?${q}`);
  }

  field(
    city: string,
    scenario: string,
    part: string,
    resolution: ResolutionLabel,
    step: number,
    norm = true,
  ): Promise<FieldPayload> {
    const c = encodeURIComponent(city);
    return this.get(
      `/cities/${c}/fields/${scenario}/${part}/${resolution}/${step}` +
        `?norm=${norm}`,
    );
  }

  beats(
    city: string,
    pulseId: number,
    scenario: string,
    part: string,
    resolution?: ResolutionLabel,
  ): Promise<{ id: number; beats: PulseBeats }> {
    const q = new URLSearchParams({ scenario, part });
    if (resolution) q.set("resolution", resolution);
    const c = encodeURIComponent(city);
    return this.get(`/cities/${c}/pulses/${pulseId}/beats?${q}`);
  }

  async similarity(req: {
    source_city: string;
    scenario: string;
    part: string;
    region: RingPoint[];
    target_city: string;
    use_raw?: boolean;
  }): Promise<SimilarityGroup[]> {
    const res = await this.fetchImpl(this.baseUrl + "/similarity", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
    return this.unwrap<SimilarityGroup[]>(res);
  }
}

/** Monotone sequence guard: stale responses lose (last write wins). */
export class RequestSequencer {
  private issued = 0;
  private applied = 0;

  next(): number {
    return ++this.issued;
  }

  accept(seq: number): boolean {
    if (seq < this.applied) return false;
    this.applied = seq;
    return true;
  }
}
