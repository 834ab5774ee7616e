/**
 * Typed client for the conerank HTTP service.
 *
 * The UI consumes this API exclusively; every displayed number originates in
 * one of these response payloads.
 */

export type ConeConfig =
  | { rays: number[][] }
  | { dual_rays: number[][] }
  | { weight_bounds: { min: number[]; max: number[] } };

export interface ConeBlock {
  dim: number;
  rays: number[][];
  dual_rays: number[][];
  dual_weights: number[][];
  dual_weights_exact: string[][];
  pointed: boolean;
  full_dimensional: boolean;
}

export interface PointBlock {
  coords: number[];
  coords_exact: string[];
}

export interface DatasetResponse {
  dataset: string;
  revision: number;
  criteria: string[];
  size: number;
  dim: number;
  created_at: string;
  alternatives: Record<string, PointBlock>;
  labels: Record<string, string>;
}

export interface RankResponse {
  dataset: string;
  revision: number;
  cone: ConeBlock;
  points: Record<string, PointBlock>;
  ranks: Record<string, number>;
  witnesses: Record<string, number[][]>;
  witnesses_exact: Record<string, string[][]>;
  counted: Record<string, string[]>;
  dominated_counts: Record<string, number>;
}

export interface ReversalPair {
  x: string;
  y: string;
  kind: "strict" | "weak";
  ranks_before: [number, number];
  ranks_after: [number, number];
}

export interface WhatifResponse {
  dataset: string;
  revision: number;
  cone: ConeBlock;
  added: number[][];
  removed: string[];
  addition_ids: string[];
  ranks_before: Record<string, number>;
  ranks_after: Record<string, number>;
  points_after: Record<string, PointBlock>;
  reversals: ReversalPair[];
  committed?: boolean;
  new_revision?: number;
}

export interface ApiErrorBody {
  error: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function parse<T>(res: Response): Promise<T> {
  const text = await res.text();
  let body: unknown = null;
  try {
    body = JSON.parse(text);
  } catch {
    /* non-JSON error body */
  }
  if (!res.ok) {
    const message =
      body && typeof body === "object" && "error" in (body as ApiErrorBody)
        ? (body as ApiErrorBody).error
        : `${res.status} ${res.statusText}`;
    throw new ApiError(res.status, message);
  }
  return body as T;
}

export class ConerankClient {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async health(): Promise<{ status: string }> {
    return parse(await fetch(this.url("/health")));
  }

  async ingestCsv(csv: string): Promise<DatasetResponse> {
    return parse(
      await fetch(this.url("/datasets"), {
        method: "POST",
        headers: { "content-type": "text/csv" },
        body: csv,
      }),
    );
  }

  async getDataset(id: string): Promise<DatasetResponse> {
    return parse(await fetch(this.url(`/datasets/${id}`)));
  }

  async rank(body: {
    dataset: string;
    revision?: number;
    cone: ConeConfig;
    points?: number[][];
  }): Promise<RankResponse> {
    return parse(
      await fetch(this.url("/rank"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
  }

  async whatif(
    body: {
      dataset: string;
      revision?: number;
      cone: ConeConfig;
      add?: number[][];
      remove?: string[];
    },
    options: { commit?: boolean; signal?: AbortSignal } = {},
  ): Promise<WhatifResponse> {
    const path = options.commit ? "/whatif?commit=true" : "/whatif";
    return parse(
      await fetch(this.url(path), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
        signal: options.signal,
      }),
    );
  }
}
