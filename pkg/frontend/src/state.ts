/**
 * Session state for the decision explorer.
 *
 * All numbers shown anywhere in the UI come verbatim from server responses;
 * this store only rearranges them into view models. Slider state lives in
 * integer percent so cone configs serialize to clean decimals, and slider
 * edits are clamped to feasible weight bounds before any request goes out.
 * What-if requests supersede each other: at most one is in flight.
 */

import {
  ConeConfig,
  ConerankClient,
  DatasetResponse,
  RankResponse,
  ReversalPair,
  WhatifResponse,
} from "./api.js";

export interface SliderBounds {
  lo: number; // integer percent 0..100
  hi: number;
}

export interface ReversalAlert {
  key: string;
  x: string;
  y: string;
  ranksBefore: [number, number];
  ranksAfter: [number, number];
  message: string;
}

export interface ScatterPoint {
  id: string;
  x: number;
  y: number;
  rank: number | null; // null for uncommitted pending additions
  shade: string;
  pending: boolean;
  pendingRemoval: boolean;
  hover: string;
}

export interface ScatterModel {
  empty: boolean;
  points: ScatterPoint[];
  coneRays: number[][];
  dualRays: number[][];
  axes: [number, number];
  axisNames: [string, string];
  rankRange: [number, number];
}

export interface SessionSnapshot {
  datasetId: string | null;
  revision: number | null;
  criteria: string[];
  sliders: SliderBounds[];
  axes: [number, number];
  pendingAdds: number[][];
  pendingRemoves: string[];
  alerts: ReversalAlert[];
  dismissedAlerts: ReversalAlert[];
  error: string | null;
  busy: boolean;
  uncommitted: boolean;
}

const SHADE_DARK = 40;
const SHADE_LIGHT = 220;

export function rankShade(rank: number, lo: number, hi: number): string {
  const t = hi === lo ? 0.5 : (rank - lo) / (hi - lo);
  const level = Math.round(SHADE_DARK + (SHADE_LIGHT - SHADE_DARK) * t);
  const hex = level.toString(16).padStart(2, "0");
  return `#${hex}${hex}${hex}`;
}

/** Clamp per-criterion percent bounds to a feasible weight-bound set:
 * 0 <= lo <= hi <= 100 per criterion, sum(lo) <= 100 <= sum(hi). */
export function clampSliders(sliders: SliderBounds[], edited: number): SliderBounds[] {
  const out = sliders.map((s) => ({
    lo: Math.max(0, Math.min(100, Math.round(s.lo))),
    hi: Math.max(0, Math.min(100, Math.round(s.hi))),
  }));
  for (const s of out) {
    if (s.lo > s.hi) {
      s.lo = Math.min(s.lo, s.hi);
    }
  }
  // keep the simplex reachable by relaxing the *other* criteria first
  let loSum = out.reduce((a, s) => a + s.lo, 0);
  for (let i = out.length - 1; i >= 0 && loSum > 100; i--) {
    if (i === edited) continue;
    const give = Math.min(out[i].lo, loSum - 100);
    out[i].lo -= give;
    loSum -= give;
  }
  if (loSum > 100) {
    out[edited].lo -= loSum - 100;
  }
  let hiSum = out.reduce((a, s) => a + s.hi, 0);
  for (let i = out.length - 1; i >= 0 && hiSum < 100; i--) {
    if (i === edited) continue;
    const take = Math.min(100 - out[i].hi, 100 - hiSum);
    out[i].hi += take;
    hiSum += take;
  }
  if (hiSum < 100) {
    out[edited].hi += 100 - hiSum;
  }
  for (const s of out) {
    if (s.lo > s.hi) s.hi = s.lo;
  }
  return out;
}

/** Cone config for the current sliders.
 *
 * d = 2: the weight polytope is the interval of first-criterion weights
 * compatible with both sliders, so the config is its two endpoint weight
 * vectors as dual rays (the panel construction). d > 2: the bounds go to the
 * server, which enumerates the polytope vertices.
 */
export function coneConfigFromSliders(sliders: SliderBounds[]): ConeConfig {
  if (sliders.length === 2) {
    const lo1 = Math.max(sliders[0].lo, 100 - sliders[1].hi);
    const hi1 = Math.min(sliders[0].hi, 100 - sliders[1].lo);
    return {
      dual_rays: [
        [lo1 / 100, (100 - lo1) / 100],
        [hi1 / 100, (100 - hi1) / 100],
      ],
    };
  }
  return {
    weight_bounds: {
      min: sliders.map((s) => s.lo / 100),
      max: sliders.map((s) => s.hi / 100),
    },
  };
}

export function defaultSliders(d: number): SliderBounds[] {
  return Array.from({ length: d }, () => ({ lo: 0, hi: 100 }));
}

function alertFromPair(p: ReversalPair): ReversalAlert {
  return {
    key: `${p.x}|${p.y}|${p.ranks_before.join(",")}|${p.ranks_after.join(",")}`,
    x: p.x,
    y: p.y,
    ranksBefore: p.ranks_before,
    ranksAfter: p.ranks_after,
    message:
      `(${p.x},${p.y}) reversed: ` +
      `${p.ranks_before[0]}→${p.ranks_after[0]} vs ` +
      `${p.ranks_before[1]}→${p.ranks_after[1]}`,
  };
}

export class ExplorerSession {
  datasetId: string | null = null;
  revision: number | null = null;
  criteria: string[] = [];
  sliders: SliderBounds[] = [];
  axes: [number, number] = [0, 1];
  selectedSets: Record<string, string[]> = {};
  pendingAdds: number[][] = [];
  pendingRemoves: string[] = [];
  lastRank: RankResponse | null = null;
  lastWhatif: WhatifResponse | null = null;
  alerts: ReversalAlert[] = [];
  dismissedAlerts: ReversalAlert[] = [];
  error: string | null = null;
  busy = false;

  private whatifAbort: AbortController | null = null;
  private listeners: Array<() => void> = [];

  constructor(private readonly client: ConerankClient) {}

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  snapshot(): SessionSnapshot {
    return {
      datasetId: this.datasetId,
      revision: this.revision,
      criteria: [...this.criteria],
      sliders: this.sliders.map((s) => ({ ...s })),
      axes: [...this.axes] as [number, number],
      pendingAdds: this.pendingAdds.map((p) => [...p]),
      pendingRemoves: [...this.pendingRemoves],
      alerts: [...this.alerts],
      dismissedAlerts: [...this.dismissedAlerts],
      error: this.error,
      busy: this.busy,
      uncommitted: this.pendingAdds.length > 0 || this.pendingRemoves.length > 0,
    };
  }

  coneConfig(): ConeConfig {
    return coneConfigFromSliders(this.sliders);
  }

  async loadCsv(csv: string): Promise<void> {
    const ds = await this.client.ingestCsv(csv);
    await this.attach(ds);
  }

  async loadDataset(id: string): Promise<void> {
    const ds = await this.client.getDataset(id);
    await this.attach(ds);
  }

  private async attach(ds: DatasetResponse): Promise<void> {
    this.datasetId = ds.dataset;
    this.revision = ds.revision;
    this.criteria = ds.criteria;
    this.sliders = defaultSliders(ds.dim);
    this.axes = [0, Math.min(1, ds.dim - 1)];
    this.pendingAdds = [];
    this.pendingRemoves = [];
    this.lastWhatif = null;
    this.error = null;
    await this.refreshRanks();
  }

  setSlider(index: number, lo: number, hi: number): void {
    if (index < 0 || index >= this.sliders.length) return;
    const next = this.sliders.map((s) => ({ ...s }));
    next[index] = { lo, hi };
    this.sliders = clampSliders(next, index);
    this.emit();
  }

  setAxes(x: number, y: number): void {
    const d = this.criteria.length;
    if (x === y || x < 0 || y < 0 || x >= d || y >= d) return;
    this.axes = [x, y];
    this.emit();
  }

  async refreshRanks(): Promise<void> {
    if (!this.datasetId) return;
    this.busy = true;
    this.emit();
    try {
      this.lastRank = await this.client.rank({
        dataset: this.datasetId,
        revision: this.revision ?? undefined,
        cone: this.coneConfig(),
      });
      this.error = null;
      if (this.pendingAdds.length || this.pendingRemoves.length) {
        await this.runWhatif();
      }
    } catch (e) {
      this.error = e instanceof Error ? e.message : String(e);
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  /** Stage an added alternative and refresh the what-if view. */
  async addPoint(coords: number[]): Promise<void> {
    this.pendingAdds.push(coords);
    await this.runWhatif();
  }

  /** Stage a removal (members of the stored set only). */
  async removePoint(id: string): Promise<void> {
    if (!this.pendingRemoves.includes(id) && this.lastRank && id in this.lastRank.points) {
      this.pendingRemoves.push(id);
      await this.runWhatif();
    }
  }

  async clearEdits(): Promise<void> {
    this.pendingAdds = [];
    this.pendingRemoves = [];
    this.lastWhatif = null;
    this.whatifAbort?.abort();
    this.whatifAbort = null;
    this.error = null;
    this.emit();
  }

  /** One in-flight what-if at a time; superseded requests are aborted. */
  async runWhatif(): Promise<void> {
    if (!this.datasetId) return;
    if (!this.pendingAdds.length && !this.pendingRemoves.length) {
      this.lastWhatif = null;
      this.emit();
      return;
    }
    this.whatifAbort?.abort();
    const controller = new AbortController();
    this.whatifAbort = controller;
    this.busy = true;
    this.emit();
    try {
      const res = await this.client.whatif(
        {
          dataset: this.datasetId,
          revision: this.revision ?? undefined,
          cone: this.coneConfig(),
          add: this.pendingAdds,
          remove: this.pendingRemoves,
        },
        { signal: controller.signal },
      );
      if (this.whatifAbort !== controller) return; // superseded meanwhile
      this.lastWhatif = res;
      this.error = null;
      for (const pair of res.reversals) {
        if (pair.kind !== "strict") continue;
        const alert = alertFromPair(pair);
        if (!this.alerts.some((a) => a.key === alert.key)) {
          this.alerts.push(alert);
        }
      }
    } catch (e) {
      if ((e as Error).name === "AbortError") return;
      // server errors surface inline; staged edits are preserved
      this.error = e instanceof Error ? e.message : String(e);
    } finally {
      if (this.whatifAbort === controller) {
        this.busy = false;
        this.whatifAbort = null;
      }
      this.emit();
    }
  }

  /** Promote the staged edits to a new dataset revision. */
  async commitEdits(): Promise<void> {
    if (!this.datasetId || (!this.pendingAdds.length && !this.pendingRemoves.length)) {
      return;
    }
    this.busy = true;
    this.emit();
    try {
      const res = await this.client.whatif(
        {
          dataset: this.datasetId,
          revision: this.revision ?? undefined,
          cone: this.coneConfig(),
          add: this.pendingAdds,
          remove: this.pendingRemoves,
        },
        { commit: true },
      );
      this.revision = res.new_revision ?? this.revision;
      this.pendingAdds = [];
      this.pendingRemoves = [];
      this.lastWhatif = null;
      this.error = null;
      await this.refreshRanks();
    } catch (e) {
      this.error = e instanceof Error ? e.message : String(e);
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  dismissAlert(key: string): void {
    const idx = this.alerts.findIndex((a) => a.key === key);
    if (idx >= 0) {
      this.dismissedAlerts.push(this.alerts[idx]);
      this.alerts.splice(idx, 1);
      this.emit();
    }
  }

  /** Scatter view model; every rank number is a server-response field. */
  scatterModel(): ScatterModel {
    const [ax, ay] = this.axes;
    const axisNames: [string, string] = [
      this.criteria[ax] ?? `c${ax + 1}`,
      this.criteria[ay] ?? `c${ay + 1}`,
    ];
    if (!this.lastRank) {
      return {
        empty: true,
        points: [],
        coneRays: [],
        dualRays: [],
        axes: [ax, ay],
        axisNames,
        rankRange: [0, 0],
      };
    }
    const whatif = this.lastWhatif;
    const ranks: Record<string, number> = whatif ? whatif.ranks_after : this.lastRank.ranks;
    const points = whatif ? whatif.points_after : this.lastRank.points;
    const values = Object.values(ranks);
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    const additionIds = new Set(whatif ? whatif.addition_ids : []);
    const out: ScatterPoint[] = [];
    for (const id of Object.keys(points).sort()) {
      const rank = ranks[id] ?? null;
      const witness = this.lastRank.witnesses[id];
      const dominated = this.lastRank.dominated_counts[id];
      const hoverParts = [`${id}: rank ${rank ?? "?"}`];
      if (witness) {
        hoverParts.push(
          `witness w = (${witness[0].map((v) => v.toFixed(3)).join(", ")})`,
        );
      }
      if (dominated !== undefined) {
        hoverParts.push(`dominates ${dominated}`);
      }
      out.push({
        id,
        x: points[id].coords[ax],
        y: points[id].coords[ay],
        rank,
        shade: rank === null ? "#ffffff" : rankShade(rank, lo, hi),
        pending: additionIds.has(id),
        pendingRemoval: this.pendingRemoves.includes(id),
        hover: hoverParts.join(" | "),
      });
    }
    return {
      empty: out.length === 0,
      points: out,
      coneRays: this.lastRank.cone.rays.map((r) => [r[ax], r[ay]]),
      dualRays: this.lastRank.cone.dual_rays.map((r) => [r[ax], r[ay]]),
      axes: [ax, ay],
      axisNames,
      rankRange: [lo, hi],
    };
  }
}
