/** Search-page state: the query text, the active filter chips, and the page.
 * Chips map one-to-one onto filter atoms; `searchParams` is the single
 * source of the query string, so every request is reconstructible from the
 * state that produced it. */

import type { Facet, SearchResponse } from "./api.js";

export type ChipKind = "lang" | "topic" | "type" | "publisher" | "year" | "duration";

export interface FilterChip {
  kind: ChipKind;
  value: string;
  display: string;
}

export interface UiSearchState {
  query: string;
  chips: FilterChip[];
  offset: number;
  limit: number;
  lastResponse: SearchResponse | null;
  /** Sequence number of the newest issued request; stale responses are
   * discarded by comparing against it. */
  seq: number;
}

export function initialState(limit = 20): UiSearchState {
  return { query: "", chips: [], offset: 0, limit, lastResponse: null, seq: 0 };
}

/** Same bucket boundaries the gateway advertises under /filters. */
export const DURATION_BUCKETS: { label: string; min: number | null; max: number | null }[] = [
  { label: "<10 min", min: null, max: 599 },
  { label: "10–60 min", min: 600, max: 3600 },
  { label: ">60 min", min: 3601, max: null },
];

const FACET_TO_KIND: Record<string, ChipKind> = {
  language: "lang",
  topic: "topic",
  "media-type": "type",
  "publisher-institution": "publisher",
  "publication-year": "year",
  "duration-bucket": "duration",
};

const KIND_LABEL: Record<ChipKind, string> = {
  lang: "language",
  topic: "topic",
  type: "type",
  publisher: "publisher",
  year: "year",
  duration: "duration",
};

export function facetToChip(facet: Facet): FilterChip | null {
  const kind = FACET_TO_KIND[facet.property];
  if (!kind) return null;
  const value = String(facet.value);
  return { kind, value, display: `${KIND_LABEL[kind]}: ${value}` };
}

/** One chip expands to the query-string pairs of exactly one filter atom. */
export function chipParams(chip: FilterChip): [string, string][] {
  switch (chip.kind) {
    case "lang":
      return [["lang", chip.value]];
    case "topic":
      return [["topic", chip.value]];
    case "type":
      return [["type", chip.value]];
    case "publisher":
      return [["publisher", chip.value]];
    case "year":
      return [
        ["after", `${chip.value}-01-01`],
        ["before", `${chip.value}-12-31`],
      ];
    case "duration": {
      const bucket = DURATION_BUCKETS.find((b) => b.label === chip.value);
      if (!bucket) return [];
      const pairs: [string, string][] = [];
      if (bucket.min !== null) pairs.push(["minSeconds", String(bucket.min)]);
      if (bucket.max !== null) pairs.push(["maxSeconds", String(bucket.max)]);
      return pairs;
    }
  }
}

export function hasCriteria(state: UiSearchState): boolean {
  return state.query.trim().length > 0 || state.chips.length > 0;
}

/** The exact query string of the next request. */
export function searchParams(state: UiSearchState): URLSearchParams {
  const params = new URLSearchParams();
  const q = state.query.trim();
  if (q) params.append("q", q);
  for (const chip of state.chips) {
    for (const [key, value] of chipParams(chip)) params.append(key, value);
  }
  params.append("offset", String(state.offset));
  params.append("limit", String(state.limit));
  return params;
}

export function addChip(state: UiSearchState, chip: FilterChip): boolean {
  const exists = state.chips.some(
    (c) => c.kind === chip.kind && c.value === chip.value,
  );
  if (exists) return false;
  state.chips.push(chip);
  state.offset = 0;
  return true;
}

export function removeChip(state: UiSearchState, index: number): void {
  state.chips.splice(index, 1);
  state.offset = 0;
}

export function clearChips(state: UiSearchState): void {
  state.chips = [];
  state.offset = 0;
}
