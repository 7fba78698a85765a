import { describe, expect, it } from "vitest";

import {
  addChip,
  chipParams,
  facetToChip,
  hasCriteria,
  initialState,
  removeChip,
  searchParams,
} from "../src/state.js";

describe("searchParams", () => {
  it("serializes query text, chips, and paging in a fixed order", () => {
    const state = initialState();
    state.query = "fatty liver";
    addChip(state, { kind: "year", value: "2023", display: "year: 2023" });
    expect([...searchParams(state)]).toEqual([
      ["q", "fatty liver"],
      ["after", "2023-01-01"],
      ["before", "2023-12-31"],
      ["offset", "0"],
      ["limit", "20"],
    ]);
  });

  it("keeps one query-string pair group per chip", () => {
    const state = initialState(10);
    addChip(state, { kind: "lang", value: "en", display: "language: en" });
    addChip(state, { kind: "topic", value: "history", display: "topic: history" });
    expect([...searchParams(state)]).toEqual([
      ["lang", "en"],
      ["topic", "history"],
      ["offset", "0"],
      ["limit", "10"],
    ]);
  });

  it("reflects paging offsets", () => {
    const state = initialState(2);
    state.query = "x";
    state.offset = 4;
    expect(searchParams(state).get("offset")).toBe("4");
    expect(searchParams(state).get("limit")).toBe("2");
  });
});

describe("chipParams", () => {
  it("maps duration buckets onto the advertised second bounds", () => {
    expect(chipParams({ kind: "duration", value: "<10 min", display: "" })).toEqual([
      ["maxSeconds", "599"],
    ]);
    expect(chipParams({ kind: "duration", value: "10–60 min", display: "" })).toEqual([
      ["minSeconds", "600"],
      ["maxSeconds", "3600"],
    ]);
    expect(chipParams({ kind: "duration", value: ">60 min", display: "" })).toEqual([
      ["minSeconds", "3601"],
    ]);
  });

  it("maps years onto an inclusive calendar range", () => {
    expect(chipParams({ kind: "year", value: "2014", display: "" })).toEqual([
      ["after", "2014-01-01"],
      ["before", "2014-12-31"],
    ]);
  });
});

describe("facetToChip", () => {
  it("covers every advertised facet kind", () => {
    expect(facetToChip({ property: "language", value: "en", count: 4 })).toEqual({
      kind: "lang",
      value: "en",
      display: "language: en",
    });
    expect(facetToChip({ property: "media-type", value: "video", count: 5 })?.kind).toBe("type");
    expect(facetToChip({ property: "publication-year", value: 2014, count: 1 })?.value).toBe("2014");
    expect(facetToChip({ property: "duration-bucket", value: ">60 min", count: 1 })?.kind).toBe("duration");
    expect(facetToChip({ property: "publisher-institution", value: "X", count: 1 })?.kind).toBe("publisher");
    expect(facetToChip({ property: "unknown", value: "x", count: 1 })).toBeNull();
  });
});

describe("chip bookkeeping", () => {
  it("adds one chip per facet click and dedupes repeats", () => {
    const state = initialState();
    const chip = { kind: "lang" as const, value: "en", display: "language: en" };
    expect(addChip(state, chip)).toBe(true);
    expect(addChip(state, { ...chip })).toBe(false);
    expect(state.chips).toHaveLength(1);
  });

  it("resets the page when chips change", () => {
    const state = initialState();
    state.offset = 40;
    addChip(state, { kind: "lang", value: "de", display: "language: de" });
    expect(state.offset).toBe(0);
    state.offset = 20;
    removeChip(state, 0);
    expect(state.offset).toBe(0);
    expect(state.chips).toHaveLength(0);
  });

  it("hasCriteria is false only for blank query and no chips", () => {
    const state = initialState();
    expect(hasCriteria(state)).toBe(false);
    state.query = "   ";
    expect(hasCriteria(state)).toBe(false);
    state.query = "x";
    expect(hasCriteria(state)).toBe(true);
  });
});
