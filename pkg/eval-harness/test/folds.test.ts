import { describe, expect, it } from "vitest";

import { plainFolds, stratifiedFolds } from "../src/folds.js";
import { SingleClass, TooFewRows } from "../src/types.js";

function labels(counts: Record<string, number>): string[] {
  const out: string[] = [];
  for (const [label, n] of Object.entries(counts)) {
    for (let i = 0; i < n; i++) out.push(label);
  }
  return out;
}

describe("stratifiedFolds", () => {
  it("splits 100 balanced rows into 5+5 per fold", () => {
    const y = labels({ a: 50, b: 50 });
    const folds = stratifiedFolds(y, 10, 1);
    for (const fold of folds) {
      expect(fold.length).toBe(10);
      expect(fold.filter((i) => y[i] === "a").length).toBe(5);
      expect(fold.filter((i) => y[i] === "b").length).toBe(5);
    }
  });

  it("partitions the rows exactly once", () => {
    const y = labels({ a: 13, b: 29, c: 7 });
    const folds = stratifiedFolds(y, 10, 5);
    const all = folds.flat().sort((p, q) => p - q);
    expect(all).toEqual(Array.from(y.keys()));
  });

  it("keeps fold sizes within one row of each other", () => {
    const y = labels({ a: 17, b: 23, c: 11 });
    const sizes = stratifiedFolds(y, 10, 2).map((f) => f.length);
    expect(Math.max(...sizes) - Math.min(...sizes)).toBeLessThanOrEqual(1);
  });

  it("is reproducible for a seed and changes with it", () => {
    const y = labels({ a: 30, b: 30 });
    expect(stratifiedFolds(y, 10, 4)).toEqual(stratifiedFolds(y, 10, 4));
    expect(stratifiedFolds(y, 10, 4)).not.toEqual(stratifiedFolds(y, 10, 5));
  });

  it("rejects fewer rows than folds", () => {
    expect(() => stratifiedFolds(labels({ a: 4, b: 5 }), 10, 1)).toThrow(TooFewRows);
  });

  it("rejects a single class", () => {
    expect(() => stratifiedFolds(labels({ a: 40 }), 10, 1)).toThrow(SingleClass);
  });
});

describe("plainFolds", () => {
  it("partitions with near-equal sizes", () => {
    const folds = plainFolds(47, 10, 3);
    const all = folds.flat().sort((p, q) => p - q);
    expect(all).toEqual(Array.from({ length: 47 }, (_, i) => i));
    const sizes = folds.map((f) => f.length);
    expect(Math.max(...sizes) - Math.min(...sizes)).toBeLessThanOrEqual(1);
  });

  it("rejects fewer rows than folds", () => {
    expect(() => plainFolds(3, 10, 1)).toThrow(TooFewRows);
  });
});
