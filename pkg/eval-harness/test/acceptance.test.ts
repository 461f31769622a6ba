import { describe, expect, it } from "vitest";

import { stratifiedFolds } from "../src/folds.js";
import { averageRanks } from "../src/ranks.js";
import { mulberry32 } from "../src/rng.js";
import type { ResultRow, Task } from "../src/types.js";

describe("rank arithmetic", () => {
  it("40 wins and 10 losses over 50 runs average to ranks 1.2 and 1.8", () => {
    const rows: ResultRow[] = [];
    const tasks = new Map<string, Task>();
    let run = 0;
    for (let d = 0; d < 5; d++) {
      tasks.set(`d${d}`, "classification");
      for (let fold = 0; fold < 10; fold++, run++) {
        const aWins = run < 40;
        rows.push({ variant: "a", dataset: `d${d}`, learner: "SVM-100", fold, score: aWins ? 0.9 : 0.5 });
        rows.push({ variant: "b", dataset: `d${d}`, learner: "SVM-100", fold, score: 0.7 });
      }
    }
    const ranks = averageRanks(rows, ["a", "b"], tasks).get("classification:SVM-100")!;
    expect(ranks.get("a")).toBe(1.2);
    expect(ranks.get("b")).toBe(1.8);
  });

  it("average ranks sum to V(V+1)/2 per learner", () => {
    const rand = mulberry32(17);
    const variants = ["a", "b", "c", "d"];
    const rows: ResultRow[] = [];
    const tasks = new Map<string, Task>();
    for (let d = 0; d < 3; d++) {
      const task: Task = d === 0 ? "regression" : "classification";
      tasks.set(`d${d}`, task);
      const learner = task === "regression" ? "LR" : "NB";
      for (let fold = 0; fold < 10; fold++) {
        for (const variant of variants) {
          // round to force occasional ties
          const score = Math.round(rand() * 5) / 5;
          rows.push({ variant, dataset: `d${d}`, learner, fold, score });
        }
      }
    }
    const ranks = averageRanks(rows, variants, tasks);
    expect(ranks.size).toBeGreaterThan(0);
    for (const perVariant of ranks.values()) {
      let sum = 0;
      for (const r of perVariant.values()) {
        expect(r).toBeGreaterThanOrEqual(1);
        expect(r).toBeLessThanOrEqual(variants.length);
        sum += r;
      }
      expect(sum).toBeCloseTo((variants.length * (variants.length + 1)) / 2, 9);
    }
  });
});

describe("stratification", () => {
  it("per-fold class proportions stay within one row of global on 200 random datasets", () => {
    const rand = mulberry32(2025);
    for (let trial = 0; trial < 200; trial++) {
      const folds = 10;
      const n = folds + Math.floor(rand() * 240);
      const nClasses = 2 + Math.floor(rand() * 4);
      const cuts = Array.from({ length: nClasses }, () => rand());
      const total = cuts.reduce((s, c) => s + c, 0);
      const y: string[] = [];
      for (let c = 0; c < nClasses; c++) {
        const size = Math.max(1, Math.round((cuts[c] / total) * n));
        for (let i = 0; i < size; i++) y.push(`k${c}`);
      }
      const assignment = stratifiedFolds(y, folds, trial);

      // every fold holds each class's per-fold share rounded down or up,
      // and fold sizes themselves stay within one row of n/folds
      const globalCounts = new Map<string, number>();
      for (const label of y) globalCounts.set(label, (globalCounts.get(label) ?? 0) + 1);
      for (const fold of assignment) {
        expect(Math.abs(fold.length - y.length / folds)).toBeLessThanOrEqual(1 + 1e-9);
        for (const [label, classTotal] of globalCounts) {
          const inFold = fold.filter((i) => y[i] === label).length;
          expect(Math.abs(inFold - classTotal / folds)).toBeLessThanOrEqual(1 + 1e-9);
        }
      }
      const flat = assignment.flat().sort((p, q) => p - q);
      expect(flat).toEqual(Array.from(y.keys()));
    }
  });
});
