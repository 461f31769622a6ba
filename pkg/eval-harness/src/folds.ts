import { mulberry32, shuffle } from "./rng.js";
import { SingleClass, TooFewRows } from "./types.js";

/**
 * Stratified fold assignment: rows are laid out class by class (shuffled
 * within each class) and dealt round-robin with one continuing counter.
 * Each class block then spans consecutive fold numbers, so every fold gets
 * the floor or ceiling of its proportional share of each class, and total
 * fold sizes come out exactly floor/ceil of n/folds.
 */
export function stratifiedFolds(y: string[], folds: number, seed: number): number[][] {
  if (y.length < folds) {
    throw new TooFewRows(`${y.length} rows for ${folds} folds`);
  }
  const byClass = new Map<string, number[]>();
  for (let i = 0; i < y.length; i++) {
    const got = byClass.get(y[i]);
    if (got) got.push(i);
    else byClass.set(y[i], [i]);
  }
  if (byClass.size < 2) {
    throw new SingleClass(`only class ${JSON.stringify(y[0])} present`);
  }
  const rand = mulberry32(seed);
  const out: number[][] = Array.from({ length: folds }, () => []);
  let at = 0;
  for (const label of [...byClass.keys()].sort()) {
    const rows = byClass.get(label)!;
    shuffle(rows, rand);
    for (const row of rows) {
      out[at++ % folds].push(row);
    }
  }
  return out;
}

/** Plain shuffled fold assignment for regression targets. */
export function plainFolds(n: number, folds: number, seed: number): number[][] {
  if (n < folds) {
    throw new TooFewRows(`${n} rows for ${folds} folds`);
  }
  const rows = Array.from({ length: n }, (_, i) => i);
  shuffle(rows, mulberry32(seed));
  const out: number[][] = Array.from({ length: folds }, () => []);
  for (let i = 0; i < n; i++) {
    out[i % folds].push(rows[i]);
  }
  return out;
}
