import { plainFolds, stratifiedFolds } from "./folds.js";
import { classificationLearners, regressionLearners } from "./learners.js";
import type {
  Classifier,
  Embeddings,
  EvalDataset,
  JoinedData,
  Regressor,
  ResultRow,
} from "./types.js";
import { EmptyJoin, SingleClass, TooFewRows } from "./types.js";

/** Rows whose IRI has an embedding keep its vector; the rest are dropped. */
export function joinFeatures(ds: EvalDataset, embeddings: Embeddings): JoinedData {
  const X: number[][] = [];
  const labels: string[] = [];
  const values: number[] = [];
  for (let i = 0; i < ds.iris.length; i++) {
    const vec = embeddings.get(ds.iris[i]);
    if (!vec) continue;
    X.push(vec);
    labels.push(ds.labels[i]);
    values.push(ds.values[i]);
  }
  if (X.length === 0) {
    throw new EmptyJoin(`no entity of ${ds.name} has an embedding`);
  }
  return { X, labels, values, coverage: X.length / ds.iris.length };
}

export function accuracy(predicted: string[], actual: string[]): number {
  let hits = 0;
  for (let i = 0; i < actual.length; i++) {
    if (predicted[i] === actual[i]) hits++;
  }
  return hits / actual.length;
}

export function rmse(predicted: number[], actual: number[]): number {
  let sse = 0;
  for (let i = 0; i < actual.length; i++) {
    sse += (predicted[i] - actual[i]) ** 2;
  }
  return Math.sqrt(sse / actual.length);
}

function pick<T>(rows: T[], idx: number[]): T[] {
  return idx.map((i) => rows[i]);
}

/**
 * Fold scores for one learner on one joined dataset: accuracy per fold for
 * classification, RMSE per fold for regression. ``folds=1`` is a sanity
 * mode that trains and scores on the full set.
 */
export function crossValidate(
  data: JoinedData,
  task: EvalDataset["task"],
  learner: string | (() => Classifier) | (() => Regressor),
  folds: number,
  seed: number,
): number[] {
  const n = data.X.length;
  if (n < folds) throw new TooFewRows(`${n} rows for ${folds} folds`);
  const make =
    typeof learner === "string"
      ? task === "classification"
        ? classificationLearners[learner]
        : regressionLearners[learner]
      : learner;
  if (!make) throw new Error(`unknown ${task} learner '${String(learner)}'`);

  if (task === "classification" && new Set(data.labels).size < 2) {
    throw new SingleClass(`only class ${JSON.stringify(data.labels[0])} present`);
  }
  const all = Array.from({ length: n }, (_, i) => i);
  const assign =
    folds === 1
      ? [all]
      : task === "classification"
        ? stratifiedFolds(data.labels, folds, seed)
        : plainFolds(n, folds, seed);

  const scores: number[] = [];
  for (const test of assign) {
    const inTest = new Set(test);
    const trainIdx = folds === 1 ? all : all.filter((i) => !inTest.has(i));
    const model = make();
    if (task === "classification") {
      const clf = model as Classifier;
      clf.fit(pick(data.X, trainIdx), pick(data.labels, trainIdx));
      scores.push(accuracy(clf.predict(pick(data.X, test)), pick(data.labels, test)));
    } else {
      const reg = model as Regressor;
      reg.fit(pick(data.X, trainIdx), pick(data.values, trainIdx));
      scores.push(rmse(reg.predict(pick(data.X, test)), pick(data.values, test)));
    }
  }
  return scores;
}

export interface EvalOutcome {
  rows: ResultRow[];
  /** variant -> dataset -> coverage ratio */
  coverage: Map<string, Map<string, number>>;
  /** datasets dropped per variant, with the reason */
  skipped: { variant: string; dataset: string; reason: string }[];
}

/** Runs every learner of each dataset's task for every embedding variant. */
export function runEvaluation(
  variants: Map<string, Embeddings>,
  datasets: EvalDataset[],
  folds: number,
  seed: number,
): EvalOutcome {
  const rows: ResultRow[] = [];
  const coverage = new Map<string, Map<string, number>>();
  const skipped: EvalOutcome["skipped"] = [];
  for (const [variant, embeddings] of variants) {
    const cov = new Map<string, number>();
    coverage.set(variant, cov);
    for (const ds of datasets) {
      let joined: JoinedData;
      try {
        joined = joinFeatures(ds, embeddings);
      } catch (err) {
        skipped.push({ variant, dataset: ds.name, reason: String(err) });
        continue;
      }
      cov.set(ds.name, joined.coverage);
      const learners =
        ds.task === "classification" ? classificationLearners : regressionLearners;
      const dsRows: ResultRow[] = [];
      try {
        for (const learner of Object.keys(learners)) {
          const scores = crossValidate(joined, ds.task, learner, folds, seed);
          scores.forEach((score, fold) => {
            dsRows.push({ variant, dataset: ds.name, learner, fold, score });
          });
        }
      } catch (err) {
        if (err instanceof TooFewRows || err instanceof SingleClass) {
          skipped.push({ variant, dataset: ds.name, reason: String(err) });
          continue;
        }
        throw err;
      }
      rows.push(...dsRows);
    }
  }
  return { rows, coverage, skipped };
}
