export type Task = "classification" | "regression";

export interface EvalDataset {
  name: string;
  task: Task;
  /** entity IRI per row, unique within the dataset */
  iris: string[];
  /** class labels (classification) or numeric strings parsed later (regression) */
  labels: string[];
  values: number[];
}

export type Embeddings = Map<string, number[]>;

export interface JoinedData {
  X: number[][];
  labels: string[];
  values: number[];
  /** matched rows / dataset rows */
  coverage: number;
}

export interface ResultRow {
  variant: string;
  dataset: string;
  learner: string;
  fold: number;
  score: number;
}

export interface Classifier {
  fit(X: number[][], y: string[]): void;
  predict(X: number[][]): string[];
}

export interface Regressor {
  fit(X: number[][], y: number[]): void;
  predict(X: number[][]): number[];
}

export class EmptyJoin extends Error {}
export class TooFewRows extends Error {}
export class SingleClass extends Error {}
export class CoverageMismatch extends Error {}
