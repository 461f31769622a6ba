export { plainFolds, stratifiedFolds } from "./folds.js";
export {
  EntropyTree,
  GaussianNB,
  KnnClassifier,
  KnnRegressor,
  LinearRegressionModel,
  LinearSvm,
  ModelTree,
  classificationLearners,
  regressionLearners,
} from "./learners.js";
export { accuracy, crossValidate, joinFeatures, rmse, runEvaluation } from "./evaluate.js";
export type { EvalOutcome } from "./evaluate.js";
export { ranksMd, readDataset, readEmbeddings, resultsCsv } from "./io.js";
export { averageRanks, taskIndex, tiedRanks } from "./ranks.js";
export { mulberry32, shuffle } from "./rng.js";
export {
  CoverageMismatch,
  EmptyJoin,
  SingleClass,
  TooFewRows,
} from "./types.js";
export type {
  Classifier,
  Embeddings,
  EvalDataset,
  JoinedData,
  Regressor,
  ResultRow,
  Task,
} from "./types.js";
