import type { Classifier, Regressor } from "./types.js";

function solve(A: number[][], b: number[]): number[] {
  // Gaussian elimination with partial pivoting; A and b are consumed.
  const n = b.length;
  for (let col = 0; col < n; col++) {
    let pivot = col;
    for (let r = col + 1; r < n; r++) {
      if (Math.abs(A[r][col]) > Math.abs(A[pivot][col])) pivot = r;
    }
    [A[col], A[pivot]] = [A[pivot], A[col]];
    [b[col], b[pivot]] = [b[pivot], b[col]];
    const diag = A[col][col];
    for (let r = col + 1; r < n; r++) {
      const factor = A[r][col] / diag;
      if (factor === 0) continue;
      for (let c = col; c < n; c++) A[r][c] -= factor * A[col][c];
      b[r] -= factor * b[col];
    }
  }
  const x = new Array<number>(n).fill(0);
  for (let r = n - 1; r >= 0; r--) {
    let acc = b[r];
    for (let c = r + 1; c < n; c++) acc -= A[r][c] * x[c];
    x[r] = acc / A[r][r];
  }
  return x;
}

/** Least squares on [X, 1] with a small ridge term for rank safety. */
function ridgeFit(X: number[][], y: number[], lambda: number): number[] {
  const d = X[0].length + 1;
  const G: number[][] = Array.from({ length: d }, () => new Array<number>(d).fill(0));
  const rhs = new Array<number>(d).fill(0);
  for (let i = 0; i < X.length; i++) {
    const row = X[i];
    for (let a = 0; a < d; a++) {
      const va = a < d - 1 ? row[a] : 1;
      rhs[a] += va * y[i];
      for (let bIdx = a; bIdx < d; bIdx++) {
        const vb = bIdx < d - 1 ? row[bIdx] : 1;
        G[a][bIdx] += va * vb;
      }
    }
  }
  for (let a = 0; a < d; a++) {
    G[a][a] += lambda;
    for (let bIdx = 0; bIdx < a; bIdx++) G[a][bIdx] = G[bIdx][a];
  }
  return solve(G, rhs);
}

function affine(w: number[], row: number[]): number {
  let s = w[w.length - 1];
  for (let d = 0; d < row.length; d++) s += w[d] * row[d];
  return s;
}

function sqDist(a: number[], b: number[]): number {
  let s = 0;
  for (let d = 0; d < a.length; d++) {
    const diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

/** k nearest training rows by squared distance, index as tiebreak. */
function nearest(train: number[][], row: number[], k: number): number[] {
  const order = train
    .map((t, i) => [sqDist(t, row), i])
    .sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  return order.slice(0, Math.min(k, order.length)).map((p) => p[1]);
}

export class GaussianNB implements Classifier {
  private classes: string[] = [];
  private logPrior: number[] = [];
  private mean: number[][] = [];
  private variance: number[][] = [];

  fit(X: number[][], y: string[]): void {
    this.classes = [...new Set(y)].sort();
    const dims = X[0].length;
    this.logPrior = [];
    this.mean = [];
    this.variance = [];
    for (const label of this.classes) {
      const rows = X.filter((_, i) => y[i] === label);
      const mu = new Array<number>(dims).fill(0);
      for (const row of rows) for (let d = 0; d < dims; d++) mu[d] += row[d];
      for (let d = 0; d < dims; d++) mu[d] /= rows.length;
      const va = new Array<number>(dims).fill(0);
      for (const row of rows) {
        for (let d = 0; d < dims; d++) va[d] += (row[d] - mu[d]) ** 2;
      }
      for (let d = 0; d < dims; d++) va[d] = va[d] / rows.length + 1e-9;
      this.logPrior.push(Math.log(rows.length / X.length));
      this.mean.push(mu);
      this.variance.push(va);
    }
  }

  predict(X: number[][]): string[] {
    return X.map((row) => {
      let best = 0;
      let bestLl = -Infinity;
      for (let c = 0; c < this.classes.length; c++) {
        let ll = this.logPrior[c];
        for (let d = 0; d < row.length; d++) {
          const va = this.variance[c][d];
          ll -= 0.5 * Math.log(2 * Math.PI * va);
          ll -= (row[d] - this.mean[c][d]) ** 2 / (2 * va);
        }
        if (ll > bestLl) {
          bestLl = ll;
          best = c;
        }
      }
      return this.classes[best];
    });
  }
}

export class KnnClassifier implements Classifier {
  private X: number[][] = [];
  private y: string[] = [];

  constructor(private k: number = 3) {}

  fit(X: number[][], y: string[]): void {
    this.X = X;
    this.y = y;
  }

  predict(X: number[][]): string[] {
    return X.map((row) => {
      const picks = nearest(this.X, row, this.k);
      const votes = new Map<string, number>();
      for (const i of picks) {
        votes.set(this.y[i], (votes.get(this.y[i]) ?? 0) + 1);
      }
      const top = Math.max(...votes.values());
      // tie goes to the tied class seen nearest first
      for (const i of picks) {
        if (votes.get(this.y[i]) === top) return this.y[i];
      }
      return this.y[picks[0]];
    });
  }
}

/**
 * Linear SVM with squared hinge loss, trained one-vs-rest by dual
 * coordinate descent (deterministic sweep order, no learning rate).
 */
export class LinearSvm implements Classifier {
  private classes: string[] = [];
  private weights: number[][] = [];
  private mu: number[] = [];
  private sd: number[] = [];

  constructor(private C: number, private passes: number = 60) {}

  private scale(row: number[]): number[] {
    return row.map((v, d) => (v - this.mu[d]) / this.sd[d]);
  }

  fit(X: number[][], y: string[]): void {
    const dims = X[0].length;
    this.mu = new Array<number>(dims).fill(0);
    this.sd = new Array<number>(dims).fill(0);
    for (const row of X) for (let d = 0; d < dims; d++) this.mu[d] += row[d];
    for (let d = 0; d < dims; d++) this.mu[d] /= X.length;
    for (const row of X) {
      for (let d = 0; d < dims; d++) this.sd[d] += (row[d] - this.mu[d]) ** 2;
    }
    for (let d = 0; d < dims; d++) {
      this.sd[d] = Math.sqrt(this.sd[d] / X.length) || 1;
    }
    const scaled = X.map((row) => this.scale(row));
    const norms = scaled.map((row) => 1 + row.reduce((s, v) => s + v * v, 0));
    this.classes = [...new Set(y)].sort();
    this.weights = [];
    for (const label of this.classes) {
      const sign = y.map((v) => (v === label ? 1 : -1));
      const w = new Array<number>(dims + 1).fill(0);
      const alpha = new Array<number>(X.length).fill(0);
      const damp = 1 / (2 * this.C);
      for (let pass = 0; pass < this.passes; pass++) {
        for (let i = 0; i < X.length; i++) {
          const margin = sign[i] * affine(w, scaled[i]);
          const grad = margin - 1 + damp * alpha[i];
          const next = Math.max(0, alpha[i] - grad / (norms[i] + damp));
          const delta = next - alpha[i];
          if (delta === 0) continue;
          alpha[i] = next;
          const step = delta * sign[i];
          for (let d = 0; d < dims; d++) w[d] += step * scaled[i][d];
          w[dims] += step;
        }
      }
      this.weights.push(w);
    }
  }

  predict(X: number[][]): string[] {
    return X.map((row) => {
      const scaled = this.scale(row);
      let best = 0;
      let bestScore = -Infinity;
      for (let c = 0; c < this.classes.length; c++) {
        const score = affine(this.weights[c], scaled);
        if (score > bestScore) {
          bestScore = score;
          best = c;
        }
      }
      return this.classes[best];
    });
  }
}

interface TreeNode {
  feature?: number;
  threshold?: number;
  left?: TreeNode;
  right?: TreeNode;
  label?: string;
  model?: number[];
  mean?: number;
}

function entropy(counts: number[], total: number): number {
  let h = 0;
  for (const c of counts) {
    if (c > 0) {
      const p = c / total;
      h -= p * Math.log2(p);
    }
  }
  return h;
}

/** Binary decision tree over numeric features, split by information gain. */
export class EntropyTree implements Classifier {
  private root: TreeNode = {};
  private labels: string[] = [];

  constructor(private maxDepth: number = 12, private minSplit: number = 2) {}

  fit(X: number[][], y: string[]): void {
    this.labels = [...new Set(y)].sort();
    const ids = y.map((v) => this.labels.indexOf(v));
    this.root = this.build(X, ids, Array.from(y.keys()), 0);
  }

  private majority(ids: number[], rows: number[]): string {
    const counts = new Array<number>(this.labels.length).fill(0);
    for (const r of rows) counts[ids[r]]++;
    let best = 0;
    for (let c = 1; c < counts.length; c++) {
      if (counts[c] > counts[best]) best = c;
    }
    return this.labels[best];
  }

  private build(X: number[][], ids: number[], rows: number[], depth: number): TreeNode {
    const counts = new Array<number>(this.labels.length).fill(0);
    for (const r of rows) counts[ids[r]]++;
    const present = counts.filter((c) => c > 0).length;
    if (depth >= this.maxDepth || rows.length < this.minSplit || present < 2) {
      return { label: this.majority(ids, rows) };
    }
    const parentH = entropy(counts, rows.length);
    let bestGain = 1e-12;
    let bestFeature = -1;
    let bestThreshold = 0;
    const dims = X[rows[0]].length;
    for (let f = 0; f < dims; f++) {
      const order = [...rows].sort((a, b) => X[a][f] - X[b][f] || a - b);
      const left = new Array<number>(this.labels.length).fill(0);
      const right = counts.slice();
      for (let i = 0; i < order.length - 1; i++) {
        left[ids[order[i]]]++;
        right[ids[order[i]]]--;
        const here = X[order[i]][f];
        const next = X[order[i + 1]][f];
        if (here === next) continue;
        const nl = i + 1;
        const nr = order.length - nl;
        const gain =
          parentH - (nl / order.length) * entropy(left, nl) - (nr / order.length) * entropy(right, nr);
        if (gain > bestGain) {
          bestGain = gain;
          bestFeature = f;
          bestThreshold = (here + next) / 2;
        }
      }
    }
    if (bestFeature < 0) {
      return { label: this.majority(ids, rows) };
    }
    const leftRows = rows.filter((r) => X[r][bestFeature] <= bestThreshold);
    const rightRows = rows.filter((r) => X[r][bestFeature] > bestThreshold);
    return {
      feature: bestFeature,
      threshold: bestThreshold,
      left: this.build(X, ids, leftRows, depth + 1),
      right: this.build(X, ids, rightRows, depth + 1),
    };
  }

  predict(X: number[][]): string[] {
    return X.map((row) => {
      let node = this.root;
      while (node.label === undefined) {
        node = row[node.feature!] <= node.threshold! ? node.left! : node.right!;
      }
      return node.label;
    });
  }
}

export class LinearRegressionModel implements Regressor {
  private w: number[] = [];

  fit(X: number[][], y: number[]): void {
    this.w = ridgeFit(X, y, 1e-8);
  }

  predict(X: number[][]): number[] {
    return X.map((row) => affine(this.w, row));
  }
}

export class KnnRegressor implements Regressor {
  private X: number[][] = [];
  private y: number[] = [];

  constructor(private k: number = 3) {}

  fit(X: number[][], y: number[]): void {
    this.X = X;
    this.y = y;
  }

  predict(X: number[][]): number[] {
    return X.map((row) => {
      const picks = nearest(this.X, row, this.k);
      return picks.reduce((s, i) => s + this.y[i], 0) / picks.length;
    });
  }
}

/**
 * Model tree: variance-reduction splits with a ridge linear model in each
 * leaf (mean fallback when a leaf is too small to fit one).
 */
export class ModelTree implements Regressor {
  private root: TreeNode = {};

  constructor(private maxDepth: number = 3, private minLeaf: number = 8) {}

  fit(X: number[][], y: number[]): void {
    this.root = this.build(X, y, Array.from(y.keys()), 0);
  }

  private leaf(X: number[][], y: number[], rows: number[]): TreeNode {
    const mean = rows.reduce((s, r) => s + y[r], 0) / rows.length;
    if (rows.length < X[rows[0]].length + 2) {
      return { mean };
    }
    const model = ridgeFit(rows.map((r) => X[r]), rows.map((r) => y[r]), 1e-6);
    return model.every(Number.isFinite) ? { model } : { mean };
  }

  private build(X: number[][], y: number[], rows: number[], depth: number): TreeNode {
    if (depth >= this.maxDepth || rows.length < 2 * this.minLeaf) {
      return this.leaf(X, y, rows);
    }
    let parentSse = 0;
    const mean = rows.reduce((s, r) => s + y[r], 0) / rows.length;
    for (const r of rows) parentSse += (y[r] - mean) ** 2;
    let bestGain = 1e-12;
    let bestFeature = -1;
    let bestThreshold = 0;
    const dims = X[rows[0]].length;
    for (let f = 0; f < dims; f++) {
      const order = [...rows].sort((a, b) => X[a][f] - X[b][f] || a - b);
      let sumL = 0;
      let sqL = 0;
      let sumR = 0;
      let sqR = 0;
      for (const r of rows) {
        sumR += y[r];
        sqR += y[r] * y[r];
      }
      for (let i = 0; i < order.length - 1; i++) {
        const v = y[order[i]];
        sumL += v;
        sqL += v * v;
        sumR -= v;
        sqR -= v * v;
        const nl = i + 1;
        const nr = order.length - nl;
        if (nl < this.minLeaf || nr < this.minLeaf) continue;
        if (X[order[i]][f] === X[order[i + 1]][f]) continue;
        const sse = sqL - (sumL * sumL) / nl + (sqR - (sumR * sumR) / nr);
        if (parentSse - sse > bestGain) {
          bestGain = parentSse - sse;
          bestFeature = f;
          bestThreshold = (X[order[i]][f] + X[order[i + 1]][f]) / 2;
        }
      }
    }
    if (bestFeature < 0) {
      return this.leaf(X, y, rows);
    }
    return {
      feature: bestFeature,
      threshold: bestThreshold,
      left: this.build(X, y, rows.filter((r) => X[r][bestFeature] <= bestThreshold), depth + 1),
      right: this.build(X, y, rows.filter((r) => X[r][bestFeature] > bestThreshold), depth + 1),
    };
  }

  predict(X: number[][]): number[] {
    return X.map((row) => {
      let node = this.root;
      while (node.feature !== undefined) {
        node = row[node.feature] <= node.threshold! ? node.left! : node.right!;
      }
      return node.model ? affine(node.model, row) : node.mean!;
    });
  }
}

export const classificationLearners: Record<string, () => Classifier> = {
  NB: () => new GaussianNB(),
  KNN: () => new KnnClassifier(3),
  "SVM-100": () => new LinearSvm(100),
  "SVM-1000": () => new LinearSvm(1000),
  C45: () => new EntropyTree(),
};

export const regressionLearners: Record<string, () => Regressor> = {
  LR: () => new LinearRegressionModel(),
  KNN: () => new KnnRegressor(3),
  M5: () => new ModelTree(),
};
