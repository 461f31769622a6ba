import { readFileSync } from "node:fs";
import { basename } from "node:path";

import type { Embeddings, EvalDataset, ResultRow, Task } from "./types.js";

/** Reads `term v1 v2 ...` lines, one embedding per term. */
export function readEmbeddings(path: string): Embeddings {
  const out: Embeddings = new Map();
  let dims = -1;
  const lines = readFileSync(path, "utf8").split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i];
    if (line === "") continue;
    const fields = line.split(" ");
    const vec = fields.slice(1).map(Number);
    if (fields.length < 2 || vec.some((v) => !Number.isFinite(v))) {
      throw new Error(`${path}:${i + 1}: bad embedding line`);
    }
    if (dims === -1) dims = vec.length;
    if (vec.length !== dims) {
      throw new Error(`${path}:${i + 1}: expected ${dims} components, got ${vec.length}`);
    }
    out.set(fields[0], vec);
  }
  if (out.size === 0) throw new Error(`${path}: no embeddings`);
  return out;
}

const HEADER = /^#\s*task\s*:\s*(classification|regression)\s*$/i;

/**
 * Reads a dataset TSV: a `# task: classification|regression` header line,
 * then one `iri<TAB>target` row per line. The dataset name is the file stem.
 */
export function readDataset(path: string): EvalDataset {
  const lines = readFileSync(path, "utf8").split("\n");
  const match = HEADER.exec(lines[0] ?? "");
  if (!match) {
    throw new Error(`${path}:1: first line must be '# task: classification' or '# task: regression'`);
  }
  const task = match[1].toLowerCase() as Task;
  const iris: string[] = [];
  const labels: string[] = [];
  const values: number[] = [];
  const seen = new Set<string>();
  for (let i = 1; i < lines.length; i++) {
    if (lines[i] === "") continue;
    const fields = lines[i].split("\t");
    if (fields.length !== 2 || fields[0] === "") {
      throw new Error(`${path}:${i + 1}: expected 'iri<TAB>target'`);
    }
    const [iri, target] = fields;
    if (seen.has(iri)) {
      throw new Error(`${path}:${i + 1}: duplicate entity ${iri}`);
    }
    seen.add(iri);
    iris.push(iri);
    if (task === "regression") {
      const v = Number(target);
      if (!Number.isFinite(v)) {
        throw new Error(`${path}:${i + 1}: regression target '${target}' is not a number`);
      }
      values.push(v);
      labels.push(target);
    } else {
      labels.push(target);
      values.push(NaN);
    }
  }
  if (iris.length === 0) throw new Error(`${path}: no rows`);
  const name = basename(path).replace(/\.[^.]*$/, "");
  return { name, task, iris, labels, values };
}

export function resultsCsv(rows: ResultRow[]): string {
  const body = rows.map(
    (r) => `${r.variant},${r.dataset},${r.learner},${r.fold},${r.score}`,
  );
  return ["variant,dataset,learner,fold,score", ...body, ""].join("\n");
}

/** Markdown summary: one table per task, variants as rows, learners as columns. */
export function ranksMd(
  ranks: Map<string, Map<string, number>>,
  learnersByTask: Record<Task, string[]>,
  variants: string[],
  folds: number,
  seed: number,
): string {
  const lines = ["# Average ranks", "", `Computed over ${folds}-fold runs, seed ${seed}. Lower is better.`];
  for (const task of ["classification", "regression"] as Task[]) {
    const learners = learnersByTask[task].filter((l) => ranks.has(`${task}:${l}`));
    if (learners.length === 0) continue;
    lines.push("", `## ${task[0].toUpperCase()}${task.slice(1)}`, "");
    lines.push(`| variant | ${learners.join(" | ")} |`);
    lines.push(`|---|${learners.map(() => "---").join("|")}|`);
    for (const variant of variants) {
      const cells = learners.map((l) => {
        const r = ranks.get(`${task}:${l}`)!.get(variant);
        return r === undefined ? "-" : r.toFixed(2);
      });
      lines.push(`| ${variant} | ${cells.join(" | ")} |`);
    }
  }
  lines.push("");
  return lines.join("\n");
}
