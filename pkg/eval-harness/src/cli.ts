#!/usr/bin/env node
import { mkdirSync, readdirSync, writeFileSync } from "node:fs";
import { basename, join } from "node:path";

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { runEvaluation } from "./evaluate.js";
import { ranksMd, readDataset, readEmbeddings, resultsCsv } from "./io.js";
import { averageRanks, taskIndex } from "./ranks.js";
import type { Embeddings, EvalDataset, Task } from "./types.js";

const LEARNERS_BY_TASK: Record<Task, string[]> = {
  classification: ["NB", "KNN", "SVM-100", "SVM-1000", "C45"],
  regression: ["LR", "KNN", "M5"],
};

export function main(argv: string[]): number {
  const args = yargs(argv)
    .option("embeddings", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "embedding file; repeat to compare variants",
    })
    .option("datasets", {
      type: "string",
      demandOption: true,
      describe: "directory of dataset .tsv files",
    })
    .option("folds", { type: "number", default: 10 })
    .option("seed", { type: "number", default: 1 })
    .option("out", { type: "string", default: ".", describe: "output directory" })
    .strict()
    .exitProcess(false)
    .parseSync();

  let datasets: EvalDataset[];
  const variants = new Map<string, Embeddings>();
  try {
    const files = readdirSync(args.datasets)
      .filter((f) => f.endsWith(".tsv"))
      .sort();
    if (files.length === 0) {
      throw new Error(`no .tsv datasets in ${args.datasets}`);
    }
    datasets = files.map((f) => readDataset(join(args.datasets, f)));
    for (const path of args.embeddings) {
      const name = basename(path).replace(/\.[^.]*$/, "");
      if (variants.has(name)) {
        throw new Error(`two embedding files would both be called '${name}'`);
      }
      variants.set(name, readEmbeddings(path));
    }
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 2;
  }

  const outcome = runEvaluation(variants, datasets, args.folds, args.seed);
  for (const [variant, cov] of outcome.coverage) {
    for (const [dataset, ratio] of cov) {
      console.log(`${variant} / ${dataset}: coverage ${(ratio * 100).toFixed(1)}%`);
    }
  }
  for (const skip of outcome.skipped) {
    console.error(`warning: skipped ${skip.dataset} for ${skip.variant}: ${skip.reason}`);
  }
  if (outcome.rows.length === 0) {
    console.error("error: nothing evaluated");
    return 1;
  }

  mkdirSync(args.out, { recursive: true });
  const csvPath = join(args.out, "results.csv");
  writeFileSync(csvPath, resultsCsv(outcome.rows));
  console.log(`wrote ${csvPath} (${outcome.rows.length} scores)`);

  if (variants.size < 2) {
    console.log("one variant given; skipping rank table");
    return 0;
  }
  // only datasets every variant completed can be ranked against each other
  const incomplete = new Set(outcome.skipped.map((s) => s.dataset));
  const rankable = outcome.rows.filter((r) => !incomplete.has(r.dataset));
  if (rankable.length === 0) {
    console.log("no dataset completed for every variant; skipping rank table");
    return 0;
  }
  const ranks = averageRanks(rankable, [...variants.keys()], taskIndex(datasets));
  const mdPath = join(args.out, "ranks.md");
  writeFileSync(mdPath, ranksMd(ranks, LEARNERS_BY_TASK, [...variants.keys()], args.folds, args.seed));
  console.log(`wrote ${mdPath}`);
  return 0;
}

const isEntry = process.argv[1] !== undefined && import.meta.url.endsWith(basename(process.argv[1]));
if (isEntry) {
  process.exit(main(hideBin(process.argv)));
}
