#!/usr/bin/env node
/**
 * extract: batch adapter producing term-list interchange files.
 *
 *   extract --in <file|dir> --unit-id <id> --lang it --out <termlist>
 *
 * Text files go through the entity rules (and topic ranking with
 * --extractors entities,topics); image/video files go through the object
 * detector when --model points at pretrained weights. The output file is
 * the only hand-off to the consuming pipeline.
 */

import { readdir, readFile, stat } from "node:fs/promises";
import * as path from "node:path";

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { extractMediaLabels, isImagePath, isVideoPath, loadDetector } from "./detect.js";
import { extractTextEntities } from "./entities.js";
import { ModelUnavailable, UnreadableMedia } from "./errors.js";
import { extractTopics } from "./topics.js";
import { buildTermList, writeTermList } from "./termlist.js";
import { makeConfig, type Term } from "./types.js";

async function inputFiles(inPath: string): Promise<string[]> {
  const info = await stat(inPath).catch(() => {
    throw new UnreadableMedia(`no such input: ${inPath}`);
  });
  if (info.isFile()) return [inPath];
  const names = await readdir(inPath);
  return names.sort().map((name) => path.join(inPath, name));
}

export async function run(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .scriptName("extract")
    .option("in", { type: "string", demandOption: true, describe: "input file or directory" })
    .option("unit-id", { type: "string", demandOption: true, describe: "archival unit the terms describe" })
    .option("lang", { type: "string", default: "it", describe: "text language tag" })
    .option("out", { type: "string", demandOption: true, describe: "term-list output path" })
    .option("extractors", {
      type: "string",
      default: "entities",
      describe: "comma-separated subset of entities,topics,objects",
    })
    .option("min-confidence", { type: "number", default: 0.0 })
    .option("model", { type: "string", describe: "directory with pretrained detector weights" })
    .strict()
    .help()
    .parse();

  const enabled = new Set(
    args.extractors.split(",").map((name) => name.trim()).filter(Boolean),
  );
  for (const name of enabled) {
    if (!["entities", "topics", "objects"].includes(name)) {
      console.error(`unknown extractor: ${name}`);
      return 2;
    }
  }
  const config = makeConfig({
    language: args.lang,
    enabled: enabled as Set<"entities" | "topics" | "objects">,
    minConfidence: args.minConfidence,
  });

  const terms: Term[] = [];
  try {
    const detector =
      enabled.has("objects") && args.model ? await loadDetector(args.model) : undefined;

    for (const file of await inputFiles(args.in)) {
      if (isImagePath(file) || isVideoPath(file)) {
        if (!enabled.has("objects")) continue;
        if (!detector) {
          throw new ModelUnavailable("--model is required for the objects extractor");
        }
        terms.push(...(await extractMediaLabels(file, config, detector)));
      } else if (file.endsWith(".txt")) {
        const text = await readFile(file, "utf-8");
        if (enabled.has("entities")) {
          terms.push(...extractTextEntities(text, config));
        }
        if (enabled.has("topics")) {
          terms.push(...extractTopics(text, config));
        }
      } else {
        console.error(`skipping unsupported file: ${file}`);
      }
    }

    const termList = buildTermList(args.unitId, terms);
    await writeTermList(termList, args.out);
    console.error(`wrote ${termList.terms.length} term(s) to ${args.out}`);
    return 0;
  } catch (error) {
    if (error instanceof ModelUnavailable || error instanceof UnreadableMedia) {
      console.error(`${error.name}: ${error.message}`);
      return 2;
    }
    throw error;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;

if (invokedDirectly) {
  run(hideBin(process.argv)).then(
    (code) => process.exit(code),
    (error) => {
      console.error(error);
      process.exit(2);
    },
  );
}
