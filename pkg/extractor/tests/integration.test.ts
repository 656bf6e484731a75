import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import * as path from "node:path";
import { afterAll, describe, expect, it } from "vitest";

import { run } from "../src/cli.js";
import { termListSchema } from "../src/types.js";

const WORK_DIR = mkdtempSync(path.join(tmpdir(), "extract-cli-"));
const FIXTURE = path.join(__dirname, "..", "fixtures", "abstract-il8600011581.txt");

afterAll(() => rmSync(WORK_DIR, { recursive: true, force: true }));

function pythonParserAvailable(): boolean {
  try {
    execFileSync("python3", ["-c", "import ead2iiif"], { stdio: "ignore" });
    return true;
  } catch {
    return false;
  }
}

describe("extract CLI", () => {
  it("produces a schema-valid term list with Svizzera as a place", async () => {
    const outPath = path.join(WORK_DIR, "il8600011581.json");
    const code = await run([
      "--in", FIXTURE,
      "--unit-id", "IL8600011581",
      "--lang", "it",
      "--out", outPath,
    ]);
    expect(code).toBe(0);

    const parsed = termListSchema.parse(JSON.parse(readFileSync(outPath, "utf-8")));
    expect(parsed.unit_id).toBe("IL8600011581");
    const places = parsed.terms.filter((t) => t.category === "place");
    expect(places.map((t) => t.surface)).toContain("Svizzera");
  });

  it("supports enabling the topic extractor alongside entities", async () => {
    const outPath = path.join(WORK_DIR, "topics.json");
    const code = await run([
      "--in", FIXTURE,
      "--unit-id", "IL8600011581",
      "--out", outPath,
      "--extractors", "entities,topics",
    ]);
    expect(code).toBe(0);
    const parsed = termListSchema.parse(JSON.parse(readFileSync(outPath, "utf-8")));
    expect(parsed.terms.some((t) => t.origin === "topic_model")).toBe(true);
  });

  it("exits 2 when the objects extractor has no model", async () => {
    const code = await run([
      "--in", FIXTURE,
      "--unit-id", "U1",
      "--out", path.join(WORK_DIR, "never.json"),
      "--extractors", "objects,entities",
      "--model", path.join(WORK_DIR, "missing-model"),
    ]);
    expect(code).toBe(2);
  });

  it.skipIf(!pythonParserAvailable())(
    "round-trips losslessly through the consuming pipeline's parser",
    async () => {
      const outPath = path.join(WORK_DIR, "roundtrip.json");
      expect(
        await run(["--in", FIXTURE, "--unit-id", "IL8600011581", "--out", outPath]),
      ).toBe(0);

      const script = [
        "import json, sys",
        "from ead2iiif import parse_term_list",
        "tl = parse_term_list(open(sys.argv[1], encoding='utf-8').read())",
        "back = {'unit_id': tl.unit_id, 'terms': [",
        "  {'surface': t.surface, 'category': t.category.value,",
        "   **({'confidence': t.confidence} if t.confidence is not None else {}),",
        "   'origin': t.origin.value}",
        "  for t in tl.terms]}",
        "print(json.dumps(back, ensure_ascii=False))",
      ].join("\n");
      const echoed = JSON.parse(
        execFileSync("python3", ["-c", script, outPath], { encoding: "utf-8" }),
      );
      expect(echoed).toEqual(JSON.parse(readFileSync(outPath, "utf-8")));
    },
  );
});
