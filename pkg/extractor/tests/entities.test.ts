import { readFileSync } from "node:fs";
import * as path from "node:path";
import { describe, expect, it } from "vitest";

import { extractTextEntities } from "../src/entities.js";
import { ModelUnavailable } from "../src/errors.js";
import { makeConfig } from "../src/types.js";

const FIXTURE = readFileSync(
  path.join(__dirname, "..", "fixtures", "abstract-il8600011581.txt"),
  "utf-8",
);

const CONFIG = makeConfig();

describe("extractTextEntities", () => {
  it("finds Svizzera as a place in the bundled abstract", () => {
    const terms = extractTextEntities(FIXTURE, CONFIG);
    const places = terms.filter((t) => t.category === "place").map((t) => t.surface);
    expect(places).toContain("Svizzera");
    expect(places).toEqual(
      expect.arrayContaining(["Germania", "Belgio", "Francia", "Zurigo"]),
    );
    for (const term of terms) {
      expect(term.origin).toBe("text_nlp");
    }
  });

  it("finds the producing organization", () => {
    const terms = extractTextEntities(FIXTURE, CONFIG);
    const organizations = terms
      .filter((t) => t.category === "corporate")
      .map((t) => t.surface);
    expect(organizations).toContain("Partito Comunista Italiano");
  });

  it("finds inverted-name persons", () => {
    const terms = extractTextEntities(FIXTURE, CONFIG);
    const people = terms.filter((t) => t.category === "person").map((t) => t.surface);
    expect(people).toContain("Perelli, Luigi");
  });

  it("rejects empty-after-trim text", () => {
    expect(() => extractTextEntities("   \n ", CONFIG)).toThrow(RangeError);
  });

  it("returns no terms for entity-free text", () => {
    expect(extractTextEntities("una giornata come tante altre", CONFIG)).toEqual([]);
  });

  it("reports missing language rules as ModelUnavailable", () => {
    expect(() =>
      extractTextEntities("ein Text", makeConfig({ language: "de" })),
    ).toThrow(ModelUnavailable);
  });

  it("applies the confidence floor", () => {
    const strict = makeConfig({ minConfidence: 0.9 });
    const terms = extractTextEntities(FIXTURE, strict);
    expect(terms.every((t) => (t.confidence ?? 1) >= 0.9)).toBe(true);
    expect(terms.some((t) => t.category === "person")).toBe(false);
  });

  it("is deterministic", () => {
    expect(extractTextEntities(FIXTURE, CONFIG)).toEqual(
      extractTextEntities(FIXTURE, CONFIG),
    );
  });
});
