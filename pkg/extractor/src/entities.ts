/**
 * Rule-based Italian entity extraction.
 *
 * Three recognizers run over the tokenized text:
 *  - places: gazetteer n-gram matches (longest match wins);
 *  - organizations: an institutional head noun (Partito, Fondazione, ...)
 *    followed by capitalized continuations and connective particles;
 *  - persons: inverted-name patterns ("Perelli, Luigi") common in archival
 *    credits.
 *
 * Confidences are fixed per rule so runs are deterministic.
 */

import { ModelUnavailable } from "./errors.js";
import { GAZETTEER, MAX_PLACE_TOKENS } from "./data/gazetteer-it.js";
import type { ExtractionConfig, Term } from "./types.js";

const ORG_HEADS = new Set([
  "partito",
  "fondazione",
  "confederazione",
  "federazione",
  "archivio",
  "istituto",
  "associazione",
  "unione",
  "comitato",
  "sindacato",
  "ministero",
  "movimento",
  "società",
  "banca",
  "camera",
]);

// Lowercase particles allowed inside a capitalized span.
const CONNECTORS = new Set([
  "di", "del", "della", "dei", "degli", "delle", "dello", "d'", "e", "per",
  "il", "la", "lo", "generale", "italiana", "italiano", "nazionale",
]);

const SUPPORTED_LANGUAGES = new Set(["it"]);

interface Token {
  text: string;
  /** True when the token starts a sentence (capitalization is ambiguous). */
  sentenceInitial: boolean;
}

function tokenize(text: string): Token[] {
  const tokens: Token[] = [];
  let sentenceStart = true;
  for (const raw of text.split(/\s+/)) {
    if (!raw) continue;
    const stripped = raw.replace(/^[("'«\[]+/, "").replace(/[)."',;:!?»\]]+$/, "");
    if (!stripped) continue;
    tokens.push({ text: stripped, sentenceInitial: sentenceStart });
    sentenceStart = /[.!?]$/.test(raw);
  }
  return tokens;
}

function isCapitalized(word: string): boolean {
  const first = word.charAt(0);
  return first !== "" && first === first.toUpperCase() && first !== first.toLowerCase();
}

function findPlaces(tokens: Token[]): Map<string, string> {
  const found = new Map<string, string>();
  for (let i = 0; i < tokens.length; i++) {
    for (let width = Math.min(MAX_PLACE_TOKENS, tokens.length - i); width >= 1; width--) {
      const span = tokens.slice(i, i + width).map((t) => t.text).join(" ");
      const canonical = GAZETTEER.get(span.toLowerCase());
      if (canonical !== undefined) {
        found.set(canonical.toLowerCase(), canonical);
        i += width - 1;
        break;
      }
    }
  }
  return found;
}

function findOrganizations(tokens: Token[]): Map<string, string> {
  const found = new Map<string, string>();
  for (let i = 0; i < tokens.length; i++) {
    const head = tokens[i];
    if (!ORG_HEADS.has(head.text.toLowerCase()) || !isCapitalized(head.text)) continue;
    const span = [head.text];
    let j = i + 1;
    let pendingConnectors: string[] = [];
    while (j < tokens.length) {
      const word = tokens[j].text;
      if (isCapitalized(word) && !tokens[j].sentenceInitial) {
        span.push(...pendingConnectors, word);
        pendingConnectors = [];
        j++;
      } else if (CONNECTORS.has(word.toLowerCase()) && pendingConnectors.length < 2) {
        pendingConnectors.push(word);
        j++;
      } else {
        break;
      }
    }
    if (span.length >= 2) {
      const surface = span.join(" ");
      found.set(surface.toLowerCase(), surface);
      i = j - 1;
    }
  }
  return found;
}

function findPersons(text: string): Map<string, string> {
  const found = new Map<string, string>();
  // "Surname, Firstname" as used in archival credits and regia fields.
  const inverted = /\b(\p{Lu}\p{Ll}+),\s+(\p{Lu}\p{Ll}+)\b/gu;
  for (const match of text.matchAll(inverted)) {
    const surface = `${match[1]}, ${match[2]}`;
    if (!GAZETTEER.has(match[1].toLowerCase())) {
      found.set(surface.toLowerCase(), surface);
    }
  }
  return found;
}

/**
 * Extract place / person / organization terms from Italian text.
 * Throws RangeError on empty input and ModelUnavailable for languages the
 * bundled rules do not cover.
 */
export function extractTextEntities(text: string, config: ExtractionConfig): Term[] {
  if (!text.trim()) {
    throw new RangeError("text must be non-empty");
  }
  if (!SUPPORTED_LANGUAGES.has(config.language)) {
    throw new ModelUnavailable(
      `no entity rules for language ${JSON.stringify(config.language)}; only: ${[...SUPPORTED_LANGUAGES].join(", ")}`,
    );
  }

  const tokens = tokenize(text);
  const terms: Term[] = [];
  for (const surface of findPlaces(tokens).values()) {
    terms.push({ surface, category: "place", confidence: 0.95, origin: "text_nlp" });
  }
  for (const surface of findOrganizations(tokens).values()) {
    terms.push({ surface, category: "corporate", confidence: 0.8, origin: "text_nlp" });
  }
  for (const surface of findPersons(text).values()) {
    terms.push({ surface, category: "person", confidence: 0.75, origin: "text_nlp" });
  }
  return terms.filter(
    (term) => term.confidence === undefined || term.confidence >= config.minConfidence,
  );
}
