/**
 * Frequency-based topic candidates: stopword-filtered content words ranked
 * by occurrence, top N becoming subject terms. Confidence is the count
 * normalized by the most frequent candidate, so repeated themes rank high
 * and one-off words rank low.
 */

import { STOPWORDS_IT } from "./data/stopwords-it.js";
import type { ExtractionConfig, Term } from "./types.js";

const DEFAULT_TOP_N = 5;
const MIN_WORD_LENGTH = 4;

export function extractTopics(
  text: string,
  config: ExtractionConfig,
  topN: number = DEFAULT_TOP_N,
): Term[] {
  if (!text.trim()) {
    throw new RangeError("text must be non-empty");
  }
  const counts = new Map<string, { surface: string; count: number }>();
  for (const raw of text.toLowerCase().split(/[^\p{L}']+/u)) {
    const word = raw.replace(/^'+|'+$/g, "");
    if (word.length < MIN_WORD_LENGTH || STOPWORDS_IT.has(word)) continue;
    const entry = counts.get(word);
    if (entry) {
      entry.count++;
    } else {
      counts.set(word, { surface: word, count: 1 });
    }
  }
  const ranked = [...counts.values()].sort(
    (a, b) => b.count - a.count || a.surface.localeCompare(b.surface),
  );
  if (ranked.length === 0) return [];
  const max = ranked[0].count;
  return ranked
    .slice(0, topN)
    .map((entry) => ({
      surface: entry.surface,
      category: "subject" as const,
      confidence: Math.round((entry.count / max) * 100) / 100,
      origin: "topic_model" as const,
    }))
    .filter((term) => term.confidence >= config.minConfidence);
}
