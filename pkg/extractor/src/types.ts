/**
 * Term-list interchange types and schema.
 *
 * This file is the contract with the consuming pipeline: files written here
 * must parse losslessly on the other side, so the shapes and the category /
 * origin spellings are fixed.
 */

import { z } from "zod";

export const CATEGORIES = ["subject", "place", "person", "corporate"] as const;
export type TermCategory = (typeof CATEGORIES)[number];

export const ORIGINS = [
  "text_nlp",
  "object_detection",
  "topic_model",
  "manual",
] as const;
export type TermOrigin = (typeof ORIGINS)[number];

export interface Term {
  surface: string;
  category: TermCategory;
  confidence?: number;
  origin: TermOrigin;
}

export interface TermList {
  unit_id: string;
  terms: Term[];
}

export const termSchema = z.object({
  surface: z.string().trim().min(1),
  category: z.enum(CATEGORIES),
  confidence: z.number().min(0).max(1).optional(),
  origin: z.enum(ORIGINS),
});

export const termListSchema = z.object({
  unit_id: z.string().trim().min(1),
  terms: z.array(termSchema),
});

export interface ExtractionConfig {
  /** Text language tag; only Italian rules ship with the adapter. */
  language: string;
  enabled: ReadonlySet<"entities" | "topics" | "objects">;
  minConfidence: number;
  /** Video sampling interval in seconds (default one frame every 5 s). */
  frameIntervalSeconds: number;
}

export function makeConfig(overrides: Partial<ExtractionConfig> = {}): ExtractionConfig {
  const config: ExtractionConfig = {
    language: "it",
    enabled: new Set(["entities"]),
    minConfidence: 0.0,
    frameIntervalSeconds: 5,
    ...overrides,
  };
  if (config.minConfidence < 0 || config.minConfidence > 1) {
    throw new RangeError(`minConfidence must be in [0, 1], got ${config.minConfidence}`);
  }
  return config;
}
