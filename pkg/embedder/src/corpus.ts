/**
 * Readers for the pipeline's external file formats: the normalized corpus
 * artifact (JSON lines with pre-tokenized sentences) and the factor
 * catalog (tab-separated CATEGORY/FACTOR rows).
 */

import { readFileSync } from "node:fs";

import { tokenize } from "./tokenize.js";

export interface CorpusSentence {
  commentId: string;
  index: number;
  tokens: string[];
}

export interface FactorPhrase {
  id: string;
  tokens: string[];
}

export function readCorpus(path: string): CorpusSentence[] {
  const sentences: CorpusSentence[] = [];
  const text = readFileSync(path, "utf-8");
  let lineNumber = 0;
  for (const line of text.split("\n")) {
    lineNumber += 1;
    if (!line.trim()) continue;
    let record: unknown;
    try {
      record = JSON.parse(line);
    } catch {
      throw new Error(`corpus line ${lineNumber}: invalid JSON`);
    }
    const comment = record as { id?: unknown; sentences?: unknown };
    if (typeof comment.id !== "string" || !Array.isArray(comment.sentences)) {
      throw new Error(`corpus line ${lineNumber}: record needs 'id' and 'sentences'`);
    }
    for (const sentence of comment.sentences as Array<{ index?: unknown; tokens?: unknown }>) {
      if (typeof sentence.index !== "number" || !Array.isArray(sentence.tokens)) {
        throw new Error(`corpus line ${lineNumber}: sentence needs 'index' and 'tokens'`);
      }
      sentences.push({
        commentId: comment.id,
        index: sentence.index,
        tokens: (sentence.tokens as unknown[]).map(String),
      });
    }
  }
  return sentences;
}

export function readCatalogFactors(path: string): FactorPhrase[] {
  const factors: FactorPhrase[] = [];
  const text = readFileSync(path, "utf-8");
  let lineNumber = 0;
  for (const line of text.split("\n")) {
    lineNumber += 1;
    const trimmed = line.trim();
    if (!trimmed || trimmed.startsWith("#")) continue;
    const fields = line.split("\t");
    if (fields[0] === "CATEGORY") continue;
    if (fields[0] !== "FACTOR") {
      throw new Error(`catalog line ${lineNumber}: unknown row kind '${fields[0]}'`);
    }
    if (fields.length !== 4) {
      throw new Error(`catalog line ${lineNumber}: FACTOR rows need id, phrase, category`);
    }
    factors.push({ id: fields[1].trim(), tokens: tokenize(fields[2]) });
  }
  return factors;
}
