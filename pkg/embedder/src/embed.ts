/**
 * Batch extraction: corpus sentences (or factor phrases) in, token-vector
 * file out. Sentences whose tokens cannot be aligned to subword pieces are
 * skipped and listed in a sidecar error file next to the output.
 */

import { writeFileSync } from "node:fs";

import { readCatalogFactors, readCorpus } from "./corpus.js";
import { Encoder, EncoderConfig, defaultConfig } from "./encoder.js";
import { Block, serializeBlocks } from "./format.js";

export interface ExtractionResult {
  nProcessed: number;
  nFailed: number;
  failures: string[];
  outPath: string;
}

function sidecarPath(outPath: string): string {
  return outPath.replace(/(\.[^./\\]+)?$/, ".errors.txt");
}

function extract(
  units: Array<{ id: string; index: number; tokens: string[] }>,
  outPath: string,
  config: EncoderConfig,
): ExtractionResult {
  if (!Number.isInteger(config.batchSize) || config.batchSize < 1) {
    throw new Error(`batch size must be a positive integer, got ${config.batchSize}`);
  }
  const encoder = new Encoder(config);
  const blocks: Block[] = [];
  const failures: string[] = [];
  for (let start = 0; start < units.length; start += config.batchSize) {
    for (const unit of units.slice(start, start + config.batchSize)) {
      try {
        blocks.push({ id: unit.id, index: unit.index, vectors: encoder.encodeTokens(unit.tokens) });
      } catch (error) {
        failures.push(`${unit.id}\t${unit.index}\t${(error as Error).message}`);
      }
    }
  }
  writeFileSync(outPath, serializeBlocks(encoder.dim, blocks), "utf-8");
  if (failures.length > 0) {
    writeFileSync(sidecarPath(outPath), failures.join("\n") + "\n", "utf-8");
  }
  return {
    nProcessed: units.length,
    nFailed: failures.length,
    failures,
    outPath,
  };
}

export function embedCorpus(
  corpusPath: string,
  outPath: string,
  config: EncoderConfig = defaultConfig(),
): ExtractionResult {
  const sentences = readCorpus(corpusPath);
  return extract(
    sentences.map((s) => ({ id: s.commentId, index: s.index, tokens: s.tokens })),
    outPath,
    config,
  );
}

export function embedFactors(
  catalogPath: string,
  outPath: string,
  config: EncoderConfig = defaultConfig(),
): ExtractionResult {
  const factors = readCatalogFactors(catalogPath);
  return extract(
    factors.map((f) => ({ id: f.id, index: 0, tokens: f.tokens })),
    outPath,
    config,
  );
}

/** Nonzero exit only when more than 1% of the input units fail. */
export function exitCode(result: ExtractionResult): number {
  if (result.nProcessed === 0) return 0;
  return result.nFailed / result.nProcessed > 0.01 ? 2 : 0;
}
