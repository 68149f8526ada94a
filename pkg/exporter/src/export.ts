/**
 * Export job: encode both sides of every bitext pair at one layer and
 * write the EMB1 dump.  Sides are encoded separately (never concatenated),
 * and over-long pairs are an error by default; with `skipTooLong` they are
 * dropped, logged, and the remaining pairs renumbered sequentially.
 */

import { parseBitext, SentencePair } from "./bitext.js";
import { EncodedSentence, encodeSentence, resolveModel } from "./encoder.js";
import { EmbeddedPair, writeEmb1 } from "./emb1.js";
import { segmentSentence } from "./tokenizer.js";

export interface ExportJob {
  model: string;
  layer: number;
  bitext: string;
  batchSize?: number;
  maxLen?: number;
  skipTooLong?: boolean;
}

export interface ExportResult {
  emb1: string;
  exported: number;
  skipped: number[];
  warnings: string[];
}

const DEFAULT_MAX_LEN = 512;
const DEFAULT_BATCH = 32;

function tooLong(pair: SentencePair, maxLen: number): string | null {
  const srcLen = segmentSentence(pair.src).length;
  const tgtLen = segmentSentence(pair.tgt).length;
  if (srcLen > maxLen || tgtLen > maxLen) {
    return `pair ${pair.id}: ${srcLen}/${tgtLen} subwords exceed max length ${maxLen}`;
  }
  return null;
}

export function runExport(job: ExportJob): ExportResult {
  const spec = resolveModel(job.model);
  if (!Number.isInteger(job.layer) || job.layer < 0 || job.layer > spec.depth) {
    throw new Error(
      `layer ${job.layer} outside depth 0..${spec.depth} of model '${job.model}'`,
    );
  }
  const maxLen = job.maxLen ?? DEFAULT_MAX_LEN;
  const batchSize = job.batchSize ?? DEFAULT_BATCH;
  if (batchSize < 1) {
    throw new Error("batch size must be >= 1");
  }
  const pairs = parseBitext(job.bitext);

  const kept: SentencePair[] = [];
  const skipped: number[] = [];
  const warnings: string[] = [];
  for (const pair of pairs) {
    const problem = tooLong(pair, maxLen);
    if (problem === null) {
      kept.push(pair);
    } else if (job.skipTooLong) {
      skipped.push(pair.id);
      warnings.push(`skipped ${problem}`);
    } else {
      throw new Error(problem);
    }
  }
  if (skipped.length > 0) {
    warnings.push(`output pair ids renumbered after skipping ${skipped.length} pair(s)`);
  }

  // batching bounds transient memory; it never affects the output bytes
  const encoded: EmbeddedPair[] = [];
  for (let start = 0; start < kept.length; start += batchSize) {
    for (const pair of kept.slice(start, start + batchSize)) {
      const src: EncodedSentence = encodeSentence(pair.src, job.layer, spec);
      const tgt: EncodedSentence = encodeSentence(pair.tgt, job.layer, spec);
      encoded.push({ src, tgt });
    }
  }
  if (encoded.length === 0) {
    throw new Error("no pairs left to export");
  }
  return {
    emb1: writeEmb1(encoded, job.layer, spec.dim),
    exported: encoded.length,
    skipped,
    warnings,
  };
}
