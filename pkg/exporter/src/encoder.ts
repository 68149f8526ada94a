/**
 * Deterministic hash-n-gram encoder.
 *
 * Each subword gets a type vector built by feature-hashing its character
 * n-grams (with boundary markers) into `dim` buckets with hashed signs.
 * Stacked mixing layers then blend every position with its neighbors and a
 * positional component and re-normalize, so deeper layers are contextual:
 * the same subword in different sentences gets different vectors, while
 * identical sentences always encode identically.  All arithmetic is plain
 * float64 in a fixed order, so exports are reproducible byte for byte.
 */

import { SubwordToken, segmentSentence } from "./tokenizer.js";

export interface EncoderSpec {
  dim: number;
  depth: number;
  /** neighbor blend weight per mixing layer */
  mix: number;
  /** weight of the positional component added before mixing */
  positional: number;
}

export const MODELS: Record<string, EncoderSpec> = {
  "hash-ngram-v1": { dim: 64, depth: 8, mix: 0.25, positional: 0.05 },
  "hash-ngram-small": { dim: 16, depth: 4, mix: 0.25, positional: 0.05 },
};

export function resolveModel(id: string): EncoderSpec {
  const spec = MODELS[id];
  if (!spec) {
    const known = Object.keys(MODELS).join(", ");
    throw new Error(`unknown model '${id}' (available: ${known})`);
  }
  return spec;
}

function fnv1a32(text: string, seed: number): number {
  let h = (0x811c9dc5 ^ seed) >>> 0;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193) >>> 0;
  }
  return h >>> 0;
}

function typeVector(text: string, dim: number): Float64Array {
  const v = new Float64Array(dim);
  const bounded = `^${text}$`;
  for (let n = 1; n <= 3; n++) {
    for (let i = 0; i + n <= bounded.length; i++) {
      const gram = bounded.slice(i, i + n);
      const bucket = fnv1a32(gram, 0x9e37) % dim;
      const sign = fnv1a32(gram, 0x85eb) & 1 ? 1.0 : -1.0;
      v[bucket] += sign;
    }
  }
  return v;
}

function positionVector(pos: number, dim: number): Float64Array {
  const v = new Float64Array(dim);
  for (let k = 0; k < dim; k += 2) {
    const freq = Math.pow(10000, -k / dim);
    v[k] = Math.sin((pos + 1) * freq);
    if (k + 1 < dim) {
      v[k + 1] = Math.cos((pos + 1) * freq);
    }
  }
  return v;
}

function normalize(v: Float64Array, fallbackIndex: number): void {
  let norm = 0;
  for (let k = 0; k < v.length; k++) {
    norm += v[k] * v[k];
  }
  norm = Math.sqrt(norm);
  if (norm < 1e-9) {
    // degenerate cancellation: fall back to a deterministic basis vector
    v.fill(0);
    v[fallbackIndex % v.length] = 1.0;
    return;
  }
  for (let k = 0; k < v.length; k++) {
    v[k] /= norm;
  }
}

export interface EncodedSentence {
  subwords: SubwordToken[];
  vectors: Float64Array[];
}

/** Encode one side of a pair at the requested layer (0..depth). */
export function encodeSentence(
  words: string[],
  layer: number,
  spec: EncoderSpec,
): EncodedSentence {
  if (!Number.isInteger(layer) || layer < 0 || layer > spec.depth) {
    throw new Error(`layer ${layer} outside model depth 0..${spec.depth}`);
  }
  const subwords = segmentSentence(words);
  let vectors = subwords.map((sub, pos) => {
    const v = typeVector(sub.text, spec.dim);
    const p = positionVector(pos, spec.dim);
    for (let k = 0; k < spec.dim; k++) {
      v[k] += spec.positional * p[k];
    }
    normalize(v, pos);
    return v;
  });
  for (let round = 0; round < layer; round++) {
    const next = vectors.map((v, pos) => {
      const out = Float64Array.from(v);
      const left = vectors[pos - 1];
      const right = vectors[pos + 1];
      for (let k = 0; k < spec.dim; k++) {
        out[k] += spec.mix * ((left ? left[k] : 0) + (right ? right[k] : 0));
      }
      normalize(out, pos);
      return out;
    });
    vectors = next;
  }
  return { subwords, vectors };
}
