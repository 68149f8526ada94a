/**
 * EMB1 text format.
 *
 * Header `EMB1 <layer> <dim>`, then per pair a `#pair <id> <n_src_words>
 * <n_tgt_words>` marker followed by `S <word_index> <subword> <v1> ... <vd>`
 * lines and the matching `T` lines.  Reals carry 9 significant digits.
 */

import { EncodedSentence } from "./encoder.js";

export interface EmbeddedPair {
  src: EncodedSentence;
  tgt: EncodedSentence;
}

function formatReal(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error(`non-finite vector component ${x}`);
  }
  return x.toPrecision(9);
}

function wordCount(side: EncodedSentence): number {
  return side.subwords.length === 0
    ? 0
    : side.subwords[side.subwords.length - 1].wordIndex + 1;
}

export function writeEmb1(pairs: EmbeddedPair[], layer: number, dim: number): string {
  const lines: string[] = [`EMB1 ${layer} ${dim}`];
  pairs.forEach((pair, id) => {
    lines.push(`#pair ${id} ${wordCount(pair.src)} ${wordCount(pair.tgt)}`);
    for (const [tag, side] of [["S", pair.src], ["T", pair.tgt]] as const) {
      side.subwords.forEach((sub, k) => {
        const values = Array.from(side.vectors[k], formatReal).join(" ");
        lines.push(`${tag} ${sub.wordIndex} ${sub.text} ${values}`);
      });
    }
  });
  return lines.join("\n") + "\n";
}

export interface ParsedPair {
  id: number;
  srcWords: number;
  tgtWords: number;
  src: { wordIndex: number; text: string; vector: number[] }[];
  tgt: { wordIndex: number; text: string; vector: number[] }[];
}

export interface ParsedEmb1 {
  layer: number;
  dim: number;
  pairs: ParsedPair[];
}

/** Strict reader used by the exporter's own tests. */
export function readEmb1(text: string): ParsedEmb1 {
  const lines = text.split("\n").filter((l) => l.length > 0);
  let at = 0;
  while (at < lines.length && lines[at].startsWith("# ")) {
    at++;
  }
  const header = lines[at]?.split(" ") ?? [];
  if (header.length !== 3 || header[0] !== "EMB1") {
    throw new Error("expected header 'EMB1 <layer> <dim>'");
  }
  const layer = Number(header[1]);
  const dim = Number(header[2]);
  const pairs: ParsedPair[] = [];
  let current: ParsedPair | null = null;

  const checkSide = (side: ParsedPair["src"], declared: number, label: string) => {
    let prev = -1;
    for (const sub of side) {
      if (sub.wordIndex < prev || sub.wordIndex > prev + 1) {
        throw new Error(`${label} word_index sequence broken at ${sub.wordIndex}`);
      }
      prev = sub.wordIndex;
      if (sub.vector.length !== dim) {
        throw new Error(`${label} vector has ${sub.vector.length} components`);
      }
      if (sub.vector.some((x) => !Number.isFinite(x))) {
        throw new Error(`${label} vector has a non-finite component`);
      }
    }
    if (prev + 1 !== declared) {
      throw new Error(`${label} covers ${prev + 1} words, declared ${declared}`);
    }
  };

  const flush = () => {
    if (!current) return;
    checkSide(current.src, current.srcWords, "source");
    checkSide(current.tgt, current.tgtWords, "target");
    pairs.push(current);
    current = null;
  };

  for (at += 1; at < lines.length; at++) {
    const fields = lines[at].split(" ");
    if (fields[0] === "#pair") {
      flush();
      current = {
        id: Number(fields[1]),
        srcWords: Number(fields[2]),
        tgtWords: Number(fields[3]),
        src: [],
        tgt: [],
      };
      if (current.id !== pairs.length) {
        throw new Error(`pair id ${current.id} out of order`);
      }
    } else if (fields[0] === "S" || fields[0] === "T") {
      if (!current) {
        throw new Error("subword record before any #pair marker");
      }
      const record = {
        wordIndex: Number(fields[1]),
        text: fields[2],
        vector: fields.slice(3).map(Number),
      };
      (fields[0] === "S" ? current.src : current.tgt).push(record);
    } else {
      throw new Error(`unrecognized record '${fields[0]}'`);
    }
  }
  flush();
  return { layer, dim, pairs };
}
