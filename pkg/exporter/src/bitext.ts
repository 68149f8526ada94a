/**
 * Bitext reader: one `source tokens ||| target tokens` pair per line,
 * single-space tokenization.
 */

export interface SentencePair {
  id: number;
  src: string[];
  tgt: string[];
}

const SEPARATOR = "|||";

export class BitextError extends Error {
  constructor(message: string, readonly line: number) {
    super(`line ${line}: ${message}`);
  }
}

function splitSide(raw: string, side: string, line: number): string[] {
  const trimmed = raw.replace(/^ /, "").replace(/ $/, "");
  if (trimmed === "") {
    throw new BitextError(`empty ${side} side`, line);
  }
  const tokens = trimmed.split(" ");
  for (const tok of tokens) {
    if (tok === "" || /\s/.test(tok)) {
      throw new BitextError(`blank or whitespace token on ${side} side`, line);
    }
  }
  return tokens;
}

export function parseBitext(text: string): SentencePair[] {
  const body = text.startsWith("﻿") ? text.slice(1) : text;
  const lines = body.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  return lines.map((line, k) => {
    const parts = line.split(SEPARATOR);
    if (parts.length < 2) {
      throw new BitextError(`missing '${SEPARATOR}' separator`, k + 1);
    }
    if (parts.length > 2) {
      throw new BitextError(`multiple '${SEPARATOR}' separators`, k + 1);
    }
    return {
      id: k,
      src: splitSide(parts[0], "source", k + 1),
      tgt: splitSide(parts[1], "target", k + 1),
    };
  });
}
