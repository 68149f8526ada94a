#!/usr/bin/env node
/**
 * emb-export: dump per-subword encoder vectors for a bitext into EMB1.
 *
 * Usage:
 *   emb-export export --model <id> --layer <l> --bitext <path> --out <path>
 *                     [--batch N] [--max-len L] [--skip-too-long]
 *
 * Exit codes: 2 for usage errors, 1 for data errors.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { MODELS } from "./encoder.js";
import { runExport } from "./export.js";

interface Flags {
  model?: string;
  layer?: string;
  bitext?: string;
  out?: string;
  batch?: string;
  maxLen?: string;
  skipTooLong: boolean;
}

class UsageError extends Error {}

function parseFlags(argv: string[]): Flags {
  const flags: Flags = { skipTooLong: false };
  const takes: Record<string, keyof Flags> = {
    "--model": "model",
    "--layer": "layer",
    "--bitext": "bitext",
    "--out": "out",
    "--batch": "batch",
    "--max-len": "maxLen",
  };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--skip-too-long") {
      flags.skipTooLong = true;
    } else if (arg in takes) {
      const value = argv[++i];
      if (value === undefined) {
        throw new UsageError(`${arg} requires a value`);
      }
      const key = takes[arg];
      if (key !== "skipTooLong") {
        flags[key] = value;
      }
    } else {
      throw new UsageError(`unknown flag '${arg}'`);
    }
  }
  return flags;
}

function requireInt(raw: string | undefined, name: string, fallback?: number): number {
  if (raw === undefined) {
    if (fallback === undefined) {
      throw new UsageError(`${name} is required`);
    }
    return fallback;
  }
  const value = Number(raw);
  if (!Number.isInteger(value)) {
    throw new UsageError(`${name} must be an integer, got '${raw}'`);
  }
  return value;
}

function usage(): string {
  const models = Object.keys(MODELS).join(" | ");
  return (
    "usage: emb-export export --model <id> --layer <l> --bitext <path> --out <path>\n" +
    "                         [--batch N] [--max-len L] [--skip-too-long]\n" +
    `models: ${models}\n`
  );
}

export function main(argv: string[]): number {
  try {
    if (argv[0] === "--help" || argv[0] === "-h" || argv.length === 0) {
      process.stdout.write(usage());
      return 0;
    }
    if (argv[0] !== "export") {
      throw new UsageError(`unknown command '${argv[0]}'`);
    }
    const flags = parseFlags(argv.slice(1));
    if (!flags.model) throw new UsageError("--model is required");
    if (!flags.bitext) throw new UsageError("--bitext is required");
    if (!flags.out) throw new UsageError("--out is required");
    const layer = requireInt(flags.layer, "--layer");
    const batchSize = requireInt(flags.batch, "--batch", 32);
    const maxLen = requireInt(flags.maxLen, "--max-len", 512);

    const bitext = readFileSync(flags.bitext, "utf-8");
    const result = runExport({
      model: flags.model,
      layer,
      bitext,
      batchSize,
      maxLen,
      skipTooLong: flags.skipTooLong,
    });
    for (const warning of result.warnings) {
      process.stderr.write(`emb-export: ${warning}\n`);
    }
    writeFileSync(flags.out, result.emb1, "utf-8");
    process.stderr.write(
      `emb-export: wrote ${result.exported} pair(s) to ${flags.out}\n`,
    );
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`emb-export: usage error: ${err.message}\n${usage()}`);
      return 2;
    }
    const message = err instanceof Error ? err.message : String(err);
    process.stderr.write(`emb-export: error: ${message}\n`);
    return 1;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
