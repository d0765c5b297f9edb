/**
 * Spawns the solver CLI.  The interpreter defaults to `python3` and can be
 * overridden with the SKETCHLS_PY environment variable; the package itself
 * is invoked as `python -m sketchls`.
 */

import { execFile } from "node:child_process";
import { mkdtemp, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { CliError } from "./errors.js";

export interface CliOutput {
  stdout: string;
  stderr: string;
}

export function runCli(args: string[]): Promise<CliOutput> {
  const python = process.env.SKETCHLS_PY ?? "python3";
  return new Promise((resolve, reject) => {
    execFile(
      python,
      ["-m", "sketchls", ...args],
      { maxBuffer: 1 << 28 },
      (error, stdout, stderr) => {
        if (error) {
          const code = typeof error.code === "number" ? error.code : 1;
          reject(new CliError(code, stderr.trim() || error.message));
          return;
        }
        resolve({ stdout, stderr });
      },
    );
  });
}

/** Run `fn` with a fresh scratch directory, removing it afterwards. */
export async function withScratchDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = await mkdtemp(join(tmpdir(), "sketchls-"));
  try {
    return await fn(dir);
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}
