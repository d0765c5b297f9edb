/**
 * Bindings parity gate: a fixed 10-problem corpus solved through the
 * bindings must match direct CLI invocations bitwise in x and exactly in
 * iteration counts.
 */

import assert from "node:assert/strict";
import { execFile } from "node:child_process";
import { mkdtemp, readFile, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";
import { promisify } from "node:util";

import { solve, type Method } from "../src/index.js";
import { parseDense, parseVector } from "../src/mm.js";

const execFileAsync = promisify(execFile);
const PYTHON = process.env.SKETCHLS_PY ?? "python3";

interface Case {
  m: number;
  n: number;
  kappa: number;
  beta: number;
  method: Method;
  seed: number;
}

const CORPUS: Case[] = [
  { m: 120, n: 10, kappa: 1e2, beta: 1e-4, method: "lsqr", seed: 0 },
  { m: 150, n: 12, kappa: 1e4, beta: 1e-5, method: "lsqr", seed: 1 },
  { m: 200, n: 8, kappa: 1e3, beta: 1e-4, method: "saa", seed: 2 },
  { m: 90, n: 6, kappa: 1e2, beta: 1e-3, method: "saa", seed: 3 },
  { m: 300, n: 15, kappa: 1e5, beta: 1e-6, method: "sap", seed: 4 },
  { m: 250, n: 10, kappa: 1e6, beta: 1e-6, method: "sap", seed: 5 },
  { m: 100, n: 5, kappa: 1e1, beta: 1e-3, method: "direct", seed: 6 },
  { m: 180, n: 9, kappa: 1e4, beta: 1e-5, method: "direct", seed: 7 },
  { m: 220, n: 11, kappa: 1e3, beta: 1e-4, method: "sap", seed: 8 },
  { m: 160, n: 7, kappa: 1e2, beta: 1e-4, method: "lsqr", seed: 9 },
];

function xBits(x: Float64Array): bigint[] {
  return [...new BigUint64Array(x.buffer, x.byteOffset, x.length)];
}

test("10-problem corpus: bindings match the native CLI bitwise", async () => {
  for (const c of CORPUS) {
    const dir = await mkdtemp(join(tmpdir(), "sketchls-parity-"));
    try {
      await execFileAsync(PYTHON, [
        "-m", "sketchls", "gen",
        "--m", String(c.m), "--n", String(c.n),
        "--cond", String(c.kappa), "--beta", String(c.beta),
        "--seed", String(c.seed), "--out", dir,
      ]);
      const aPath = join(dir, "A.mtx");
      const bPath = join(dir, "b.mtx");
      const xPath = join(dir, "x_native.mtx");

      const native = await execFileAsync(PYTHON, [
        "-m", "sketchls", "solve",
        "--A", aPath, "--b", bPath,
        "--method", c.method, "--seed", String(c.seed),
        "--out", xPath, "--json",
      ]);
      const nativeSummary = JSON.parse(native.stdout);
      const nativeX = parseVector(await readFile(xPath, "utf8"));

      const A = parseDense(await readFile(aPath, "utf8"));
      const b = parseVector(await readFile(bPath, "utf8"));
      const bound = await solve(A, b, { method: c.method, seed: c.seed });

      assert.deepEqual(
        xBits(bound.x),
        xBits(nativeX),
        `x mismatch for ${c.method} seed ${c.seed}`,
      );
      assert.equal(
        bound.iterations,
        nativeSummary.iterations,
        `iteration mismatch for ${c.method} seed ${c.seed}`,
      );
      assert.equal(bound.method, nativeSummary.method);
      assert.equal(bound.d, nativeSummary.d);
    } finally {
      await rm(dir, { recursive: true, force: true });
    }
  }
});
