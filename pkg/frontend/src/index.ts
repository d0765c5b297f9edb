/**
 * Client bindings for the sketchls solver.
 *
 * The native solver is consumed strictly through its command-line
 * interface: matrices travel as Matrix Market files, solve summaries as
 * JSON, sweeps as CSV.  Payloads are therefore always copied across the
 * process boundary; results carry `copied: true` to make that explicit.
 * All calls are async and leave the event loop free while the solver runs.
 */

import { readFile, writeFile } from "node:fs/promises";
import { join } from "node:path";

import { parseResultsCsv, type BenchRecord } from "./csv.js";
import { ValidationError } from "./errors.js";
import {
  formatCoordinate,
  formatDense,
  formatVector,
  parseDense,
  parseVector,
  type DenseMat,
  type SparseTriple,
} from "./mm.js";
import { runCli, withScratchDir } from "./runner.js";

export { CliError, ValidationError } from "./errors.js";
export type { BenchRecord } from "./csv.js";
export type { DenseMat, SparseTriple } from "./mm.js";

export type Method = "lsqr" | "saa" | "sap" | "direct";
export type SketchKind = "gaussian" | "srht" | "countsketch" | "sparsesign" | "identity";

export interface SolveOptions {
  method?: Method;
  sketch?: SketchKind;
  dFactor?: number;
  atol?: number;
  btol?: number;
  maxIter?: number;
  seed?: number;
}

/** Mirror of the native solve summary plus the solution vector. */
export interface BoundResult {
  x: Float64Array;
  iterations: number;
  residual_norm: number;
  wall_time_s: number;
  method: string;
  sketch: string | null;
  d: number | null;
  /** transport through the CLI always copies payloads */
  copied: true;
}

export interface GenerateOptions {
  m: number;
  n: number;
  kappa?: number;
  beta?: number;
  seed?: number;
}

export interface GeneratedProblem {
  A: DenseMat;
  b: Float64Array;
  x_star: Float64Array;
}

export interface BenchOptions {
  mList: number[];
  n: number;
  kappa?: number;
  beta?: number;
  methods?: Method[];
  sketches?: SketchKind[];
  dFactor?: number;
  repeats?: number;
  seed?: number;
}

function isSparse(a: DenseMat | SparseTriple): a is SparseTriple {
  return (a as SparseTriple).indptr !== undefined;
}

function checkVector(name: string, v: Float64Array): void {
  if (!(v instanceof Float64Array)) {
    throw new ValidationError(`${name} must be a Float64Array`);
  }
  for (const entry of v) {
    if (!Number.isFinite(entry)) {
      throw new ValidationError(`${name} must be finite`);
    }
  }
}

/** Solve min ||A x - b|| through the native CLI. */
export async function solve(
  A: DenseMat | SparseTriple,
  b: Float64Array,
  options: SolveOptions = {},
): Promise<BoundResult> {
  checkVector("b", b);
  const aText = isSparse(A) ? formatCoordinate(A) : formatDense(A);
  if (A.rows !== b.length) {
    throw new ValidationError(`A has ${A.rows} rows but b has length ${b.length}`);
  }
  return withScratchDir(async (dir) => {
    const aPath = join(dir, "A.mtx");
    const bPath = join(dir, "b.mtx");
    const xPath = join(dir, "x.mtx");
    await writeFile(aPath, aText);
    await writeFile(bPath, formatVector(b));
    const args = ["solve", "--A", aPath, "--b", bPath, "--out", xPath, "--json"];
    if (options.method !== undefined) args.push("--method", options.method);
    if (options.sketch !== undefined) args.push("--sketch", options.sketch);
    if (options.dFactor !== undefined) args.push("--d-factor", String(options.dFactor));
    if (options.atol !== undefined) args.push("--atol", String(options.atol));
    if (options.btol !== undefined) args.push("--btol", String(options.btol));
    if (options.maxIter !== undefined) args.push("--max-iter", String(options.maxIter));
    if (options.seed !== undefined) args.push("--seed", String(options.seed));
    const { stdout } = await runCli(args);
    const summary = JSON.parse(stdout);
    const x = parseVector(await readFile(xPath, "utf8"));
    return {
      x,
      iterations: summary.iterations,
      residual_norm: summary.residual_norm,
      wall_time_s: summary.wall_time_s,
      method: summary.method,
      sketch: summary.sketch,
      d: summary.d,
      copied: true,
    };
  });
}

/** Generate a synthetic instance with known solution and residual norm. */
export async function generate(options: GenerateOptions): Promise<GeneratedProblem> {
  return withScratchDir(async (dir) => {
    const args = [
      "gen",
      "--m", String(options.m),
      "--n", String(options.n),
      "--out", dir,
    ];
    if (options.kappa !== undefined) args.push("--cond", String(options.kappa));
    if (options.beta !== undefined) args.push("--beta", String(options.beta));
    if (options.seed !== undefined) args.push("--seed", String(options.seed));
    await runCli(args);
    const [aText, bText, xText] = await Promise.all([
      readFile(join(dir, "A.mtx"), "utf8"),
      readFile(join(dir, "b.mtx"), "utf8"),
      readFile(join(dir, "xstar.mtx"), "utf8"),
    ]);
    return {
      A: parseDense(aText),
      b: parseVector(bText),
      x_star: parseVector(xText),
    };
  });
}

/** Run a benchmark sweep and return its records. */
export async function benchRun(options: BenchOptions): Promise<BenchRecord[]> {
  if (options.mList.length === 0) {
    throw new ValidationError("mList must be nonempty");
  }
  return withScratchDir(async (dir) => {
    const args = [
      "bench",
      "--m-list", options.mList.join(","),
      "--n", String(options.n),
      "--out", dir,
    ];
    if (options.kappa !== undefined) args.push("--cond", String(options.kappa));
    if (options.beta !== undefined) args.push("--beta", String(options.beta));
    if (options.methods !== undefined) args.push("--methods", options.methods.join(","));
    if (options.sketches !== undefined) args.push("--sketches", options.sketches.join(","));
    if (options.dFactor !== undefined) args.push("--d-factor", String(options.dFactor));
    if (options.repeats !== undefined) args.push("--repeats", String(options.repeats));
    if (options.seed !== undefined) args.push("--seed", String(options.seed));
    await runCli(args);
    return parseResultsCsv(await readFile(join(dir, "results.csv"), "utf8"));
  });
}
