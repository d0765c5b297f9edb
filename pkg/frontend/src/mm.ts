/**
 * Matrix Market text format helpers for the client side.
 *
 * Dense matrices travel as the `array` variant (column-major entries),
 * sparse input as the `coordinate` variant with 1-based indices.  Values
 * are formatted with the shortest round-trip decimal representation, so
 * float64 payloads survive the text transport bitwise.
 */

import { ValidationError } from "./errors.js";

const ARRAY_HEADER = "%%MatrixMarket matrix array real general";
const COORD_HEADER = "%%MatrixMarket matrix coordinate real general";

/** Column-major dense matrix payload. */
export interface DenseMat {
  rows: number;
  cols: number;
  /** length rows*cols, column-major */
  data: Float64Array;
}

/** Compressed-sparse-row payload (indptr of length rows+1). */
export interface SparseTriple {
  rows: number;
  cols: number;
  data: Float64Array | number[];
  indices: Int32Array | number[];
  indptr: Int32Array | number[];
}

/** Shortest round-trip formatting; JS stringifies -0 as "0", fix the sign. */
export function formatFloat(v: number): string {
  if (!Number.isFinite(v)) {
    throw new ValidationError(`non-finite value ${v} cannot be serialized`);
  }
  if (Object.is(v, -0)) {
    return "-0.0";
  }
  return String(v);
}

export function formatDense(mat: DenseMat): string {
  if (mat.data.length !== mat.rows * mat.cols) {
    throw new ValidationError(
      `dense payload has ${mat.data.length} entries, expected ${mat.rows * mat.cols}`,
    );
  }
  const lines = [ARRAY_HEADER, `${mat.rows} ${mat.cols}`];
  for (const v of mat.data) {
    lines.push(formatFloat(v));
  }
  return lines.join("\n") + "\n";
}

export function formatVector(v: Float64Array): string {
  return formatDense({ rows: v.length, cols: 1, data: v });
}

export function validateTriple(sp: SparseTriple): void {
  const indptr = Array.from(sp.indptr, Number);
  const indices = Array.from(sp.indices, Number);
  if (indptr.length !== sp.rows + 1 || indptr[0] !== 0) {
    throw new ValidationError("indptr must have length rows+1 and start at 0");
  }
  for (let i = 1; i < indptr.length; i++) {
    if (indptr[i] < indptr[i - 1]) {
      throw new ValidationError("indptr must be nondecreasing");
    }
  }
  const nnz = indptr[sp.rows];
  if (indices.length !== nnz || sp.data.length !== nnz) {
    throw new ValidationError("indices/data length must match the final indptr entry");
  }
  for (let r = 0; r < sp.rows; r++) {
    for (let k = indptr[r]; k < indptr[r + 1]; k++) {
      const j = indices[k];
      if (!(j >= 0 && j < sp.cols)) {
        throw new ValidationError(`column index ${j} out of range in row ${r}`);
      }
      if (k > indptr[r] && indices[k - 1] >= j) {
        throw new ValidationError(`row ${r} column indices must be strictly increasing`);
      }
    }
  }
}

export function formatCoordinate(sp: SparseTriple): string {
  validateTriple(sp);
  const indptr = Array.from(sp.indptr, Number);
  const nnz = indptr[sp.rows];
  const lines = [COORD_HEADER, `${sp.rows} ${sp.cols} ${nnz}`];
  for (let r = 0; r < sp.rows; r++) {
    for (let k = indptr[r]; k < indptr[r + 1]; k++) {
      lines.push(`${r + 1} ${Number(sp.indices[k]) + 1} ${formatFloat(Number(sp.data[k]))}`);
    }
  }
  return lines.join("\n") + "\n";
}

/** Parse an `array` file into a column-major dense payload. */
export function parseDense(text: string): DenseMat {
  const raw = text.split("\n");
  if (raw.length === 0 || !raw[0].startsWith("%%MatrixMarket")) {
    throw new ValidationError("missing %%MatrixMarket header");
  }
  const header = raw[0].trim().toLowerCase().split(/\s+/);
  if (header[2] !== "array" || header[4] !== "general") {
    throw new ValidationError(`unsupported Matrix Market flavor: ${raw[0].trim()}`);
  }
  const body = raw.slice(1).map((ln) => ln.trim()).filter((ln) => ln && !ln.startsWith("%"));
  const [rows, cols] = body[0].split(/\s+/).map(Number);
  if (!Number.isInteger(rows) || !Number.isInteger(cols)) {
    throw new ValidationError(`bad size line: ${body[0]}`);
  }
  const entries = body.slice(1);
  if (entries.length !== rows * cols) {
    throw new ValidationError(`expected ${rows * cols} entries, found ${entries.length}`);
  }
  const data = new Float64Array(rows * cols);
  for (let i = 0; i < entries.length; i++) {
    const v = Number(entries[i]);
    if (Number.isNaN(v) && entries[i].toLowerCase() !== "nan") {
      throw new ValidationError(`bad entry: ${entries[i]}`);
    }
    data[i] = v;
  }
  return { rows, cols, data };
}

export function parseVector(text: string): Float64Array {
  const mat = parseDense(text);
  if (mat.cols !== 1) {
    throw new ValidationError(`expected a single-column matrix, got ${mat.rows}x${mat.cols}`);
  }
  return mat.data;
}
