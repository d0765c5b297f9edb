"""Matrix Market exchange format I/O.

Supports the `array` (dense, column-major) and `coordinate` (sparse,
1-based) variants with `real` or `integer` fields and `general` symmetry.
Values are written with Python's shortest round-trip float representation,
so write -> read reproduces entries bitwise.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError
from .linalg import DenseMatrix, Matrix, SparseMatrix, Vector

_HEADER_ARRAY = "%%MatrixMarket matrix array real general"
_HEADER_COORD = "%%MatrixMarket matrix coordinate real general"


def _fmt(v: float) -> str:
    return repr(float(v))


def write_matrix(path: str, mat: Matrix) -> None:
    """Write a dense matrix as `array` or a sparse matrix as `coordinate`."""
    if isinstance(mat, SparseMatrix):
        _write_coordinate(path, mat)
    else:
        _write_array(path, mat.data)


def write_vector(path: str, vec: Vector) -> None:
    """Write a vector as an n-by-1 `array` matrix."""
    _write_array(path, vec.data.reshape(-1, 1))


def _write_array(path: str, a: np.ndarray) -> None:
    rows, cols = a.shape
    lines = [_HEADER_ARRAY, f"{rows} {cols}"]
    lines.extend(_fmt(v) for v in a.ravel(order="F"))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_coordinate(path: str, mat: SparseMatrix) -> None:
    lines = [_HEADER_COORD, f"{mat.rows} {mat.cols} {mat.nnz}"]
    row_ids = np.repeat(np.arange(mat.rows), np.diff(mat.indptr))
    for i, j, v in zip(row_ids, mat.indices, mat.values):
        lines.append(f"{i + 1} {j + 1} {_fmt(v)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _data_lines(path: str) -> tuple[str, list[str]]:
    with open(path) as fh:
        raw = fh.readlines()
    if not raw or not raw[0].startswith("%%MatrixMarket"):
        raise ValueError(f"{path}: missing %%MatrixMarket header")
    header = raw[0].strip().lower().split()
    body = [ln.strip() for ln in raw[1:]]
    body = [ln for ln in body if ln and not ln.startswith("%")]
    if len(header) != 5 or header[1] != "matrix":
        raise ValueError(f"{path}: malformed header {raw[0].strip()!r}")
    fmt, field, symmetry = header[2], header[3], header[4]
    if fmt not in ("array", "coordinate"):
        raise ValueError(f"{path}: unsupported format {fmt!r}")
    if field not in ("real", "integer"):
        raise ValueError(f"{path}: unsupported field {field!r}")
    if symmetry != "general":
        raise ValueError(f"{path}: unsupported symmetry {symmetry!r}")
    return fmt, body


def read_matrix(path: str) -> Matrix:
    """Read an `array` file as DenseMatrix or a `coordinate` file as SparseMatrix."""
    fmt, body = _data_lines(path)
    if fmt == "array":
        return DenseMatrix(_read_array_body(path, body))
    return _read_coordinate_body(path, body)


def read_vector(path: str) -> Vector:
    """Read an n-by-1 matrix file as a vector."""
    mat = read_matrix(path)
    if isinstance(mat, SparseMatrix):
        mat = mat.densify()
    if mat.cols != 1:
        raise ShapeError(f"{path}: expected a single-column matrix, got {mat.rows}x{mat.cols}")
    return Vector(mat.data[:, 0])


def _read_array_body(path: str, body: list[str]) -> np.ndarray:
    if not body:
        raise ValueError(f"{path}: missing size line")
    try:
        rows, cols = (int(t) for t in body[0].split())
    except ValueError as exc:
        raise ValueError(f"{path}: bad array size line {body[0]!r}") from exc
    entries = body[1:]
    if len(entries) != rows * cols:
        raise ValueError(f"{path}: expected {rows * cols} entries, found {len(entries)}")
    values = np.array([float(t) for t in entries], dtype=np.float64)
    return values.reshape((rows, cols), order="F")


def _read_coordinate_body(path: str, body: list[str]) -> SparseMatrix:
    if not body:
        raise ValueError(f"{path}: missing size line")
    try:
        rows, cols, nnz = (int(t) for t in body[0].split())
    except ValueError as exc:
        raise ValueError(f"{path}: bad coordinate size line {body[0]!r}") from exc
    entries = body[1:]
    if len(entries) != nnz:
        raise ValueError(f"{path}: expected {nnz} entries, found {len(entries)}")
    ii = np.empty(nnz, dtype=np.int64)
    jj = np.empty(nnz, dtype=np.int64)
    vv = np.empty(nnz, dtype=np.float64)
    for k, line in enumerate(entries):
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"{path}: bad coordinate entry {line!r}")
        ii[k] = int(parts[0]) - 1
        jj[k] = int(parts[1]) - 1
        vv[k] = float(parts[2])
    if nnz and (ii.min() < 0 or ii.max() >= rows or jj.min() < 0 or jj.max() >= cols):
        raise ValueError(f"{path}: coordinate indices out of range")
    # canonicalize: sort by (row, col), sum duplicates
    order = np.lexsort((jj, ii))
    ii, jj, vv = ii[order], jj[order], vv[order]
    if nnz > 1:
        dup = (np.diff(ii) == 0) & (np.diff(jj) == 0)
        if np.any(dup):
            keep = np.concatenate(([True], ~dup))
            group = np.cumsum(keep) - 1
            summed = np.zeros(int(group[-1]) + 1, dtype=np.float64)
            np.add.at(summed, group, vv)
            ii, jj, vv = ii[keep], jj[keep], summed
    counts = np.bincount(ii, minlength=rows)
    indptr = np.concatenate(([0], np.cumsum(counts)))
    return SparseMatrix(rows, cols, indptr, jj, vv)
