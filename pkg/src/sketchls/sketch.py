"""Randomized sketching operators.

Five kinds are supported:

- ``gaussian``: dense, entries iid Normal(0, 1/d).
- ``srht``: subsampled randomized Hadamard transform, sqrt(m_pad/d) * P H D
  with the source zero-padded to the next power of two, H the normalized
  Hadamard matrix applied via the fast Walsh-Hadamard transform, D a random
  sign diagonal, and P a without-replacement row sample.
- ``countsketch``: one random +-1 per source column (the package default).
- ``sparsesign``: s distinct rows per source column, values +-1/sqrt(s).
- ``identity``: pass-through, for testing and ablation.

Sparse operators are kept in structural (compressed sparse) form and are
never densified on the apply path; ``materialize`` exists as a test oracle
with a hard size guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .errors import CapacityError, ShapeError, SpecError
from .linalg import DenseMatrix, Matrix, SparseMatrix, Vector, _freeze
from .rng import derive_seed, stream

KINDS = ("gaussian", "srht", "countsketch", "sparsesign", "identity")
DEFAULT_KIND = "countsketch"

_MATERIALIZE_GUARD = 10**7

# Chunk bound (entries) for the dense key matrix used when sampling
# distinct rows in the collision-prone regime.
_SAMPLE_CHUNK_ENTRIES = 5 * 10**7


def default_embed_dim(m: int, n: int, d_factor: float = 4.0) -> int:
    """Embedding dimension used when none is given: ceil(d_factor*n),
    clamped to [n, m].  At the default factor 4 the sparse embeddings keep
    their distortion comfortably below 1."""
    return min(m, max(n, math.ceil(d_factor * n)))


@dataclass(frozen=True)
class SketchSpec:
    """Declarative description of a sketching map, realized by build_sketch."""

    kind: str
    embed_dim: int
    seed: int = 0
    sparsity: int = 8

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SpecError(f"unknown sketch kind {self.kind!r}, expected one of {KINDS}")
        if self.embed_dim < 1:
            raise SpecError(f"embed_dim must be >= 1, got {self.embed_dim}")
        if self.kind == "sparsesign" and self.sparsity < 1:
            raise SpecError(f"sparsity must be >= 1, got {self.sparsity}")


@dataclass(frozen=True)
class SketchOperator:
    """A seeded realization of a sketch for one source dimension.

    Rebuilding with the same (spec, m) reproduces the operator bitwise.
    Instances are immutable and safe to share across threads.
    """

    kind: str
    source_dim: int
    target_dim: int
    gaussian_entries: np.ndarray | None = None
    sparse_map: scipy.sparse.csr_matrix | None = None
    sign_diag: np.ndarray | None = None
    row_sample: np.ndarray | None = None
    padded_dim: int | None = None


def build_sketch(spec: SketchSpec, m: int) -> SketchOperator:
    """Realize ``spec`` for source dimension ``m``."""
    if m < 1:
        raise SpecError(f"source dimension must be >= 1, got {m}")
    if spec.kind == "identity":
        return SketchOperator(kind="identity", source_dim=m, target_dim=m)
    d = spec.embed_dim
    if d > m:
        raise SpecError(f"embed_dim {d} exceeds source dimension {m} for kind {spec.kind!r}")
    rng = stream(derive_seed(spec.seed, spec.kind, m))
    if spec.kind == "gaussian":
        g = rng.standard_normal((d, m)) / math.sqrt(d)
        return SketchOperator("gaussian", m, d, gaussian_entries=_freeze(g))
    if spec.kind == "countsketch":
        rows = rng.integers(0, d, size=m)
        signs = 2.0 * rng.integers(0, 2, size=m) - 1.0
        smat = scipy.sparse.csr_matrix(
            (signs, (rows, np.arange(m))), shape=(d, m), dtype=np.float64
        )
        return SketchOperator("countsketch", m, d, sparse_map=smat)
    if spec.kind == "sparsesign":
        s = spec.sparsity
        if s > d:
            raise SpecError(f"sparsesign needs sparsity <= embed_dim, got s={s}, d={d}")
        rows = _sample_distinct_rows(rng, m, d, s)
        signs = 2.0 * rng.integers(0, 2, size=(m, s)) - 1.0
        vals = signs.ravel() / math.sqrt(s)
        cols = np.repeat(np.arange(m), s)
        smat = scipy.sparse.csr_matrix(
            (vals, (rows.ravel(), cols)), shape=(d, m), dtype=np.float64
        )
        return SketchOperator("sparsesign", m, d, sparse_map=smat)
    # srht
    m_pad = 1 << (m - 1).bit_length()
    signs = (2.0 * rng.integers(0, 2, size=m_pad) - 1.0).astype(np.float64)
    row_sample = rng.permutation(m_pad)[:d]
    return SketchOperator(
        "srht",
        m,
        d,
        sign_diag=_freeze(signs),
        row_sample=_freeze(np.ascontiguousarray(row_sample, dtype=np.int64)),
        padded_dim=m_pad,
    )


def _sample_distinct_rows(rng: np.random.Generator, m: int, d: int, s: int) -> np.ndarray:
    """m independent uniform samples of s distinct rows out of d."""
    if s == d:
        return np.tile(np.arange(d, dtype=np.int64), (m, 1))
    if d <= 4 * s * s:
        # collisions likely: take the s smallest of d random keys per column
        out = np.empty((m, s), dtype=np.int64)
        chunk = max(1, _SAMPLE_CHUNK_ENTRIES // d)
        for lo in range(0, m, chunk):
            hi = min(m, lo + chunk)
            keys = rng.random((hi - lo, d))
            out[lo:hi] = np.argpartition(keys, s - 1, axis=1)[:, :s]
        return out
    rows = rng.integers(0, d, size=(m, s))
    while True:
        srt = np.sort(rows, axis=1)
        bad = np.flatnonzero(np.any(np.diff(srt, axis=1) == 0, axis=1))
        if bad.size == 0:
            return rows
        rows[bad] = rng.integers(0, d, size=(bad.size, s))


def fwht_inplace(x: np.ndarray) -> np.ndarray:
    """In-place unnormalized fast Walsh-Hadamard transform (Sylvester order).

    ``x`` must be a writable C-contiguous float64 array whose leading
    dimension is a power of two; 2-d inputs are transformed column-wise.
    O(len log len).  Returns its argument.
    """
    a = x if isinstance(x, np.ndarray) else np.asarray(x)
    if a.dtype != np.float64:
        raise ValueError("fwht_inplace requires a float64 array")
    if a.ndim not in (1, 2):
        raise ShapeError("fwht_inplace expects a 1-d or 2-d array")
    n = a.shape[0]
    if n < 1 or (n & (n - 1)) != 0:
        raise ShapeError(f"fwht_inplace requires a power-of-two length, got {n}")
    if not (a.flags.c_contiguous and a.flags.writeable):
        raise ValueError("fwht_inplace requires a writable C-contiguous array")
    work = a.reshape(n, -1)
    h = 1
    while h < n:
        w = work.reshape(n // (2 * h), 2, h, work.shape[1])
        w[:, 0] += w[:, 1]
        w[:, 1] *= -2.0
        w[:, 1] += w[:, 0]
        h *= 2
    return x


def apply_to_matrix(op: SketchOperator, A: Matrix) -> DenseMatrix:
    """S A as a dense d-by-n matrix.

    Cost: O(nnz(A) * s) for the sparse kinds, O(m n log m) for srht,
    O(d m n) for gaussian.
    """
    if A.rows != op.source_dim:
        raise ShapeError(f"operator expects {op.source_dim} rows, matrix has {A.rows}")
    return DenseMatrix(_apply(op, A))


def apply_to_vector(op: SketchOperator, b: Vector) -> Vector:
    """S b as a length-d vector; consistent with the single-column matrix view."""
    if b.len != op.source_dim:
        raise ShapeError(f"operator expects length {op.source_dim}, vector has {b.len}")
    return Vector(_apply(op, b))


def _apply(op: SketchOperator, operand: Matrix | Vector) -> np.ndarray:
    sparse_in = isinstance(operand, SparseMatrix)
    if op.kind == "identity":
        if sparse_in:
            return operand.to_scipy().toarray()
        return operand.data.copy()
    if op.kind == "gaussian":
        g = op.gaussian_entries
        if sparse_in:
            return np.ascontiguousarray((operand.to_scipy().T @ g.T).T)
        return g @ operand.data
    if op.kind in ("countsketch", "sparsesign"):
        if sparse_in:
            return (op.sparse_map @ operand.to_scipy()).toarray()
        return op.sparse_map @ operand.data
    # srht
    arr = operand.to_scipy().toarray() if sparse_in else operand.data
    m, m_pad = op.source_dim, op.padded_dim
    pad_shape = (m_pad,) if arr.ndim == 1 else (m_pad, arr.shape[1])
    pad = np.zeros(pad_shape, dtype=np.float64)
    if arr.ndim == 1:
        pad[:m] = op.sign_diag[:m] * arr
    else:
        pad[:m] = op.sign_diag[:m, None] * arr
    fwht_inplace(pad)
    return pad[op.row_sample] / math.sqrt(op.target_dim)


def materialize(op: SketchOperator) -> DenseMatrix:
    """Explicit d-by-m matrix equal to the operator.  Test oracle only:
    guarded at d*m <= 1e7 entries."""
    d, m = op.target_dim, op.source_dim
    if d * m > _MATERIALIZE_GUARD:
        raise CapacityError(f"materialize guard exceeded: {d}x{m} > {_MATERIALIZE_GUARD} entries")
    if op.kind == "identity":
        return DenseMatrix(np.eye(m))
    if op.kind == "gaussian":
        return DenseMatrix(op.gaussian_entries.copy())
    if op.kind in ("countsketch", "sparsesign"):
        return DenseMatrix(op.sparse_map.toarray())
    # srht rows from the Walsh function: H[p, j] = (-1)^popcount(p & j)
    cols = np.arange(m, dtype=np.int64)
    parity = np.bitwise_count(op.row_sample[:, None] & cols[None, :]) & 1
    h_rows = 1.0 - 2.0 * parity.astype(np.float64)
    return DenseMatrix(h_rows * op.sign_diag[:m][None, :] / math.sqrt(d))
