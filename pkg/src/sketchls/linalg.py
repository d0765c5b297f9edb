"""Matrix/vector carriers and the deterministic kernels built on them.

Conventions fixed here once: dense matrices are 64-bit floats in
column-major (Fortran) order, sparse matrices are compressed-row with
sorted column indices, and every carrier is immutable after construction
(the backing numpy buffers are marked read-only), so instances are safe
to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse

from .errors import ShapeError, SingularFactorError

# Relative threshold below which a diagonal entry of R marks the input as
# rank deficient.  Rank-deficient systems are rejected, never regularized.
RANK_TOL = 1e-14


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DenseMatrix:
    """Column-major float64 matrix with at least one row and column."""

    data: np.ndarray

    def __post_init__(self) -> None:
        a = np.asfortranarray(self.data, dtype=np.float64)
        if a.ndim != 2:
            raise ShapeError(f"dense matrix must be 2-d, got ndim={a.ndim}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ShapeError(f"dense matrix must be nonempty, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("dense matrix entries must be finite")
        object.__setattr__(self, "data", _freeze(a))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class SparseMatrix:
    """Compressed-row float64 matrix with strictly increasing column indices per row."""

    rows: int
    cols: int
    indptr: np.ndarray
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ShapeError(f"sparse matrix must be nonempty, got {self.rows}x{self.cols}")
        indptr = np.ascontiguousarray(self.indptr, dtype=np.int64)
        indices = np.ascontiguousarray(self.indices, dtype=np.int64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if indptr.ndim != 1 or indptr.shape[0] != self.rows + 1:
            raise ShapeError("row pointers must have length rows+1")
        if indptr[0] != 0 or np.any(np.diff(indptr) < 0):
            raise ValueError("row pointers must start at 0 and be nondecreasing")
        nnz = int(indptr[-1])
        if indices.shape[0] != nnz or values.shape[0] != nnz:
            raise ShapeError("index/value arrays must match the final row pointer")
        if nnz and (indices.min() < 0 or indices.max() >= self.cols):
            raise ValueError("column indices out of range")
        if nnz > 1:
            # strict increase within each row: a nonpositive diff is only
            # allowed where a new row starts
            diffs = np.diff(indices)
            row_starts = np.zeros(nnz - 1, dtype=bool)
            interior = indptr[1:-1]
            interior = interior[(interior > 0) & (interior < nnz)]
            row_starts[interior - 1] = True
            if np.any((diffs <= 0) & ~row_starts):
                raise ValueError("column indices must be strictly increasing within each row")
        if not np.all(np.isfinite(values)):
            raise ValueError("sparse matrix values must be finite")
        object.__setattr__(self, "indptr", _freeze(indptr))
        object.__setattr__(self, "indices", _freeze(indices))
        object.__setattr__(self, "values", _freeze(values))

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    def to_scipy(self) -> scipy.sparse.csr_matrix:
        return scipy.sparse.csr_matrix(
            (self.values, self.indices, self.indptr), shape=(self.rows, self.cols)
        )

    @classmethod
    def from_scipy(cls, mat: scipy.sparse.spmatrix) -> "SparseMatrix":
        csr = scipy.sparse.csr_matrix(mat)
        csr.sort_indices()
        csr.sum_duplicates()
        return cls(csr.shape[0], csr.shape[1], csr.indptr, csr.indices, csr.data)

    def densify(self) -> DenseMatrix:
        return DenseMatrix(self.to_scipy().toarray())


@dataclass(frozen=True)
class Vector:
    """Contiguous float64 vector."""

    data: np.ndarray

    def __post_init__(self) -> None:
        a = np.ascontiguousarray(self.data, dtype=np.float64)
        if a.ndim != 1:
            raise ShapeError(f"vector must be 1-d, got ndim={a.ndim}")
        if not np.all(np.isfinite(a)):
            raise ValueError("vector entries must be finite")
        object.__setattr__(self, "data", _freeze(a))

    @property
    def len(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class QRFactors:
    """Economy QR factors: Q has orthonormal columns, R is upper triangular
    with nonnegative diagonal."""

    Q: DenseMatrix
    R: DenseMatrix


Matrix = DenseMatrix | SparseMatrix


def matvec(A: Matrix, x: Vector) -> Vector:
    """A @ x.  O(nnz) for sparse A."""
    if x.len != A.cols:
        raise ShapeError(f"matvec: A is {A.rows}x{A.cols} but x has length {x.len}")
    if isinstance(A, SparseMatrix):
        return Vector(A.to_scipy() @ x.data)
    return Vector(A.data @ x.data)


def matvec_transpose(A: Matrix, y: Vector) -> Vector:
    """A.T @ y.  O(nnz) for sparse A."""
    if y.len != A.rows:
        raise ShapeError(f"matvec_transpose: A is {A.rows}x{A.cols} but y has length {y.len}")
    if isinstance(A, SparseMatrix):
        return Vector(A.to_scipy().T @ y.data)
    return Vector(A.data.T @ y.data)


def economy_qr(M: DenseMatrix) -> QRFactors:
    """Householder QR of a tall matrix, M = Q R with Q m-by-n orthonormal.

    The diagonal of R is normalized to be nonnegative.  Raises
    SingularFactorError naming the offending column when a diagonal entry
    of R falls below RANK_TOL * ||M||_F.
    """
    if M.rows < M.cols:
        raise ShapeError(f"economy_qr requires rows >= cols, got {M.rows}x{M.cols}")
    q, r = np.linalg.qr(M.data, mode="reduced")
    diag = np.diagonal(r).copy()
    flip = diag < 0
    if np.any(flip):
        q = q.copy()
        r = r.copy()
        q[:, flip] *= -1.0
        r[flip, :] *= -1.0
        diag = np.abs(diag)
    fro = float(np.linalg.norm(M.data))
    bad = np.flatnonzero(diag < RANK_TOL * fro) if fro > 0 else np.arange(M.cols)
    if bad.size:
        col = int(bad[0])
        raise SingularFactorError(
            f"input is numerically rank deficient at column {col} "
            f"(|R[{col},{col}]| = {diag[col] if fro > 0 else 0.0:.3e})"
        )
    return QRFactors(Q=DenseMatrix(q), R=DenseMatrix(np.triu(r)))


def solve_triangular(R: DenseMatrix, y: Vector, transposed: bool = False) -> Vector:
    """Solve R z = y (or R.T z = y) for upper-triangular R."""
    if R.rows != R.cols:
        raise ShapeError(f"triangular factor must be square, got {R.rows}x{R.cols}")
    if y.len != R.rows:
        raise ShapeError(f"solve_triangular: R is {R.rows}x{R.cols} but y has length {y.len}")
    _check_diagonal(R.data)
    z = scipy.linalg.solve_triangular(
        R.data, y.data, lower=False, trans="T" if transposed else "N", check_finite=False
    )
    return Vector(z)


def _check_diagonal(r: np.ndarray) -> None:
    zero = np.flatnonzero(np.diagonal(r) == 0.0)
    if zero.size:
        raise SingularFactorError(f"zero diagonal entry at index {int(zero[0])}")


def _apply_inverse_r(r: np.ndarray, v: np.ndarray, transposed: bool = False) -> np.ndarray:
    # internal hot path: no wrapper churn, callers guarantee shapes
    return scipy.linalg.solve_triangular(
        r, v, lower=False, trans="T" if transposed else "N", check_finite=False
    )


def normal_equations_oracle(A: DenseMatrix, b: Vector) -> Vector:
    """argmin ||A x - b|| computed directly: QR of A itself, x = R^-1 Q.T b.

    Serves as the independent reference for the iterative and sketched
    solvers, and as the `direct` solve method.
    """
    if b.len != A.rows:
        raise ShapeError(f"A is {A.rows}x{A.cols} but b has length {b.len}")
    if A.rows < A.cols:
        raise ShapeError(f"need rows >= cols, got {A.rows}x{A.cols}")
    f = economy_qr(A)
    return solve_triangular(f.R, Vector(f.Q.data.T @ b.data))


def spectral_condition_number(M: DenseMatrix) -> float:
    """sigma_max / sigma_min from a full singular value computation.

    Test-path helper, sized for at most a few thousand columns.  Returns
    math.inf when sigma_min underflows to zero.
    """
    if M.rows < M.cols:
        raise ShapeError(f"need rows >= cols, got {M.rows}x{M.cols}")
    s = np.linalg.svd(M.data, compute_uv=False)
    smin = float(s[-1])
    if smin == 0.0:
        return math.inf
    return float(s[0]) / smin
