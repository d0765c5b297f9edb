"""Least-squares solution paths: baseline LSQR, sketch-and-apply,
sketch-and-precondition, and a direct QR reference, behind one dispatcher.

Method names used throughout ("lsqr", "saa", "sap", "direct") are the
user-facing identifiers of the CLI and benchmark schema.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import NumericalBreakdownError, ShapeError, SingularFactorError, SpecError
from .linalg import (
    DenseMatrix,
    Matrix,
    SparseMatrix,
    Vector,
    _apply_inverse_r,
    _check_diagonal,
    economy_qr,
    normal_equations_oracle,
)
from .rng import derive_seed
from .sketch import (
    DEFAULT_KIND,
    SketchSpec,
    apply_to_matrix,
    apply_to_vector,
    build_sketch,
    default_embed_dim,
)

METHODS = ("lsqr", "saa", "sap", "direct")

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class LeastSquaresProblem:
    """min_x ||A x - b||, optionally carrying the generator's ground truth."""

    A: Matrix
    b: Vector
    x_star: Vector | None = None
    beta: float | None = None

    def __post_init__(self) -> None:
        if self.b.len != self.A.rows:
            raise ShapeError(f"A is {self.A.rows}x{self.A.cols} but b has length {self.b.len}")
        if self.x_star is not None and self.x_star.len != self.A.cols:
            raise ShapeError(
                f"x_star has length {self.x_star.len}, expected {self.A.cols}"
            )
        if self.beta is not None and not (self.beta >= 0 and math.isfinite(self.beta)):
            raise SpecError(f"beta must be finite and >= 0, got {self.beta}")


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances and sizing knobs shared by all iterative/sketched paths.

    max_iter defaults to 4n when left unset.  d_factor controls the
    embedding dimension d = ceil(d_factor * n), clamped to [n, m].
    warm_start applies to sketch-and-precondition only.
    """

    atol: float = 1e-10
    btol: float = 1e-10
    max_iter: int | None = None
    d_factor: float = 4.0
    warm_start: bool = True

    def __post_init__(self) -> None:
        if not (self.atol > 0 and self.btol > 0):
            raise SpecError("tolerances must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise SpecError("max_iter must be >= 1")
        if self.d_factor < 1:
            raise SpecError("d_factor must be >= 1")

    def resolve_max_iter(self, n: int) -> int:
        return 4 * n if self.max_iter is None else self.max_iter


@dataclass(frozen=True)
class SolveResult:
    x: Vector
    method: str
    sketch: str | None
    d: int | None
    iterations: int
    residual_norm: float
    termination: str
    wall_time_s: float


def _residual_norm(A: Matrix, b: Vector, x: np.ndarray) -> float:
    if isinstance(A, SparseMatrix):
        r = A.to_scipy() @ x - b.data
    else:
        r = A.data @ x - b.data
    return float(np.linalg.norm(r))


def lsqr(
    A: Matrix,
    b: Vector,
    opts: SolverOptions | None = None,
    precond_R: DenseMatrix | None = None,
    callback: Callable[[int, np.ndarray, float], None] | None = None,
) -> SolveResult:
    """Golub-Kahan bidiagonalization least squares (Paige & Saunders).

    Stops when the least-squares rule ||A.T r|| / (||A||_est ||r||) <= atol
    or the consistent-system rule ||r||/||b|| <= btol + atol ||A|| ||x||/||b||
    fires, or at max_iter.  The ||A|| estimate accumulates from the
    bidiagonalization coefficients.

    With ``precond_R`` the iteration runs on the operator y -> A R^-1 y and
    the returned solution is x = R^-1 y.  ``callback(itn, iterate, rnorm)``
    is invoked once per iteration with the current iterate (the
    preconditioned variable y when a preconditioner is in use) and the
    recurrence estimate of the residual norm, which is nonincreasing.
    """
    if b.len != A.rows:
        raise ShapeError(f"A is {A.rows}x{A.cols} but b has length {b.len}")
    opts = opts or SolverOptions()
    n = A.cols
    max_iter = opts.resolve_max_iter(n)

    r_arr = None
    if precond_R is not None:
        if precond_R.rows != precond_R.cols or precond_R.cols != n:
            raise ShapeError(
                f"preconditioner must be {n}x{n}, got {precond_R.rows}x{precond_R.cols}"
            )
        if np.any(np.tril(precond_R.data, -1) != 0.0):
            raise ShapeError("preconditioner must be upper triangular")
        _check_diagonal(precond_R.data)
        r_arr = precond_R.data

    a_op = A.to_scipy() if isinstance(A, SparseMatrix) else A.data

    if r_arr is None:
        mv = lambda v: a_op @ v
        rmv = lambda u: a_op.T @ u
    else:
        mv = lambda v: a_op @ _apply_inverse_r(r_arr, v)
        rmv = lambda u: _apply_inverse_r(r_arr, a_op.T @ u, transposed=True)

    t0 = time.perf_counter()
    x = np.zeros(n)
    u = b.data.copy()
    beta = float(np.linalg.norm(u))
    alfa = 0.0
    v = np.zeros(n)
    if beta > 0:
        u /= beta
        v = rmv(u)
        alfa = float(np.linalg.norm(v))
    if alfa > 0:
        v /= alfa
    w = v.copy()

    itn = 0
    istop = 0
    anorm = 0.0
    rhobar = alfa
    phibar = beta
    bnorm = beta
    rnorm = beta

    if alfa * beta == 0.0:
        # b (or A.T b) is zero: x = 0 is the exact solution
        wall = time.perf_counter() - t0
        xf = x if r_arr is None else _apply_inverse_r(r_arr, x)
        return SolveResult(
            x=Vector(xf),
            method="lsqr",
            sketch=None,
            d=None,
            iterations=0,
            residual_norm=_residual_norm(A, b, xf),
            termination="atol_btol",
            wall_time_s=wall,
        )

    while itn < max_iter:
        itn += 1
        u = mv(v) - alfa * u
        beta = float(np.linalg.norm(u))
        if beta > 0:
            u /= beta
            anorm = math.sqrt(anorm**2 + alfa**2 + beta**2)
            v = rmv(u) - beta * v
            alfa = float(np.linalg.norm(v))
            if alfa > 0:
                v /= alfa
        if not (math.isfinite(alfa) and math.isfinite(beta)):
            raise NumericalBreakdownError(
                f"non-finite bidiagonalization coefficient at iteration {itn}"
            )

        # rotation eliminating the subdiagonal of the lower bidiagonal matrix
        cs, sn, rho = _sym_ortho(rhobar, beta)
        theta = sn * alfa
        rhobar = -cs * alfa
        phi = cs * phibar
        phibar = sn * phibar

        x += (phi / rho) * w
        w = v + (-theta / rho) * w

        rnorm = phibar
        arnorm = alfa * abs(sn * phi)
        xnorm = float(np.linalg.norm(x))
        if not math.isfinite(rnorm):
            raise NumericalBreakdownError(f"non-finite residual estimate at iteration {itn}")
        if callback is not None:
            callback(itn, x, rnorm)

        test1 = rnorm / bnorm
        test2 = arnorm / (anorm * rnorm + _EPS)
        t1 = test1 / (1.0 + anorm * xnorm / bnorm)
        rtol = opts.btol + opts.atol * anorm * xnorm / bnorm
        if itn >= max_iter:
            istop = 7
        if 1.0 + test2 <= 1.0:
            istop = 5
        if 1.0 + t1 <= 1.0:
            istop = 4
        if test2 <= opts.atol:
            istop = 2
        if test1 <= rtol:
            istop = 1
        if istop != 0:
            break

    wall = time.perf_counter() - t0
    xf = x if r_arr is None else _apply_inverse_r(r_arr, x)
    return SolveResult(
        x=Vector(xf),
        method="lsqr",
        sketch=None,
        d=None,
        iterations=itn,
        residual_norm=_residual_norm(A, b, xf),
        termination="max_iter" if istop == 7 else "atol_btol",
        wall_time_s=wall,
    )


def _sym_ortho(a: float, b: float) -> tuple[float, float, float]:
    """Stable Givens rotation (c, s, r) with c*a + s*b = r, -s*a + c*b = 0."""
    if b == 0.0:
        return math.copysign(1.0, a) if a != 0 else 1.0, 0.0, abs(a)
    if a == 0.0:
        return 0.0, math.copysign(1.0, b), abs(b)
    if abs(b) > abs(a):
        tau = a / b
        s = math.copysign(1.0, b) / math.sqrt(1.0 + tau * tau)
        return s * tau, s, b / s
    tau = b / a
    c = math.copysign(1.0, a) / math.sqrt(1.0 + tau * tau)
    return c, c * tau, a / c


def _operator_spec(spec: SketchSpec | None, method: str, m: int, n: int, d_factor: float) -> SketchSpec:
    """Final sketch spec for a solver path: d from d_factor, seed mixed with
    the method tag so saa and sap never share an operator."""
    if spec is None:
        spec = SketchSpec(kind=DEFAULT_KIND, embed_dim=1)
    d = default_embed_dim(m, n, d_factor)
    return replace(spec, embed_dim=d, seed=derive_seed(spec.seed, method))


def _sketch_qr(A: Matrix, b: Vector, op_spec: SketchSpec):
    op = build_sketch(op_spec, A.rows)
    sa = apply_to_matrix(op, A)
    sb = apply_to_vector(op, b)
    try:
        factors = economy_qr(sa)
    except SingularFactorError as exc:
        raise SingularFactorError(
            f"sketched matrix ({op_spec.kind}, d={op.target_dim}) is rank deficient: {exc}; "
            f"a larger embedding dimension may help"
        ) from exc
    return op, sa, sb, factors


def sketch_and_apply(
    problem: LeastSquaresProblem,
    spec: SketchSpec | None = None,
    opts: SolverOptions | None = None,
) -> SolveResult:
    """Solve the reduced problem min ||S A x - S b|| by QR, one shot."""
    A, b = problem.A, problem.b
    if A.rows < A.cols:
        raise ShapeError(f"need rows >= cols, got {A.rows}x{A.cols}")
    opts = opts or SolverOptions()
    op_spec = _operator_spec(spec, "saa", A.rows, A.cols, opts.d_factor)
    t0 = time.perf_counter()
    op, _, sb, factors = _sketch_qr(A, b, op_spec)
    x = _apply_inverse_r(factors.R.data, factors.Q.data.T @ sb.data)
    wall = time.perf_counter() - t0
    return SolveResult(
        x=Vector(x),
        method="saa",
        sketch=op_spec.kind,
        d=op.target_dim,
        iterations=0,
        residual_norm=_residual_norm(A, b, x),
        termination="direct",
        wall_time_s=wall,
    )


def sketch_and_precondition(
    problem: LeastSquaresProblem,
    spec: SketchSpec | None = None,
    opts: SolverOptions | None = None,
) -> SolveResult:
    """LSQR on the original problem, right-preconditioned by R from QR(S A).

    With warm_start the sketched solution R^-1 Q.T S b seeds the iteration:
    LSQR then solves the shifted problem min ||A R^-1 y - (b - A x0)||.
    """
    A, b = problem.A, problem.b
    if A.rows < A.cols:
        raise ShapeError(f"need rows >= cols, got {A.rows}x{A.cols}")
    opts = opts or SolverOptions()
    op_spec = _operator_spec(spec, "sap", A.rows, A.cols, opts.d_factor)
    t0 = time.perf_counter()
    op, _, sb, factors = _sketch_qr(A, b, op_spec)
    if opts.warm_start:
        x0 = _apply_inverse_r(factors.R.data, factors.Q.data.T @ sb.data)
        if isinstance(A, SparseMatrix):
            r0 = b.data - A.to_scipy() @ x0
        else:
            r0 = b.data - A.data @ x0
        inner = lsqr(A, Vector(r0), opts, precond_R=factors.R)
        x = x0 + inner.x.data
    else:
        inner = lsqr(A, b, opts, precond_R=factors.R)
        x = inner.x.data
    wall = time.perf_counter() - t0
    return SolveResult(
        x=Vector(x),
        method="sap",
        sketch=op_spec.kind,
        d=op.target_dim,
        iterations=inner.iterations,
        residual_norm=_residual_norm(A, b, x),
        termination=inner.termination,
        wall_time_s=wall,
    )


def solve(
    problem: LeastSquaresProblem,
    method: str = "lsqr",
    spec: SketchSpec | None = None,
    opts: SolverOptions | None = None,
) -> SolveResult:
    """Dispatch to one of the methods; wall_time_s covers the full path
    including sketch construction and application."""
    if method not in METHODS:
        raise SpecError(f"unknown method {method!r}, expected one of {METHODS}")
    t0 = time.perf_counter()
    if method == "lsqr":
        result = lsqr(problem.A, problem.b, opts)
    elif method == "saa":
        result = sketch_and_apply(problem, spec, opts)
    elif method == "sap":
        result = sketch_and_precondition(problem, spec, opts)
    else:
        if isinstance(problem.A, SparseMatrix):
            a_dense = problem.A.densify()
        else:
            a_dense = problem.A
        x = normal_equations_oracle(a_dense, problem.b)
        result = SolveResult(
            x=x,
            method="direct",
            sketch=None,
            d=None,
            iterations=0,
            residual_norm=_residual_norm(problem.A, problem.b, x.data),
            termination="direct",
            wall_time_s=0.0,
        )
    wall = time.perf_counter() - t0
    return replace(result, wall_time_s=wall)
