"""Synthetic ill-conditioned least-squares instances with known answers.

Construction: A = U diag(sigma) V.T with U, V orthonormal factors of
standard-normal matrices and sigma geometrically spaced from 1 down to
1/kappa, so the condition number is exact by design.  The ground truth
x_star is a normalized standard-normal vector and b = A x_star + beta * u
with u a unit vector orthogonal to range(A), so x_star is the exact
minimizer and beta the exact optimal residual norm.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleResidualError, SpecError
from .linalg import DenseMatrix, Vector
from .mmio import read_matrix, read_vector, write_matrix, write_vector
from .rng import derive_seed, stream
from .solvers import LeastSquaresProblem


@dataclass(frozen=True)
class ProblemSpec:
    m: int
    n: int
    kappa: float = 1e10
    beta: float = 1e-10
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.m >= self.n >= 1:
            raise SpecError(f"need m >= n >= 1, got m={self.m}, n={self.n}")
        if not (math.isfinite(self.kappa) and self.kappa >= 1):
            raise SpecError(f"kappa must be >= 1, got {self.kappa}")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise SpecError(f"beta must be >= 0, got {self.beta}")


def generate_problem(spec: ProblemSpec) -> LeastSquaresProblem:
    """Deterministic instance for ``spec``; same spec, same bits."""
    m, n = spec.m, spec.n
    if spec.beta > 0 and m == n:
        raise InfeasibleResidualError(
            "a nonzero optimal residual needs m >= n+1 so a direction "
            "orthogonal to range(A) exists"
        )
    rng = stream(derive_seed(spec.seed, "probgen"))
    g = rng.standard_normal((m, n))
    u_basis, _ = np.linalg.qr(g, mode="reduced")
    del g
    v_basis, _ = np.linalg.qr(rng.standard_normal((n, n)), mode="reduced")
    if n == 1:
        sigma = np.ones(1)
    else:
        sigma = spec.kappa ** (-np.arange(n) / (n - 1))
    # column-major so b below is bitwise-reproducible from the stored carrier
    a_arr = np.asfortranarray((u_basis * sigma) @ v_basis.T)

    x_star = rng.standard_normal(n)
    x_star /= np.linalg.norm(x_star)

    b_arr = a_arr @ x_star
    if spec.beta > 0:
        resid = rng.standard_normal(m)
        # re-orthogonalize twice so cancellation leaves ||U.T u|| ~ 1e-15
        for _ in range(2):
            resid -= u_basis @ (u_basis.T @ resid)
        resid /= np.linalg.norm(resid)
        b_arr = b_arr + spec.beta * resid

    return LeastSquaresProblem(
        A=DenseMatrix(a_arr),
        b=Vector(b_arr),
        x_star=Vector(x_star),
        beta=spec.beta,
    )


def write_problem_dir(spec: ProblemSpec, problem: LeastSquaresProblem, out_dir: str) -> None:
    """Export as A.mtx, b.mtx, xstar.mtx plus a key=value meta.txt."""
    os.makedirs(out_dir, exist_ok=True)
    write_matrix(os.path.join(out_dir, "A.mtx"), problem.A)
    write_vector(os.path.join(out_dir, "b.mtx"), problem.b)
    write_vector(os.path.join(out_dir, "xstar.mtx"), problem.x_star)
    meta = {
        "m": spec.m,
        "n": spec.n,
        "kappa": repr(float(spec.kappa)),
        "beta": repr(float(spec.beta)),
        "seed": spec.seed,
    }
    with open(os.path.join(out_dir, "meta.txt"), "w") as fh:
        for key, val in meta.items():
            fh.write(f"{key}={val}\n")


def read_problem_dir(path: str) -> tuple[LeastSquaresProblem, dict[str, str]]:
    """Load a directory written by write_problem_dir."""
    a_mat = read_matrix(os.path.join(path, "A.mtx"))
    b_vec = read_vector(os.path.join(path, "b.mtx"))
    x_vec = read_vector(os.path.join(path, "xstar.mtx"))
    meta: dict[str, str] = {}
    with open(os.path.join(path, "meta.txt")) as fh:
        for line in fh:
            line = line.strip()
            if line:
                key, _, val = line.partition("=")
                meta[key] = val
    beta = float(meta["beta"]) if "beta" in meta else None
    return LeastSquaresProblem(A=a_mat, b=b_vec, x_star=x_vec, beta=beta), meta
