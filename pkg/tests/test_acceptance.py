"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`.  The speedup gate at the
end generates matrices up to 200000 x 500 and runs the iteration-capped
baseline to completion; expect several minutes for that test alone.
"""

import time

import numpy as np
import scipy.linalg

from sketchls import (
    BenchConfig,
    DenseMatrix,
    LeastSquaresProblem,
    ProblemSpec,
    SketchSpec,
    SolverOptions,
    Vector,
    apply_to_matrix,
    build_sketch,
    economy_qr,
    forward_error,
    fwht_inplace,
    generate_problem,
    lsqr,
    materialize,
    normal_equations_oracle,
    parse_csv,
    run_benchmark,
    sketch_and_apply,
    sketch_and_precondition,
    solve,
    spectral_condition_number,
    write_csv,
)
from sketchls.linalg import _apply_inverse_r
from sketchls.rng import derive_seed, stream


def _report(name: str, passed: bool, detail: str) -> None:
    print(f"[ACCEPTANCE] {name}: {'PASS' if passed else 'FAIL'} ({detail})")


def test_oracle_equivalence():
    t0 = time.perf_counter()
    worst = {"lsqr": 0.0, "saa": 0.0, "sap": 0.0, "direct": 0.0}
    for seed in range(20):
        rng = stream(derive_seed(100, "oracle-eq", seed))
        a = DenseMatrix(rng.standard_normal((100, 20)))
        b = Vector(rng.standard_normal(100))
        problem = LeastSquaresProblem(A=a, b=b)
        ref = normal_equations_oracle(a, b).data
        ref_norm = np.linalg.norm(ref)
        runs = {
            "lsqr": lsqr(a, b).x.data,
            "saa": sketch_and_apply(problem, SketchSpec("identity", 1, seed=seed)).x.data,
            "sap": sketch_and_precondition(
                problem, SketchSpec("countsketch", 1, seed=seed)
            ).x.data,
            "direct": solve(problem, "direct").x.data,
        }
        for name, x in runs.items():
            worst[name] = max(worst[name], np.linalg.norm(x - ref) / ref_norm)
    elapsed = time.perf_counter() - t0
    passed = max(worst.values()) <= 1e-8 and elapsed < 5.0
    _report(
        "oracle equivalence",
        passed,
        f"worst rel fwd err {max(worst.values()):.2e} <= 1e-8, {elapsed:.2f}s < 5s",
    )
    assert max(worst.values()) <= 1e-8, worst
    assert elapsed < 5.0


def test_fwht_correctness():
    t0 = time.perf_counter()
    fixed_ok = (
        np.array_equal(fwht_inplace(np.array([1.0, 0, 0, 0])), [1, 1, 1, 1])
        and np.array_equal(fwht_inplace(np.array([1.0, 1, 1, 1])), [4, 0, 0, 0])
        and np.array_equal(fwht_inplace(np.array([1.0, 2, 3, 4])), [10, -2, -4, 0])
    )
    worst = 0.0
    for exponent in range(1, 11):
        n = 2**exponent
        x = stream(derive_seed(200, "fwht", n)).standard_normal(n)
        y = x.copy()
        fwht_inplace(y)
        fwht_inplace(y)
        worst = max(worst, np.linalg.norm(y - n * x) / (n * np.linalg.norm(x)))
    elapsed = time.perf_counter() - t0
    passed = fixed_ok and worst <= 1e-12 and elapsed < 1.0
    _report(
        "fwht correctness",
        passed,
        f"fixed vectors exact={fixed_ok}, involution err {worst:.2e} <= 1e-12, "
        f"{elapsed:.2f}s < 1s",
    )
    assert fixed_ok
    assert worst <= 1e-12
    assert elapsed < 1.0


def test_sketch_structure():
    t0 = time.perf_counter()
    m, d, n = 64, 16, 5
    cs = materialize(build_sketch(SketchSpec("countsketch", d, seed=31), m)).data
    cs_ok = np.count_nonzero(cs) == m and all(
        np.abs(cs[cs[:, j] != 0, j]) .tolist() == [1.0] for j in range(m)
    )
    ss = materialize(build_sketch(SketchSpec("sparsesign", d, seed=32, sparsity=8), m)).data
    ss_ok = True
    for j in range(m):
        nz = np.flatnonzero(ss[:, j])
        ss_ok &= nz.size == 8 and np.allclose(np.abs(ss[nz, j]), 1 / np.sqrt(8), rtol=1e-15)
    worst = 0.0
    a = stream(derive_seed(300, "structure")).standard_normal((m, n))
    for kind in ("gaussian", "srht", "countsketch", "sparsesign"):
        op = build_sketch(SketchSpec(kind, d, seed=33), m)
        got = apply_to_matrix(op, DenseMatrix(a)).data
        want = materialize(op).data @ a
        worst = max(worst, np.linalg.norm(got - want) / np.linalg.norm(want))
    elapsed = time.perf_counter() - t0
    passed = cs_ok and ss_ok and worst <= 1e-12 and elapsed < 5.0
    _report(
        "sketch structure",
        passed,
        f"countsketch ok={cs_ok}, sparsesign ok={ss_ok}, apply-vs-materialize "
        f"{worst:.2e} <= 1e-12, {elapsed:.2f}s < 5s",
    )
    assert cs_ok and ss_ok
    assert worst <= 1e-12
    assert elapsed < 5.0


def test_subspace_embedding():
    t0 = time.perf_counter()
    m, n = 4000, 50
    basis, _ = np.linalg.qr(stream(derive_seed(400, "embed-basis")).standard_normal((m, n)))
    op = build_sketch(SketchSpec("countsketch", 4 * n, seed=41), m)
    sa = apply_to_matrix(op, DenseMatrix(basis)).data
    rng = stream(derive_seed(400, "embed-probe"))
    good = 0
    for _ in range(100):
        x = rng.standard_normal(n)
        ratio = np.linalg.norm(sa @ x) / np.linalg.norm(basis @ x)
        good += 0.5 <= ratio <= 1.5
    elapsed = time.perf_counter() - t0
    passed = good >= 99 and elapsed < 10.0
    _report("subspace embedding", passed, f"{good}/100 in [0.5, 1.5] >= 99, {elapsed:.2f}s < 10s")
    assert good >= 99
    assert elapsed < 10.0


def test_preconditioner_conditioning():
    t0 = time.perf_counter()
    worst = 0.0
    details = []
    for kappa in (1e2, 1e6, 1e10):
        problem = generate_problem(
            ProblemSpec(m=2000, n=100, kappa=kappa, beta=1e-10, seed=51)
        )
        for kind in ("gaussian", "srht", "countsketch", "sparsesign"):
            op = build_sketch(SketchSpec(kind, 400, seed=52), 2000)
            factors = economy_qr(apply_to_matrix(op, problem.A))
            preconditioned = _apply_inverse_r(
                factors.R.data, problem.A.data.T, transposed=True
            ).T
            cond = spectral_condition_number(DenseMatrix(preconditioned))
            worst = max(worst, cond)
            details.append(f"{kind}@{kappa:.0e}={cond:.2f}")
    elapsed = time.perf_counter() - t0
    passed = worst <= 10.0 and elapsed < 60.0
    _report(
        "preconditioner conditioning",
        passed,
        f"max cond(A R^-1) {worst:.2f} <= 10, {elapsed:.1f}s < 60s",
    )
    assert worst <= 10.0, details
    assert elapsed < 60.0


def test_illconditioned_accuracy():
    t0 = time.perf_counter()
    beta = 1e-10
    problem = generate_problem(ProblemSpec(m=20000, n=100, kappa=1e8, beta=beta, seed=61))
    spec = SketchSpec("countsketch", 1, seed=62)
    sap = sketch_and_precondition(problem, spec)
    sap_fwd = forward_error(sap.x, problem.x_star)
    saa = sketch_and_apply(problem, spec)
    base = lsqr(problem.A, problem.b, SolverOptions(max_iter=sap.iterations))
    base_fwd = forward_error(base.x, problem.x_star)
    elapsed = time.perf_counter() - t0
    passed = (
        sap_fwd <= 1e-6
        and saa.residual_norm <= 2 * beta
        and base_fwd > sap_fwd
        and elapsed < 60.0
    )
    _report(
        "ill-conditioned accuracy",
        passed,
        f"sap fwd {sap_fwd:.2e} <= 1e-6, saa resid {saa.residual_norm:.2e} <= {2 * beta:.1e}, "
        f"lsqr@{sap.iterations}it fwd {base_fwd:.2e} > sap fwd, {elapsed:.1f}s < 60s",
    )
    assert sap_fwd <= 1e-6
    assert saa.residual_norm <= 2 * beta
    assert base_fwd > sap_fwd
    assert elapsed < 60.0


def test_generator_fidelity():
    t0 = time.perf_counter()
    # the criterion pins kappa, m, n; beta = 1e-3 keeps the residual-norm
    # identity above the float64 representation floor of b
    beta = 1e-3
    problem = generate_problem(ProblemSpec(m=500, n=50, kappa=1e6, beta=beta, seed=71))
    cond = spectral_condition_number(problem.A)
    cond_ok = abs(cond - 1e6) <= 0.01 * 1e6
    r = problem.b.data - problem.A.data @ problem.x_star.data
    resid_err = abs(np.linalg.norm(r) - beta)
    sigma_max = 1.0  # spectrum is normalized to start at 1
    orth = np.linalg.norm(problem.A.data.T @ r)
    elapsed = time.perf_counter() - t0
    passed = (
        cond_ok and resid_err <= 1e-12 * beta and orth <= 1e-12 * beta * sigma_max
        and elapsed < 10.0
    )
    _report(
        "generator fidelity",
        passed,
        f"cond {cond:.4e} within 1% of 1e6, |resid-beta| {resid_err:.2e} <= {1e-12 * beta:.0e}, "
        f"||A.T r|| {orth:.2e} <= {1e-12 * beta:.0e}, {elapsed:.2f}s < 10s",
    )
    assert cond_ok
    assert resid_err <= 1e-12 * beta
    assert orth <= 1e-12 * beta * sigma_max
    assert elapsed < 10.0


def test_determinism_and_csv(tmp_path):
    config = BenchConfig(
        m_list=(100, 150),
        n=10,
        kappa=1e3,
        beta=1e-5,
        methods=("lsqr", "saa", "sap"),
        sketches=("countsketch",),
        repeats=2,
        seed=81,
    )
    first = run_benchmark(config)
    second = run_benchmark(config)
    strip = lambda recs: [
        (r.method, r.sketch, r.m, r.n, r.d, r.kappa, r.beta, r.trial,
         r.forward_error, r.residual_error, r.iterations, r.termination)
        for r in recs
    ]
    identical = strip(first) == strip(second)
    path_a, path_b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    write_csv(first, path_a)
    write_csv(second, path_b)
    parsed_identical = strip(parse_csv(path_a)) == strip(parse_csv(path_b))
    round_trip = parse_csv(path_a) == first
    passed = identical and parsed_identical and round_trip
    _report(
        "determinism & csv",
        passed,
        f"records identical modulo wall_time_s={identical}, "
        f"csv round-trip bit-exact={round_trip}",
    )
    assert identical
    assert parsed_identical
    assert round_trip


class _Matched(Exception):
    pass


def _baseline_time_to_match(problem, target_fwd: float, n: int) -> tuple[float, bool]:
    """Wall time for unpreconditioned LSQR to first reach the target forward
    error, or to its 4n iteration cap if it never does.  Tolerances are set
    tiny so only the match or the cap can stop it."""
    xs = problem.x_star.data
    xs_norm = np.linalg.norm(xs)
    t0 = time.perf_counter()
    holder = {"t": None}

    def monitor(itn, x, rnorm):
        if np.linalg.norm(x - xs) <= target_fwd * xs_norm:
            holder["t"] = time.perf_counter() - t0
            raise _Matched

    opts = SolverOptions(atol=1e-30, btol=1e-30, max_iter=4 * n)
    try:
        lsqr(problem.A, problem.b, opts, callback=monitor)
    except _Matched:
        return holder["t"], True
    return time.perf_counter() - t0, False


def test_speedup_desk_scale():
    t_start = time.perf_counter()
    n, kappa, beta = 500, 1e8, 1e-10
    m_list = (50_000, 100_000, 200_000)
    ratios = []
    for m in m_list:
        problem = generate_problem(
            ProblemSpec(m=m, n=n, kappa=kappa, beta=beta, seed=derive_seed(91, m))
        )
        spec = SketchSpec("countsketch", 1, seed=derive_seed(92, m))
        sap_times = []
        sap_fwd = None
        for _ in range(3):
            res = sketch_and_precondition(problem, spec)
            sap_times.append(res.wall_time_s)
            sap_fwd = forward_error(res.x, problem.x_star)
        sap_time = sorted(sap_times)[1]
        base_time, matched = _baseline_time_to_match(problem, sap_fwd, n)
        ratios.append(base_time / sap_time)
        print(
            f"[speedup] m={m}: sap {sap_time:.2f}s (fwd {sap_fwd:.1e}), "
            f"lsqr {'matched in' if matched else 'capped at 4n after'} {base_time:.1f}s, "
            f"ratio {ratios[-1]:.1f}x"
        )
        del problem
    r1, r2, r3 = ratios
    increases = sum([r1 < r2, r2 < r3, r1 < r3])
    elapsed = time.perf_counter() - t_start
    passed = r3 >= 2.0 and increases >= 2 and elapsed < 600.0
    _report(
        "speedup desk scale",
        passed,
        f"ratio@2e5 {r3:.1f}x >= 2x, widening trend {increases}/3 pairwise increases >= 2, "
        f"{elapsed:.0f}s < 600s",
    )
    assert r3 >= 2.0
    assert increases >= 2
    assert elapsed < 600.0
