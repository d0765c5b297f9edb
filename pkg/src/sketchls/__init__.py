"""Randomized sketching for large overdetermined least-squares problems."""

from .errors import (
    CapacityError,
    InfeasibleResidualError,
    NumericalBreakdownError,
    ShapeError,
    SingularFactorError,
    SketchlsError,
    SpecError,
    UndefinedMetricError,
)
from .linalg import (
    DenseMatrix,
    QRFactors,
    SparseMatrix,
    Vector,
    economy_qr,
    matvec,
    matvec_transpose,
    normal_equations_oracle,
    solve_triangular,
    spectral_condition_number,
)
from .mmio import read_matrix, read_vector, write_matrix, write_vector
from .probgen import ProblemSpec, generate_problem, read_problem_dir, write_problem_dir
from .rng import derive_seed, splitmix64, stream
from .sketch import (
    DEFAULT_KIND,
    KINDS,
    SketchOperator,
    SketchSpec,
    apply_to_matrix,
    apply_to_vector,
    build_sketch,
    default_embed_dim,
    fwht_inplace,
    materialize,
)
from .solvers import (
    LeastSquaresProblem,
    METHODS,
    SolveResult,
    SolverOptions,
    lsqr,
    sketch_and_apply,
    sketch_and_precondition,
    solve,
)
from .bench import (
    BenchConfig,
    BenchRecord,
    CSV_HEADER,
    forward_error,
    median_series,
    parse_csv,
    render_plots,
    residual_error,
    run_benchmark,
    write_csv,
    write_meta,
)

__version__ = "0.1.0"
