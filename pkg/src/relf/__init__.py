"""relf: robust ensemble-loss fitting for linear regression.

Fits ``y ~ X w`` by minimizing a sum of M-estimator losses drawn from a
small catalog (welsch, l1l2, huber, fair, logcosh) via alternating
half-quadratic minimization, returning both the regression weights and a
simplex of per-loss ensemble weights that reports which losses matched the
noise.  See :mod:`relf.solver` for the algorithm and :mod:`relf.evaluation`
for the benchmark protocol.
"""

from .exceptions import (
    DataError,
    DataIOError,
    DegenerateTraceWarning,
    DimensionMismatchError,
    DoubleInterceptError,
    DuplicateLossError,
    EmptyEnsembleError,
    EmptyFileError,
    EmptyInputError,
    EnsembleError,
    FactorizationError,
    FractionRangeError,
    NonFiniteObjectiveError,
    NonPositiveIndexError,
    NonPositiveScaleError,
    ParseError,
    RaggedRowsError,
    RelfError,
    TooManyFoldsError,
    UnknownLossError,
    ZeroCleanBaselineError,
)
from .losses import (
    CONVEX_KINDS,
    DEFAULT_ENSEMBLE_TEXT,
    KINDS,
    EnsembleSpec,
    LossSpec,
    delta,
    format_ensemble,
    parse_ensemble,
    phi,
    validate_ensemble,
    validate_loss,
)
from .linalg import (
    accumulate_weighted_outer,
    axpy,
    dot,
    scale,
    solve_spd_with_jitter,
)
from .data import (
    Dataset,
    NoiseConfig,
    ScalerState,
    add_intercept,
    apply_scaler,
    fit_scaler,
    inject_outliers,
    load_csv,
    load_libsvm,
    save_libsvm,
    synth_line,
)
from .solver import (
    RelfModel,
    SolverConfig,
    SolverTrace,
    decrease_ratio,
    fit,
    load_model,
    objective,
    predict,
    residuals,
    save_model,
    update_p,
    update_w,
)
from .evaluation import (
    CvConfig,
    CvResult,
    EvalReport,
    LeastSquaresMethod,
    RelfMethod,
    cross_validate,
    increase_ratio,
    kfold_split,
    mae,
    ols_fit,
    parse_method,
    rmse,
    run_benchmark,
)

__version__ = "0.1.0"
