"""Mean-preserving coresets for weighted point sets.

Deterministic near-linear constructions of sparse reweightings that
preserve the weighted mean, with applications to 1-mean cost, kernel
density estimates, and low-rank projection costs, plus sampling
baselines, a streaming wrapper, and a benchmark harness.
"""

from .apps import (
    DimSummary,
    GaussianRandomFeatures,
    IdentityFeatures,
    dim_coreset,
    kde_coreset,
    kernel_density,
    mean_embedding,
    one_mean_certificates,
    one_mean_coreset,
    one_mean_cost,
    subspace_cost,
)
from .baselines import sensitivity_sample_sum, sensitivity_sample_svd, uniform_sample
from .core import (
    LiftedSet,
    NormalizationTransform,
    NormalizedWeightedSet,
    SparseWeights,
    WeightedSet,
    lift,
    normalize,
    summarization_error,
    unlift_weights,
    weighted_mean,
    weighted_variance,
)
from .coresets import (
    ProbSummary,
    coreset,
    coreset_rows,
    fast_coreset,
    partition,
    prob_coreset,
)
from .errors import (
    AllZeroPoints,
    ConvergenceFailure,
    CoresetError,
    DataError,
    DegenerateVariance,
    EmptyStream,
    ExactRankCase,
    ParseError,
    RaggedRows,
    RankTooLow,
    SampleExceedsInput,
    UnitBallViolation,
)
from .frankwolfe import (
    FwProblem,
    FwState,
    fw_gradient,
    fw_init,
    fw_iterate,
    fw_line_search,
    fw_solve,
    iterations_for_error,
)
from .linalg import SvdFactors, frobenius_norm, random_orthogonal, svd
from .streaming import StreamSummary

__version__ = "0.1.0"
