"""setlaw: exact convex-polytope calculus plus a random-set averaging lab.

The geometry layer provides V-polytopes with Minkowski algebra, support
functions, and exact Hausdorff distances solved as convex programs.  On
top of it sit support-function views of bodies, the combinatorial
families behind the averaging counterexample, finitely-supported random
sets with Bochner-style expectations, and a reproducible experiment
harness with a CLI.
"""

from ._kernels import USING_NUMBA, backend_name
from .embedding import (
    CombinationView,
    DirectionSet,
    SupportView,
    canonical_directions,
    embed,
    grid_directions,
    isometry_gap,
    linearity_residual,
    random_directions,
    sampled_distance,
)
from .families import (
    AuerbachSystem,
    BlockFamily,
    SubsetFamily,
    auerbach_canonical,
    certificate_distance,
    coefficient_lower_bound,
    combinatorial_family,
    counterexample_family,
    basis_hull_family,
    witness_element,
)
from .geometry import (
    DimensionMismatchError,
    Polytope,
    SolverError,
    Space,
    contains_point,
    diameter,
    directed_hausdorff,
    dist_point_to_polytope,
    hausdorff,
    minkowski_sum,
    prune,
    scale,
    set_norm,
    support,
    width,
)
from .randomsets import (
    BernoulliScaled,
    FdExpectationDemo,
    FiniteProbSpace,
    GateError,
    HypothesisError,
    OnePointResult,
    Process,
    ProjectorPair,
    SimpleRandomSet,
    SingletonNoise,
    TwoSetMix,
    expectation,
    expectation_support_oracle,
    one_point_check,
    project,
    sample,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    TrajectoryConfig,
    TrajectoryResult,
    decay_fit,
    experiment_counterexample,
    experiment_fd_slln,
    experiment_intermediate_fd,
    experiment_reduced,
    fit_loglog,
    run_trajectory,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
