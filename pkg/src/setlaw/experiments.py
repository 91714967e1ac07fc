"""Experiment harness for set-valued laws of large numbers.

Trajectories track the distance between the running Minkowski average of
draws and the running average of expectations, in one of three modes:

* ``exact``       -- polytopes are materialized and the Hausdorff
                     distance solved exactly (LP / min-norm-point);
* ``sampled``     -- support functions are compared over the canonical
                     directions plus a configurable extra set (a
                     certified lower bound of the exact distance);
* ``certificate`` -- support functions over canonical directions only.

Draw streams are pure functions of (process, index, seed), so every
experiment is reproducible bit-for-bit regardless of thread count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .embedding import DirectionSet, canonical_directions
from .families import BlockFamily, certificate_distance, counterexample_family, psi_from_int
from .geometry import Polytope, hausdorff, minkowski_sum, prune, scale
from .randomsets import (
    FdExpectationDemo,
    GateError,
    HypothesisError,
    Process,
    derive_seed,
    one_point_check,
)

MODES = ("exact", "certificate", "sampled")
COUNTEREXAMPLE_FLOOR = 1.0 / 16.0


class GeneratorCeilingError(RuntimeError):
    """Exact mode would materialize more generators than the configured cap."""


def geometric_checkpoints(horizon: int) -> tuple[int, ...]:
    """Doubling grid 1, 2, 4, ... capped by and including the horizon."""
    pts = []
    n = 1
    while n < horizon:
        pts.append(n)
        n *= 2
    pts.append(horizon)
    return tuple(pts)


@dataclass(frozen=True)
class TrajectoryConfig:
    process: Process
    horizon: int
    mode: str = "exact"
    checkpoints: tuple[int, ...] | None = None
    directions: DirectionSet | None = None  # extras for sampled mode
    master_seed: int = 0
    trajectory_id: int = 0
    prune_threshold: int = 5000
    exact_gen_ceiling: int = 200_000

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.horizon < 1:
            raise ValueError("horizon must be positive")
        cps = self.checkpoints
        if cps is None:
            cps = geometric_checkpoints(self.horizon)
        cps = tuple(sorted(set(int(c) for c in cps)))
        if cps[0] < 1 or cps[-1] > self.horizon:
            raise ValueError("checkpoints must lie in 1..horizon")
        object.__setattr__(self, "checkpoints", cps)


@dataclass(frozen=True)
class CheckpointRow:
    n: int
    distance: float
    mode: str
    gens_draw: int
    gens_mean: int


@dataclass(frozen=True)
class TrajectoryResult:
    trajectory_id: int
    seed: int
    mode: str
    rows: tuple[CheckpointRow, ...]
    wall_time: float


@dataclass(frozen=True)
class FitResult:
    status: str  # "ok" | "refused"
    slope: float = float("nan")
    intercept: float = float("nan")
    residual: float = float("nan")
    n_points: int = 0


def fit_loglog(ns, distances) -> FitResult:
    """Least-squares slope of log(distance) against log(n).

    Uses only checkpoints with strictly positive distances and refuses
    (with an explicit status) when fewer than three remain.
    """
    ns = np.asarray(ns, dtype=float)
    ds = np.asarray(distances, dtype=float)
    mask = ds > 0.0
    if mask.sum() < 3:
        return FitResult("refused", n_points=int(mask.sum()))
    x = np.log(ns[mask])
    y = np.log(ds[mask])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return FitResult(
        "ok",
        float(slope),
        float(intercept),
        float(np.sqrt(np.mean(resid * resid))),
        int(mask.sum()),
    )


def decay_fit(result: TrajectoryResult) -> FitResult:
    """Decay-rate fit of one trajectory's checkpoint distances."""
    return fit_loglog([r.n for r in result.rows], [r.distance for r in result.rows])


def _checkpoint_polytope(values, counts, prune_threshold, ceiling) -> Polytope:
    """Minkowski sum of count-scaled atom values, pruned to its hull."""
    total = None
    expected = 1
    for value, count in zip(values, counts):
        if count == 0:
            continue
        expected *= value.n_generators
        if expected > ceiling:
            raise GeneratorCeilingError(
                f"materializing the running sum needs > {ceiling} generators"
            )
        term = scale(float(count), value)
        total = term if total is None else minkowski_sum(total, term)
        if total.n_generators > prune_threshold:
            total = prune(total)
    if total is None:
        total = Polytope.origin(values[0].space)
    return prune(total) if total.n_generators > 1 else total


def run_trajectory(cfg: TrajectoryConfig) -> TrajectoryResult:
    """One trajectory of running-average distances at the checkpoints.

    Draw values of the in-scope processes are stationary and finitely
    supported, so the incremental state between checkpoints is one draw
    count per atom; sums are materialized (exact mode) or evaluated
    through support additivity (sampled / certificate modes) only at the
    checkpoints.
    """
    proc = cfg.process
    if not proc.stationary:
        raise ValueError("the trajectory harness requires a stationary process")
    t0 = time.perf_counter()
    seed = derive_seed(cfg.master_seed, cfg.trajectory_id)
    dist = proc.distribution(1)
    values = dist.values
    counts = np.zeros(len(values), dtype=np.int64)
    mean_body = proc.mean(1)

    if cfg.mode == "exact":
        mean_checkpoint = prune(mean_body) if mean_body.n_generators > 1 else mean_body
        dirs = None
        value_supports = None
        mean_supports = None
    else:
        base = canonical_directions(proc.space)
        if cfg.mode == "sampled" and cfg.directions is not None:
            base = base.union(cfg.directions)
        dirs = base.directions
        value_supports = np.stack([geometry.support_many(v, dirs) for v in values])
        mean_supports = geometry.support_many(mean_body, dirs)
        mean_checkpoint = mean_body

    rows = []
    next_cp = 0
    for i in range(1, cfg.horizon + 1):
        counts[proc.draw_atom(i, seed)] += 1
        if i == cfg.checkpoints[next_cp]:
            next_cp += 1
            if cfg.mode == "exact":
                avg = scale(
                    1.0 / i,
                    _checkpoint_polytope(
                        values, counts, cfg.prune_threshold, cfg.exact_gen_ceiling
                    ),
                )
                d = hausdorff(avg, mean_checkpoint)
                rows.append(
                    CheckpointRow(i, d, cfg.mode, avg.n_generators, mean_checkpoint.n_generators)
                )
            else:
                draw_support = counts.astype(float) @ value_supports
                d = float(np.abs(draw_support / i - mean_supports).max())
                # nothing is materialized in the support-evaluation modes
                rows.append(CheckpointRow(i, d, cfg.mode, 0, 0))
            if next_cp == len(cfg.checkpoints):
                break
    return TrajectoryResult(
        cfg.trajectory_id, seed, cfg.mode, tuple(rows), time.perf_counter() - t0
    )


@dataclass(frozen=True)
class ExperimentConfig:
    process: Process
    horizon: int
    n_trajectories: int
    mode: str = "exact"
    checkpoints: tuple[int, ...] | None = None
    directions: DirectionSet | None = None
    master_seed: int = 0
    prune_threshold: int = 5000
    exact_gen_ceiling: int = 200_000
    threads: int = 1
    slope_band: tuple[float, float] | None = None

    def trajectory_config(self, trajectory_id: int) -> TrajectoryConfig:
        return TrajectoryConfig(
            process=self.process,
            horizon=self.horizon,
            mode=self.mode,
            checkpoints=self.checkpoints,
            directions=self.directions,
            master_seed=self.master_seed,
            trajectory_id=trajectory_id,
            prune_threshold=self.prune_threshold,
            exact_gen_ceiling=self.exact_gen_ceiling,
        )


@dataclass(frozen=True)
class ExperimentReport:
    experiment_id: str
    trajectories: tuple[TrajectoryResult, ...]
    aggregates: tuple[dict, ...]  # one dict per checkpoint: n, median, q25, q75
    fit: FitResult
    passed: bool | None
    extras: dict = field(default_factory=dict)

    def csv_rows(self):
        """Rows (experiment_id, trajectory_id, n, distance, mode)."""
        out = []
        for tr in self.trajectories:
            for row in tr.rows:
                out.append((self.experiment_id, tr.trajectory_id, row.n, row.distance, row.mode))
        return out


def _run_many(cfg: ExperimentConfig):
    configs = [cfg.trajectory_config(t) for t in range(cfg.n_trajectories)]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return tuple(pool.map(run_trajectory, configs))
    return tuple(run_trajectory(c) for c in configs)


def _aggregate(trajectories) -> tuple[dict, ...]:
    by_n = {}
    for tr in trajectories:
        for row in tr.rows:
            by_n.setdefault(row.n, []).append(row.distance)
    out = []
    for n in sorted(by_n):
        arr = np.asarray(by_n[n])
        out.append(
            {
                "n": n,
                "median": float(np.median(arr)),
                "q25": float(np.quantile(arr, 0.25)),
                "q75": float(np.quantile(arr, 0.75)),
            }
        )
    return tuple(out)


def _finish(experiment_id, cfg, trajectories, extras=None) -> ExperimentReport:
    aggregates = _aggregate(trajectories)
    fit = fit_loglog([a["n"] for a in aggregates], [a["median"] for a in aggregates])
    passed = None
    if cfg.slope_band is not None:
        lo, hi = cfg.slope_band
        passed = bool(fit.status == "ok" and lo <= fit.slope <= hi)
    return ExperimentReport(experiment_id, trajectories, aggregates, fit, passed, extras or {})


def experiment_fd_slln(cfg: ExperimentConfig) -> ExperimentReport:
    """Running-average convergence for uniformly bounded draws in a
    finite-dimensional space: multi-trajectory distances, medians per
    checkpoint, and the decay slope of the medians."""
    return _finish("fd_slln", cfg, _run_many(cfg))


GATE_TOL = 1e-9


def experiment_reduced(cfg: ExperimentConfig) -> ExperimentReport:
    """Running-average norm decay for zero-expectation processes.

    Zero-expectation simple random sets are singleton-valued atom by
    atom (any wider atom forces a wider expectation, by width
    additivity), so the harness rejects any declared process that fails
    the singleton check before running.
    """
    dist = cfg.process.distribution(1)
    try:
        verdict = one_point_check(dist, GATE_TOL)
    except HypothesisError as exc:
        raise GateError(f"process expectation is not the origin: {exc}") from exc
    if not verdict.singleton_ae:
        raise GateError(
            "zero-expectation simple random sets must be singleton-valued: "
            f"atom {verdict.violating_atom} has positive width"
        )
    return _finish("reduced", cfg, _run_many(cfg))


@dataclass(frozen=True)
class IntermediateRow:
    n: int
    total: float
    noise_term: float  # norm of the running singleton-noise average
    body_term: float  # distance of the running body average to the mean body


@dataclass(frozen=True)
class IntermediateTrajectory:
    trajectory_id: int
    seed: int
    rows: tuple[IntermediateRow, ...]


@dataclass(frozen=True)
class IntermediateReport:
    experiment_id: str
    trajectories: tuple[IntermediateTrajectory, ...]
    aggregates: tuple[dict, ...]
    noise_fit: FitResult
    body_fit: FitResult
    max_triangle_violation: float
    passed: bool | None
    extras: dict = field(default_factory=dict)

    def csv_rows(self):
        out = []
        for tr in self.trajectories:
            for row in tr.rows:
                out.append((self.experiment_id, tr.trajectory_id, row.n, row.total, "exact"))
                out.append(
                    (f"{self.experiment_id}_noise", tr.trajectory_id, row.n, row.noise_term, "exact")
                )
                out.append(
                    (f"{self.experiment_id}_body", tr.trajectory_id, row.n, row.body_term, "exact")
                )
        return out


def _intermediate_trajectory(cfg: ExperimentConfig, trajectory_id: int) -> IntermediateTrajectory:
    proc = cfg.process
    seed = derive_seed(cfg.master_seed, trajectory_id)
    checkpoints = TrajectoryConfig(
        process=proc, horizon=cfg.horizon, mode="exact", checkpoints=cfg.checkpoints
    ).checkpoints
    base = proc.base
    nu = proc.noise
    # atoms are indexed by the two signs: (s1, s2) in ((+,+), (+,-), (-,+), (-,-))
    atoms = proc.distribution(1).values
    body_atoms = (scale(1.0 + nu, base), scale(1.0 - nu, base))
    noise_sign = np.array([1.0, -1.0, 1.0, -1.0])
    counts = np.zeros(4, dtype=np.int64)
    rows = []
    next_cp = 0
    for i in range(1, cfg.horizon + 1):
        counts[proc.draw_atom(i, seed)] += 1
        if i == checkpoints[next_cp]:
            next_cp += 1
            avg_draw = scale(
                1.0 / i,
                _checkpoint_polytope(atoms, counts, cfg.prune_threshold, cfg.exact_gen_ceiling),
            )
            body_counts = np.array([counts[0] + counts[1], counts[2] + counts[3]])
            avg_body = scale(
                1.0 / i,
                _checkpoint_polytope(
                    body_atoms, body_counts, cfg.prune_threshold, cfg.exact_gen_ceiling
                ),
            )
            noise_avg = np.zeros(proc.space.dim)
            noise_avg[proc.split] = nu * float(noise_sign @ counts) / i
            rows.append(
                IntermediateRow(
                    i,
                    hausdorff(avg_draw, base),
                    proc.space.norm_of(noise_avg),
                    hausdorff(avg_body, base),
                )
            )
            if next_cp == len(checkpoints):
                break
    return IntermediateTrajectory(trajectory_id, seed, tuple(rows))


def experiment_intermediate_fd(cfg: ExperimentConfig) -> IntermediateReport:
    """Decomposition experiment: draws split into a body part whose mean is
    the declared base body and a zero-mean singleton part in the trailing
    coordinates.  Reports the total running-average distance together with
    the two proof-side terms (noise-average norm and body-average
    distance), whose sum dominates the total by the triangle inequality."""
    if not isinstance(cfg.process, FdExpectationDemo):
        raise GateError("the decomposition experiment needs an fd_expectation_demo process")
    ids = range(cfg.n_trajectories)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            trajectories = tuple(pool.map(lambda t: _intermediate_trajectory(cfg, t), ids))
    else:
        trajectories = tuple(_intermediate_trajectory(cfg, t) for t in ids)

    by_n = {}
    for tr in trajectories:
        for row in tr.rows:
            by_n.setdefault(row.n, {"total": [], "noise": [], "body": []})
            by_n[row.n]["total"].append(row.total)
            by_n[row.n]["noise"].append(row.noise_term)
            by_n[row.n]["body"].append(row.body_term)
    aggregates = tuple(
        {
            "n": n,
            "median_total": float(np.median(by_n[n]["total"])),
            "median_noise": float(np.median(by_n[n]["noise"])),
            "median_body": float(np.median(by_n[n]["body"])),
        }
        for n in sorted(by_n)
    )
    noise_fit = fit_loglog([a["n"] for a in aggregates], [a["median_noise"] for a in aggregates])
    body_fit = fit_loglog([a["n"] for a in aggregates], [a["median_body"] for a in aggregates])
    violation = max(
        (row.total - row.noise_term - row.body_term for tr in trajectories for row in tr.rows),
        default=float("-inf"),
    )
    passed = None
    if cfg.slope_band is not None:
        lo, hi = cfg.slope_band
        passed = bool(
            noise_fit.status == "ok"
            and body_fit.status == "ok"
            and lo <= noise_fit.slope <= hi
            and lo <= body_fit.slope <= hi
            and violation <= geometry.SOLVER_TOL
        )
    return IntermediateReport(
        "intermediate_fd",
        trajectories,
        aggregates,
        noise_fit,
        body_fit,
        float(violation),
        passed,
    )


def _counterexample_exact(bf: BlockFamily):
    """Memoized pruned Minkowski subset-sums of the block-1 sets."""
    n = bf.n_sets
    polys = [bf.polytope(i) for i in range(1, n + 1)]
    memo = {0: Polytope.origin(bf.space)}

    def subset_sum(mask: int) -> Polytope:
        if mask not in memo:
            low = mask & -mask
            rest = mask ^ low
            term = polys[low.bit_length() - 1]
            memo[mask] = prune(minkowski_sum(subset_sum(rest), term))
        return memo[mask]

    return subset_sum


@dataclass(frozen=True)
class CounterexamplePattern:
    pattern: int
    certificate: float
    exact: float | None


@dataclass(frozen=True)
class CounterexampleReport:
    n_max: int
    n_sets: int
    patterns: tuple[CounterexamplePattern, ...]
    min_certificate: float
    min_exact: float | None
    floor: float
    passed: bool

    def csv_rows(self):
        out = []
        for row in self.patterns:
            out.append(("counterexample", row.pattern, self.n_sets, row.certificate, "certificate"))
            if row.exact is not None:
                out.append(("counterexample", row.pattern, self.n_sets, row.exact, "exact"))
        return out


def experiment_counterexample(
    n_max: int,
    enumeration: str = "all",
    seed: int = 0,
    mode: str = "certificate",
) -> CounterexampleReport:
    """Distance floor of the divergence construction at horizon 4^n_max.

    Every 0/1 pattern keeps the running-average distance at least 1/16;
    the summary reports the minimum over the evaluated patterns of the
    certified lower bound (and of the exact distance when requested,
    which is materializable at n_max = 1).
    """
    bf = counterexample_family(n_max)
    n = bf.n_sets
    if enumeration == "all":
        patterns = list(range(1 << n))
    elif enumeration.startswith("sample:"):
        count = int(enumeration.split(":", 1)[1])
        if count < 1:
            raise ValueError("sample count must be positive")
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
        patterns = [int(v) for v in rng.integers(0, 1 << n, size=count, dtype=np.uint64)]
    elif enumeration.startswith("psi:"):
        patterns = [int(enumeration.split(":", 1)[1], 16)]
    else:
        raise ValueError("enumeration must be 'all', 'sample:K', or 'psi:HEX'")

    want_exact = mode == "exact"
    if want_exact and n_max != 1:
        raise ValueError("exact distances are materializable only at n_max = 1")
    subset_sum = _counterexample_exact(bf) if want_exact else None
    if want_exact:
        half_sum = scale(1.0 / (2 * n), subset_sum((1 << n) - 1))

    rows = []
    for bits in patterns:
        psi = psi_from_int(bits, n)
        cert = certificate_distance(bf, psi, n)
        exact = None
        if want_exact:
            avg = scale(1.0 / n, subset_sum(bits))
            exact = hausdorff(avg, half_sum)
        rows.append(CounterexamplePattern(bits, cert, exact))

    min_cert = min(r.certificate for r in rows)
    exacts = [r.exact for r in rows if r.exact is not None]
    min_exact = min(exacts) if exacts else None
    passed = bool(
        min_cert >= COUNTEREXAMPLE_FLOOR
        and (min_exact is None or min_exact >= COUNTEREXAMPLE_FLOOR)
    )
    return CounterexampleReport(
        n_max, n, tuple(rows), min_cert, min_exact, COUNTEREXAMPLE_FLOOR, passed
    )
