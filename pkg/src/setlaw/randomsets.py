"""Finitely-supported random convex sets and their expectations.

A simple random set takes one polytope value per probability atom; its
expectation is the probability-weighted Minkowski combination, whose
support function is the matching convex combination of the atom support
functions.  Draw sequences are pure functions of (spec, index, master
seed), so experiments are reproducible bit-for-bit across runs and
parallel schedules.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    DimensionMismatchError,
    Polytope,
    Space,
    diameter,
    minkowski_sum,
    scale,
    set_norm,
    support,
    width,
)

PROB_TOL = 1e-12


class HypothesisError(ValueError):
    """A check was invoked on inputs that do not satisfy its hypothesis."""


class GateError(ValueError):
    """A declared process violates a structural requirement of the run."""


@dataclass(frozen=True, eq=False)
class FiniteProbSpace:
    """Finitely many atoms with nonnegative probabilities summing to 1."""

    atom_probs: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, FiniteProbSpace):
            return NotImplemented
        return bool(np.array_equal(self.atom_probs, other.atom_probs))

    __hash__ = None

    def __post_init__(self):
        probs = np.asarray(self.atom_probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("need at least one probability atom")
        if (probs < 0).any():
            raise ValueError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
        object.__setattr__(self, "atom_probs", probs)

    def __len__(self):
        return self.atom_probs.size


@dataclass(frozen=True)
class SimpleRandomSet:
    """One polytope value per atom of a finite probability space."""

    probs: FiniteProbSpace
    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != len(self.probs):
            raise ValueError("need exactly one value per probability atom")
        space = values[0].space
        if any(v.space != space for v in values):
            raise DimensionMismatchError("atom values live in different spaces")
        object.__setattr__(self, "values", values)

    @property
    def space(self) -> Space:
        return self.values[0].space


def expectation(f: SimpleRandomSet) -> Polytope:
    """Minkowski combination sum mu_i U_i over the positive-probability atoms."""
    total = None
    for p, u in zip(f.probs.atom_probs, f.values):
        if p == 0.0:
            continue
        term = scale(float(p), u)
        total = term if total is None else minkowski_sum(total, term)
    assert total is not None  # probabilities sum to 1
    return total


def expectation_support_oracle(f: SimpleRandomSet, direction) -> float:
    """sum mu_i h_{U_i}(x*): equals the support of the expectation exactly."""
    return float(
        sum(p * support(u, direction) for p, u in zip(f.probs.atom_probs, f.values))
    )


def width_additivity_residual(f: SimpleRandomSet, direction) -> float:
    """|width(E(F), x*) - sum mu_i width(U_i, x*)|: zero up to rounding."""
    lhs = width(expectation(f), direction)
    rhs = sum(p * width(u, direction) for p, u in zip(f.probs.atom_probs, f.values))
    return abs(lhs - float(rhs))


@dataclass(frozen=True)
class OnePointResult:
    """Outcome of the singleton check: either all positive-probability atoms
    are singletons to tolerance, or the index of a violating atom."""

    singleton_ae: bool
    violating_atom: int | None = None


def one_point_check(f: SimpleRandomSet, tol: float) -> OnePointResult:
    """Quantitative form of the zero-expectation singleton dichotomy.

    Width additivity forces every positive-probability atom of a
    zero-expectation simple random set to be a single point.  Requires
    ||E(F)|| <= tol; each atom must then have diameter at most
    tol / min positive probability, and a wider atom certifies the
    hypothesis was violated beyond tolerance.
    """
    exp_norm = set_norm(expectation(f))
    if exp_norm > tol:
        raise HypothesisError(
            f"expectation has norm {exp_norm:.3e} > tol {tol:.3e}; "
            "the singleton check applies only to zero-expectation random sets"
        )
    positive = f.probs.atom_probs[f.probs.atom_probs > 0]
    bound = tol / float(positive.min())
    for i, (p, u) in enumerate(zip(f.probs.atom_probs, f.values)):
        if p > 0 and diameter(u) > bound:
            return OnePointResult(False, i)
    return OnePointResult(True)


@dataclass(frozen=True)
class ProjectorPair:
    """Complementary coordinate projectors splitting after a given index."""

    dim: int
    split: int

    def __post_init__(self):
        if not 0 <= self.split <= self.dim:
            raise ValueError(f"split {self.split} out of range 0..{self.dim}")

    def leading(self, a: Polytope) -> Polytope:
        """Project onto the first `split` coordinates (zero the rest)."""
        self._check(a)
        gens = a.generators.copy()
        gens[:, self.split :] = 0.0
        return Polytope(a.space, gens)

    def trailing(self, a: Polytope) -> Polytope:
        """The complementary projector (zero the first `split` coordinates)."""
        self._check(a)
        gens = a.generators.copy()
        gens[:, : self.split] = 0.0
        return Polytope(a.space, gens)

    def _check(self, a: Polytope):
        if a.space.dim != self.dim:
            raise DimensionMismatchError(
                f"projector over dimension {self.dim} applied in dimension {a.space.dim}"
            )


def project(pp: ProjectorPair, a: Polytope, part: str = "leading") -> Polytope:
    if part == "leading":
        return pp.leading(a)
    if part == "trailing":
        return pp.trailing(a)
    raise ValueError("part must be 'leading' or 'trailing'")


def _rng_for(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))
    )


def derive_seed(master_seed: int, stream: int) -> int:
    """A stable 64-bit child seed for an independent derived stream."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(stream,))
    return int(ss.generate_state(1, np.uint64)[0])


class Process:
    """A deterministic family of draws: (index, master seed) -> polytope.

    All concrete kinds are stationary: distribution(i) and mean(i) do not
    depend on i, which the trajectory harness exploits by tracking one
    draw count per atom between checkpoints.
    """

    kind = "abstract"
    stationary = True

    @property
    def space(self) -> Space:
        raise NotImplementedError

    def draw(self, index: int, master_seed: int) -> Polytope:
        raise NotImplementedError

    def draw_atom(self, index: int, master_seed: int) -> int:
        """Index into distribution(index).values of the drawn atom; consumes
        the same random stream as draw()."""
        raise NotImplementedError

    def mean(self, index: int) -> Polytope:
        """The expectation of the index-th draw."""
        raise NotImplementedError

    def distribution(self, index: int) -> SimpleRandomSet:
        """The declared finite-support distribution of the index-th draw."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(payload: dict) -> "Process":
        kind = payload.get("kind")
        for cls in (BernoulliScaled, TwoSetMix, SingletonNoise, FdExpectationDemo):
            if kind == cls.kind:
                return cls._from_json(payload)
        raise ValueError(f"unknown process kind {kind!r}")


@dataclass(frozen=True)
class BernoulliScaled(Process):
    """body with probability p, the origin otherwise."""

    body: Polytope
    p: float
    kind = "bernoulli_scaled"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @property
    def space(self) -> Space:
        return self.body.space

    def draw(self, index, master_seed):
        hit = _rng_for(master_seed, index).random() < self.p
        return self.body if hit else Polytope.origin(self.space)

    def draw_atom(self, index, master_seed):
        return 0 if _rng_for(master_seed, index).random() < self.p else 1

    def mean(self, index):
        return scale(self.p, self.body)

    def distribution(self, index):
        return SimpleRandomSet(
            FiniteProbSpace(np.array([self.p, 1.0 - self.p])),
            (self.body, Polytope.origin(self.space)),
        )

    def to_json(self):
        return {"kind": self.kind, "body": self.body.to_json(), "p": self.p}

    @classmethod
    def _from_json(cls, payload):
        return cls(Polytope.from_json(payload["body"]), float(payload["p"]))


@dataclass(frozen=True)
class TwoSetMix(Process):
    """body_a with probability p, body_b otherwise."""

    body_a: Polytope
    body_b: Polytope
    p: float
    kind = "two_set_mix"

    def __post_init__(self):
        if self.body_a.space != self.body_b.space:
            raise DimensionMismatchError("mixed bodies live in different spaces")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @property
    def space(self) -> Space:
        return self.body_a.space

    def draw(self, index, master_seed):
        hit = _rng_for(master_seed, index).random() < self.p
        return self.body_a if hit else self.body_b

    def draw_atom(self, index, master_seed):
        return 0 if _rng_for(master_seed, index).random() < self.p else 1

    def mean(self, index):
        return minkowski_sum(scale(self.p, self.body_a), scale(1.0 - self.p, self.body_b))

    def distribution(self, index):
        return SimpleRandomSet(
            FiniteProbSpace(np.array([self.p, 1.0 - self.p])),
            (self.body_a, self.body_b),
        )

    def to_json(self):
        return {
            "kind": self.kind,
            "body_a": self.body_a.to_json(),
            "body_b": self.body_b.to_json(),
            "p": self.p,
        }

    @classmethod
    def _from_json(cls, payload):
        return cls(
            Polytope.from_json(payload["body_a"]),
            Polytope.from_json(payload["body_b"]),
            float(payload["p"]),
        )


@dataclass(frozen=True, eq=False)
class SingletonNoise(Process):
    """Random singletons drawn from finitely many points with probabilities."""

    space_spec: Space
    points: np.ndarray
    point_probs: np.ndarray
    kind = "singleton_noise"

    def __eq__(self, other):
        if not isinstance(other, SingletonNoise):
            return NotImplemented
        return (
            self.space_spec == other.space_spec
            and bool(np.array_equal(self.points, other.points))
            and bool(np.array_equal(self.point_probs, other.point_probs))
        )

    __hash__ = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        probs = FiniteProbSpace(np.asarray(self.point_probs, dtype=float)).atom_probs
        if pts.shape[0] != probs.size:
            raise ValueError("need one probability per point")
        if pts.shape[1] != self.space_spec.dim:
            raise DimensionMismatchError("points do not fit the space")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "point_probs", probs)

    @property
    def space(self) -> Space:
        return self.space_spec

    def draw(self, index, master_seed):
        return Polytope.singleton(self.space, self.points[self.draw_atom(index, master_seed)])

    def draw_atom(self, index, master_seed):
        return int(
            _rng_for(master_seed, index).choice(self.points.shape[0], p=self.point_probs)
        )

    def mean(self, index):
        return Polytope.singleton(self.space, self.point_probs @ self.points)

    def distribution(self, index):
        return SimpleRandomSet(
            FiniteProbSpace(self.point_probs),
            tuple(Polytope.singleton(self.space, p) for p in self.points),
        )

    def to_json(self):
        return {
            "kind": self.kind,
            "space": {"dim": self.space.dim, "norm": self.space.norm},
            "points": [[float(v) for v in row] for row in self.points],
            "probs": [float(p) for p in self.point_probs],
        }

    @classmethod
    def _from_json(cls, payload):
        sp = Space(int(payload["space"]["dim"]), str(payload["space"]["norm"]))
        return cls(sp, payload["points"], payload["probs"])


@dataclass(frozen=True)
class FdExpectationDemo(Process):
    """Draws decomposing as (random scaled copy of a base body in the leading
    coordinates) + (zero-mean singleton in the first trailing coordinate).

    The scaled copies (1 +/- noise) * U average to U exactly, so the draw
    expectation is U itself while the trailing projection is pure noise.
    """

    base: Polytope
    noise: float
    split: int
    kind = "fd_expectation_demo"

    def __post_init__(self):
        if not 0.0 <= self.noise < 1.0:
            raise ValueError("noise must lie in [0, 1)")
        if not 1 <= self.split < self.base.space.dim:
            raise ValueError("split must leave at least one trailing coordinate")
        if np.abs(self.base.generators[:, self.split :]).max() > 0.0:
            raise ValueError("the base body must lie in the leading coordinates")

    @property
    def space(self) -> Space:
        return self.base.space

    def draw_parts(self, index, master_seed):
        """(scaled base copy, noise vector); draw() is their Minkowski sum."""
        rng = _rng_for(master_seed, index)
        s1 = 1.0 if rng.random() < 0.5 else -1.0
        s2 = 1.0 if rng.random() < 0.5 else -1.0
        lam = scale(1.0 + s1 * self.noise, self.base)
        phi = np.zeros(self.space.dim)
        phi[self.split] = s2 * self.noise
        return lam, phi

    def draw(self, index, master_seed):
        lam, phi = self.draw_parts(index, master_seed)
        return lam.translate(phi)

    def draw_atom(self, index, master_seed):
        # atom order matches distribution(): (s1, s2) over (+,+), (+,-), (-,+), (-,-)
        rng = _rng_for(master_seed, index)
        s1_plus = rng.random() < 0.5
        s2_plus = rng.random() < 0.5
        return (0 if s1_plus else 2) + (0 if s2_plus else 1)

    def mean(self, index):
        return self.base

    def distribution(self, index):
        atoms = []
        for s1 in (1.0, -1.0):
            for s2 in (1.0, -1.0):
                phi = np.zeros(self.space.dim)
                phi[self.split] = s2 * self.noise
                atoms.append(scale(1.0 + s1 * self.noise, self.base).translate(phi))
        return SimpleRandomSet(FiniteProbSpace(np.full(4, 0.25)), tuple(atoms))

    def to_json(self):
        return {
            "kind": self.kind,
            "base": self.base.to_json(),
            "noise": self.noise,
            "split": self.split,
        }

    @classmethod
    def _from_json(cls, payload):
        return cls(
            Polytope.from_json(payload["base"]),
            float(payload["noise"]),
            int(payload["split"]),
        )


def sample(spec: Process, index: int, master_seed: int) -> Polytope:
    """Draw the index-th value of the process: pure in (spec, index, seed)."""
    return spec.draw(index, master_seed)
