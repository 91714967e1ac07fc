"""Function-space view of convex bodies.

A body is represented through its support function, evaluated on finite
sets of dual directions of dual norm one.  The map body -> support
function is additive and positively homogeneous, and the sup-distance
between two support functions over the whole dual sphere equals the
Hausdorff distance; restricted to a finite direction set it is a
certified lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    ALGEBRA_TOL,
    DimensionMismatchError,
    Polytope,
    Space,
    hausdorff,
    minkowski_sum,
    scale,
    support_many,
)

DIRECTION_NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """Finite list of dual vectors of dual norm 1, with provenance."""

    space: Space
    directions: np.ndarray = field(repr=False)
    provenance: str = "custom"

    def __eq__(self, other):
        if not isinstance(other, DirectionSet):
            return NotImplemented
        return (
            self.space == other.space
            and self.provenance == other.provenance
            and self.directions.shape == other.directions.shape
            and bool(np.array_equal(self.directions, other.directions))
        )

    __hash__ = None

    def __post_init__(self):
        arr = np.ascontiguousarray(np.atleast_2d(np.asarray(self.directions, dtype=float)))
        if arr.shape[0] == 0:
            raise ValueError("a direction set must be nonempty")
        if arr.shape[1] != self.space.dim:
            raise DimensionMismatchError("directions do not fit the space")
        norms = np.array([self.space.dual_norm_of(row) for row in arr])
        if np.abs(norms - 1.0).max() > DIRECTION_NORM_TOL:
            raise ValueError("directions must have dual norm 1 within 1e-12")
        object.__setattr__(self, "directions", arr)

    def __len__(self):
        return self.directions.shape[0]

    def union(self, other: "DirectionSet") -> "DirectionSet":
        if other.space != self.space:
            raise DimensionMismatchError("direction sets live in different spaces")
        merged = np.vstack([self.directions, other.directions])
        return DirectionSet(self.space, merged, f"{self.provenance}+{other.provenance}")

    def to_json(self) -> dict:
        return {
            "space": {"dim": self.space.dim, "norm": self.space.norm},
            "provenance": self.provenance,
            "directions": [[float(v) for v in row] for row in self.directions],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "DirectionSet":
        sp = Space(int(payload["space"]["dim"]), str(payload["space"]["norm"]))
        return cls(sp, payload["directions"], str(payload.get("provenance", "custom")))


def canonical_directions(space: Space) -> DirectionSet:
    """The 2d signed coordinate functionals (dual norm 1 in every tag)."""
    eye = np.eye(space.dim)
    return DirectionSet(space, np.vstack([eye, -eye]), "canonical")


def grid_directions(space: Space, count: int) -> DirectionSet:
    """Uniform angular grid in dimension 2, normalized to dual norm 1."""
    if space.dim != 2:
        raise ValueError("angular grids are only defined in dimension 2; use random_directions")
    if count < 1:
        raise ValueError("count must be positive")
    angles = 2.0 * np.pi * np.arange(count) / count
    raw = np.column_stack([np.cos(angles), np.sin(angles)])
    return DirectionSet(space, _normalize_dual(space, raw), f"grid:{count}")


def random_directions(space: Space, count: int, seed: int) -> DirectionSet:
    """Seeded Gaussian sphere sample, normalized to dual norm 1."""
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    raw = rng.standard_normal((count, space.dim))
    # a zero draw has probability zero; redraw defensively anyway
    while True:
        degenerate = np.abs(raw).sum(axis=1) < 1e-12
        if not degenerate.any():
            break
        raw[degenerate] = rng.standard_normal((int(degenerate.sum()), space.dim))
    return DirectionSet(space, _normalize_dual(space, raw), f"random:{count}:{seed}")


def _normalize_dual(space: Space, rows: np.ndarray) -> np.ndarray:
    out = np.empty_like(rows)
    for i, row in enumerate(rows):
        out[i] = row / space.dual_norm_of(row)
    return out


class SupportView:
    """Evaluable support function of a convex body."""

    __slots__ = ("body",)

    def __init__(self, body: Polytope):
        self.body = body

    @property
    def space(self) -> Space:
        return self.body.space

    def __call__(self, direction) -> float:
        return float(np.max(self.body.generators @ self.body.space.check_vector(direction)))

    def eval_many(self, directions: np.ndarray) -> np.ndarray:
        return support_many(self.body, directions)


class CombinationView:
    """Support function of a nonnegative Minkowski combination sum t_i A_i,
    evaluated through additivity without materializing the sum."""

    __slots__ = ("space", "terms")

    def __init__(self, terms):
        terms = [(float(t), body) for t, body in terms]
        if not terms:
            raise ValueError("a combination needs at least one term")
        if any(t < 0 for t, _ in terms):
            raise ValueError("combination coefficients must be nonnegative")
        space = terms[0][1].space
        if any(body.space != space for _, body in terms):
            raise DimensionMismatchError("combination terms live in different spaces")
        self.space = space
        self.terms = terms

    def __call__(self, direction) -> float:
        x = self.space.check_vector(direction)
        return float(sum(t * np.max(body.generators @ x) for t, body in self.terms))

    def eval_many(self, directions: np.ndarray) -> np.ndarray:
        total = np.zeros(np.atleast_2d(directions).shape[0])
        for t, body in self.terms:
            total += t * support_many(body, directions)
        return total


def embed(a: Polytope) -> SupportView:
    """The body as an evaluable point of the ambient function space."""
    return SupportView(a)


def sampled_distance(f, g, dirs: DirectionSet) -> float:
    """max over the direction set of |f - g|: a lower bound for the exact
    Hausdorff distance of the underlying bodies."""
    if len(dirs) == 0:
        raise ValueError("empty direction set")
    return float(np.abs(f.eval_many(dirs.directions) - g.eval_many(dirs.directions)).max())


def linearity_residual(a: Polytope, b: Polytope, t: float, s: float, dirs: DirectionSet) -> float:
    """max over the direction set of |h_{tA+sB} - t h_A - s h_B|; the
    embedding is cone-linear, so this never exceeds 1e-12."""
    combined = minkowski_sum(scale(t, a), scale(s, b))
    lhs = support_many(combined, dirs.directions)
    rhs = t * support_many(a, dirs.directions) + s * support_many(b, dirs.directions)
    return float(np.abs(lhs - rhs).max())


def isometry_gap(a: Polytope, b: Polytope, dirs: DirectionSet) -> float:
    """Exact Hausdorff distance minus the sampled sup-distance; nonnegative
    up to solver tolerance and shrinking under direction refinement."""
    return hausdorff(a, b) - sampled_distance(embed(a), embed(b), dirs)


__all__ = [
    "ALGEBRA_TOL",
    "CombinationView",
    "DirectionSet",
    "SupportView",
    "canonical_directions",
    "embed",
    "grid_directions",
    "isometry_gap",
    "linearity_residual",
    "random_directions",
    "sampled_distance",
]
