"""Exact finite-dimensional convex-set calculus.

Convex bodies are V-polytopes: the convex hull of a finite generator
list.  All operations are pure functions of their inputs; generator
order and duplication never affect results.  Distances are exact up to
solver tolerance (1e-9): polyhedral norms go through a dense two-phase
simplex, the Euclidean norm through a Wolfe min-norm-point iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as _k

NORM_TAGS = ("l1", "l2", "linf")
_NORM_CODE = {"l1": _k.L1, "l2": _k.L2, "linf": _k.LINF}
_DUAL_TAG = {"l1": "linf", "l2": "l2", "linf": "l1"}

#: algebraic identities hold to this tolerance
ALGEBRA_TOL = 1e-12
#: solver-backed quantities are accurate to this tolerance
SOLVER_TOL = 1e-9

_MAX_ITER = _k.DEFAULT_MAX_ITER


class DimensionMismatchError(ValueError):
    """Operands live in different spaces or have the wrong length."""


_STATUS_LABELS = {1: "infeasible", 2: "unbounded", 3: "iteration limit"}


class SolverError(RuntimeError):
    """A convex program failed to converge; carries the solver status."""

    def __init__(self, message, status):
        label = _STATUS_LABELS.get(status, f"status {status}")
        super().__init__(f"{message} ({label})")
        self.status = status


@dataclass(frozen=True)
class Space:
    """A finite-dimensional normed space: a dimension and a norm tag."""

    dim: int
    norm: str

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")
        if self.norm not in NORM_TAGS:
            raise ValueError(f"norm tag must be one of {NORM_TAGS}, got {self.norm!r}")

    @property
    def dual_norm(self) -> str:
        return _DUAL_TAG[self.norm]

    def check_vector(self, v) -> np.ndarray:
        arr = np.asarray(v, dtype=float)
        if arr.shape != (self.dim,):
            raise DimensionMismatchError(
                f"vector of shape {arr.shape} does not fit space of dimension {self.dim}"
            )
        if not np.isfinite(arr).all():
            raise ValueError("vector has non-finite coordinates")
        return arr

    def norm_of(self, v) -> float:
        """Norm of a vector of the space."""
        return _vec_norm(self.check_vector(v), self.norm)

    def dual_norm_of(self, v) -> float:
        """Norm of a dual vector (functional) over this space."""
        return _vec_norm(self.check_vector(v), self.dual_norm)


def _vec_norm(arr: np.ndarray, tag: str) -> float:
    if tag == "l1":
        return float(np.abs(arr).sum())
    if tag == "l2":
        return float(np.sqrt(np.dot(arr, arr)))
    return float(np.abs(arr).max())


class Polytope:
    """conv(generators): a nonempty bounded convex set given by points."""

    __slots__ = ("space", "generators", "tag")

    def __init__(self, space: Space, generators, tag: str | None = None):
        arr = np.ascontiguousarray(np.atleast_2d(np.asarray(generators, dtype=float)))
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise ValueError("a polytope needs at least one generator")
        if arr.shape[1] != space.dim:
            raise DimensionMismatchError(
                f"generators of dimension {arr.shape[1]} in space of dimension {space.dim}"
            )
        if not np.isfinite(arr).all():
            raise ValueError("generators have non-finite coordinates")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "generators", arr)
        object.__setattr__(self, "tag", tag)

    def __setattr__(self, name, value):
        raise AttributeError("Polytope is immutable")

    def __eq__(self, other):
        """Representation equality (same generator list); sets that merely
        share a hull compare equal through hausdorff() == 0 instead."""
        if not isinstance(other, Polytope):
            return NotImplemented
        return (
            self.space == other.space
            and self.generators.shape == other.generators.shape
            and bool(np.array_equal(self.generators, other.generators))
        )

    __hash__ = None

    def __repr__(self):
        label = f" tag={self.tag!r}" if self.tag else ""
        return f"Polytope({self.generators.shape[0]} gens, dim {self.space.dim}, {self.space.norm}{label})"

    @property
    def n_generators(self) -> int:
        return self.generators.shape[0]

    @classmethod
    def singleton(cls, space: Space, point) -> "Polytope":
        return cls(space, np.asarray(point, dtype=float).reshape(1, -1))

    @classmethod
    def origin(cls, space: Space) -> "Polytope":
        return cls(space, np.zeros((1, space.dim)))

    def __add__(self, other: "Polytope") -> "Polytope":
        return minkowski_sum(self, other)

    def __rmul__(self, t: float) -> "Polytope":
        return scale(t, self)

    def translate(self, x) -> "Polytope":
        v = self.space.check_vector(x)
        return Polytope(self.space, self.generators + v)

    def to_json(self) -> dict:
        return {
            "space": {"dim": self.space.dim, "norm": self.space.norm},
            "generators": [[float(v) for v in row] for row in self.generators],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "Polytope":
        sp = Space(int(payload["space"]["dim"]), str(payload["space"]["norm"]))
        return cls(sp, payload["generators"])


def _same_space(a: Polytope, b: Polytope):
    if a.space != b.space:
        raise DimensionMismatchError(f"polytopes live in different spaces: {a.space} vs {b.space}")


def minkowski_sum(a: Polytope, b: Polytope) -> Polytope:
    """A + B: all pairwise generator sums; support functions add."""
    _same_space(a, b)
    ga, gb = a.generators, b.generators
    out = (ga[:, None, :] + gb[None, :, :]).reshape(-1, ga.shape[1])
    return Polytope(a.space, out)


def scale(t: float, a: Polytope) -> Polytope:
    """t*A for t >= 0; t = 0 collapses to the origin singleton."""
    if t < 0:
        raise ValueError("negative scalars are not part of the Minkowski cone")
    if t == 0:
        return Polytope.origin(a.space)
    return Polytope(a.space, t * a.generators)


def support(a: Polytope, direction) -> float:
    """h_A(x*) = max over generators of <x*, g>."""
    x = a.space.check_vector(direction)
    return float(np.max(a.generators @ x))


def support_many(a: Polytope, directions: np.ndarray) -> np.ndarray:
    """Support values at each row of a (k, dim) direction array."""
    d = np.asarray(directions, dtype=float)
    if d.ndim != 2 or d.shape[1] != a.space.dim:
        raise DimensionMismatchError("direction array does not fit the space")
    return (d @ a.generators.T).max(axis=1)


def width(a: Polytope, direction) -> float:
    """Directional width h_A(x*) + h_A(-x*): zero exactly for singletons."""
    x = a.space.check_vector(direction)
    vals = a.generators @ x
    return float(np.max(vals) + np.max(-vals))


def diameter(a: Polytope) -> float:
    """Largest distance between two points of A (attained at generators)."""
    return float(_k.max_pairwise_dist(a.generators, _NORM_CODE[a.space.norm]))


def set_norm(a: Polytope) -> float:
    """||A|| = sup over A of the norm (attained at a generator)."""
    return float(_k.row_norms(a.generators, _NORM_CODE[a.space.norm]).max())


def dist_point_to_polytope(point, a: Polytope) -> float:
    """Exact distance from a point to conv(A) in the space norm."""
    p = a.space.check_vector(point)
    st, val = _k.dist_to_hull(a.generators, p, _NORM_CODE[a.space.norm], _MAX_ITER)
    if st != _k.OK:
        raise SolverError("distance program did not converge", st)
    return float(val)


def directed_hausdorff(a: Polytope, b: Polytope) -> float:
    """One-sided distance: sup over b in B of dist(b, A)."""
    _same_space(a, b)
    st, val = _k.directed_hausdorff_kernel(
        a.generators, b.generators, _NORM_CODE[a.space.norm], _MAX_ITER
    )
    if st != _k.OK:
        raise SolverError("directed distance program did not converge", st)
    return float(val)


def hausdorff(a: Polytope, b: Polytope) -> float:
    """Hausdorff distance: the larger of the two one-sided distances."""
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def contains_point(a: Polytope, point, tol: float = SOLVER_TOL) -> bool:
    """True iff the point is within tol of conv(A) in the space norm."""
    return dist_point_to_polytope(point, a) <= tol


def prune(a: Polytope, tol: float = SOLVER_TOL) -> Polytope:
    """Sub-list of generators with the same hull: duplicates removed,
    every dropped point certified inside the hull of the kept ones by a
    membership program."""
    gens = np.unique(a.generators, axis=0)
    if gens.shape[0] == 1:
        return Polytope(a.space, gens, tag=a.tag)
    st, mask = _k.extreme_mask(gens, tol, _MAX_ITER)
    if st != _k.OK:
        raise SolverError("membership program did not converge during pruning", st)
    return Polytope(a.space, gens[mask], tag=a.tag)
