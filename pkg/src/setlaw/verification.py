"""Batch property suites over the library invariants, with fixed seeds.

Each suite returns (name, passed, detail) triples; the CLI prints one
line per property and exits nonzero when any fails.
"""

from __future__ import annotations

import numpy as np

from . import geometry
from .embedding import (
    CombinationView,
    canonical_directions,
    embed,
    grid_directions,
    isometry_gap,
    linearity_residual,
    random_directions,
    sampled_distance,
)
from .families import (
    coefficient_lower_bound,
    combinatorial_family,
    basis_hull_family,
    signed_membership_value,
    witness_element,
)
from .geometry import Polytope, Space, hausdorff, minkowski_sum, scale, support
from .randomsets import (
    FiniteProbSpace,
    HypothesisError,
    SimpleRandomSet,
    one_point_check,
    width_additivity_residual,
)

SUITES = ("lemma31", "lemma33", "radstrom", "onepoint", "core")


def random_polytope(rng, space: Space, max_gens: int = 6, box: float = 1.0) -> Polytope:
    m = int(rng.integers(1, max_gens + 1))
    return Polytope(space, box * rng.uniform(-1.0, 1.0, size=(m, space.dim)))


def suite_lemma31():
    out = []
    for n in range(1, 13):
        family = combinatorial_family(n)
        ok = True
        for bits in range(2**n):
            w = frozenset(j for j in range(1, n + 1) if (bits >> (j - 1)) & 1)
            m = witness_element(family, w)
            if family.membership_pattern(m) != w:
                ok = False
                break
        out.append((f"witness property exhaustive, n={n}", ok, f"{2**n} subsets"))
    return out


def suite_lemma33():
    rng = np.random.default_rng(33)
    n = 8
    family = combinatorial_family(n)
    space = Space(family.ground_size, "linf")
    sets = basis_hull_family(n, 0, space)
    dirs = canonical_directions(space)
    bound_ok = True
    match_ok = True
    worst_gap = 0.0
    for _ in range(1000):
        a = rng.uniform(-2.0, 2.0, size=n)
        m, s = coefficient_lower_bound(family, a)
        if s < 0.5 * np.abs(a).sum() - 1e-12:
            bound_ok = False
        if abs(abs(signed_membership_value(family, a, m)) - s) > 1e-12:
            match_ok = False
        # embedding-level check: the two sign-class combinations sit at
        # sampled distance exactly s over the canonical directions
        pos = [(abs(a[k]), sets[k]) for k in range(n) if a[k] > 0]
        neg = [(abs(a[k]), sets[k]) for k in range(n) if a[k] <= 0]
        origin = Polytope.origin(space)
        f = CombinationView(pos) if pos else embed(origin)
        g = CombinationView(neg) if neg else embed(origin)
        gap = abs(sampled_distance(f, g, dirs) - s)
        worst_gap = max(worst_gap, gap)
    out = [
        ("half-mass lower bound on 1000 seeded vectors", bound_ok, "s >= sum|a|/2"),
        ("certificate attains the signed membership value", match_ok, "|value| == s"),
        (
            "certificate equals sampled embedding distance",
            worst_gap <= 1e-12,
            f"max |gap| = {worst_gap:.3e}",
        ),
    ]
    return out


def suite_radstrom():
    rng = np.random.default_rng(7)
    out = []
    worst = 0.0
    for _ in range(200):
        space = Space(int(rng.integers(1, 5)), str(rng.choice(("l1", "l2", "linf"))))
        a = random_polytope(rng, space)
        b = random_polytope(rng, space)
        t, s = rng.uniform(0.0, 3.0, size=2)
        dirs = random_directions(space, 50, int(rng.integers(0, 2**32)))
        worst = max(worst, linearity_residual(a, b, t, s, dirs))
    out.append(("cone linearity residual <= 1e-12", worst <= 1e-12, f"max {worst:.3e}"))

    space = Space(2, "l2")
    worst_over = 0.0
    for _ in range(50):
        a = random_polytope(rng, space)
        b = random_polytope(rng, space)
        exact = hausdorff(a, b)
        dirs = grid_directions(space, 200)
        worst_over = max(worst_over, sampled_distance(embed(a), embed(b), dirs) - exact)
    out.append(
        (
            "sampled distance is a lower bound of exact",
            worst_over <= geometry.SOLVER_TOL,
            f"max overshoot {worst_over:.3e}",
        )
    )

    gaps = []
    for count in (100, 1000, 10000):
        dirs = grid_directions(space, count)
        worst_gap = 0.0
        rng2 = np.random.default_rng(11)
        for _ in range(20):
            a = random_polytope(rng2, space)
            b = random_polytope(rng2, space)
            worst_gap = max(worst_gap, isometry_gap(a, b, dirs))
        gaps.append(worst_gap)
    monotone = gaps[0] >= gaps[1] - 1e-9 and gaps[1] >= gaps[2] - 1e-9
    out.append(
        (
            "isometry gap shrinks under grid refinement to < 1e-3",
            monotone and gaps[-1] < 1e-3,
            f"gaps {gaps[0]:.2e} -> {gaps[1]:.2e} -> {gaps[2]:.2e}",
        )
    )
    return out


def suite_onepoint():
    rng = np.random.default_rng(52)
    space = Space(3, "l2")
    out = []

    ok = True
    for _ in range(50):
        k = int(rng.integers(2, 6))
        probs = rng.uniform(0.2, 1.0, size=k)
        probs /= probs.sum()
        pts = rng.normal(size=(k, 3))
        pts -= probs @ pts  # recenter so the expectation is the origin
        srs = SimpleRandomSet(
            FiniteProbSpace(probs), tuple(Polytope.singleton(space, p) for p in pts)
        )
        if not one_point_check(srs, 1e-9).singleton_ae:
            ok = False
    out.append(("all-singleton zero-mean families pass", ok, "50 seeded families"))

    ok = True
    for _ in range(50):
        probs = np.full(4, 0.25)
        pts = rng.normal(size=(4, 3))
        pts -= probs @ pts
        tol = 1e-9
        eps = 6.0 * tol  # wider than tol / min prob = 4 tol, inside the 8 tol hypothesis cap
        seg = np.zeros((2, 3))
        seg[1, 0] = eps
        values = [Polytope.singleton(space, p) for p in pts]
        widened = Polytope(space, pts[1] + seg - np.array([eps / 2.0, 0.0, 0.0]))
        values[1] = widened
        verdict = one_point_check(SimpleRandomSet(FiniteProbSpace(probs), tuple(values)), tol)
        if verdict.singleton_ae or verdict.violating_atom != 1:
            ok = False
    out.append(("a widened atom is detected and named", ok, "50 seeded families"))

    try:
        srs = SimpleRandomSet(
            FiniteProbSpace(np.array([1.0])),
            (Polytope(space, [[-1.0, 0, 0], [1.0, 0, 0]]),),
        )
        one_point_check(srs, 1e-9)
        hypothesis_ok = False
    except HypothesisError:
        hypothesis_ok = True
    out.append(("nonzero expectation is reported distinctly", hypothesis_ok, "segment atom"))

    worst = 0.0
    for _ in range(100):
        k = int(rng.integers(1, 5))
        probs = rng.uniform(0.1, 1.0, size=k)
        probs /= probs.sum()
        values = tuple(random_polytope(rng, space) for _ in range(k))
        srs = SimpleRandomSet(FiniteProbSpace(probs), values)
        x = rng.normal(size=3)
        worst = max(worst, width_additivity_residual(srs, x))
    out.append(("width additivity residual <= 1e-12", worst <= 1e-12, f"max {worst:.3e}"))
    return out


def suite_core():
    rng = np.random.default_rng(99)
    out = []

    worst = 0.0
    for _ in range(300):
        space = Space(int(rng.integers(1, 5)), str(rng.choice(("l1", "l2", "linf"))))
        a = random_polytope(rng, space)
        b = random_polytope(rng, space)
        t, s = rng.uniform(0.0, 2.0, size=2)
        x = rng.normal(size=space.dim)
        lhs = support(minkowski_sum(scale(t, a), scale(s, b)), x)
        rhs = t * support(a, x) + s * support(b, x)
        worst = max(worst, abs(lhs - rhs))
    out.append(("support additivity <= 1e-12", worst <= 1e-12, f"max {worst:.3e}"))

    worst = 0.0
    for _ in range(200):
        space = Space(int(rng.integers(2, 4)), str(rng.choice(("l1", "l2", "linf"))))
        a = random_polytope(rng, space)
        b = random_polytope(rng, space)
        c = random_polytope(rng, space)
        worst = max(worst, hausdorff(a, c) - hausdorff(a, b) - hausdorff(b, c))
    out.append(
        ("hausdorff triangle inequality to 1e-9", worst <= geometry.SOLVER_TOL, f"max {worst:.3e}")
    )

    worst = 0.0
    for _ in range(100):
        space = Space(int(rng.integers(1, 5)), str(rng.choice(("l1", "l2", "linf"))))
        a = random_polytope(rng, space)
        b = random_polytope(rng, space)
        x = rng.normal(size=space.dim)
        worst = max(
            worst, abs(hausdorff(a.translate(x), b.translate(x)) - hausdorff(a, b))
        )
    out.append(("translation invariance <= 1e-12", worst <= 1e-12, f"max {worst:.3e}"))

    ok = True
    for _ in range(100):
        space = Space(int(rng.integers(2, 4)), str(rng.choice(("l1", "l2", "linf"))))
        a = random_polytope(rng, space, max_gens=5)
        b = random_polytope(rng, space)
        extra = random_polytope(rng, space)
        bigger = Polytope(space, np.vstack([a.generators, extra.generators]))
        if geometry.directed_hausdorff(bigger, b) > geometry.directed_hausdorff(a, b) + 1e-9:
            ok = False
    out.append(("directed distance decreases in the first argument", ok, "100 seeded triples"))

    worst = 0.0
    for _ in range(100):
        space = Space(int(rng.integers(1, 4)), str(rng.choice(("l1", "l2", "linf"))))
        a = random_polytope(rng, space, max_gens=5)
        lam = rng.uniform(0.0, 1.0, size=a.n_generators)
        lam /= lam.sum()
        inner = lam @ a.generators
        padded = Polytope(space, np.vstack([a.generators, a.generators[:1], inner[None, :]]))
        x = rng.normal(size=space.dim)
        worst = max(worst, abs(support(a, x) - support(padded, x)))
        worst = max(worst, abs(geometry.width(a, x) - geometry.width(padded, x)))
        worst = max(worst, abs(geometry.diameter(a) - geometry.diameter(padded)))
        worst = max(worst, hausdorff(a, padded))
        pruned = geometry.prune(padded)
        worst = max(worst, hausdorff(a, pruned))
    out.append(
        (
            "closure equivalence: duplicates and hull points change nothing",
            worst <= 1e-12,
            f"max {worst:.3e}",
        )
    )
    return out


def run_suite(name: str):
    runners = {
        "lemma31": suite_lemma31,
        "lemma33": suite_lemma33,
        "radstrom": suite_radstrom,
        "onepoint": suite_onepoint,
        "core": suite_core,
    }
    if name not in runners:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    return runners[name]()
