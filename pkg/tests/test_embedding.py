import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setlaw import Polytope, Space, hausdorff
from setlaw.embedding import (
    CombinationView,
    DirectionSet,
    canonical_directions,
    embed,
    grid_directions,
    isometry_gap,
    linearity_residual,
    random_directions,
    sampled_distance,
)
from setlaw.families import combinatorial_family, basis_hull_family

from conftest import make_polytope


def test_embed_origin_and_basis_simplex():
    sp = Space(4, "l2")
    zero = embed(Polytope.origin(sp))
    for x in np.eye(4):
        assert zero(x) == 0.0
    simplex = embed(Polytope(sp, np.eye(4)))
    for m in range(4):
        assert simplex(np.eye(4)[m]) == 1.0


def test_embed_additivity_on_directions(rng):
    sp = Space(3, "linf")
    a = make_polytope(rng, sp)
    b = make_polytope(rng, sp)
    dirs = rng.normal(size=(1000, 3))
    lhs = embed(a + b).eval_many(dirs)
    rhs = embed(a).eval_many(dirs) + embed(b).eval_many(dirs)
    assert np.abs(lhs - rhs).max() <= 1e-12


def test_canonical_directions_shape():
    sp = Space(2, "linf")
    d = canonical_directions(sp)
    assert {tuple(v) for v in d.directions} == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert all(abs(sp.dual_norm_of(v) - 1.0) <= 1e-12 for v in d.directions)
    one = canonical_directions(Space(1, "l2"))
    assert {tuple(v) for v in one.directions} == {(1.0,), (-1.0,)}


def test_canonical_reproduces_membership_indicators():
    n = 4
    family = combinatorial_family(n)
    sp = Space(family.ground_size, "linf")
    sets = basis_hull_family(n, 0, sp)
    for k in range(1, n + 1):
        view = embed(sets[k - 1])
        for m in range(family.ground_size):
            e_m = np.zeros(sp.dim)
            e_m[m] = 1.0
            expected = 1.0 if bool(family.member[k - 1, m]) else 0.0
            assert view(e_m) == expected


def test_direction_set_validation():
    sp = Space(2, "linf")
    with pytest.raises(ValueError):
        DirectionSet(sp, [[1.0, 1.0]])  # dual l1 norm is 2, not 1
    with pytest.raises(ValueError):
        grid_directions(Space(3, "l2"), 8)  # angular grids are 2-D only
    with pytest.raises(ValueError):
        DirectionSet(sp, np.zeros((0, 2)))


def test_sampled_distance_examples(rng):
    sp = Space(3, "linf")
    a = make_polytope(rng, sp)
    d = canonical_directions(sp)
    assert sampled_distance(embed(a), embed(a), d) == 0.0
    x = rng.normal(size=3)
    got = sampled_distance(
        embed(Polytope.origin(sp)), embed(Polytope.singleton(sp, x)), d
    )
    assert got == pytest.approx(np.abs(x).max(), abs=1e-15)  # exact for singletons


def test_sampled_distance_lower_bound_and_grid_accuracy(rng):
    sp = Space(2, "l2")
    grid = grid_directions(sp, 10_000)
    for _ in range(10):
        a = make_polytope(rng, sp)
        b = make_polytope(rng, sp)
        sampled = sampled_distance(embed(a), embed(b), grid)
        exact = hausdorff(a, b)
        assert sampled <= exact + 1e-9
        assert exact - sampled <= 1e-3


@settings(deadline=None, max_examples=30)
@given(
    t=st.floats(0, 5),
    s=st.floats(0, 5),
    seed=st.integers(0, 2**32 - 1),
)
def test_linearity_residual_property(t, s, seed):
    rng = np.random.default_rng(seed)
    sp = Space(int(rng.integers(1, 4)), str(rng.choice(("l1", "l2", "linf"))))
    a = make_polytope(rng, sp)
    b = make_polytope(rng, sp)
    dirs = random_directions(sp, 40, seed)
    assert linearity_residual(a, b, t, s, dirs) <= 1e-12
    assert linearity_residual(a, b, 0.0, 0.0, dirs) == 0.0
    assert linearity_residual(a, b, 1.0, 0.0, dirs) <= 1e-12


def test_isometry_gap_refinement(rng):
    sp = Space(2, "l2")
    a = make_polytope(rng, sp)
    b = make_polytope(rng, sp)
    assert isometry_gap(a, a, canonical_directions(sp)) == 0.0
    gaps = [isometry_gap(a, b, grid_directions(sp, k)) for k in (100, 1000, 10000)]
    assert all(g >= -1e-9 for g in gaps)
    assert gaps[0] >= gaps[1] - 1e-9 >= gaps[2] - 2e-9
    assert gaps[-1] <= 1e-3


def test_singleton_isometry_gap_is_zero_on_canonical():
    sp = Space(3, "linf")
    a = Polytope.singleton(sp, [0.3, -0.2, 1.0])
    b = Polytope.singleton(sp, [-1.0, 0.5, 0.25])
    assert isometry_gap(a, b, canonical_directions(sp)) <= 1e-12


def test_combination_view_matches_materialized_sum(rng):
    sp = Space(3, "l1")
    a = make_polytope(rng, sp)
    b = make_polytope(rng, sp)
    from setlaw import minkowski_sum, scale

    combo = CombinationView([(0.5, a), (2.0, b)])
    real = minkowski_sum(scale(0.5, a), scale(2.0, b))
    dirs = rng.normal(size=(200, 3))
    assert np.abs(combo.eval_many(dirs) - embed(real).eval_many(dirs)).max() <= 1e-12


def test_direction_set_json_round_trip():
    sp = Space(2, "linf")
    d = random_directions(sp, 16, 99)
    again = DirectionSet.from_json(d.to_json())
    assert again.provenance == d.provenance
    assert np.array_equal(again.directions, d.directions)
