import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setlaw import (
    FiniteProbSpace,
    HypothesisError,
    Polytope,
    ProjectorPair,
    SimpleRandomSet,
    Space,
    expectation,
    expectation_support_oracle,
    hausdorff,
    one_point_check,
    sample,
    scale,
    support,
)
from setlaw.randomsets import (
    BernoulliScaled,
    FdExpectationDemo,
    SingletonNoise,
    TwoSetMix,
    width_additivity_residual,
)

from conftest import make_polytope


def test_prob_space_validation():
    FiniteProbSpace(np.array([0.25, 0.75]))
    with pytest.raises(ValueError):
        FiniteProbSpace(np.array([0.5, 0.6]))
    with pytest.raises(ValueError):
        FiniteProbSpace(np.array([-0.1, 1.1]))


def test_expectation_single_atom(rng):
    sp = Space(2, "l2")
    u = make_polytope(rng, sp)
    srs = SimpleRandomSet(FiniteProbSpace(np.array([1.0])), (u,))
    assert hausdorff(expectation(srs), u) == 0.0


def test_expectation_bernoulli_half_is_half_body(rng):
    # the expectation of a fair 0/1 scaling is the half-scaled body, the
    # same halving that appears in the divergence construction
    sp = Space(2, "linf")
    v = make_polytope(rng, sp)
    srs = BernoulliScaled(v, 0.5).distribution(1)
    assert hausdorff(expectation(srs), scale(0.5, v)) <= 1e-12


def test_expectation_of_constant_segment_is_the_segment():
    sp = Space(1, "l2")
    seg = Polytope(sp, [[-1.0], [1.0]])
    srs = SimpleRandomSet(FiniteProbSpace(np.array([0.5, 0.5])), (seg, seg))
    assert hausdorff(expectation(srs), seg) <= 1e-12


def test_expectation_skips_zero_probability_atoms(rng):
    sp = Space(2, "l1")
    u = make_polytope(rng, sp)
    junk = make_polytope(rng, sp, box=100.0)
    srs = SimpleRandomSet(FiniteProbSpace(np.array([1.0, 0.0])), (u, junk))
    assert hausdorff(expectation(srs), u) <= 1e-12


@settings(deadline=None, max_examples=50)
@given(seed=st.integers(0, 2**32 - 1))
def test_expectation_support_oracle_residual(seed):
    rng = np.random.default_rng(seed)
    sp = Space(int(rng.integers(1, 4)), str(rng.choice(("l1", "l2", "linf"))))
    k = int(rng.integers(1, 5))
    probs = rng.uniform(0.1, 1.0, size=k)
    probs /= probs.sum()
    srs = SimpleRandomSet(
        FiniteProbSpace(probs), tuple(make_polytope(rng, sp) for _ in range(k))
    )
    e = expectation(srs)
    for x in rng.normal(size=(20, sp.dim)):
        assert support(e, x) == pytest.approx(
            expectation_support_oracle(srs, x), abs=1e-12
        )
    assert expectation_support_oracle(srs, np.zeros(sp.dim)) == 0.0


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def test_sample_degenerate_probabilities(rng):
    sp = Space(2, "l2")
    v = make_polytope(rng, sp)
    always = BernoulliScaled(v, 1.0)
    never = BernoulliScaled(v, 0.0)
    for i in (1, 7, 1000):
        assert sample(always, i, 3).generators is v.generators
        assert np.array_equal(sample(never, i, 3).generators, [[0.0, 0.0]])


def test_sample_reproducible_and_index_decorrelated(rng):
    sp = Space(2, "l2")
    proc = TwoSetMix(make_polytope(rng, sp), make_polytope(rng, sp), 0.5)
    draws_a = [proc.draw_atom(i, 99) for i in range(1, 200)]
    draws_b = [proc.draw_atom(i, 99) for i in range(1, 200)]
    assert draws_a == draws_b
    draws_c = [proc.draw_atom(i, 100) for i in range(1, 200)]
    assert draws_a != draws_c


def test_bernoulli_frequency_within_three_sigma(rng):
    sp = Space(1, "linf")
    v = Polytope(sp, [[1.0]])
    proc = BernoulliScaled(v, 0.5)
    n = 100_000
    hits = sum(1 for i in range(1, n + 1) if proc.draw_atom(i, 12345) == 0)
    sigma = 0.5 * np.sqrt(n)
    assert abs(hits - n / 2) <= 3 * sigma


def test_draw_matches_draw_atom(rng):
    sp = Space(3, "l2")
    base_gens = np.zeros((2, 3))
    base_gens[1, 0] = 1.0
    procs = [
        BernoulliScaled(make_polytope(rng, sp), 0.3),
        TwoSetMix(make_polytope(rng, sp), make_polytope(rng, sp), 0.7),
        SingletonNoise(sp, rng.normal(size=(3, 3)), np.array([0.2, 0.3, 0.5])),
        FdExpectationDemo(Polytope(sp, base_gens), 0.25, 2),
    ]
    for proc in procs:
        values = proc.distribution(1).values
        for i in range(1, 40):
            atom = proc.draw_atom(i, 5)
            drawn = proc.draw(i, 5)
            assert hausdorff(drawn, values[atom]) <= 1e-12


def test_process_json_round_trip(rng):
    from setlaw.randomsets import Process

    sp = Space(4, "l2")
    base_gens = np.zeros((2, 4))
    base_gens[1, 0] = 1.0
    procs = [
        BernoulliScaled(make_polytope(rng, sp), 0.25),
        TwoSetMix(make_polytope(rng, sp), make_polytope(rng, sp), 0.5),
        SingletonNoise(sp, rng.normal(size=(2, 4)), np.array([0.5, 0.5])),
        FdExpectationDemo(Polytope(sp, base_gens), 0.5, 2),
    ]
    for proc in procs:
        again = Process.from_json(proc.to_json())
        for i in (1, 2, 9):
            assert again.draw_atom(i, 17) == proc.draw_atom(i, 17)
            assert hausdorff(again.mean(i), proc.mean(i)) <= 1e-12


# ---------------------------------------------------------------------------
# singleton check
# ---------------------------------------------------------------------------


def test_one_point_check_all_singletons(rng):
    sp = Space(3, "l2")
    probs = np.array([0.25, 0.25, 0.5])
    pts = rng.normal(size=(3, 3))
    pts -= probs @ pts
    srs = SimpleRandomSet(
        FiniteProbSpace(probs), tuple(Polytope.singleton(sp, p) for p in pts)
    )
    verdict = one_point_check(srs, 1e-9)
    assert verdict.singleton_ae and verdict.violating_atom is None


def test_one_point_check_hypothesis_violation():
    sp = Space(2, "l2")
    seg = Polytope(sp, [[-1, 0], [1, 0]])
    srs = SimpleRandomSet(FiniteProbSpace(np.array([1.0])), (seg,))
    with pytest.raises(HypothesisError):
        one_point_check(srs, 1e-9)


def test_one_point_check_detects_widened_atom(rng):
    # widening one atom keeps the expectation inside tolerance while the
    # atom itself exceeds the per-atom width bound: width additivity at work
    sp = Space(2, "l2")
    tol = 1e-9
    probs = np.array([0.5, 0.5])
    pts = rng.normal(size=(2, 2))
    pts -= probs @ pts
    eps = 3.0 * tol  # > tol / min prob = 2 tol, yet 0.5 * eps / 2 <= tol
    widened = Polytope(
        sp, [pts[0] - [eps / 2, 0.0], pts[0] + [eps / 2, 0.0]]
    )
    srs = SimpleRandomSet(
        FiniteProbSpace(probs), (widened, Polytope.singleton(sp, pts[1]))
    )
    verdict = one_point_check(srs, tol)
    assert not verdict.singleton_ae
    assert verdict.violating_atom == 0
    assert width_additivity_residual(srs, np.array([1.0, 0.0])) <= 1e-12


# ---------------------------------------------------------------------------
# projectors
# ---------------------------------------------------------------------------


def test_projector_identity_and_complement(rng):
    sp = Space(4, "l2")
    a = make_polytope(rng, sp)
    pp = ProjectorPair(4, 4)
    assert np.array_equal(pp.leading(a).generators, a.generators)
    pp2 = ProjectorPair(4, 2)
    lead, trail = pp2.leading(a), pp2.trailing(a)
    assert np.array_equal(lead.generators + trail.generators, a.generators)
    assert np.array_equal(pp2.leading(lead).generators, lead.generators)  # idempotent
    assert set_norm_zero(pp2.trailing(lead))  # complementary ranges
    inside = Polytope(sp, np.pad(rng.normal(size=(3, 2)), ((0, 0), (0, 2))))
    assert set_norm_zero(pp2.trailing(inside))


def set_norm_zero(p):
    from setlaw import set_norm

    return set_norm(p) == 0.0


def test_projector_support_subadditivity(rng):
    sp = Space(5, "linf")
    pp = ProjectorPair(5, 2)
    for _ in range(30):
        a = make_polytope(rng, sp)
        x = rng.normal(size=5)
        assert support(a, x) <= support(pp.leading(a), x) + support(pp.trailing(a), x) + 1e-12


def test_projector_validation():
    with pytest.raises(ValueError):
        ProjectorPair(3, 4)
