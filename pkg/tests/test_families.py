import numpy as np
import pytest

from setlaw import Polytope, Space, hausdorff, scale, set_norm, support
from setlaw.embedding import CombinationView, canonical_directions, embed, sampled_distance
from setlaw.families import (
    auerbach_canonical,
    certificate_distance,
    coefficient_lower_bound,
    combinatorial_family,
    counterexample_family,
    basis_hull_family,
    psi_from_int,
    signed_membership_value,
    witness_element,
)


def test_family_small_cases():
    f1 = combinatorial_family(1)
    assert list(f1.subset(1)) == [1]
    assert witness_element(f1, set()) == 0
    assert witness_element(f1, {1}) == 1
    f2 = combinatorial_family(2)
    assert list(f2.subset(1)) == [1, 3]
    assert list(f2.subset(2)) == [2, 3]
    assert witness_element(f2, {2}) == 2
    assert f2.membership_pattern(2) == frozenset({2})


def test_witness_property_exhaustive_n10():
    family = combinatorial_family(10)
    for bits in range(1024):
        w = frozenset(j for j in range(1, 11) if (bits >> (j - 1)) & 1)
        m = witness_element(family, w)
        assert family.membership_pattern(m) == w


def test_witness_extremes():
    family = combinatorial_family(6)
    assert witness_element(family, set()) == 0
    assert witness_element(family, set(range(1, 7))) == 63
    with pytest.raises(ValueError):
        witness_element(family, {7})


def test_witness_random_patterns(rng):
    family = combinatorial_family(8)
    for _ in range(50):
        w = frozenset(int(j) for j in rng.choice(8, size=rng.integers(0, 9), replace=False) + 1)
        assert family.membership_pattern(witness_element(family, w)) == w


def test_family_guard():
    with pytest.raises(ValueError):
        combinatorial_family(21)
    with pytest.raises(ValueError):
        combinatorial_family(0)


@pytest.mark.parametrize("norm", ["l1", "l2", "linf"])
def test_auerbach_inequality(norm, rng):
    space = Space(16, norm)
    system = auerbach_canonical(space, 16)
    b = np.zeros(16)
    b[0], b[1] = 1.0, -1.0
    if norm == "linf":
        assert system.slack(b) == 0.0  # equality in the sup norm
    for _ in range(1000):
        coeffs = rng.uniform(-3, 3, size=16)
        assert system.slack(coeffs) >= 0.0
    with pytest.raises(ValueError):
        auerbach_canonical(Space(4, norm), 5)


def test_basis_hull_family_structure():
    sp = Space(4, "linf")
    sets = basis_hull_family(1, 2, sp)  # offset 2, ground {2, 3}
    assert len(sets) == 1
    assert sets[0].generators.tolist() == [[0.0, 0.0, 0.0, 1.0]]

    f2 = basis_hull_family(2, 0, Space(4, "linf"))
    assert {tuple(np.flatnonzero(g)) for g in f2[0].generators} == {(1,), (3,)}
    assert {tuple(np.flatnonzero(g)) for g in f2[1].generators} == {(2,), (3,)}

    with pytest.raises(ValueError):
        basis_hull_family(2, 1, Space(4, "linf"))  # needs offset + 4 dims
    with pytest.raises(ValueError):
        basis_hull_family(2, 0, Space(4, "l2"))  # sup-norm spaces only


def test_basis_hull_family_support_is_membership_indicator():
    n = 4
    family = combinatorial_family(n)
    sp = Space(16, "linf")
    sets = basis_hull_family(n, 0, sp)
    eye = np.eye(16)
    for k in range(1, n + 1):
        for m in range(16):
            assert support(sets[k - 1], eye[m]) == float(family.member[k - 1, m])


def test_coefficient_lower_bound_examples():
    family = combinatorial_family(4)
    m, s = coefficient_lower_bound(family, np.ones(4))
    assert (m, s) == (15, 4.0)
    f2 = combinatorial_family(2)
    m, s = coefficient_lower_bound(f2, np.array([1.0, -1.0]))
    assert (m, s) == (1, 1.0)  # tight at exactly half the mass


def test_coefficient_lower_bound_randomized(rng):
    n = 8
    family = combinatorial_family(n)
    sp = Space(family.ground_size, "linf")
    sets = basis_hull_family(n, 0, sp)
    dirs = canonical_directions(sp)
    origin = Polytope.origin(sp)
    for _ in range(200):
        a = rng.uniform(-2, 2, size=n)
        m, s = coefficient_lower_bound(family, a)
        assert s >= 0.5 * np.abs(a).sum() - 1e-12
        assert abs(signed_membership_value(family, a, m)) == pytest.approx(s, abs=1e-12)
        pos = [(a[k], sets[k]) for k in range(n) if a[k] > 0]
        neg = [(-a[k], sets[k]) for k in range(n) if a[k] < 0]
        f = CombinationView(pos) if pos else embed(origin)
        g = CombinationView(neg) if neg else embed(origin)
        assert sampled_distance(f, g, dirs) == pytest.approx(s, abs=1e-12)


def test_counterexample_family_sizes():
    bf1 = counterexample_family(1)
    assert bf1.n_sets == 4 and bf1.space.dim == 16
    bf2 = counterexample_family(2)
    assert bf2.n_sets == 16 and bf2.space.dim == 4112
    assert bf2.blocks[1].offset == 16 and bf2.blocks[1].first_index == 5
    with pytest.raises(ValueError, match="2\\^48"):
        counterexample_family(3)


def test_block_family_json_round_trip():
    from setlaw.families import BlockFamily

    bf = counterexample_family(1)
    payload = bf.to_json()
    # T_1 = {odd ground elements}: alternating bits
    assert payload["blocks"][0]["membership_bitmasks"][0] == "aaaa"
    assert BlockFamily.from_json(payload).to_json() == payload
    with pytest.raises(ValueError):
        payload["blocks"][0]["offset"] = 3
        BlockFamily.from_json(payload)


def test_counterexample_sets_in_unit_ball():
    bf = counterexample_family(2)
    for i in (1, 4):
        v = bf.polytope(i)
        assert set_norm(v) == 1.0
    # block-2 sets are checked through their membership structure: every
    # generator is a basis vector, so the support row is the 0/1 indicator
    for i in (5, 16):
        row = bf.support_row(i)
        assert set(np.unique(row)) == {0.0, 1.0}
        assert row[:16].sum() == 0  # disjoint from block 1
        assert row.sum() == 2048  # half of the block-2 ground set


def test_certificate_examples():
    bf = counterexample_family(1)
    assert certificate_distance(bf, [1, 1, 1, 1], 4) == 0.5
    certs = [certificate_distance(bf, psi_from_int(bits, 4), 4) for bits in range(16)]
    assert min(certs) == 0.25
    assert min(certs) >= 1.0 / 16.0
    with pytest.raises(ValueError):
        certificate_distance(bf, [1, 1], 4)
    with pytest.raises(ValueError):
        certificate_distance(bf, [1, 1, 2, 0], 4)


def test_certificate_block2_floor(rng):
    bf = counterexample_family(2)
    for _ in range(50):
        psi = rng.integers(0, 2, size=16)
        cert = certificate_distance(bf, psi, 16)
        # disjoint blocks: block 2 alone forces max(#ones, #zeros)/2 >= 6 over
        # its 12 indices, scaled by 1/16
        ones = int(psi[4:].sum())
        expected_floor = max(ones, 12 - ones) / 2.0 / 16.0
        assert cert >= expected_floor - 1e-15
        assert cert >= 3.0 / 16.0


def test_certificate_is_lower_bound_of_exact(rng):
    from setlaw import prune

    bf = counterexample_family(1)
    polys = [bf.polytope(i) for i in range(1, 5)]
    full = polys[0]
    for p in polys[1:]:
        full = prune(full + p)  # pruning keeps the hull exactly
    half = scale(1.0 / 8.0, full)
    for bits in (0b0000, 0b0011, 0b1111, 0b1010):
        psi = psi_from_int(bits, 4)
        chosen = [polys[i] for i in range(4) if psi[i]]
        acc = Polytope.origin(bf.space)
        for p in chosen:
            acc = prune(acc + p)
        exact = hausdorff(scale(0.25, acc), half)
        assert exact >= certificate_distance(bf, psi, 4) - 1e-9
