"""Combinatorial and geometric families used by the divergence construction.

The binary-encoded subset family realizes the witness property: over a
ground set of size 2^n there are n subsets such that every sub-collection
of indices is the exact membership pattern of some ground element.  From
it, convex hulls of canonical basis vectors give set families whose
signed combinations have support-function norm at least half the total
coefficient mass, with an explicit coordinate functional as certificate.
Stacking such families over disjoint coordinate blocks produces the
family whose Bernoulli-scaled running averages stay uniformly far from
their expectation averages.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Polytope, Space

MAX_FAMILY_EXPONENT = 20


@dataclass(frozen=True, eq=False)
class SubsetFamily:
    """n subsets of {0, ..., 2^n - 1} with the witness property.

    member[j, m] is True when ground element m belongs to the (j+1)-th set;
    the realization is T_j = {m : bit j-1 of m is set}.
    """

    n: int
    member: np.ndarray = field(repr=False)

    def __eq__(self, other):
        if not isinstance(other, SubsetFamily):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.member, other.member))

    __hash__ = None

    @property
    def ground_size(self) -> int:
        return 2**self.n

    def subset(self, j: int) -> np.ndarray:
        """Elements of T_j (1-based j) in increasing order."""
        if not 1 <= j <= self.n:
            raise ValueError(f"subset index {j} out of range 1..{self.n}")
        return np.flatnonzero(self.member[j - 1])

    def membership_pattern(self, m: int) -> frozenset:
        """The set of indices j with m in T_j."""
        if not 0 <= m < self.ground_size:
            raise ValueError(f"ground element {m} out of range")
        return frozenset(int(j) + 1 for j in np.flatnonzero(self.member[:, m]))


def combinatorial_family(n: int) -> SubsetFamily:
    """The binary-encoded family of n witness subsets over 2^n elements."""
    if not 1 <= n <= MAX_FAMILY_EXPONENT:
        raise ValueError(f"family exponent must be in 1..{MAX_FAMILY_EXPONENT}, got {n}")
    ground = np.arange(2**n, dtype=np.int64)
    member = np.empty((n, 2**n), dtype=bool)
    for j in range(n):
        member[j] = (ground >> j) & 1 == 1
    return SubsetFamily(n, member)


def witness_element(family: SubsetFamily, w) -> int:
    """The ground element whose membership pattern is exactly w."""
    w = frozenset(int(j) for j in w)
    for j in w:
        if not 1 <= j <= family.n:
            raise ValueError(f"index {j} outside 1..{family.n}")
    return sum(1 << (j - 1) for j in w)


@dataclass(frozen=True, eq=False)
class AuerbachSystem:
    """Unit vectors whose combinations dominate the largest coefficient."""

    space: Space
    vectors: np.ndarray = field(repr=False)

    def __eq__(self, other):
        if not isinstance(other, AuerbachSystem):
            return NotImplemented
        return self.space == other.space and bool(np.array_equal(self.vectors, other.vectors))

    __hash__ = None

    def combination(self, coeffs) -> np.ndarray:
        b = np.asarray(coeffs, dtype=float)
        if b.shape != (self.vectors.shape[0],):
            raise ValueError("coefficient vector has the wrong length")
        return b @ self.vectors

    def slack(self, coeffs) -> float:
        """||sum b_k e_k|| - max |b_k|; nonnegative for a valid system."""
        b = np.asarray(coeffs, dtype=float)
        return self.space.norm_of(self.combination(b)) - float(np.abs(b).max())


def auerbach_canonical(space: Space, n: int) -> AuerbachSystem:
    """First n canonical basis vectors; the domination inequality is exact
    coordinate-wise for each of the three norm tags."""
    if n > space.dim:
        raise ValueError(f"cannot pick {n} basis vectors in dimension {space.dim}")
    if n < 1:
        raise ValueError("need at least one vector")
    return AuerbachSystem(space, np.eye(space.dim)[:n])


def basis_hull_family(n: int, offset: int, space: Space) -> list[Polytope]:
    """The n basis-vector hulls V_k = conv{e_(offset+m) : m in T_k}.

    Requires a sup-norm space (the canonical basis is an exact Auerbach
    system there) with at least offset + 2^n coordinates.
    """
    if space.norm != "linf":
        raise ValueError("basis-hull families are built in sup-norm spaces")
    family = combinatorial_family(n)
    if space.dim < offset + family.ground_size:
        raise ValueError(
            f"space dimension {space.dim} too small: need {offset + family.ground_size}"
        )
    out = []
    for k in range(1, n + 1):
        rows = family.subset(k) + offset
        gens = np.zeros((rows.size, space.dim))
        gens[np.arange(rows.size), rows] = 1.0
        out.append(Polytope(space, gens, tag=f"V{k}"))
    return out


def coefficient_lower_bound(family: SubsetFamily, coeffs) -> tuple[int, float]:
    """Certificate for the half-mass bound on signed combinations.

    Picks the sign class of larger absolute mass (positives on ties), and
    returns the witness ground element m together with s = the mass of the
    chosen class.  Evaluating the signed membership sum at m gives exactly
    s, and s >= half the total mass.
    """
    a = np.asarray(coeffs, dtype=float)
    if a.shape != (family.n,):
        raise ValueError(f"coefficient vector must have length {family.n}")
    pos_mass = float(a[a > 0].sum())
    neg_mass = float(-a[a < 0].sum())
    if pos_mass >= neg_mass:
        w = {int(j) + 1 for j in np.flatnonzero(a > 0)}
        s = pos_mass
    else:
        w = {int(j) + 1 for j in np.flatnonzero(a <= 0)}
        s = neg_mass
    return witness_element(family, w), s


def signed_membership_value(family: SubsetFamily, coeffs, m: int) -> float:
    """sum_k a_k * [m in T_k]: the certificate evaluation at element m."""
    a = np.asarray(coeffs, dtype=float)
    return float(a @ family.member[:, m])


@dataclass(frozen=True)
class Block:
    """One coordinate block: a subset family placed at a coordinate offset."""

    family: SubsetFamily
    offset: int
    first_index: int  # 1-based global index of the block's first set

    @property
    def size(self) -> int:
        return self.family.n


@dataclass(frozen=True)
class BlockFamily:
    """Basis-hull families stacked over disjoint coordinate blocks.

    Block 1 holds sets 1..4 built from a family of 4 subsets (16
    coordinates); block m >= 2 holds sets 4^(m-1)+1 .. 4^m built from a
    family of 4^m - 4^(m-1) subsets (2^(4^m - 4^(m-1)) coordinates).
    Polytopes are materialized on demand: the certificate path only needs
    the membership tables.
    """

    n_max: int
    blocks: tuple[Block, ...]
    space: Space

    @property
    def n_sets(self) -> int:
        return 4**self.n_max

    def block_of(self, i: int) -> Block:
        if not 1 <= i <= self.n_sets:
            raise ValueError(f"set index {i} out of range 1..{self.n_sets}")
        for block in self.blocks:
            if block.first_index <= i < block.first_index + block.size:
                return block
        raise AssertionError("blocks do not cover the index range")

    def polytope(self, i: int) -> Polytope:
        """The i-th set (1-based) as a polytope in the full space."""
        block = self.block_of(i)
        local = i - block.first_index + 1
        rows = block.family.subset(local) + block.offset
        gens = np.zeros((rows.size, self.space.dim))
        gens[np.arange(rows.size), rows] = 1.0
        return Polytope(self.space, gens, tag=f"V{i}")

    def support_row(self, i: int) -> np.ndarray:
        """Support values of set i at the positive canonical directions:
        the 0/1 membership indicator laid out over the full dimension."""
        block = self.block_of(i)
        local = i - block.first_index + 1
        row = np.zeros(self.space.dim)
        row[block.offset : block.offset + block.family.ground_size] = block.family.member[
            local - 1
        ]
        return row

    def to_json(self) -> dict:
        """Block offsets plus per-set membership bitmasks (hex strings,
        ground element m encoded as bit m)."""
        blocks = []
        for block in self.blocks:
            masks = []
            for j in range(block.size):
                bits = 0
                for m in np.flatnonzero(block.family.member[j]):
                    bits |= 1 << int(m)
                masks.append(format(bits, "x"))
            blocks.append(
                {
                    "offset": block.offset,
                    "first_index": block.first_index,
                    "family_size": block.size,
                    "membership_bitmasks": masks,
                }
            )
        return {
            "n_max": self.n_max,
            "space": {"dim": self.space.dim, "norm": self.space.norm},
            "blocks": blocks,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "BlockFamily":
        bf = counterexample_family(int(payload["n_max"]))
        if bf.to_json() != payload:
            raise ValueError("payload does not describe a block family of this construction")
        return bf


def counterexample_family(n_max: int) -> BlockFamily:
    """The block family underlying the divergence construction.

    Only n_max in {1, 2} is materializable: the third block would need a
    family of 48 subsets over 2^48 coordinates (~10^14), far beyond any
    in-memory representation.
    """
    if not isinstance(n_max, int) or n_max < 1:
        raise ValueError("n_max must be a positive integer")
    if n_max > 2:
        raise ValueError(
            "n_max >= 3 is infeasible: block 3 alone requires 2^48 coordinates "
            "(about 2.8e14), so only n_max in {1, 2} can be materialized"
        )
    blocks = []
    offset = 0
    first = 1
    for m in range(1, n_max + 1):
        size = 4 if m == 1 else 4**m - 4 ** (m - 1)
        family = combinatorial_family(size)
        blocks.append(Block(family, offset, first))
        offset += family.ground_size
        first += size
    space = Space(offset, "linf")
    return BlockFamily(n_max, tuple(blocks), space)


def certificate_distance(bf: BlockFamily, psi, n_sets: int) -> float:
    """Certified lower bound on the Hausdorff distance between the
    psi-selected running average and the half-sum expectation average.

    Evaluates max over positive canonical directions of
    |(1/N) sum_i (psi_i - 1/2) h_{V_i}|, using support additivity; runs in
    O(N * dim) without forming any Minkowski sum.
    """
    psi = np.asarray(psi)
    if n_sets != bf.n_sets:
        raise ValueError(f"N must equal {bf.n_sets} for this family, got {n_sets}")
    if psi.shape != (n_sets,):
        raise ValueError(f"psi must have length {n_sets}")
    if not np.isin(psi, (0, 1)).all():
        raise ValueError("psi entries must be 0 or 1")
    coeffs = psi.astype(float) - 0.5
    best = 0.0
    for block in bf.blocks:
        local = coeffs[block.first_index - 1 : block.first_index - 1 + block.size]
        sums = local @ block.family.member
        best = max(best, float(np.abs(sums).max()))
    return best / n_sets


def psi_from_int(bits: int, n_sets: int) -> np.ndarray:
    """Unpack an integer bit pattern into a 0/1 vector (set 1 = bit 0)."""
    if bits < 0 or bits >= 1 << n_sets:
        raise ValueError(f"pattern {bits} does not fit {n_sets} bits")
    return np.array([(bits >> i) & 1 for i in range(n_sets)], dtype=np.int64)
