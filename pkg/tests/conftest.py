import numpy as np
import pytest

from setlaw import Polytope, Space

ALL_NORMS = ("l1", "l2", "linf")


def make_polytope(rng, space, max_gens=6, box=1.0):
    m = int(rng.integers(1, max_gens + 1))
    return Polytope(space, box * rng.uniform(-1.0, 1.0, size=(m, space.dim)))


def random_space(rng, dims=(1, 2, 3, 4)):
    return Space(int(rng.choice(dims)), str(rng.choice(ALL_NORMS)))


def dual_attainer(space, x):
    """A vector g of norm 1 with <x, g> = dual_norm(x); x assumed nonzero."""
    x = np.asarray(x, dtype=float)
    if space.norm == "l2":
        return x / np.sqrt(np.dot(x, x))
    if space.norm == "linf":
        # dual is l1: the sup over the unit cube is attained at the sign vector
        return np.where(x >= 0, 1.0, -1.0)
    # l1 space, dual linf: attained at a signed coordinate of largest |x_j|
    j = int(np.argmax(np.abs(x)))
    g = np.zeros_like(x)
    g[j] = 1.0 if x[j] >= 0 else -1.0
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
