import numpy as np
import pytest

from ordlab import distributions


def random_joint_model(seed, n_roles=None, alphabet_size=None):
    """Generic full-support joint model drawn from a Dirichlet, seeded."""
    rng = np.random.default_rng(seed)
    if n_roles is None:
        n_roles = int(rng.integers(3, 6))
    if alphabet_size is None:
        alphabet_size = int(rng.integers(2, 5))
    symbols = tuple("abcd"[:alphabet_size])
    roles = tuple(["y"] + [f"x{i}" for i in range(1, n_roles)])
    n_cells = alphabet_size**n_roles
    probs = rng.dirichlet(np.ones(n_cells))
    import itertools

    table = {
        combo: float(p)
        for combo, p in zip(itertools.product(symbols, repeat=n_roles), probs)
    }
    return distributions.make_joint(roles, table, target_role="y")


@pytest.fixture
def and_model():
    """Y = X1 AND X2 over uniform fair bits: strictly decreasing uncertainty."""
    table = {}
    for x1 in "01":
        for x2 in "01":
            y = "1" if x1 == "1" and x2 == "1" else "0"
            table[(y, x1, x2)] = 0.25
    return distributions.make_joint(("y", "x1", "x2"), table, target_role="y")


@pytest.fixture
def parity_model():
    """Y = parity(X1, X2) over uniform fair bits."""
    table = {}
    for x1 in "01":
        for x2 in "01":
            y = str((int(x1) + int(x2)) % 2)
            table[(y, x1, x2)] = 0.25
    return distributions.make_joint(("y", "x1", "x2"), table, target_role="y")
