import numpy as np
import pytest

from cartanframes.liealg import Subspace, rotation_generator
from cartanframes.threedim import Params3D, family_triple


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


@pytest.fixture
def f_basis3():
    """The three rotation generators of o(3) in canonical order."""
    return (
        rotation_generator(3, 1, 2),
        rotation_generator(3, 1, 3),
        rotation_generator(3, 2, 3),
    )


@pytest.fixture
def so3(f_basis3):
    return Subspace.from_matrices(list(f_basis3))


def build_family(a, b, k):
    return family_triple(Params3D(a, b, k))
