import math

import numpy as np
import pytest
from hypothesis import strategies as st

thetas = st.floats(0.0, math.pi, allow_nan=False)
phis = st.floats(0.0, 2 * math.pi, allow_nan=False)
probs = st.floats(0.0, 1.0, allow_nan=False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_params(rng, n):
    """``n`` rows of (theta, phi, p) uniform over the physical box."""
    return np.column_stack([rng.uniform(0, math.pi, n), rng.uniform(0, 2 * math.pi, n), rng.uniform(0, 1, n)])


def random_hermitian(rng, n=9, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2
