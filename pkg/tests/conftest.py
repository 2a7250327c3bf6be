from fractions import Fraction

import numpy as np
import pytest

import hodgecell as hc


@pytest.fixture(scope="session")
def w1():
    return hc.weight1_frame()


@pytest.fixture(scope="session")
def w1_std(w1):
    return hc.AdaptedBasis.standard(w1)


@pytest.fixture(scope="session")
def hk3():
    return hc.hk_weight2_frame(3)


@pytest.fixture(scope="session")
def hk19():
    return hc.hk_weight2_frame(19)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def exact_det(rows):
    """Bareiss fraction-free determinant of an integer matrix."""
    a = [[Fraction(int(x)) for x in r] for r in rows]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def random_tau(rng, n, radius=0.5):
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z / np.linalg.norm(z) * radius * rng.uniform() ** (1.0 / (2 * n))
