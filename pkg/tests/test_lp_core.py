import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from adplab.lp_core import (Configuration, Exponent, LpVector, as_exponent, basis,
                            distance, norm, powsum, sample_configuration)

P_VALUES = [2.0, 2.1, 2.5, 3.0, 5.0, 8.0]
finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
exponents = st.floats(2.0, 10.0)


@pytest.mark.parametrize("p", [1.5, 1.999, float("nan"), float("inf"), -3.0])
def test_exponent_rejects_invalid(p):
    with pytest.raises(ValueError):
        Exponent(p)


def test_exponent_is_float():
    p = as_exponent(3)
    assert isinstance(p, float) and p == 3.0
    assert as_exponent(p) is p


@pytest.mark.parametrize("p", P_VALUES)
def test_basis_vectors_have_unit_norm_and_distance(p):
    e0, e1 = basis(0, 4, p), basis(1, 4, p)
    assert norm(e0) == 1.0
    assert distance(e0, e1) == pytest.approx(2.0 ** (1.0 / p), rel=1e-15)
    assert distance(e0, -e0) == pytest.approx(2.0, rel=1e-15)


def test_known_norm():
    v = LpVector([3.0, -4.0], 2.0)
    assert norm(v) == pytest.approx(5.0, rel=1e-15)
    assert powsum([1.0, -1.0, 2.0], 3.0) == pytest.approx(10.0)


def test_mismatched_vectors_rejected():
    with pytest.raises(ValueError):
        distance(LpVector([1.0, 0.0], 3.0), LpVector([1.0, 0.0, 0.0], 3.0))
    with pytest.raises(ValueError):
        distance(LpVector([1.0, 0.0], 3.0), LpVector([1.0, 0.0], 4.0))


def test_vector_is_immutable():
    v = LpVector([1.0, 2.0], 3.0)
    with pytest.raises(ValueError):
        v.coords[0] = 5.0


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 5, elements=finite), st.floats(-50, 50), exponents)
def test_norm_homogeneity(x, lam, p):
    v = LpVector(x, p)
    assert norm(v.scale(lam)) == pytest.approx(abs(lam) * norm(v), rel=1e-12, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 4, elements=finite), arrays(np.float64, 4, elements=finite), exponents)
def test_triangle_inequality(x, y, p):
    u, v = LpVector(x, p), LpVector(y, p)
    assert norm(u - v) <= norm(u) + norm(v) + 1e-9 * (1.0 + norm(u) + norm(v))


@pytest.mark.parametrize("p", [2.1, 3.0, 8.0])
@pytest.mark.parametrize("n", [1, 2, 7, 16])
def test_sampled_configuration_normalisations(n, p):
    cfg = sample_configuration(n, d=5, seed=n, p=p)
    assert cfg.n == n and cfg.p == p
    assert cfg.x.powsum() == pytest.approx(1.0 / n, rel=1e-12)
    assert sum(y.powsum() for y in cfg.ys) == pytest.approx(1.0, rel=1e-12)


def test_sampled_configuration_is_seeded():
    a = sample_configuration(4, seed=[1, 2], p=3.0)
    b = sample_configuration(4, seed=[1, 2], p=3.0)
    np.testing.assert_array_equal(a.x.coords, b.x.coords)


def test_configuration_validation():
    p = 3.0
    x = LpVector([0.5 ** (1 / p), 0.0], p)
    with pytest.raises(ValueError):
        Configuration(x, (basis(0, 2, p), basis(1, 2, p)))  # y masses sum to 2
    with pytest.raises(ValueError):
        Configuration(LpVector([1.0, 0.0], p), (basis(0, 2, p), basis(1, 2, p)))
