# coding=utf-8
"""Unit tests for :mod:`legproj.legendre`."""
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from legproj import exceptions
from legproj import legendre
from legproj import testfam
from legproj.enums import CoeffKind
from legproj.enums import EvalMode
from legproj.types import CoeffVector
from legproj.types import TestFamilyParams


@pytest.mark.parametrize("i,x,expected", [(0, 0.3, 1.0), (1, -0.5, -0.5), (2, 0.5, -0.125)])
def test_eval_standardized(i, x, expected):
    """Test the recurrence on low degrees."""
    assert legendre.eval_standardized(i, x) == expected


def test_eval_standardized_array():
    """Test arrays of points produce arrays of values."""
    x = np.array([-1.0, 0.0, 1.0])
    np.testing.assert_array_equal(legendre.eval_standardized(3, x), [-1.0, 0.0, 1.0])


def test_eval_standardized_out_of_domain():
    """Test points outside of the interval are evaluated with a warning."""
    with pytest.warns(exceptions.OutOfDomainWarning):
        value = legendre.eval_standardized(2, 2.0)
    assert value == 5.5


def test_eval_normalized_examples():
    """Test the normalized values quoted for low degrees."""
    assert legendre.eval_normalized(0, 0.7) == 0.7071067811865476
    assert legendre.eval_normalized(1, 1.0) == 1.224744871391589


def test_eval_normalized_matches_explicit_sum():
    """Test ``P^_4(0)`` against the constant term of the explicit formula."""
    expected = math.sqrt(4.5) * legendre.explicit_coefficient(4, 2)
    assert legendre.explicit_coefficient(4, 2) == 0.375
    assert legendre.eval_normalized(4, 0.0) == pytest.approx(expected, abs=1e-15)


def test_eval_normalized_all_examples():
    """Test whole sweeps at simple points."""
    np.testing.assert_array_equal(legendre.eval_normalized_all(1, 0.0), [math.sqrt(0.5), 0.0])
    np.testing.assert_allclose(
        legendre.eval_normalized_all(2, 1.0),
        [1 / math.sqrt(2), math.sqrt(1.5), math.sqrt(2.5)],
        rtol=1e-15,
    )


def test_eval_normalized_all_is_bitwise_consistent():
    """Test every element of a sweep equals the single evaluation exactly."""
    values = legendre.eval_normalized_all(64, 0.37)
    for i in range(65):
        assert values[i] == legendre.eval_normalized(i, 0.37)


def test_eval_normalized_all_shape():
    """Test the shape of a sweep over an array of points."""
    x = np.linspace(-1, 1, 7)
    assert legendre.eval_normalized_all(5, x).shape == (6, 7)


@pytest.mark.parametrize("i,k,expected", [(2, 0, 1.5), (0, 0, 1.0), (3, 1, -1.5), (3, 0, 2.5)])
def test_explicit_coefficient(i, k, expected):
    """Test explicit coefficients of low degrees."""
    assert legendre.explicit_coefficient(i, k) == expected


@pytest.mark.parametrize("i,k", [(2, 2), (5, 3), (3, -1)])
def test_explicit_coefficient_out_of_range(i, k):
    """Test term indices above ``i // 2`` are rejected."""
    with pytest.raises(exceptions.ExplicitTermError):
        legendre.explicit_coefficient(i, k)


@pytest.mark.parametrize("i", [31, 40, 64, 200])
def test_explicit_coefficient_log_gamma(i):
    """Test the log-gamma path against exact integers, beyond factorial overflow."""
    for k in (0, i // 4, i // 2):
        exact = Fraction(math.comb(i, k) * math.comb(2 * i - 2 * k, i), 2**i)
        value = legendre.explicit_coefficient(i, k)
        assert math.isfinite(value)
        assert value == pytest.approx((-1) ** k * float(exact), rel=1e-11)


def test_recurrence_explicit_agreement():
    """Test the recurrence and the explicit formula agree up to degree 20."""
    x = np.random.default_rng(1234).uniform(-1, 1, 1000)
    for i in range(21):
        recurrence = legendre.eval_standardized(i, x)
        explicit = legendre.eval_standardized_explicit(i, x)
        np.testing.assert_allclose(recurrence, explicit, rtol=0, atol=1e-10)


def test_basis_eval_modes():
    """Test both evaluation strategies of the basis context."""
    x = np.linspace(-1, 1, 11)
    recurrence = legendre.BasisEval(12).evaluate(x)
    explicit = legendre.BasisEval(12, EvalMode.EXPLICIT).evaluate(x)
    np.testing.assert_allclose(recurrence, explicit, rtol=0, atol=1e-12)
    assert legendre.BasisEval(3, EvalMode.EXPLICIT).standardized(2, 0.5) == -0.125
    with pytest.raises(ValueError):
        legendre.BasisEval(-1)


def test_orthonormality():
    """Test ``P^_i`` are orthonormal under a 64 node Gauss-Legendre rule."""
    x, w = legendre.gauss_legendre(64)
    values = legendre.eval_normalized_all(20, x)
    gram = (values * w) @ values.T
    np.testing.assert_allclose(gram, np.eye(21), rtol=0, atol=1e-10)


def test_endpoint_identity():
    """Test ``P_i(1) = 1`` and ``P_i(-1) = (-1) ** i``."""
    for i in range(65):
        assert legendre.eval_standardized(i, 1.0) == pytest.approx(1.0, abs=1e-12)
        assert legendre.eval_standardized(i, -1.0) == pytest.approx((-1) ** i, abs=1e-12)


@pytest.mark.parametrize("i", range(1, 21))
def test_antiderivative_identity(i):
    """Test the closed-form antiderivative of ``P^_i`` against quadrature."""
    for x in (-0.8, -0.1, 0.35, 0.9, 1.0):
        expected, _ = integrate.quad(
            lambda t: legendre.eval_normalized(i, t), -1, x, epsabs=1e-13, epsrel=1e-13, limit=200
        )
        assert legendre.antiderivative_normalized(i, x) == pytest.approx(expected, abs=1e-8)


def test_antiderivative_base_case():
    """Test the antiderivative of the constant polynomial."""
    for x in np.linspace(-1, 1, 9):
        expected = (x + 1) / math.sqrt(2)
        assert legendre.antiderivative_normalized(0, x) == pytest.approx(expected, abs=1e-12)


def test_gauss_legendre_read_only():
    """Test cached nodes cannot be modified by callers."""
    x, w = legendre.gauss_legendre(8)
    with pytest.raises(ValueError):
        x[0] = 0.0
    assert w.sum() == pytest.approx(2.0, abs=1e-14)


def test_inner_product_polynomial():
    """Test projections of ``x ** 2`` onto the basis."""
    assert legendre.inner_product(lambda x: x**2, 0, nodes=16) == pytest.approx(
        math.sqrt(2) / 3, abs=1e-15
    )
    # x ** 2 = (2 P_2 + P_0) / 3
    assert legendre.inner_product(lambda x: x**2, 2, nodes=16) == pytest.approx(
        2 / 3 / math.sqrt(2.5), abs=1e-15
    )
    assert legendre.inner_product(lambda x: np.abs(x), 2, nodes=16, breakpoints=[0]) == (
        pytest.approx(math.sqrt(2.5) / 4, abs=1e-14)
    )


def test_eval_series_constant():
    """Test the constant series ``sqrt(2) P^_0 = 1``."""
    c = CoeffVector(CoeffKind.DENSITY, [math.sqrt(2)])
    assert legendre.eval_series(c, 0.25) == pytest.approx(1.0, abs=1e-15)
    assert legendre.eval_series(CoeffVector(CoeffKind.DENSITY, [0.0, 1.0]), 0.0) == 0.0


def test_eval_series_outside():
    """Test densities vanish and distribution functions saturate outside."""
    g = CoeffVector(CoeffKind.DENSITY, [math.sqrt(0.5), 0.3])
    f = CoeffVector(CoeffKind.DISTRIBUTION, [math.sqrt(0.5), 0.3])
    np.testing.assert_array_equal(legendre.eval_series(g, [-1.5, 1.5]), [0.0, 0.0])
    np.testing.assert_array_equal(legendre.eval_series(f, [-1.5, 1.5]), [0.0, 1.0])


def test_eval_series_test_density():
    """Test the length 64 expansion of the ``(1, 2)`` density at ``x = 0.5``."""
    p = TestFamilyParams(1, 2)
    g = testfam.exact_density_coeffs(p, 64)
    assert legendre.eval_series(g, 0.5) == pytest.approx(6 / 7 * 0.75, abs=2e-3)


def test_antiderivative_transform_uniform():
    """Test the uniform density turns into ``(x + 1) / 2``."""
    g = CoeffVector(CoeffKind.DENSITY, [1 / math.sqrt(2), 0.0, 0.0])
    f = legendre.antiderivative_transform(g)
    assert f.kind is CoeffKind.DISTRIBUTION
    assert len(f) == 2
    expected = [legendre.inner_product(lambda x: (x + 1) / 2, i, nodes=8) for i in range(2)]
    np.testing.assert_allclose(f.coeffs, expected, rtol=0, atol=1e-15)
    assert legendre.eval_series(f, 0.3) == pytest.approx(0.65, abs=1e-14)


def test_antiderivative_transform_constant_only():
    """Test ``F_0 = G_0`` when ``G_1`` vanishes."""
    g = CoeffVector(CoeffKind.DENSITY, [0.4, 0.0, 0.0, 0.0])
    assert legendre.antiderivative_transform(g).coeffs[0] == 0.4


def test_antiderivative_transform_test_family():
    """Test the transform maps exact density coefficients onto exact distribution ones."""
    p = TestFamilyParams(1, 2)
    f = legendre.antiderivative_transform(testfam.exact_density_coeffs(p, 65))
    assert len(f) == 65
    np.testing.assert_allclose(
        f.coeffs, testfam.exact_distribution_coeffs(p, 64).coeffs, rtol=0, atol=1e-12
    )


def test_antiderivative_transform_rejects():
    """Test short or mistyped inputs are rejected."""
    with pytest.raises(exceptions.CoefficientLengthError):
        legendre.antiderivative_transform(CoeffVector(CoeffKind.DENSITY, [1.0]))
    with pytest.raises(ValueError):
        legendre.antiderivative_transform(CoeffVector(CoeffKind.DISTRIBUTION, [1.0, 0.0]))
