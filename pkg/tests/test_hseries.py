import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from src.middleware.errors import NegativeFactorial, NoRealSqrt, NotInvertible
from src.models.series import HSeries, exp_h, series_sum
from src.services.qnumbers import binomial, ladder_factor, qbinom_qm2, qfact, qnum

ORDER = 6

coefficient = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False)
series = st.lists(coefficient, min_size=ORDER, max_size=ORDER).map(HSeries)
unit_series = st.tuples(st.floats(min_value=0.5, max_value=2.0), st.lists(coefficient, min_size=ORDER - 1, max_size=ORDER - 1)).map(
    lambda pair: HSeries([pair[0]] + pair[1])
)


@settings(max_examples=50, deadline=None)
@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert ((a * b) * c).allclose(a * (b * c), 1e-9)
    assert (a * b).allclose(b * a, 1e-12)
    assert (a * (b + c)).allclose(a * b + a * c, 1e-9)
    assert (a + HSeries.zero(ORDER)) == a
    assert (a * HSeries.one(ORDER)).allclose(a, 0.0)


@settings(max_examples=50, deadline=None)
@given(unit_series)
def test_inverse_and_sqrt(u):
    assert (u * u.inv()).allclose(1.0, 1e-9)
    root = u.sqrt()
    assert root.leading > 0
    assert (root * root).allclose(u, 1e-9)


def test_inverse_of_one_minus_h_is_geometric():
    u = HSeries([1.0, -1.0] + [0.0] * (ORDER - 2))
    assert_allclose(u.inv().coeffs, np.ones(ORDER), atol=1e-12)


def test_sqrt_of_one_plus_h():
    root = HSeries([1.0, 1.0] + [0.0] * (ORDER - 2)).sqrt()
    expected = [1.0, 0.5, -0.125, 0.0625, -0.0390625, 0.02734375]
    assert_allclose(root.coeffs, expected, atol=1e-12)


def test_inverse_needs_constant_term():
    with pytest.raises(NotInvertible):
        HSeries.monomial(1, order=ORDER).inv()


def test_sqrt_needs_positive_constant_term():
    with pytest.raises(NoRealSqrt):
        HSeries.constant(-1.0, ORDER).sqrt()
    with pytest.raises(NoRealSqrt):
        HSeries.monomial(2, order=ORDER).sqrt()


def test_truncation_to_common_order():
    a = HSeries([1.0, 2.0, 3.0])
    b = HSeries([1.0, 1.0])
    product = a * b
    assert product.order == 2
    assert product.to_list() == [1.0, 3.0]


def test_exp_h_is_a_homomorphism():
    assert (exp_h(2, ORDER) * exp_h(-3, ORDER)).allclose(exp_h(-1, ORDER), 1e-12)
    assert exp_h(1, ORDER).coeffs[3] == pytest.approx(1 / 6)


def test_series_sum():
    total = series_sum([HSeries.one(ORDER), exp_h(1, ORDER)], ORDER)
    assert total.leading == 2.0


def test_quantum_integers():
    for n in range(8):
        value = qnum(n, ORDER)
        assert value.leading == n
        assert_allclose(value.coeffs[1::2], 0.0, atol=1e-12)
        assert qnum(-n, ORDER).allclose(-value, 0.0)
    # [2] = q + q^-1 = 2 + h^2 + h^4/12 + ...
    assert_allclose(qnum(2, ORDER).coeffs, [2.0, 0.0, 1.0, 0.0, 1.0 / 12.0, 0.0], atol=1e-12)


def test_quantum_factorials_and_binomials():
    assert qfact(0, ORDER) == HSeries.one(ORDER)
    assert qfact(3, ORDER).allclose(qnum(2, ORDER) * qnum(3, ORDER), 1e-12)
    with pytest.raises(NegativeFactorial):
        qfact(-1, ORDER)
    for n in range(7):
        for k in range(n + 1):
            assert qbinom_qm2(n, k, ORDER).leading == pytest.approx(math.comb(n, k), abs=1e-12)
            assert binomial(n, k, False, ORDER) == HSeries.constant(float(math.comb(n, k)), ORDER)
    assert qbinom_qm2(3, 5, ORDER).is_zero()
    # [2, 1]_{q^-2} = 1 + q^-2
    assert qbinom_qm2(2, 1, ORDER).allclose(1.0 + exp_h(-2, ORDER), 1e-12)


def test_ladder_factor_classical_limit():
    # F |1, 1> on spin one: sqrt(2) classically
    assert ladder_factor(2, 2, False, ORDER) == HSeries.constant(math.sqrt(2.0), ORDER)
    deformed = ladder_factor(2, 2, True, ORDER)
    assert deformed.leading == math.sqrt(2.0)
    assert not deformed.allclose(deformed.classical_limit(), 1e-6)
