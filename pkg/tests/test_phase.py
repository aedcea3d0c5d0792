import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schrodloc import exc
from schrodloc.quadrature import PhaseAccumulator, QuadraticPhase, PHASE_CEILING
from schrodloc.quadrature import dd_div, dd_mul, reduce_2pi, two_prod, two_sum

mpmath.mp.prec = 300

# Doubles whose products and error terms stay normal
moderate = st.one_of(
    st.just(0.0),
    st.floats(min_value=1e-60, max_value=1e60),
    st.floats(min_value=-1e60, max_value=-1e-60),
)


def angle_difference(a: float, b) -> float:
    """ |a - b| modulo 2π, in [0, π] """
    d = mpmath.mpf(a) - b
    return float(abs(d - 2 * mpmath.pi * mpmath.nint(d / (2 * mpmath.pi))))


def reference_reduction(x) -> float:
    """ x mod 2π in [-π, π], in multiprecision """
    return x - 2 * mpmath.pi * mpmath.nint(x / (2 * mpmath.pi))


@given(a=moderate, b=moderate)
def test_two_sum_exact(a: float, b: float):
    """ Test two_sum(): a + b = s + e, exactly """
    s, e = two_sum(a, b)
    assert mpmath.mpf(float(s)) + mpmath.mpf(float(e)) == mpmath.mpf(a) + mpmath.mpf(b)


@given(a=moderate, b=moderate)
def test_two_prod_exact(a: float, b: float):
    """ Test two_prod(): a b = p + e, exactly """
    p, e = two_prod(a, b)
    assert mpmath.mpf(float(p)) + mpmath.mpf(float(e)) == mpmath.mpf(a) * mpmath.mpf(b)


@given(a=st.floats(min_value=1e-8, max_value=1e8), b=st.floats(min_value=1e-8, max_value=1e8))
def test_dd_mul_dd_div(a: float, b: float):
    """ Test dd_mul() and dd_div(): double-double accuracy """
    hi, lo = dd_mul(a, 0.0, b, 0.0)
    exact = mpmath.mpf(a) * mpmath.mpf(b)
    assert abs(mpmath.mpf(float(hi)) + mpmath.mpf(float(lo)) - exact) <= abs(exact) * 1e-30

    hi, lo = dd_div(a, 0.0, b)
    exact = mpmath.mpf(a) / mpmath.mpf(b)
    assert abs(mpmath.mpf(float(hi)) + mpmath.mpf(float(lo)) - exact) <= abs(exact) * 1e-30


@settings(max_examples=200)
@given(x=st.floats(min_value=-1e14, max_value=1e14))
def test_reduce_2pi(x: float):
    """ Test reduce_2pi(): large phases keep their digits after the decimal point """
    r = float(reduce_2pi(x))
    assert -math.pi <= r <= math.pi
    assert angle_difference(r, reference_reduction(mpmath.mpf(x))) <= 1e-12


@pytest.mark.parametrize(('a', 'b', 'x'), [
    # t ξ² + x ξ at the scales of the finest stages
    (1e-3, 1e5, 1e4),
    (6.103515625e-05, 0.5, 2.0 ** 20),
    (-3.3e-7, 123.456, 3.7e6),
    (2.5, -7.25, 1e6),
])
def test_quadratic_phase(a: float, b: float, x: float):
    """ Test QuadraticPhase: e^{iθ(x)} against multiprecision """
    phase = QuadraticPhase(a=(a, 0.0), b=(b, 0.0), where='test')
    exact = mpmath.mpf(a) * mpmath.mpf(x) ** 2 + mpmath.mpf(b) * mpmath.mpf(x)
    reduced = float(phase.accumulate(np.array([x])).reduced()[0])
    assert angle_difference(reduced, reference_reduction(exact)) <= 1e-9

    value = complex(phase.unit(np.array([x]))[0])
    assert abs(value - complex(mpmath.expj(exact))) <= 1e-9


def test_quadratic_phase_variation():
    """ Test QuadraticPhase: oscillation bounds and costs """
    phase = QuadraticPhase(a=(1.0, 0.0), b=(0.0, 0.0))
    # θ' = 2x
    assert phase.variation(-1.0, 1.0) == pytest.approx(2.0)
    assert float(phase.oscillation()(np.array([0.0]), np.array([3.0]))[0]) == pytest.approx(6.0)
    assert phase.magnitude(-2.0, 1.0) == pytest.approx(4.0)


def test_phase_accumulator():
    """ Test PhaseAccumulator: compensated sums """
    # 1e12 + 0.5 - 1e12: the half survives
    acc = PhaseAccumulator(where='test')
    acc.add(1e12).add(0.5).add(-1e12)
    assert float(acc.reduced()) == pytest.approx(0.5, abs=1e-15)

    # A product taken exactly: (2^30 + 1) (2^30 - 1) = 2^60 - 1
    acc = PhaseAccumulator(where='test', ceiling=1e20)
    acc.add_product(2.0 ** 30 + 1, 2.0 ** 30 - 1)
    acc.add(-(2.0 ** 60))
    assert float(acc.head + acc.tail) == -1.0

    # Vectorized
    acc = PhaseAccumulator(where='test')
    acc.add_product(np.array([1.0, 2.0]), math.pi)
    assert np.allclose(acc.unit(), [-1.0, 1.0])


def test_phase_accumulator_ceiling():
    """ Test PhaseAccumulator: phases beyond the ceiling raise """
    acc = PhaseAccumulator(where='test')
    acc.add(0.5 * PHASE_CEILING)
    with pytest.raises(exc.PrecisionLossError) as e:
        acc.add(0.6 * PHASE_CEILING)
    assert e.value.where == 'test'
    assert e.value.magnitude > PHASE_CEILING
