import cmath
import math

import numpy as np
import pytest

from schrodloc import exc
from schrodloc.quadrature import QuadratureSpec, integrate, integrate_batch, integrate_box, linear_oscillation
from schrodloc.quadrature import linear_phase_variation


@pytest.mark.parametrize(('func', 'a', 'b', 'breakpoints', 'expected'), [
    # Polynomials are exact
    (lambda x: x ** 3, 0.0, 1.0, (), 0.25),
    (lambda x: 3 * x ** 2 - 2 * x, -1.0, 2.0, (), 6.0),
    # Kinks go to breakpoints
    (np.abs, -1.0, 2.0, (0.0,), 2.5),
    # Smooth, non-polynomial
    (np.exp, 0.0, 1.0, (), math.e - 1),
    (lambda x: 1 / (1 + x * x), -1.0, 1.0, (), math.pi / 2),
    # Backwards
    (lambda x: x ** 3, 1.0, 0.0, (), -0.25),
    # Empty
    (np.exp, 0.5, 0.5, (), 0.0),
])
def test_integrate(func, a: float, b: float, breakpoints: tuple, expected: float):
    """ Test integrate(): values against closed forms """
    spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14)
    result = integrate(func, a, b, spec, breakpoints=breakpoints)
    assert abs(result.value - expected) <= 1e-11
    assert result.est_error <= 1e-10


@pytest.mark.parametrize(('omega', 'length'), [
    (10.0, 1.0),
    (1e3, 1.3),
    (-2.5e4, 0.7),
])
def test_integrate_oscillatory(omega: float, length: float):
    """ Test integrate(): ∫ e^{iωx} with an oscillation bound """
    spec = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-13)
    result = integrate(lambda x: np.exp(1j * omega * x), 0.0, length, spec,
                       oscillation=linear_oscillation(abs(omega), 0.0))
    expected = (cmath.exp(1j * omega * length) - 1) / (1j * omega)
    assert abs(result.value - expected) <= 1e-9
    # The oscillation bound sets the initial panels
    assert result.panels >= abs(omega) * length / spec.phase_per_panel


def test_integrate_history():
    """ Test integrate(): the error history is recorded on demand """
    spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14)
    result = integrate(lambda x: np.sqrt(x + 1e-3), 0.0, 1.0, spec, record_history=True)
    assert result.history is not None
    assert result.history[-1] == result.est_error

    result = integrate(lambda x: np.sqrt(x + 1e-3), 0.0, 1.0, spec)
    assert result.history is None


def test_integrate_nonconvergence():
    """ Test integrate(): an exhausted panel budget raises, and keeps the best value """
    spec = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-16, max_panels=8)
    with pytest.raises(exc.QuadratureNonconvergenceError) as e:
        integrate(lambda x: np.sin(1e4 * x), 0.0, 1.0, spec, where='test')
    assert e.value.where == 'test'
    assert e.value.panels <= 8
    assert isinstance(e.value, exc.NumericalError)


def test_integrate_box():
    """ Test integrate_box(): iterated integrals """
    spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14)

    # ∫∫ xy over the unit square
    result = integrate_box(lambda p: p[:, 0] * p[:, 1], [(0.0, 1.0), (0.0, 1.0)], spec)
    assert abs(result.value - 0.25) <= 1e-11

    # ∫∫ e^{i(x + 2y)} over [0, 1] × [0, 2]
    result = integrate_box(lambda p: np.exp(1j * (p[:, 0] + 2 * p[:, 1])), [(0.0, 1.0), (0.0, 2.0)], spec)
    expected = (cmath.exp(1j) - 1) / 1j * (cmath.exp(4j) - 1) / 2j
    assert abs(result.value - expected) <= 1e-10

    # One axis: same as integrate()
    result = integrate_box(lambda p: p[:, 0] ** 2, [(0.0, 3.0)], spec)
    assert abs(result.value - 9.0) <= 1e-10


def test_integrate_batch():
    """ Test integrate_batch(): many frequencies, one shared rule """
    spec = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-13)
    omegas = np.array([0.5, 3.0, 40.0])
    values, errors = integrate_batch(lambda x: np.exp(1j * omegas[:, None] * x[None, :]), 0.0, 1.0, spec,
                                     omega=float(omegas.max()))
    expected = (np.exp(1j * omegas) - 1) / (1j * omegas)
    assert np.all(np.abs(values - expected) <= 1e-9)
    assert errors.shape == (3,)


@pytest.mark.parametrize(('c0', 'c1', 'a', 'b', 'expected'), [
    # Constant derivative
    (2.0, 0.0, 0.0, 3.0, 6.0),
    # Derivative with a root inside: both halves count
    (0.0, 2.0, -1.0, 1.0, 2.0),
    (-1.0, 1.0, 0.0, 2.0, 1.0),
])
def test_linear_phase_variation(c0: float, c1: float, a: float, b: float, expected: float):
    assert linear_phase_variation(c0, c1, a, b) == pytest.approx(expected)


@pytest.mark.parametrize(('kwargs'), [
    dict(rel_tol=0.0),
    dict(abs_tol=-1.0),
    dict(max_panels=0),
    dict(order=1),
    dict(phase_per_panel=0.0),
])
def test_quadrature_spec_invalid(kwargs: dict):
    with pytest.raises(exc.InvalidParameterError):
        QuadratureSpec(**kwargs)


def test_quadrature_spec():
    spec = QuadratureSpec.from_tolerance(1e-8)
    assert spec.rel_tol == 1e-8
    assert spec.abs_tol == pytest.approx(1e-11)

    # Budget
    assert spec.target(0.0) == spec.abs_tol
    assert spec.target(10.0) == pytest.approx(1e-7)

    # Stricter and looser
    refined = spec.refined(4.0)
    assert refined.rel_tol == pytest.approx(2.5e-9)
    assert refined.phase_per_panel == pytest.approx(spec.phase_per_panel / 4)
    assert spec.relaxed(10.0).abs_tol == pytest.approx(1e-10)
