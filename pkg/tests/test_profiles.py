import math

import numpy as np
import pytest

from schrodloc import exc
from schrodloc.profiles import BumpProfile, FourierTable, FrequencyBump, bump_eval, bump_fourier, smoothstep
from schrodloc.profiles import finite_difference_bound, frequency_bump, psi_eval, table_grid
from schrodloc.quadrature import QuadratureSpec


@pytest.mark.parametrize(('x', 'expected'), [
    # Plateau
    (0.0, 1.0),
    (0.3, 1.0),
    (-0.5, 1.0),
    # Middle of the transition band
    (0.75, 0.5),
    (-0.75, 0.5),
    # Outside of the support: exactly 0
    (1.0, 0.0),
    (-1.2, 0.0),
    (7.0, 0.0),
])
def test_bump_values(x: float, expected: float):
    assert bump_eval(x) == pytest.approx(expected, abs=1e-15)


def test_bump_shape():
    """ Test BumpProfile: even, monotone on the transition band, mass exact """
    profile = BumpProfile()
    x = np.linspace(0.0, 1.5, 301)
    assert np.array_equal(profile(x), profile(-x))
    assert np.all(np.diff(profile(x)) <= 0)
    assert np.all((profile(x) >= 0) & (profile(x) <= 1))

    # σ(u) + σ(1 - u) = 1
    u = np.linspace(-0.5, 1.5, 41)
    assert np.allclose(smoothstep(u) + smoothstep(1 - u), 1.0)

    spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14)
    assert profile.mass() == 1.5
    assert profile.l1_norm(spec).value.real == pytest.approx(1.5, rel=1e-10)
    assert 0 < finite_difference_bound(profile, 2) < math.inf


@pytest.mark.parametrize(('kwargs'), [
    dict(plateau_half_width=1.0, support_half_width=1.0),
    dict(plateau_half_width=0.0),
    dict(sharpness=0.0),
])
def test_bump_invalid(kwargs: dict):
    with pytest.raises(exc.InvalidParameterError):
        BumpProfile(**kwargs)


def test_bump_fourier():
    """ Test bump_fourier(): g(0) = ∫ǧ, g real and even """
    assert bump_fourier(0.0, 1e-12) == pytest.approx(1.5, abs=1e-11)
    value = bump_fourier(3.7, 1e-12)
    assert abs(value.imag) <= 1e-11
    assert bump_fourier(-3.7, 1e-12) == pytest.approx(value, abs=1e-11)

    with pytest.raises(exc.InvalidParameterError):
        bump_fourier(1.0, 0.0)


def test_table_grid():
    grid = table_grid(100.0)
    assert grid[0] == 0.0 and grid[-1] == 100.0
    assert np.all(np.diff(grid) > 0)
    # Spacing grows with ξ, up to the cap
    assert np.diff(grid)[0] == pytest.approx(0.01)
    assert np.max(np.diff(grid)) <= 0.5

    with pytest.raises(exc.InvalidParameterError):
        table_grid(0.0)


@pytest.mark.parametrize('xi', [0.0, 0.3, 7.7, 55.5, 300.25, 1234.5])
def test_table_against_quadrature(table: FourierTable, xi: float):
    """ Test FourierTable: interpolated values against direct quadrature """
    direct = bump_fourier(xi, 1e-13)
    assert abs(complex(table(xi)) - direct) <= table.tolerance + 1e-12
    # Even
    assert complex(table(-xi)) == complex(table(xi))


def test_table_envelope(table: FourierTable):
    """ Test DecayEnvelope: dominates the table where it is certified; tails in closed form """
    envelope = table.envelope
    assert envelope.b > 0
    assert table.tolerance < 1e-9

    certified = (table.grid >= envelope.xi_lo) & (table.grid <= envelope.xi_certified)
    assert np.all(envelope(table.grid[certified]) >= np.abs(table.values[certified]))
    assert np.all(table.magnitude_bound(table.grid) <= envelope.peak)

    # The cutoff meets its budget
    for budget in (1e-6, 1e-10, 1e-13):
        X = envelope.cutoff(budget)
        assert envelope.tail_integral(X) <= budget * (1 + 1e-6)
        assert X <= table.xi_max

    # Tails shrink
    assert envelope.tail_integral(50.0) > envelope.tail_integral(100.0) > 0


def test_frequency_bump(table: FourierTable, spec: QuadratureSpec):
    """ Test FrequencyBump: normalization, ψ(0) = 1, both routes to ψ agree """
    bump = FrequencyBump(2, table)
    assert bump.r == 1.0
    assert bump.dim == 1
    assert bump.hat_l1() == pytest.approx(2 * math.pi)
    assert bump.hat_l1_quadrature(spec).value.real == pytest.approx(2 * math.pi, rel=1e-8)

    assert float(bump.psi(0.0)) == pytest.approx(1.0, abs=1e-9)
    for y in (0.0, 1.3, 7.5, 40.0):
        assert psi_eval(y, spec) == pytest.approx(float(bump.psi(y)), abs=1e-7)

    # n = 3: r = 1/√2, Φ is a product
    bump3 = frequency_bump(3)
    assert bump3.r == pytest.approx(2 ** -0.5)
    xprime = np.array([0.4, -2.0])
    assert float(bump3.phi(xprime)) == pytest.approx(float(bump3.psi(0.4) * bump3.psi(-2.0)))
    value = bump3.phi_eval(xprime, spec)
    assert value.value.real == pytest.approx(float(bump3.phi(xprime)), abs=1e-7)

    with pytest.raises(exc.InvalidParameterError):
        FrequencyBump(1, table)
    with pytest.raises(exc.InvalidParameterError):
        bump3.phi_eval(np.array([0.1]), spec)
