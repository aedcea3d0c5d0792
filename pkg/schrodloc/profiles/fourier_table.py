""" Tabulated Fourier transform g of the bump, with a certified decay envelope

g has no closed form, and propagators evaluate it millions of times.
It is tabulated once, with its derivative, and interpolated by cubic Hermite pieces.

Because ǧ is real and even, g(ξ) = 2 ∫₀^s cos(ξx) ǧ(x) dx is real and even:
the table stores |ξ| >= 0 only, and its imaginary parts are exactly zero.
"""

from __future__ import annotations

import csv
import logging
import math
from typing import IO, Union

import numpy as np
import numpy.typing as npt
import scipy.interpolate
import scipy.optimize
import scipy.special

from schrodloc import exc
from schrodloc.quadrature import QuadratureSpec, gauss_legendre
from schrodloc.testing.profile import timeit
from schrodloc.typing import RealArray, ComplexArray
from schrodloc.util import fmt

from .bump import BumpProfile

logger = logging.getLogger(__name__)

# Default table extent. g has decayed below 1e-17 well before it.
XI_MAX = 1600.0

# Grid spacing: h(ξ) = H_CORE * exp(√ξ / 4), capped at H_MAX
H_CORE = 0.01
H_MAX = 0.5

# Rows transformed per numpy call
BLOCK_ROWS = 256

# The decay envelope is fitted above this frequency
ENVELOPE_XI_LO = 4.0

# Spec used to build the default table
TABLE_SPEC = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14)

_EPS = float(np.finfo(float).eps)


class DecayEnvelope:
    """ Upper bound |g(ξ)| <= min(peak, exp(a - b √|ξ|))

    Fitted on the running upper envelope of the tabulated |g|, then shifted up to dominate every tabulated sample
    """
    # log-amplitude
    a: float

    # decay rate of √ξ
    b: float

    # Below `xi_lo`, the bound is the flat `peak` = max |g|
    xi_lo: float
    peak: float

    # The envelope is certified (dominates the table) up to this frequency
    xi_certified: float

    __slots__ = 'a', 'b', 'xi_lo', 'peak', 'xi_certified'

    def __init__(self, a: float, b: float, xi_lo: float, peak: float, xi_certified: float):
        if not b > 0:
            raise exc.NumericalError('DecayEnvelope', f'fitted decay rate must be > 0, got {b!r}')
        self.a = a
        self.b = b
        self.xi_lo = xi_lo
        self.peak = peak
        self.xi_certified = xi_certified

    @classmethod
    def fit(cls, grid: RealArray, magnitudes: RealArray, *, floor: float, xi_lo: float = ENVELOPE_XI_LO) -> DecayEnvelope:
        """ Fit log|g| ≈ a - b √ξ on the part of the table that is above the noise floor """
        # Running upper envelope: max over [ξ, ∞)
        upper = np.maximum.accumulate(magnitudes[::-1])[::-1]

        use = (grid >= xi_lo) & (upper > floor)
        if np.count_nonzero(use) < 3:
            raise exc.NumericalError('DecayEnvelope.fit', 'too few samples above the noise floor')

        root = np.sqrt(grid[use])
        log_upper = np.log(upper[use])
        slope, intercept = np.polyfit(root, log_upper, 1)

        # Shift to dominate every sample, with 1% to spare between samples
        intercept += float(np.max(log_upper - (intercept + slope * root))) + math.log(1.01)
        return cls(
            a=float(intercept),
            b=float(-slope),
            xi_lo=xi_lo,
            peak=float(np.max(magnitudes)),
            xi_certified=float(grid[use][-1]),
        )

    @property
    def coefficients(self) -> RealArray:
        return np.array([self.a, self.b])

    def __call__(self, xi: npt.ArrayLike) -> RealArray:
        root = np.sqrt(np.abs(np.asarray(xi, dtype=float)))
        with np.errstate(under='ignore'):
            return np.minimum(self.peak, np.exp(self.a - self.b * root))

    def tail_integral(self, X: float, power: float = 1.0, moment: float = 0.0) -> float:
        """ ∫_X^∞ envelope(ξ)^power ξ^moment dξ, in closed form

        With u = √ξ: 2 e^{pa} ∫ u^{2m+1} e^{-pbu} du = 2 e^{pa} Γ(2m+2, pb√X) / (pb)^{2m+2}
        """
        X = max(float(X), 0.0)
        total = 0.0

        # The flat part
        if X < self.xi_lo:
            total += self.peak ** power * (self.xi_lo ** (moment + 1) - X ** (moment + 1)) / (moment + 1)
            X = self.xi_lo

        return total + math.exp(self._log_tail(X, power, moment))

    def cutoff(self, budget: float, power: float = 1.0, moment: float = 0.0) -> float:
        """ The smallest X >= xi_lo with tail_integral(X) <= budget """
        if not budget > 0:
            raise exc.InvalidParameterError(f'budget must be > 0, got {budget!r}')
        log_budget = math.log(budget)

        def excess(X: float) -> float:
            return self._log_tail(X, power, moment) - log_budget

        lo = self.xi_lo
        if excess(lo) <= 0:
            return lo

        # Bracket
        hi = 4 * lo
        while excess(hi) > 0:
            hi *= 4
            if hi > 1e15:
                raise exc.NumericalError('DecayEnvelope.cutoff', f'no cutoff for budget {budget!r}')

        # Round up, so that the bound holds at the returned point
        X = scipy.optimize.brentq(excess, lo, hi, xtol=1e-9 * hi)
        return float(X * (1 + 1e-9))

    def _log_tail(self, X: float, power: float, moment: float) -> float:
        """ log ∫_X^∞ exp(p(a - b√ξ)) ξ^m dξ """
        c = power * self.b
        s = 2 * moment + 2
        upper = scipy.special.gammaincc(s, c * math.sqrt(X))
        if upper <= 0:
            return -math.inf
        return power * self.a + math.log(2) + math.log(upper) + scipy.special.gammaln(s) - s * math.log(c)

    def export(self) -> dict:
        return {
            'a': self.a,
            'b': self.b,
            'xi_lo': self.xi_lo,
            'peak': self.peak,
            'xi_certified': self.xi_certified,
        }


class FourierTable:
    """ g(ξ) = ∫ e^{-iξx} ǧ(x) dx on a grid dense near 0 and sparse in the tails

    Example:
        table = FourierTable.build(BumpProfile())
        table(np.array([0.0, 3.5, -3.5]))  # g is even
        table.envelope.cutoff(1e-14)        # where the tail ∫|g| drops below 1e-14
    """
    # The bump
    profile: BumpProfile

    # Sample grid: 0 = ξ_0 < ξ_1 < ... < xi_max
    grid: RealArray

    # g(ξ_i); real by construction, stored as complex
    values: ComplexArray

    # g'(ξ_i), used by the Hermite pieces
    derivatives: RealArray

    # A-posteriori error of every tabulated value: |fine rule - coarse rule|
    est_err: RealArray

    # Max interpolation error, measured at the midpoints between samples
    interp_err: float

    # ∫|table - g| over the whole line, estimated from the midpoint and quadrature errors
    error_l1: float

    # The quadrature settings the table was built with
    spec: QuadratureSpec

    # Decay envelope of |g|
    envelope: DecayEnvelope

    __slots__ = 'profile', 'grid', 'values', 'derivatives', 'est_err', 'interp_err', 'spec', 'envelope', 'error_l1', '_spline'

    def __init__(self, profile: BumpProfile, grid: RealArray, values: ComplexArray, derivatives: RealArray,
                 est_err: RealArray, spec: QuadratureSpec, envelope: DecayEnvelope):
        self.profile = profile
        self.grid = grid
        self.values = values
        self.derivatives = derivatives
        self.est_err = est_err
        self.spec = spec
        self.envelope = envelope
        self._spline = scipy.interpolate.CubicHermiteSpline(grid, values.real, derivatives)
        self.interp_err = 0.0
        self.error_l1 = 0.0

    @classmethod
    @timeit
    def build(cls, profile: BumpProfile = BumpProfile(), spec: QuadratureSpec = TABLE_SPEC, *,
              xi_max: float = XI_MAX, h_core: float = H_CORE, h_max: float = H_MAX) -> FourierTable:
        """ Tabulate g with its derivative, measure the interpolation error, fit the decay envelope

        Raises:
            exc.QuadratureNonconvergenceError: a row did not converge within the panel budget
        """
        grid = table_grid(xi_max, h_core, h_max)
        values, derivatives, est_err = cosine_transform(profile, grid, spec)

        # Noise floor of the fit: well above the quadrature errors
        floor = max(1e3 * float(np.max(est_err)), 1e-13 * abs(values[0]))
        envelope = DecayEnvelope.fit(grid, np.abs(values), floor=floor)

        table = cls(profile, grid, values.astype(complex), derivatives, est_err, spec, envelope)

        # Interpolation error at the midpoints
        midpoints = 0.5 * (grid[1:] + grid[:-1])
        direct, _, mid_err = cosine_transform(profile, midpoints, spec)
        mid_errors = np.abs(table._spline(midpoints) - direct) + mid_err
        table.interp_err = float(np.max(mid_errors))
        table.error_l1 = 2 * float(np.sum((mid_errors + np.maximum(est_err[1:], est_err[:-1])) * np.diff(grid)))

        logger.info(f'FourierTable: {len(grid)} samples up to ξ = {xi_max}, '
                    f'quadrature error <= {np.max(est_err):.2e}, interpolation error <= {table.interp_err:.2e}, '
                    f'envelope a={envelope.a:.3f} b={envelope.b:.4f}')
        return table

    @property
    def xi_max(self) -> float:
        return float(self.grid[-1])

    @property
    def tolerance(self) -> float:
        """ Accuracy of any on-table value: quadrature error plus interpolation error """
        return float(np.max(self.est_err)) + self.interp_err

    def __call__(self, xi: npt.ArrayLike) -> ComplexArray:
        """ g(ξ), vectorized; off-table queries fall back to direct quadrature """
        a = np.abs(np.asarray(xi, dtype=float))
        out = np.empty(a.shape, dtype=complex)

        inside = a <= self.xi_max
        out[inside] = self._spline(a[inside])
        if not np.all(inside):
            outside = a[~inside]
            logger.warning(f'FourierTable: {outside.size} off-table queries up to ξ = {outside.max():.6g}, '
                           f'falling back to quadrature')
            out[~inside] = [self.profile.fourier(x, self.spec).value for x in outside]
        return out

    def derivative(self, xi: npt.ArrayLike) -> RealArray:
        """ g'(ξ) on the table; g' is odd """
        xi = np.asarray(xi, dtype=float)
        return np.sign(xi) * self._spline(np.abs(xi), 1)

    def magnitude_bound(self, xi: npt.ArrayLike) -> RealArray:
        """ Bound on |g(ξ)| valid everywhere: the envelope, not below what the table shows """
        return self.envelope(xi)

    def to_csv(self, file: Union[str, IO[str]]) -> None:
        """ Dump the table: xi, re, im, est_err """
        if isinstance(file, str):
            with open(file, 'w', newline='') as f:
                return self.to_csv(f)

        writer = csv.writer(file, lineterminator='\n')
        writer.writerow(('xi', 're', 'im', 'est_err'))
        for xi, value, err in zip(self.grid, self.values, self.est_err):
            writer.writerow((fmt(xi), fmt(value.real), fmt(value.imag), fmt(err)))


def table_grid(xi_max: float, h_core: float = H_CORE, h_max: float = H_MAX) -> RealArray:
    """ 0 = ξ_0 < ... < ξ_N = xi_max with spacing h_core * exp(√ξ / 4), capped at h_max """
    if not (xi_max > 0 and 0 < h_core <= h_max):
        raise exc.InvalidParameterError(f'bad table grid: xi_max={xi_max!r}, h_core={h_core!r}, h_max={h_max!r}')

    points = [0.0]
    while points[-1] < xi_max:
        points.append(points[-1] + min(h_max, h_core * math.exp(math.sqrt(points[-1]) / 4)))
    points[-1] = xi_max

    # The last step may be tiny: merge it
    if len(points) > 2 and points[-1] - points[-2] < 0.5 * h_core:
        del points[-2]
    return np.asarray(points)


def cosine_transform(profile: BumpProfile, xi: RealArray, spec: QuadratureSpec) -> tuple[RealArray, RealArray, RealArray]:
    """ g(ξ) and g'(ξ) for many ξ >= 0 by composite Gauss-Legendre on [0, plateau] and [plateau, support]

    Rows are processed in blocks of neighbours; a block uses the panels its largest ξ needs,
    then doubles them until every row meets the tolerance.

    Returns:
        (values, derivatives, est_err)
    """
    values = np.empty(len(xi))
    derivatives = np.empty(len(xi))
    errors = np.empty(len(xi))

    for start in range(0, len(xi), BLOCK_ROWS):
        rows = xi[start:start + BLOCK_ROWS]
        omega = float(np.max(rows))
        panels = max(1, math.ceil(profile.support_half_width * omega / spec.phase_per_panel))

        coarse, _, _ = _cosine_block(profile, rows, panels, spec.order)
        while True:
            fine, fine_derivative, mass = _cosine_block(profile, rows, 2 * panels, spec.order)
            err = np.maximum(np.abs(fine - coarse), 8 * _EPS * mass)
            target = np.maximum(spec.rel_tol * np.abs(fine), spec.abs_tol)
            if np.all(err <= target):
                break

            worst = int(np.argmax(err - target))
            if 4 * panels > spec.max_panels:
                raise exc.QuadratureNonconvergenceError('FourierTable.build', complex(fine[worst]),
                                                        float(err[worst]), 2 * panels, float(target[worst]))
            coarse = fine
            panels *= 2

        values[start:start + len(rows)] = fine
        derivatives[start:start + len(rows)] = fine_derivative
        errors[start:start + len(rows)] = err

    return values, derivatives, errors


def _cosine_block(profile: BumpProfile, rows: RealArray, panels: int, order: int) -> tuple[RealArray, RealArray, RealArray]:
    """ One composite rule for a block of rows: (g, g', ∫|integrand of g|) """
    nodes, weights = gauss_legendre(order)
    p, s = profile.plateau_half_width, profile.support_half_width
    edges = np.concatenate((np.linspace(0.0, p, panels + 1), np.linspace(p, s, panels + 1)[1:]))
    half = 0.5 * np.diff(edges)
    x = ((edges[:-1] + half)[:, None] + half[:, None] * nodes).ravel()
    w = (half[:, None] * weights).ravel() * profile(x)

    phase = np.outer(rows, x)
    cos = np.cos(phase)
    values = 2 * (cos @ w)
    derivatives = -2 * ((np.sin(phase) * x) @ w)
    mass = 2 * (np.abs(cos) @ w)
    return values, derivatives, mass


__all__ = ['FourierTable', 'DecayEnvelope', 'table_grid', 'cosine_transform', 'XI_MAX', 'TABLE_SPEC']
