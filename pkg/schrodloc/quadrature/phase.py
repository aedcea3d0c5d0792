""" Compensated phase arithmetic

Phases of the forms D l x, t D² l², x1 (η - 1/v)/v, t (η - 1/v)²/v² reach 1e12 and beyond,
where a plain double keeps no digit after the decimal point.
Phases are accumulated as unevaluated sums head + tail of doubles (double-double),
built from error-free transformations, and reduced modulo 2π with a three-part split of 2π.
All operations are vectorized over numpy arrays and broadcast like numpy does.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from schrodloc import exc
from schrodloc.typing import RealArray, ComplexArray, OscillationBound

from .adaptive import linear_oscillation, linear_phase_variation

# Max raw phase magnitude that keeps the reduction error far below 1e-10 radians
PHASE_CEILING = 1e15

# 2π = TWO_PI_1 + TWO_PI_2 + TWO_PI_3 (Cody-Waite)
TWO_PI_1 = 6.283185307179586
TWO_PI_2 = 2.4492935982947064e-16
TWO_PI_3 = -5.989539619436679e-33

# Veltkamp splitter: 2^27 + 1
_SPLITTER = 134217729.0


def two_sum(a: npt.ArrayLike, b: npt.ArrayLike) -> tuple[RealArray, RealArray]:
    """ Error-free transformation of a sum: a + b = s + e exactly """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def fast_two_sum(a: RealArray, b: RealArray) -> tuple[RealArray, RealArray]:
    """ Error-free sum, valid when |a| >= |b| """
    s = a + b
    e = b - (s - a)
    return s, e


def split(a: RealArray) -> tuple[RealArray, RealArray]:
    """ Split a double into two halves of 26 bits each: a = hi + lo exactly """
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a: npt.ArrayLike, b: npt.ArrayLike) -> tuple[RealArray, RealArray]:
    """ Error-free transformation of a product: a * b = p + e exactly (Dekker) """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p = a * b
    a_hi, a_lo = split(a)
    b_hi, b_lo = split(b)
    e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, e


def dd_add(a_hi: RealArray, a_lo: RealArray, b_hi: RealArray, b_lo: RealArray) -> tuple[RealArray, RealArray]:
    """ Double-double addition """
    s, e = two_sum(a_hi, b_hi)
    e = e + (a_lo + b_lo)
    return fast_two_sum(s, e)


def dd_mul(a_hi: npt.ArrayLike, a_lo: npt.ArrayLike, b_hi: npt.ArrayLike, b_lo: npt.ArrayLike) -> tuple[RealArray, RealArray]:
    """ Double-double product (a_hi + a_lo) * (b_hi + b_lo) """
    p, e = two_prod(a_hi, b_hi)
    e = e + (np.asarray(a_hi, dtype=float) * b_lo + np.asarray(a_lo, dtype=float) * b_hi)
    return fast_two_sum(p, e)


def dd_div(a_hi: npt.ArrayLike, a_lo: npt.ArrayLike, d: npt.ArrayLike) -> tuple[RealArray, RealArray]:
    """ Double-double quotient (a_hi + a_lo) / d for a double d """
    a_hi = np.asarray(a_hi, dtype=float)
    d = np.asarray(d, dtype=float)
    q = a_hi / d
    p, e = two_prod(q, d)
    r = ((a_hi - p) - e) + a_lo
    return fast_two_sum(q, r / d)


def reduce_2pi(head: npt.ArrayLike, tail: npt.ArrayLike = 0.0) -> RealArray:
    """ (head + tail) mod 2π, as a double in [-π, π] """
    head = np.asarray(head, dtype=float)
    tail = np.asarray(tail, dtype=float)
    k = np.rint(head / TWO_PI_1)

    # r = (head + tail) - k * 2π, every product exact
    p1, e1 = two_prod(k, TWO_PI_1)
    p2, e2 = two_prod(k, TWO_PI_2)
    r_hi, r_lo = dd_add(head, tail, -p1, -e1)
    r_hi, r_lo = dd_add(r_hi, r_lo, -p2, -e2)
    r = r_hi + (r_lo - k * TWO_PI_3)

    # Rounding of k may leave r a hair outside of [-π, π]
    r = np.where(r > np.pi, r - TWO_PI_1, r)
    r = np.where(r < -np.pi, r + TWO_PI_1, r)
    return r


class PhaseAccumulator:
    """ A phase accumulated as a compensated sum, reduced modulo 2π on demand

    Example:
        phase = PhaseAccumulator(where='propagate_G_v')
        phase.add_product(D * l, x)
        phase.add_product3(t, D * l, D * l)
        values = phase.unit() * amplitude
    """
    # Compensated sum: head + tail
    head: RealArray
    tail: RealArray

    # Σ of |raw terms| added so far
    magnitude: RealArray

    # The operation name to report
    where: str

    # Raw magnitude limit
    ceiling: float

    __slots__ = 'head', 'tail', 'magnitude', 'where', 'ceiling'

    def __init__(self, *, where: str = 'phase', ceiling: float = PHASE_CEILING):
        self.head = np.zeros(())
        self.tail = np.zeros(())
        self.magnitude = np.zeros(())
        self.where = where
        self.ceiling = ceiling

    def add(self, value: npt.ArrayLike) -> PhaseAccumulator:
        """ phase += value """
        value = np.asarray(value, dtype=float)
        return self.add_dd(value, np.zeros_like(value))

    def add_product(self, a: npt.ArrayLike, b: npt.ArrayLike) -> PhaseAccumulator:
        """ phase += a * b, the product taken exactly """
        return self.add_dd(*two_prod(a, b))

    def add_product3(self, a: npt.ArrayLike, b: npt.ArrayLike, c: npt.ArrayLike) -> PhaseAccumulator:
        """ phase += a * b * c, to double-double accuracy """
        p, e = two_prod(a, b)
        q, f = two_prod(p, c)
        return self.add_dd(q, f + e * np.asarray(c, dtype=float))

    def add_dd_product(self, hi: npt.ArrayLike, lo: npt.ArrayLike, c: npt.ArrayLike) -> PhaseAccumulator:
        """ phase += (hi + lo) * c, for a double-double (hi, lo) """
        q, f = two_prod(hi, c)
        return self.add_dd(q, f + np.asarray(lo, dtype=float) * np.asarray(c, dtype=float))

    def add_dd_mul(self, a_hi: npt.ArrayLike, a_lo: npt.ArrayLike, b_hi: npt.ArrayLike, b_lo: npt.ArrayLike) -> PhaseAccumulator:
        """ phase += (a_hi + a_lo) * (b_hi + b_lo) """
        return self.add_dd(*dd_mul(a_hi, a_lo, b_hi, b_lo))

    def add_dd(self, hi: npt.ArrayLike, lo: npt.ArrayLike) -> PhaseAccumulator:
        """ phase += hi + lo """
        hi = np.asarray(hi, dtype=float)
        lo = np.asarray(lo, dtype=float)
        self.magnitude = self.magnitude + np.abs(hi)
        if np.any(self.magnitude > self.ceiling):
            raise exc.PrecisionLossError(self.where, float(np.max(self.magnitude)), self.ceiling)
        self.head, self.tail = dd_add(self.head, self.tail, hi, lo)
        return self

    def reduced(self) -> RealArray:
        """ The accumulated phase modulo 2π, in [-π, π] """
        return reduce_2pi(self.head, self.tail)

    def unit(self) -> ComplexArray:
        """ e^{i phase} """
        return np.exp(1j * self.reduced())


class QuadraticPhase:
    """ θ(x) = a x² + b x + c with double-double coefficients

    The phases of every propagation route are quadratic in the integration variable.
    The coefficients are formed once, accurately, and the phase is accumulated per node.

    Example:
        # t ξ² + x ξ
        phase = QuadraticPhase(a=(t, 0.0), b=(x, 0.0), where='propagate_psi')
        integrate(lambda xi: phase.unit(xi) * fhat(xi), lo, hi, spec, oscillation=phase.oscillation())
    """
    a: tuple[float, float]
    b: tuple[float, float]
    c: tuple[float, float]
    where: str

    __slots__ = 'a', 'b', 'c', 'where'

    def __init__(self, a: tuple[float, float] = (0.0, 0.0), b: tuple[float, float] = (0.0, 0.0),
                 c: tuple[float, float] = (0.0, 0.0), *, where: str = 'phase'):
        self.a = (float(a[0]), float(a[1]))
        self.b = (float(b[0]), float(b[1]))
        self.c = (float(c[0]), float(c[1]))
        self.where = where

    def accumulate(self, x: npt.ArrayLike) -> PhaseAccumulator:
        """ θ(x) as a compensated sum """
        x = np.asarray(x, dtype=float)
        zero = np.zeros_like(x)
        acc = PhaseAccumulator(where=self.where)
        acc.add_dd_mul(self.a[0], self.a[1], *two_prod(x, x))
        acc.add_dd_mul(self.b[0], self.b[1], x, zero)
        acc.add_dd(zero + self.c[0], zero + self.c[1])
        return acc

    def unit(self, x: npt.ArrayLike) -> ComplexArray:
        """ e^{iθ(x)} """
        return self.accumulate(x).unit()

    def oscillation(self) -> OscillationBound:
        """ Bound on |θ'| per panel, for the quadrature engine """
        return linear_oscillation(self.b[0], 2 * self.a[0])

    def variation(self, lo: float, hi: float) -> float:
        """ ∫_lo^hi |θ'|: the cost of integrating e^{iθ} """
        return linear_phase_variation(self.b[0], 2 * self.a[0], lo, hi)

    def magnitude(self, lo: float, hi: float) -> float:
        """ Max raw magnitude of the terms of θ on [lo, hi] """
        x = max(abs(lo), abs(hi))
        return abs(self.a[0]) * x * x + abs(self.b[0]) * x + abs(self.c[0])
