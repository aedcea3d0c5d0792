""" Adaptive composite Gauss-Legendre quadrature

The same engine serves the profiles (Fourier transforms of the bumps), the propagators
(oscillatory frequency-side and kernel-side integrals) and the norms.

A panel carries two estimates: the `order`-point rule on the whole panel, and the same rule
on its two halves. The halves are the value, their difference with the whole is the error.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
import math
from collections import abc
from typing import Optional

import numpy as np

from schrodloc import exc
from schrodloc.typing import RealArray, ComplexArray, Integrand, OscillationBound

from .spec import QuadratureSpec, QuadratureResult

logger = logging.getLogger(__name__)

# Roundoff floor of a panel's error estimate, in units of eps * ∫|f|
ROUNDOFF_FACTOR = 8.0

# Panels evaluated per numpy call
CHUNK_PANELS = 4096

# Max parts an interval is split into per round of the oscillation-driven panelization
MAX_SPLIT_PER_ROUND = 1024

_EPS = float(np.finfo(float).eps)


@functools.lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[RealArray, RealArray]:
    """ Gauss-Legendre nodes and weights on [-1, 1] """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def integrate(func: Integrand, a: float, b: float, spec: QuadratureSpec, *,
              oscillation: Optional[OscillationBound] = None,
              breakpoints: abc.Iterable[float] = (),
              where: str = 'integrate',
              record_history: bool = False) -> QuadratureResult:
    """ Adaptive integral of a vectorized function over [a, b]

    Args:
        func: Vectorized integrand: array of nodes -> array of values (real or complex)
        a, b: Interval. b < a integrates backwards
        spec: Tolerances and budget
        oscillation: Callback (lo, hi) -> bound on |d(phase)/dx| on every panel.
            When given, panel widths are capped at `spec.phase_per_panel / bound`
        breakpoints: Points where the integrand is not smooth; panels never straddle them
        where: Operation name to report in errors
        record_history: Keep the total error estimate after every adaptive round

    Raises:
        exc.QuadratureNonconvergenceError: the panel budget is exhausted, or the tolerance is below the roundoff floor
    """
    if a == b:
        return QuadratureResult(value=0j, est_error=0.0, panels=0)
    if b < a:
        return integrate(func, b, a, spec, oscillation=oscillation, breakpoints=breakpoints,
                         where=where, record_history=record_history).scaled(-1)

    # Initial panels
    edges = _initial_edges(a, b, spec, oscillation, breakpoints, where)
    lo, hi = edges[:-1], edges[1:]
    values, errors, floored = _evaluate_panels(func, lo, hi, spec.order)

    history: list[float] = []
    while True:
        total = _complex_fsum(values)
        error = math.fsum(errors)
        target = spec.target(total)
        history.append(error)

        # Converged?
        if error <= target:
            return QuadratureResult(
                value=total,
                est_error=error,
                panels=len(values),
                history=tuple(history) if record_history else None,
            )

        # Split the panels with more than their share of the error
        split = errors > target / len(values)
        if np.all(floored[split]):
            # Roundoff-limited: halving will not help
            raise exc.QuadratureNonconvergenceError(where, total, error, len(values), target)
        if len(values) + np.count_nonzero(split) > spec.max_panels:
            raise exc.QuadratureNonconvergenceError(where, total, error, len(values), target)

        a_split, b_split = lo[split], hi[split]
        mid = 0.5 * (a_split + b_split)
        new_lo = np.concatenate((a_split, mid))
        new_hi = np.concatenate((mid, b_split))
        new_values, new_errors, new_floored = _evaluate_panels(func, new_lo, new_hi, spec.order)

        keep = ~split
        lo = np.concatenate((lo[keep], new_lo))
        hi = np.concatenate((hi[keep], new_hi))
        values = np.concatenate((values[keep], new_values))
        errors = np.concatenate((errors[keep], new_errors))
        floored = np.concatenate((floored[keep], new_floored))


def integrate_batch(func: abc.Callable[[RealArray], np.ndarray], a: float, b: float, spec: QuadratureSpec, *,
                    omega: float = 0.0,
                    where: str = 'integrate_batch') -> tuple[ComplexArray, RealArray]:
    """ Many integrals over the same interval, with a shared uniform composite rule

    The rule starts with enough panels for the phase bound `omega`, and doubles the number
    of panels until every integral meets the tolerance.

    Args:
        func: nodes (1-D) -> values of shape (items, nodes)
        omega: Bound on |d(phase)/dx| over [a, b], shared by all integrands

    Returns:
        (values, est_errors), one per item

    Raises:
        exc.QuadratureNonconvergenceError: the panel budget is exhausted
    """
    width = b - a
    panels = max(1, math.ceil(width * omega / spec.phase_per_panel))
    if panels > spec.max_panels:
        raise exc.QuadratureNonconvergenceError(where, math.nan, math.inf, panels, spec.abs_tol)

    coarse, _ = _composite(func, a, b, panels, spec.order)
    while True:
        fine, mass = _composite(func, a, b, 2 * panels, spec.order)
        errors = np.maximum(np.abs(fine - coarse), ROUNDOFF_FACTOR * _EPS * mass)
        targets = np.maximum(spec.rel_tol * np.abs(fine), spec.abs_tol)

        if np.all(errors <= targets):
            return fine, errors

        worst = int(np.argmax(errors - targets))
        if np.all(errors[errors > targets] <= ROUNDOFF_FACTOR * _EPS * mass[errors > targets]) or 4 * panels > spec.max_panels:
            raise exc.QuadratureNonconvergenceError(where, complex(fine[worst]), float(errors[worst]), 2 * panels, float(targets[worst]))

        coarse = fine
        panels *= 2


def linear_phase_variation(c0: float, c1: float, a: float, b: float) -> float:
    """ Total phase variation ∫_a^b |c0 + c1 x| dx of a quadratic phase with derivative c0 + c1 x

    This is the cost model of an oscillatory integral: panels needed ~ variation / phase_per_panel
    """
    def antiderivative(x: float) -> float:
        return c0 * x + 0.5 * c1 * x * x

    if c1 != 0:
        root = -c0 / c1
        if a < root < b:
            return (abs(antiderivative(root) - antiderivative(a)) +
                    abs(antiderivative(b) - antiderivative(root)))
    return abs(antiderivative(b) - antiderivative(a))


def linear_oscillation(c0: float, c1: float) -> OscillationBound:
    """ Oscillation bound callback for a phase whose derivative is c0 + c1 x """
    def bound(lo: RealArray, hi: RealArray) -> RealArray:
        return np.maximum(np.abs(c0 + c1 * lo), np.abs(c0 + c1 * hi))
    return bound


def _initial_edges(a: float, b: float, spec: QuadratureSpec,
                   oscillation: Optional[OscillationBound],
                   breakpoints: abc.Iterable[float],
                   where: str) -> RealArray:
    """ Initial panel edges: breakpoints, then oscillation-driven splits """
    points = np.fromiter(breakpoints, dtype=float) if not isinstance(breakpoints, np.ndarray) else breakpoints.astype(float)
    inner = points[(points > a) & (points < b)]
    edges = np.unique(np.concatenate(([a, b], inner)))
    if oscillation is None:
        return edges

    lo, hi = edges[:-1], edges[1:]
    while True:
        omega = np.asarray(oscillation(lo, hi), dtype=float)
        parts = np.ceil((hi - lo) * omega / spec.phase_per_panel)
        parts = np.clip(parts, 1, MAX_SPLIT_PER_ROUND).astype(np.int64)
        if np.all(parts == 1):
            return np.append(lo, hi[-1])

        n_panels = int(parts.sum())
        if n_panels > spec.max_panels:
            logger.debug(f'{where}: oscillation needs more than {spec.max_panels} panels')
            raise exc.QuadratureNonconvergenceError(where, math.nan, math.inf, n_panels, spec.abs_tol)

        # Split every panel into its number of parts
        owner = np.repeat(np.arange(len(lo)), parts)
        index = np.arange(n_panels) - np.repeat(np.cumsum(parts) - parts, parts)
        step = (hi - lo) / parts
        new_lo = lo[owner] + index * step[owner]
        new_hi = np.where(index == parts[owner] - 1, hi[owner], lo[owner] + (index + 1) * step[owner])
        lo, hi = new_lo, new_hi


def _evaluate_panels(func: Integrand, lo: RealArray, hi: RealArray, order: int) -> tuple[ComplexArray, RealArray, np.ndarray]:
    """ Evaluate panels: (value from halves, error estimate, whether the error sits at the roundoff floor) """
    nodes, weights = gauss_legendre(order)
    values = np.empty(len(lo), dtype=complex)
    errors = np.empty(len(lo), dtype=float)
    floored = np.empty(len(lo), dtype=bool)

    for start in range(0, len(lo), CHUNK_PANELS):
        a = lo[start:start + CHUNK_PANELS]
        b = hi[start:start + CHUNK_PANELS]
        half = 0.5 * (b - a)
        mid = a + half
        quarter = 0.5 * half

        # All nodes of a chunk in one call: whole, left half, right half
        x = np.concatenate((
            mid[:, None] + half[:, None] * nodes,
            (a + quarter)[:, None] + quarter[:, None] * nodes,
            (mid + quarter)[:, None] + quarter[:, None] * nodes,
        ))
        fx = np.asarray(func(x.ravel()), dtype=complex).reshape(x.shape)
        m = len(a)
        whole = half * (fx[:m] @ weights)
        halves = quarter * (fx[m:2 * m] @ weights + fx[2 * m:] @ weights)
        mass = quarter * (np.abs(fx[m:2 * m]) @ weights + np.abs(fx[2 * m:]) @ weights)

        raw = np.abs(whole - halves)
        floor = ROUNDOFF_FACTOR * _EPS * mass
        values[start:start + m] = halves
        errors[start:start + m] = np.maximum(raw, floor)
        floored[start:start + m] = raw <= floor

    return values, errors, floored


def _composite(func: abc.Callable[[RealArray], np.ndarray], a: float, b: float, panels: int, order: int) -> tuple[ComplexArray, RealArray]:
    """ Uniform composite rule applied to a batch of integrands: (values, ∫|f|) """
    nodes, weights = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    x = (edges[:-1] + half)[:, None] + half[:, None] * nodes
    w = (half[:, None] * weights).ravel()
    fx = np.asarray(func(x.ravel()), dtype=complex)
    return fx @ w, np.abs(fx) @ w


def _complex_fsum(values: ComplexArray) -> complex:
    """ Compensated sum of complex values """
    return complex(math.fsum(values.real), math.fsum(values.imag))


def integrate_box(func: Integrand, box: abc.Sequence[tuple[float, float]], spec: QuadratureSpec, *,
                  oscillation: Optional[abc.Sequence[Optional[OscillationBound]]] = None,
                  breakpoints: Optional[abc.Sequence[abc.Iterable[float]]] = None,
                  where: str = 'integrate_box') -> QuadratureResult:
    """ Iterated adaptive integral over a box

    Args:
        func: Vectorized integrand: points of shape (N, dim) -> N values
        box: (lo, hi) per axis
        oscillation: Per-axis oscillation bounds
        breakpoints: Per-axis breakpoints

    Inner integrals run with the absolute tolerance divided by the outer width;
    their worst error, times the outer width, is added to the outer error estimate.
    """
    dim = len(box)
    oscillation = oscillation or [None] * dim
    breakpoints = breakpoints or [()] * dim
    (lo, hi), *rest = box

    if dim == 1:
        return integrate(lambda x: func(x[:, None]), lo, hi, spec,
                         oscillation=oscillation[0], breakpoints=breakpoints[0], where=where)

    width = abs(hi - lo)
    inner_spec = dataclasses.replace(spec, abs_tol=spec.abs_tol / max(width, 1.0))
    inner_error = 0.0

    def outer(x0: RealArray) -> ComplexArray:
        nonlocal inner_error
        out = np.empty(len(x0), dtype=complex)
        for i, a in enumerate(x0):
            inner = integrate_box(
                lambda y: func(np.column_stack((np.full(len(y), a), y))),
                rest, inner_spec,
                oscillation=oscillation[1:], breakpoints=breakpoints[1:], where=where,
            )
            out[i] = inner.value
            inner_error = max(inner_error, inner.est_error)
        return out

    result = integrate(outer, lo, hi, spec, oscillation=oscillation[0], breakpoints=breakpoints[0], where=where)
    return QuadratureResult(value=result.value, est_error=result.est_error + width * inner_error, panels=result.panels)
