""" H_s norms of h_v and the summability of Σ ‖h_{v_k}‖_{H_s}

    ‖h_v‖²_{H_s} = ∫ |f̂_v(ξ1)|² |Ĝ_v(ξ')|² (1 + ξ1² + |ξ'|²)^s dξ = I1 + I2

I1 is the part |ξ1| <= A R, I2 the rest. The weight depends on ξ' through ρ = |ξ'| only, so the ξ1-integral
J(ρ) is computed on Chebyshev nodes in ρ, and the ξ'-integral runs over the translates of Φ̂ with a tensor rule.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
import math
from collections import abc
from typing import Optional

import numpy as np

from schrodloc import exc
from schrodloc.construction import Schedule, Stage, cutoff_or_fail
from schrodloc.profiles import FourierTable, FrequencyBump, frequency_bump
from schrodloc.quadrature import QuadratureSpec, gauss_legendre, integrate_batch
from schrodloc.typing import RealArray
from schrodloc.util import log2_sum, pow2

from .report import NormReport

logger = logging.getLogger(__name__)

# The split point |ξ1| = A R
DEFAULT_A = 4.0

# The decay order of the I2 bound: I2 <= C R^{-N}
DEFAULT_N = 8

# Share of the tolerance that truncated tails may take
TAIL_SHARE = 0.1

# Degree of the Chebyshev interpolant of J(ρ)
J_DEGREE = 24

# Max doublings of the tensor rule over the translates
MAX_TENSOR_ROUNDS = 6


def hs_norm_h_v(stage: Stage, s: float, spec: QuadratureSpec, *,
                A: float = DEFAULT_A, N: int = DEFAULT_N,
                bump: Optional[FrequencyBump] = None) -> NormReport:
    """ ‖h_v‖_{H_s} with the I1/I2 breakdown

    The report carries I1, I2 (quadrature), the envelope bound on I2, the constant I2 R^N,
    and the ratio between I1 and its homogeneous variant with |ξ|^{2s}.
    The bound is the scaling law R^{s - n/(2(n+1))}.

    Raises:
        exc.TruncationError: the decay envelope cannot certify the truncation of the ξ1-integral
    """
    if not s >= 0:
        raise exc.InvalidParameterError(f's must be >= 0, got {s!r}')
    if not A > 1:
        raise exc.InvalidParameterError(f'A must be > 1, got {A!r}')

    bump = bump or frequency_bump(stage.n)
    table = bump.table
    profile = bump.profile
    v, R = stage.v, stage.R
    inv_v = pow2(-stage.log2_v)

    # The range of ρ = |ξ'| over the translates
    rho_lo, rho_hi = _rho_range(stage, bump)

    # Truncation of the η-integrals, η = v(ξ1 + R)
    g_l2 = 2 * math.pi * profile.l2_norm_squared(spec).value.real
    budget = TAIL_SHARE * max(spec.abs_tol, spec.rel_tol * v * g_l2)
    c_s = max(1.0, 2 ** (s - 1))
    w0 = (1 + rho_hi ** 2 + 2 * R ** 2) ** s
    w1 = (2 * inv_v ** 2) ** s
    X = max(
        cutoff_or_fail(table, budget / (4 * v * c_s * w0), 'hs_norm_h_v', power=2),
        cutoff_or_fail(table, budget / (4 * v * c_s * w1), 'hs_norm_h_v', power=2, moment=2 * s),
    )
    envelope = table.envelope
    tail = 2 * v * c_s * (w0 * envelope.tail_integral(X, power=2) + w1 * envelope.tail_integral(X, power=2, moment=2 * s))

    # I1 over |ξ1| <= AR, I2 over the rest
    inner = [(max(-X, (1 - A) * inv_v), min(X, (1 + A) * inv_v))]
    outer = [(-X, (1 - A) * inv_v), ((1 + A) * inv_v, X)]
    outer = [(lo, hi) for lo, hi in outer if lo < hi]

    J1 = _RadialWeight(stage, s, inner, spec, table, rho_lo, rho_hi)
    I1, I1_error = _translates_integral(stage, bump, J1.weighted, spec)
    I1_hom, _ = _translates_integral(stage, bump, J1.homogeneous, spec)

    if outer:
        J2 = _RadialWeight(stage, s, outer, spec, table, rho_lo, rho_hi)
        I2, I2_error = _translates_integral(stage, bump, J2.weighted, spec)
        interpolation = J1.error + J2.error
    else:
        I2, I2_error = 0.0, 0.0
        interpolation = J1.error

    # ‖Ĝ_v‖₂² times the tail of the weighted |f̂_v|² beyond |ξ1| = AR
    G_hat_l2 = stage.amplitude ** 2 * (stage.lattice_count_per_axis * bump.hat_l2_squared(spec)) ** stage.dim
    kappa = (1 + (1 + rho_hi ** 2) / (A * R) ** 2) * (A / (A - 1)) ** 2
    I2_bound = G_hat_l2 * v ** (1 - 2 * s) * kappa ** s * 2 * envelope.tail_integral((A - 1) * inv_v, power=2, moment=2 * s)

    total = I1 + I2
    error = I1_error + I2_error + G_hat_l2 * (tail + interpolation)
    measured = math.sqrt(total)
    return NormReport(
        quantity='Hs_hv',
        k=stage.k, v=v, R=R,
        measured=measured,
        bound=R ** (s - stage.n / (2 * (stage.n + 1))),
        s=s,
        est_error=error / (2 * measured),
        details={
            'I1': I1,
            'I2': I2,
            'I2_bound': I2_bound,
            'I2_R_N': math.exp(math.log(I2_bound) + N * math.log(R)) if I2_bound > 0 else 0.0,
            'homogeneous_ratio': I1_hom / I1,
            'A': A,
            'N': N,
        },
    )


class _RadialWeight:
    """ J(ρ) = v ∫ |g(η)|² w(η/v - R, ρ) dη over the given η-ranges, interpolated in ρ

    Two weights: w = (1 + ξ1² + ρ²)^s, and the homogeneous (ξ1² + ρ²)^s
    """
    __slots__ = 'weighted', 'homogeneous', 'error'

    def __init__(self, stage: Stage, s: float, ranges: abc.Sequence[tuple[float, float]], spec: QuadratureSpec,
                 table: FourierTable, rho_lo: float, rho_hi: float):
        v, R = stage.v, stage.R
        inv_v = pow2(-stage.log2_v)
        omega = 2 * table.profile.support_half_width

        def J(rho: RealArray) -> tuple[RealArray, RealArray, RealArray]:
            rho2 = np.asarray(rho, dtype=float) ** 2

            def integrand(eta: RealArray) -> np.ndarray:
                xi1 = eta * inv_v - R
                mass = np.abs(table(eta)) ** 2
                r2 = xi1[None, :] ** 2 + rho2[:, None]
                return np.concatenate(((1 + r2) ** s * mass, r2 ** s * mass))

            values = np.zeros(2 * len(rho2))
            errors = np.zeros(2 * len(rho2))
            for lo, hi in ranges:
                part, part_error = integrate_batch(integrand, lo, hi, spec, omega=omega, where='hs_norm_h_v')
                values += part.real
                errors += part_error
            m = len(rho2)
            return v * values[:m], v * values[m:], v * errors[:m]

        domain = [rho_lo, rho_hi] if rho_hi > rho_lo else [rho_lo, rho_lo + 1.0]
        nodes = np.polynomial.chebyshev.chebpts1(J_DEGREE + 1)
        rho = 0.5 * (domain[0] + domain[1]) + 0.5 * (domain[1] - domain[0]) * nodes
        weighted, homogeneous, errors = J(rho)

        self.weighted = np.polynomial.Chebyshev.fit(rho, weighted, J_DEGREE, domain=domain)
        self.homogeneous = np.polynomial.Chebyshev.fit(rho, homogeneous, J_DEGREE, domain=domain)

        # Interpolation error, checked between the nodes
        check = np.linspace(domain[0], domain[1], 7)[1:-1]
        direct, _, _ = J(check)
        self.error = float(np.max(np.abs(self.weighted(check) - direct))) + float(np.max(errors))
        if self.error > max(spec.abs_tol, spec.rel_tol * float(np.max(np.abs(weighted)))) * 1e3:
            logger.warning(f'hs_norm_h_v: J(ρ) interpolation error {self.error:.3g} at R={R!r}')


def _rho_range(stage: Stage, bump: FrequencyBump) -> tuple[float, float]:
    """ min and max of |ξ'| over the translates of the cube [-r, r]^{n-1} """
    lo = max(stage.D * stage.lattice_lo - bump.r, 0.0)
    hi = stage.D * stage.lattice_hi + bump.r
    return math.sqrt(stage.dim) * lo, math.sqrt(stage.dim) * hi


def _translates_integral(stage: Stage, bump: FrequencyBump, weight: abc.Callable[[RealArray], RealArray],
                         spec: QuadratureSpec) -> tuple[float, float]:
    """ R^{-(n-1)/2} Σ_l ∫ Φ̂(η)² weight(|Dl + η|) dη, with a tensor Gauss-Legendre rule doubled until it settles

    Returns:
        (value, est_error)
    """
    dim = stage.dim
    centers = np.array(list(itertools.product(stage.D * stage.lattice, repeat=dim)), dtype=float)
    edges = np.array(sorted({-bump.r, *bump.breakpoints, bump.r}))
    order = 16

    def rule(panels_per_piece: int) -> float:
        nodes, weights = gauss_legendre(order)
        cuts = np.concatenate([
            np.linspace(a, b, panels_per_piece + 1)[:-1] for a, b in zip(edges[:-1], edges[1:])
        ] + [edges[-1:]])
        half = 0.5 * np.diff(cuts)
        x = ((cuts[:-1] + half)[:, None] + half[:, None] * nodes).ravel()
        w = (half[:, None] * weights).ravel() * bump.hat(x) ** 2

        # Tensor grid of the cube
        grid = np.stack(np.meshgrid(*([x] * dim), indexing='ij'), axis=-1).reshape(-1, dim)
        grid_w = np.prod(np.stack(np.meshgrid(*([w] * dim), indexing='ij'), axis=-1).reshape(-1, dim), axis=-1)

        total = 0.0
        for center in centers:
            rho = np.linalg.norm(center + grid, axis=-1)
            total += float(grid_w @ weight(rho))
        return stage.amplitude ** 2 * total

    panels = 1
    previous = rule(panels)
    for _ in range(MAX_TENSOR_ROUNDS):
        panels *= 2
        current = rule(panels)
        error = abs(current - previous)
        if error <= spec.target(current):
            return current, error
        previous = current

    raise exc.QuadratureNonconvergenceError('hs_norm_h_v', current, error, panels, spec.target(current))


@dataclasses.dataclass(frozen=True)
class MembershipReport:
    """ Σ_k ‖h_{v_k}‖_{H_s}, stage by stage, in the log domain

    The sum is certified when, from some stage on, consecutive terms shrink at least by half,
    the term after the last stage included (for the recurrence).
    """
    s: float

    # n/(n+1) - 2s: ‖h_v‖_{H_s} ~ v^exponent
    exponent: float

    stages: tuple[int, ...]
    log2_terms: tuple[float, ...]
    log2_partial_sums: tuple[float, ...]

    # log2 of term_k / term_{k-1}, for the stages after the first; then the extrapolated next term
    log2_ratios: tuple[float, ...]

    # Where every term comes from: "measured" or "bound"
    sources: tuple[str, ...]

    # The first stage from which all ratios are <= 1/2; None if there is no such stage
    threshold_k: Optional[int]

    # log2 ε_k^exponent: the ratio bound of the recurrence
    log2_eps_bounds: tuple[float, ...] = ()

    @property
    def certified(self) -> bool:
        return self.exponent > 0 and self.threshold_k is not None

    def export(self) -> dict:
        return {
            's': self.s,
            'exponent': self.exponent,
            'certified': self.certified,
            'threshold_k': self.threshold_k,
            'stages': [
                {'k': k, 'log2_term': term, 'log2_partial_sum': total, 'source': source}
                for k, term, total, source in zip(self.stages, self.log2_terms, self.log2_partial_sums, self.sources)
            ],
            'log2_ratios': list(self.log2_ratios),
            'log2_eps_bounds': list(self.log2_eps_bounds),
        }


def hs_membership(schedule: Schedule, s: float, measured: Optional[abc.Mapping[int, float]] = None) -> MembershipReport:
    """ Summability of Σ_k ‖h_{v_k}‖_{H_s} in the log domain

    Stages in `measured` use their measured norms; the others use C v_k^{n/(n+1) - 2s},
    with C calibrated as the largest measured / v^exponent (1 without measurements).
    """
    if not s >= 0:
        raise exc.InvalidParameterError(f's must be >= 0, got {s!r}')
    measured = dict(measured or {})
    n = schedule.n
    exponent = n / (n + 1) - 2 * s

    log2_C = max((math.log2(value) - exponent * schedule.log2_v(k) for k, value in measured.items()), default=0.0)

    stages = tuple(schedule.stage_indices)
    log2_terms = []
    sources = []
    for k in stages:
        if k in measured:
            log2_terms.append(math.log2(measured[k]))
            sources.append('measured')
        else:
            log2_terms.append(log2_C + exponent * schedule.log2_v(k))
            sources.append('bound')

    ratios = [b - a for a, b in zip(log2_terms[:-1], log2_terms[1:])]
    log2_next = schedule.log2_v_next()
    if log2_next is not None:
        ratios.append(log2_C + exponent * log2_next - log2_terms[-1])

    # Walk back from the end while the ratios stay <= 1/2
    threshold = None
    for i in range(len(ratios) - 1, -1, -1):
        if not ratios[i] <= -1:
            break
        threshold = stages[i]

    eps_bounds = ()
    if schedule.is_recurrence:
        eps_bounds = tuple(exponent * schedule.log2_eps(k) for k in stages if k >= 2)

    return MembershipReport(
        s=s,
        exponent=exponent,
        stages=stages,
        log2_terms=tuple(log2_terms),
        log2_partial_sums=tuple(log2_sum(log2_terms[:i + 1]) for i in range(len(log2_terms))),
        log2_ratios=tuple(ratios),
        sources=tuple(sources),
        threshold_k=threshold,
        log2_eps_bounds=eps_bounds,
    )
