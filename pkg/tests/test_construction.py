import io
import math

import numpy as np
import pytest

from schrodloc import exc
from schrodloc.construction import Point, Schedule, ScheduleOverrides, Stage, build_schedule, default_mu, make_stage
from schrodloc.construction import f_v_eval, f_v_hat, f_v_hat_quadrature, lattice_sum, G_v_eval, G_v_hat, G_v_hat_quadrature
from schrodloc.construction import h_v_eval, h_truncated_eval, tail_sums, schedule_violations
from schrodloc.construction import dirichlet_kernel, dirichlet_reduce, lattice_sum_modulus, lattice_sum_zeros
from schrodloc.construction import stages_rows, write_stages_csv
from schrodloc.profiles import FourierTable, frequency_bump
from schrodloc.quadrature import QuadratureSpec

from .util.okok import Near, Whatever
from .util.numerics import typical_test_csv


@pytest.mark.parametrize(('n', 'R', 'expected'), [
    # n = 2, R = 2^12: D = 2^8, R/D = 16
    (2, 2.0 ** 12, dict(k=0, v=Near(1 / 64), R=Near(4096.0), D=Near(256.0), lattice_lo=9, lattice_hi=15, p=4)),
    # n = 2, R = 2^6: R/D = 4, a single lattice point
    (2, 2.0 ** 6, dict(k=0, v=Near(0.125), R=Near(64.0), D=Near(16.0), lattice_lo=3, lattice_hi=3, p=1)),
    # n = 3, R = 2^12: D = 2^7.5, R/D = 2^4.5
    (3, 2.0 ** 12, dict(k=0, v=Near(1 / 64), R=Near(4096.0), D=Near(2 ** 7.5), lattice_lo=12, lattice_hi=22, p=6)),
])
def test_stage(n: int, R: float, expected: dict):
    """ Test Stage: every parameter from R """
    stage = Stage.from_R(n, R)
    assert stage.export() == expected

    # |4p - R/D| <= 4
    assert abs(4 * stage.p - stage.ratio) <= 4
    assert stage.lattice_count_per_axis == stage.lattice_hi - stage.lattice_lo + 1
    assert stage.amplitude == pytest.approx(R ** (-(n - 1) / 4))


def test_stage_invalid():
    # R/D = 2: no integer strictly between 1 and 2
    with pytest.raises(exc.DegenerateStageError) as e:
        Stage.from_R(2, 8.0, k=5)
    assert e.value.k == 5

    with pytest.raises(exc.InvalidParameterError):
        Stage.from_R(2, 1.0)
    with pytest.raises(exc.InvalidParameterError):
        Stage.from_log2_v(1, -3.0)

    # R beyond a double
    with pytest.raises(exc.ScheduleOverflowError):
        Stage.from_log2_v(2, -600.0)


def test_schedule_recurrence(recurrence_schedule: Schedule):
    """ Test build_schedule(): v_k = 2^{-k} v_{k-1}^μ in the log domain """
    schedule = recurrence_schedule
    assert schedule.mu == 2.5
    assert (schedule.gamma, schedule.beta) == (1.0, 5.0)
    assert schedule.K == 1
    assert list(schedule.stage_indices) == [1, 2, 3]
    assert schedule.is_recurrence
    assert schedule.watermark is None

    log2_v1 = math.log2(0.24)
    assert schedule.log2_v(2) == pytest.approx(-2 + 2.5 * log2_v1)
    assert schedule.log2_v(3) == pytest.approx(-3 + 2.5 * schedule.log2_v(2))
    assert schedule.log2_v_next() == pytest.approx(-4 + 2.5 * schedule.log2_v(3))
    assert schedule.log2_eps(2) == -2.0
    assert list(schedule_violations(schedule)) == []

    with pytest.raises(exc.InvalidParameterError):
        schedule.log2_v(4)


def test_schedule_explicit(demo_schedule: Schedule):
    """ Test build_schedule(): an explicit v-list is watermarked and has nothing beyond k_max """
    schedule = demo_schedule
    assert schedule.K == 1 and schedule.k_max == 3
    assert not schedule.is_recurrence
    assert schedule.watermark == 'override:v'
    assert schedule.log2_v_next() is None
    assert schedule.v(2) == pytest.approx(0.028)
    assert schedule.export() == {
        'n': 2, 'v1': 0.24, 'mu': 2.5, 'delta': 0.98, 'K': 1, 'k_max': 3,
        'log2_v': Whatever,
        'overrides': {'v': [0.24, 0.028, 1.3e-4]},
    }


@pytest.mark.parametrize('n', [2, 3, 4, 8])
def test_schedule_long(n: int):
    """ Test build_schedule(): 64 stages of the recurrence keep every law """
    schedule = build_schedule(n, 0.24, 0.98, 64)
    assert schedule.k_max == 64
    assert schedule.K == 1
    assert list(schedule_violations(schedule)) == []

    log_v = schedule.log_v
    k = np.arange(1, 65)
    assert np.all(np.diff(log_v) < 0)
    assert np.all(log_v[1:] < -k[1:])
    # v_{k+1} <= v_k^{2γ} and v_{k+1}² <= v_k^β
    assert np.all(log_v[1:] <= 2 * schedule.gamma * log_v[:-1])
    assert np.all(2 * log_v[1:] <= schedule.beta * log_v[:-1])

    assert schedule.log2_eps(64) == -64.0
    assert schedule.log2_eps(65) == -65.0
    with pytest.raises(exc.InvalidParameterError):
        schedule.log2_eps(66)


@pytest.mark.parametrize('n', [2, 3, 4, 8])
def test_default_mu(n: int):
    """ Test default_mu(): μ >= 2γ and μ >= β/2 """
    mu = default_mu(n)
    assert mu == max(n, 2 + n / 4)
    assert mu >= n and mu >= (4 + n / 2) / 2


@pytest.mark.parametrize(('args', 'overrides'), [
    # Parameters outside of their domains
    ((1, 0.24, 0.98, 3), None),
    ((2, 0.24, 1.0, 3), None),
    ((2, 1.0, 0.98, 3), None),
    ((2, 0.24, 0.98, 0), None),
    # μ below 2γ
    ((2, 0.24, 0.98, 3), ScheduleOverrides(mu=1.0)),
    # No v_k < δ/4
    ((2, 0.3, 0.98, 1), None),
    # K with v_K >= δ/4
    ((2, 0.3, 0.98, 3), ScheduleOverrides(K=1)),
    # Explicit lists: not decreasing; v_2 > v_1^{2γ}; empty
    ((2, 0.24, 0.98, 3), ScheduleOverrides(v=(0.1, 0.2))),
    ((2, 0.24, 0.98, 3), ScheduleOverrides(v=(0.24, 0.1))),
    ((2, 0.24, 0.98, 3), ScheduleOverrides(v=())),
])
def test_schedule_invalid(args: tuple, overrides):
    with pytest.raises(exc.InvalidParameterError):
        build_schedule(*args, overrides)


def test_schedule_overflow():
    with pytest.raises(exc.ScheduleOverflowError):
        build_schedule(2, 0.24, 0.98, 800)


def test_tail_sums(demo_schedule: Schedule, recurrence_schedule: Schedule):
    """ Test tail_sums(): both tails, in the log domain """
    tails = tail_sums(demo_schedule, 2)
    assert tails.sum_hi == pytest.approx(1.3e-4)
    assert tails.sum_lo == pytest.approx(0.24 ** -5)
    assert tails.log2_truncated_hi == -math.inf

    # The recurrence adds 2 v_{k_max+1} past the last stage
    tails = tail_sums(recurrence_schedule, 3)
    assert tails.log2_truncated_hi == pytest.approx(1 + recurrence_schedule.log2_v_next())
    assert tails.sum_lo == pytest.approx(recurrence_schedule.v(1) ** -5 + recurrence_schedule.v(2) ** -5)

    with pytest.raises(exc.InvalidParameterError):
        tail_sums(demo_schedule, 1)


def test_make_stage(demo_schedule: Schedule):
    stage = make_stage(demo_schedule, 2)
    assert stage.k == 2
    assert stage.v == pytest.approx(0.028)
    assert stage.R == pytest.approx(0.028 ** -2)

    with pytest.raises(exc.InvalidParameterError):
        make_stage(demo_schedule, 4)


def test_stages_csv(recurrence_schedule: Schedule):
    """ Test write_stages_csv(): stages whose R is not a double are left out """
    schedule = build_schedule(2, 0.24, 0.98, 8)
    rows = stages_rows(schedule)
    assert [row['k'] for row in rows] == [1, 2, 3, 4, 5, 6]

    f = io.StringIO()
    write_stages_csv(recurrence_schedule, f, config_hash='abc')
    data = typical_test_csv(f.getvalue(), 'abc', ['k', 'v', 'R', 'D', 'lattice_lo', 'lattice_hi', 'p'])
    assert [row[0] for row in data] == ['1', '2', '3']
    assert float(data[1][1]) == recurrence_schedule.v(2)


def test_f_v():
    """ Test f_v: modulated bump, exactly 0 outside of (-v, v) """
    stage = Stage.from_R(2, 2.0 ** 8)
    v = stage.v
    assert complex(f_v_eval(stage, 0.0)) == 1
    assert np.all(f_v_eval(stage, np.array([v, -v, 2 * v, 0.9])) == 0)

    x = np.linspace(-v, v, 101)
    assert np.allclose(np.abs(f_v_eval(stage, x)), frequency_bump(2).profile(x / v))


@pytest.mark.parametrize('offset', [0.0, 2.5, -7.0, 40.0])
def test_f_v_hat(table: FourierTable, spec: QuadratureSpec, offset: float):
    """ Test f_v_hat(): the table route against quadrature of f_v """
    stage = Stage.from_R(2, 2.0 ** 8)
    xi1 = -stage.R + offset / stage.v
    direct = f_v_hat_quadrature(stage, xi1, spec)
    tabulated = complex(f_v_hat(stage, xi1, table))
    assert abs(tabulated - direct.value) <= stage.v * table.tolerance + direct.est_error + 1e-10


@pytest.mark.parametrize('x', [0.0, 0.013, 0.4, -1.7, 123.25])
def test_lattice_sum(x: float):
    """ Test lattice_sum() and the Dirichlet reduction against the plain sum """
    stage = Stage.from_R(2, 2.0 ** 12)
    plain = sum(np.exp(1j * stage.D * l * x) for l in range(stage.lattice_lo, stage.lattice_hi + 1))
    assert abs(complex(lattice_sum(stage, x)) - plain) <= 1e-9
    assert float(lattice_sum_modulus(stage, x)) == pytest.approx(abs(plain), abs=1e-9)

    reduction = dirichlet_reduce(stage)
    assert abs(complex(reduction.lattice_sum(stage.D * x)) - plain) <= 1e-9


def test_dirichlet():
    """ Test dirichlet_reduce() and dirichlet_kernel() """
    # R = 2^12: lattice 9..15, centered range 8..16
    reduction = dirichlet_reduce(Stage.from_R(2, 2.0 ** 12))
    assert (reduction.p, reduction.extra, reduction.missing) == (4, (), (8, 16))
    assert reduction.boundary_terms == 2

    p = 3
    assert float(dirichlet_kernel(p, 0.0)) == 7
    for theta in (1e-7, 0.3, 2.0, -3.0, 1e6):
        plain = sum(math.cos(m * theta) for m in range(-p, p + 1))
        assert float(dirichlet_kernel(p, theta)) == pytest.approx(plain, abs=1e-8)

    # Zeros of the lattice sum
    stage = Stage.from_R(2, 2.0 ** 12)
    zeros = lattice_sum_zeros(stage, 0.0, 0.05)
    assert zeros.size > 0
    assert np.all(lattice_sum_modulus(stage, zeros) <= 1e-9)


def test_G_v():
    """ Test G_v: the amplitude at x' = 0, and the frequency side """
    stage = Stage.from_R(2, 2.0 ** 12)
    bump = frequency_bump(2)
    count = stage.lattice_count_per_axis

    # G_v(0) = R^{-1/4} Φ(0) count
    assert complex(G_v_eval(stage, 0.0)) == pytest.approx(stage.amplitude * count, rel=1e-9)

    # Ĝ_v: one translate per lattice point; nothing between them
    assert float(G_v_hat(stage, stage.D * 10)) == pytest.approx(stage.amplitude * float(bump.hat(0.0)))
    assert float(G_v_hat(stage, stage.D * 10.5)) == 0.0
    assert float(G_v_hat(stage, stage.D * 20)) == 0.0


@pytest.mark.parametrize('xi2', [48.0, 48.5, 100.0])
def test_G_v_hat(spec: QuadratureSpec, xi2: float):
    """ Test G_v_hat(): closed form against quadrature of G_v on the physical side """
    stage = Stage.from_R(2, 2.0 ** 6)
    direct = G_v_hat_quadrature(stage, xi2, spec)
    assert abs(float(G_v_hat(stage, xi2)) - direct.value) <= direct.est_error + 1e-6


def test_h(demo_schedule: Schedule):
    """ Test h_v and the truncated h: products, nested supports """
    point = Point(x1=0.01, xprime=(0.3,))
    stages = [make_stage(demo_schedule, k) for k in (1, 2, 3)]

    h1 = h_v_eval(stages[0], point)
    assert h1 == pytest.approx(complex(f_v_eval(stages[0], 0.01)) * complex(G_v_eval(stages[0], 0.3)))
    assert h_v_eval(stages[2], point) == 0

    # v_3 < 0.01 < v_2
    assert h_truncated_eval(demo_schedule, point) == pytest.approx(h1 + h_v_eval(stages[1], point))

    # Outside of the support of the coarsest stage: exactly 0
    assert h_truncated_eval(demo_schedule, Point(x1=0.5, xprime=(0.1,))) == 0


def test_point():
    point = Point.from_array([0.5, 0.1, -0.2])
    assert point.n == 3
    assert point.export() == [0.5, 0.1, -0.2]

    with pytest.raises(exc.InvalidParameterError):
        Point.from_array([0.5])
    with pytest.raises(exc.InvalidParameterError):
        Point(x1=math.nan, xprime=(0.0,))
