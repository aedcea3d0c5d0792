import dataclasses
import io
import math

import pytest

from schrodloc import exc
from schrodloc.construction import Schedule, Stage, build_schedule
from schrodloc.quadrature import QuadratureSpec
from schrodloc.sobolev import EnvelopeCheck, NormReport, ScalingFit, check_plancherel, dirichlet_l1, dyadic_stages
from schrodloc.sobolev import granularity, hs_membership, hs_norm_h_v, l1_norms, l2_f_v, l2_G_v, l2_G_v_physical
from schrodloc.sobolev import norm_envelopes, plancherel_consistency, scaling_fits, select, write_norms_csv
from schrodloc.sobolev import fits_document, fits_passed, dumps_json

from .util.numerics import typical_test_bounded, typical_test_csv


def test_l2_f_v(spec: QuadratureSpec):
    """ Test l2_f_v(): quadrature against v^{1/2} ‖ǧ‖₂ """
    for R in (2.0 ** 6, 2.0 ** 12):
        report = l2_f_v(Stage.from_R(2, R), spec)
        assert report.quantity == 'L2_fv'
        assert report.constant == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize(('n', 'R'), [
    # One lattice point
    (2, 2.0 ** 6),
    # Several, well apart
    (2, 2.0 ** 8),
    (3, 2.0 ** 8),
])
def test_l2_G_v_plancherel(spec: QuadratureSpec, n: int, R: float):
    """ Test l2_G_v(): the frequency side agrees with the physical side """
    stage = Stage.from_R(n, R)
    frequency = l2_G_v(stage, spec)
    assert frequency.details['closed_form'] is True
    assert frequency.details['count'] == stage.lattice_count_per_axis

    physical = l2_G_v_physical(stage, spec)
    assert physical.bound == pytest.approx(frequency.measured, rel=1e-12)
    check_plancherel([physical], tolerance=1e-6)
    assert plancherel_consistency([physical])[0][0] == R


def test_l1_norms(spec: QuadratureSpec):
    """ Test l1_norms(): ‖f_v‖₁ = v ‖ǧ‖₁, ‖h_v‖₁ = ‖f_v‖₁ ‖G_v‖₁ """
    stage = Stage.from_R(2, 2.0 ** 8)
    f, G, h = l1_norms(stage, spec)
    assert [f.quantity, G.quantity, h.quantity] == ['L1_fv', 'L1_Gv', 'L1_hv']

    assert f.measured == pytest.approx(1.5 * stage.v, rel=1e-6)
    assert f.constant == pytest.approx(1.0, rel=1e-6)
    assert h.measured == pytest.approx(f.measured * G.measured)
    assert h.bound == stage.v ** 1.25
    assert G.details['truncation'] >= 1.0

    assert G.measured > 0


def test_dirichlet_l1(spec: QuadratureSpec):
    """ Test dirichlet_l1(): the mass of |D_p(Dx)| over unit windows is O(log R) """
    stage = Stage.from_R(2, 2.0 ** 12)
    report = dirichlet_l1(stage, spec)
    assert report.details['p'] == 4
    assert report.details['offsets'] == 8
    assert 0.5 < report.details['min_mass'] <= report.measured
    typical_test_bounded(report.measured, report.bound)
    assert report.bound == pytest.approx(math.log(2.0 ** 12))


def test_hs_norm_h_v(spec: QuadratureSpec):
    """ Test hs_norm_h_v(): s = 0 is Plancherel; the weight only grows with s """
    stage = Stage.from_R(2, 2.0 ** 6)

    # ‖ĥ_v‖₂ = 2π ‖f_v‖₂ ‖G_v‖₂ for n = 2
    h0 = hs_norm_h_v(stage, 0.0, spec)
    expected = 2 * math.pi * l2_f_v(stage, spec).measured * l2_G_v(stage, spec).measured
    assert h0.measured == pytest.approx(expected, rel=1e-5)
    assert h0.details['homogeneous_ratio'] == pytest.approx(1.0)

    h = hs_norm_h_v(stage, 0.25, spec)
    assert h.quantity == 'Hs_hv'
    assert h.s == 0.25
    assert h.measured > h0.measured
    assert h.details['I1'] > 0
    assert h.details['I2'] >= 0
    assert 0 < h.details['homogeneous_ratio'] <= 1
    assert h.details['A'] == 4.0

    with pytest.raises(exc.InvalidParameterError):
        hs_norm_h_v(stage, -1.0, spec)
    with pytest.raises(exc.InvalidParameterError):
        hs_norm_h_v(stage, 0.25, spec, A=1.0)


def test_hs_membership_recurrence(recurrence_schedule: Schedule):
    """ Test hs_membership(): the recurrence, s below and above the critical exponent """
    # log2 v_k = -2.06, -7.15, -20.87; the next one is -56.17
    report = hs_membership(recurrence_schedule, 0.25)
    assert report.exponent == pytest.approx(2 / 3 - 0.5)
    assert report.stages == (1, 2, 3)
    assert report.sources == ('bound', 'bound', 'bound')
    assert len(report.log2_ratios) == 3
    assert report.threshold_k == 2
    assert report.certified
    assert report.log2_eps_bounds == pytest.approx((-2 / 6, -3 / 6))

    # Partial sums grow
    assert list(report.log2_partial_sums) == sorted(report.log2_partial_sums)

    # Past the critical exponent the terms grow
    report = hs_membership(recurrence_schedule, 0.5)
    assert report.exponent < 0
    assert report.threshold_k is None
    assert not report.certified

    with pytest.raises(exc.InvalidParameterError):
        hs_membership(recurrence_schedule, -0.1)


@pytest.mark.parametrize(('s', 'certified'), [
    # Below n/(2(n+1)) = 1/3
    (0.0, True),
    (0.2, True),
    (0.3, True),
    # The critical exponent: the terms stop shrinking
    (1 / 3, False),
])
def test_hs_membership_long(s: float, certified: bool):
    """ Test hs_membership(): 64 stages of the n = 2 recurrence """
    report = hs_membership(build_schedule(2, 0.24, 0.98, 64), s)
    assert len(report.stages) == 64
    assert report.certified is certified
    if certified:
        assert report.threshold_k is not None and report.threshold_k <= 4
        assert all(ratio <= -1 for ratio in report.log2_ratios[report.threshold_k - 1:])


def test_hs_membership_measured(demo_schedule: Schedule):
    """ Test hs_membership(): measured stages calibrate the bound of the others """
    v1 = demo_schedule.v(1)
    report = hs_membership(demo_schedule, 0.25, measured={1: 4 * v1 ** (1 / 6)})
    assert report.sources == ('measured', 'bound', 'bound')
    assert report.log2_terms[0] == pytest.approx(2 + demo_schedule.log2_v(1) / 6)
    assert report.log2_terms[1] == pytest.approx(2 + demo_schedule.log2_v(2) / 6)

    # An explicit list has no next term, and no ε bounds
    assert len(report.log2_ratios) == 2
    assert report.log2_eps_bounds == ()
    assert report.threshold_k == 2
    assert report.export()['stages'][0]['source'] == 'measured'


def test_scaling_fit():
    """ Test ScalingFit.fit(): exact power laws """
    x = [2.0 ** j for j in range(4, 9)]
    y = [3 * value ** -0.25 for value in x]
    fit = ScalingFit.fit('L2_Gv', 'R', x, y, expected_slope=-0.25)
    assert fit.slope == pytest.approx(-0.25)
    assert fit.intercept == pytest.approx(math.log(3))
    assert fit.max_residual == pytest.approx(0.0, abs=1e-12)
    assert fit.corrected_slope is None
    assert fit.within(1e-9)

    # Divide out x^{0.1}
    fit = ScalingFit.fit('L2_Gv', 'R', x, y, expected_slope=-0.35, granularity=[value ** 0.1 for value in x])
    assert fit.corrected_slope == pytest.approx(-0.35)
    assert fit.accepted_slope == fit.corrected_slope
    assert fit.within(1e-6, relative=True)
    assert fit.export()['stages'] == x

    with pytest.raises(exc.InvalidParameterError):
        ScalingFit.fit('q', 'R', x[:3], y[:3])
    with pytest.raises(exc.InvalidParameterError):
        ScalingFit.fit('q', 'R', x, [0.0] + y[1:])
    with pytest.raises(exc.InvalidParameterError):
        ScalingFit.fit('q', 'R', x, y).within(0.1)


@pytest.mark.parametrize(('exponent', 'passed'), [
    (0.5, True),
    (0.503, True),
    # Off the closed form
    (0.52, False),
    (0.9, False),
])
def test_scaling_fits_tolerance(exponent: float, passed: bool):
    """ Test scaling_fits(): ‖f_v‖₂ is checked within ±0.005, the lattice sums within 15% """
    stages = dyadic_stages(2, range(6, 18, 2))
    reports = [NormReport(quantity='L2_fv', k=s.k, v=s.v, R=s.R, measured=2 * s.v ** exponent) for s in stages]
    # ‖G_v‖₂ times its lattice granularity, with a slope 10% off the expected -1/12
    for s in stages:
        report = NormReport(quantity='L2_Gv', k=s.k, v=s.v, R=s.R, measured=1.0)
        reports.append(dataclasses.replace(report, measured=s.R ** (-1.1 / 12) * granularity(report, 2)))

    l2_fv, l2_Gv = scaling_fits(reports, 2)
    assert l2_fv.passed is passed
    assert l2_fv.export()['passed'] is passed
    assert l2_Gv.tolerance == pytest.approx(0.15 / 12)
    assert l2_Gv.corrected_slope == pytest.approx(-1.1 / 12)
    assert l2_Gv.passed is True

    assert fits_passed([l2_fv, l2_Gv]) is passed
    failing = EnvelopeCheck.calibrate('L1_Gv', [64, 256, 1024], [1.0, 1.0, 2.0])
    assert fits_passed([l2_Gv], [failing]) is False

    # No tolerance: reported, not checked
    assert ScalingFit.fit('q', 'R', [1, 2, 4, 8], [1, 2, 4, 8], expected_slope=2.0).passed is None


def test_envelope_check():
    """ Test EnvelopeCheck.calibrate(): one constant from the coarsest stages """
    check = EnvelopeCheck.calibrate('L1_Gv', [64, 256, 1024, 4096], [1.0, 0.9, 1.04, 1.2])
    assert check.constant == pytest.approx(1.05)
    assert check.failures == [4096]
    assert not check.passed
    assert check.export()['passed'] is False

    check = EnvelopeCheck.calibrate('L1_Gv', [64, 256, 1024], [1.0, 0.9, 0.5], calibration=1)
    assert check.passed

    with pytest.raises(exc.InvalidParameterError):
        EnvelopeCheck.calibrate('L1_Gv', [64], [1.0], calibration=2)
    with pytest.raises(exc.InvariantViolation):
        EnvelopeCheck.calibrate('L1_Gv', [64, 256], [1.0, -1.0])


def test_dyadic_stages():
    stages = dyadic_stages(2, [8, 6, 12])
    assert [stage.R for stage in stages] == [2.0 ** 6, 2.0 ** 8, 2.0 ** 12]
    assert [stage.k for stage in stages] == [1, 2, 3]

    # 7 lattice points where 8 would be ideal
    report = NormReport(quantity='L2_Gv', k=3, v=2.0 ** -6, R=2.0 ** 12, measured=1.0)
    assert granularity(report, 2) == pytest.approx((7 / 8) ** 0.5)


def test_norm_report():
    report = NormReport(quantity='L1_fv', k=1, v=0.5, R=4.0, measured=2.0, bound=4.0)
    assert report.constant == 0.5
    assert NormReport(quantity='L1_fv', k=1, v=0.5, R=4.0, measured=2.0).constant is None

    with pytest.raises(exc.InvariantViolation):
        NormReport(quantity='L1_fv', k=1, v=0.5, R=4.0, measured=-1.0)


def test_suites_on_synthetic_reports():
    """ Test scaling_fits(), norm_envelopes(), select(): on reports with known laws """
    stages = dyadic_stages(2, range(6, 14, 2))
    reports = []
    for stage in stages:
        reports.append(NormReport(quantity='L2_fv', k=stage.k, v=stage.v, R=stage.R, measured=2 * stage.v ** 0.5))
        reports.append(NormReport(quantity='L1_dirichlet', k=stage.k, v=stage.v, R=stage.R,
                                  measured=0.3 * math.log(stage.R), bound=math.log(stage.R)))
    # Three stages only: no fit
    for stage in stages[:3]:
        reports.append(NormReport(quantity='L1_fv', k=stage.k, v=stage.v, R=stage.R, measured=stage.v))

    assert [r.R for r in select(reports, 'L2_fv')] == [stage.R for stage in stages]

    fits = scaling_fits(reports, 2)
    assert [fit.quantity for fit in fits] == ['L2_fv']
    assert fits[0].slope == pytest.approx(0.5)
    assert fits[0].within(1e-9)
    assert fits[0].tolerance == 0.005
    assert fits[0].passed is True

    checks = norm_envelopes(reports)
    assert [check.name for check in checks] == ['L1_dirichlet']
    assert checks[0].passed

    document = fits_document(fits, checks, config_hash='abc')
    assert document['fits'][0]['quantity'] == 'L2_fv'
    assert document['passed'] is True
    assert dumps_json(document).startswith('{\n  "config_hash": "abc"')


def test_check_plancherel_fails():
    report = NormReport(quantity='L2_Gv_physical', k=1, v=0.125, R=64.0, measured=1.0, bound=1.1)
    assert plancherel_consistency([report])[0][1] == pytest.approx(0.1 / 1.1)
    with pytest.raises(exc.InvariantViolation):
        check_plancherel([report])


def test_norms_csv():
    reports = [
        NormReport(quantity='L1_fv', k=1, v=0.5, R=4.0, measured=2.0, bound=4.0),
        NormReport(quantity='Hs_hv', k=1, v=0.5, R=4.0, measured=3.0, s=0.25),
    ]
    f = io.StringIO()
    write_norms_csv(reports, f, config_hash='h')
    rows = typical_test_csv(f.getvalue(), 'h', ['k', 'v', 'R', 'quantity', 's', 'measured', 'bound', 'constant', 'est_error'])
    assert len(rows) == 2
    assert rows[0][0] == '1' and rows[0][3] == 'L1_fv' and rows[0][4] == ''
    assert float(rows[0][7]) == 0.5
    assert rows[1][6] == '' and float(rows[1][4]) == 0.25
