""" Subcommands: each one runs its suites, writes its artifacts into the output directory and returns an exit code """

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from collections import abc
from typing import Optional

from schrodloc import exc
from schrodloc.construction import Schedule, build_schedule, make_stage, write_stages_csv
from schrodloc.divergence_lab import (
    Certificate, EmpiricalSet, SearchConfig, Thresholds,
    calibration_run, certificate_trace, certificates_document, divergence_certificate,
    envelope_suite, limsup_report, search_Ek, write_bounds_csv, write_search_csv, write_trace_csv,
)
from schrodloc.profiles import default_table
from schrodloc.quadrature import QuadratureSpec
from schrodloc.sobolev import (
    NormReport, check_plancherel, dumps_json, fits_document, fits_passed, hs_membership, norm_envelopes, norm_suite,
    scaling_fits, select, write_norms_csv, write_scaling_points_csv,
)
from schrodloc.testing.profile import timeit
from schrodloc.util import fmt

from .artifacts import artifact_path, collate, write_text
from .config import RunConfig
from .svg import line_plot

logger = logging.getLogger(__name__)

# Stages of the recurrence used for the H_s membership certificates
MEMBERSHIP_STAGES = 64

# Traces and plots are made for this many valid certificates
TRACED_CERTIFICATES = 3

# Fits need this many stages
MIN_SCALING_STAGES = 4


def cmd_verify_bounds(config: RunConfig) -> int:
    """ Envelope suites, norm suites, Plancherel and H_s membership; 0 iff every calibrated envelope holds """
    spec = config.quadrature_spec()
    config_hash = config.content_hash()
    stages = config.scaling_stages()
    schedule = config.schedule()

    with timeit('verify-bounds'):
        suite = envelope_suite(stages, config.delta, spec, grid=config.envelope_grid())
        reports = _norm_reports(config, spec)
        check_plancherel(reports)
        norm_checks = norm_envelopes(reports)
        membership = [hs_membership(_membership_schedule(config), s) for s in (0.0, *config.s_values)]

    _write_csv(config.out, 'stages.csv', lambda f: write_stages_csv(schedule, f, config_hash))
    _write_csv(config.out, 'bounds.csv', lambda f: write_bounds_csv(suite, f, config_hash))
    _write_csv(config.out, 'norms.csv', lambda f: write_norms_csv(reports, f, config_hash))

    passed = suite.passed and all(check.passed for check in norm_checks)
    write_text(config.out, 'verify.json', dumps_json({
        'config_hash': config_hash,
        'passed': passed,
        'envelopes': suite.export(),
        'norm_envelopes': [check.export() for check in norm_checks],
        'membership': [m.export() for m in membership],
    }))

    for check in (*suite.checks, *norm_checks):
        logger.info(f'{check.name}: C = {check.constant:.4g}, {"pass" if check.passed else "FAIL"}')
    return 0 if passed else 1


def cmd_scaling(config: RunConfig) -> int:
    """ Log-log fits of the norms against v or R, with plot-ready points; 0 iff every fit and envelope holds """
    stages = config.scaling_stages()
    if len(stages) < MIN_SCALING_STAGES:
        raise exc.ConfigError('scaling_log2_R', f'fits need >= {MIN_SCALING_STAGES} stages, got {len(stages)}')
    spec = config.quadrature_spec()
    config_hash = config.content_hash()

    with timeit('scaling'):
        reports = _norm_reports(config, spec)
        fits = scaling_fits(reports, config.n, config.s_values)
        checks = norm_envelopes(reports)

    _write_csv(config.out, 'norms.csv', lambda f: write_norms_csv(reports, f, config_hash))
    _write_csv(config.out, 'scaling.csv', lambda f: write_scaling_points_csv(reports, f, config_hash))
    write_text(config.out, 'fits.json', dumps_json(fits_document(fits, checks, config_hash)))
    write_text(config.out, 'plot_scaling.svg', _scaling_plot(reports, config_hash))

    for fit in fits:
        status = {None: '', True: ', pass', False: ', FAIL'}[fit.passed]
        logger.info(f'{fit.quantity}: slope {fit.accepted_slope:.4f}, expected {fit.expected_slope}{status}')
    for check in checks:
        logger.info(f'{check.name}: C = {check.constant:.4g}, {"pass" if check.passed else "FAIL"}')
    return 0 if fits_passed(fits, checks) else 1


def cmd_search(config: RunConfig) -> int:
    """ search_Ek for every configured stage, and the limsup surrogate of the results """
    schedule = config.schedule()
    config_hash = config.content_hash()
    sets, thresholds = _search(config, schedule)

    report = limsup_report(sets, level=config.search_config().level)
    _write_csv(config.out, 'stages.csv', lambda f: write_stages_csv(schedule, f, config_hash))
    _write_search(config, sets, thresholds, config_hash)
    write_text(config.out, 'limsup.json', dumps_json({'config_hash': config_hash, **report.export()}))
    return 0


def cmd_certify(config: RunConfig) -> int:
    """ Certificates for the samples that pass at every stage """
    schedule = config.schedule()
    spec = config.quadrature_spec()
    config_hash = config.content_hash()
    table = default_table()

    sets, thresholds = _search(config, schedule)
    search = config.search_config().with_thresholds(thresholds)

    # The cross-term constant comes from the calibrated h_v envelopes
    with timeit('cross-term constant'):
        suite = envelope_suite(config.scaling_stages(), config.delta, spec, grid=config.envelope_grid(), table=table)
    C = suite.cross_constant

    passing = sorted(frozenset.intersection(*(s.passing_indices for s in sets)))[:config.certify_limit]
    points = {o.index: o.point for o in sets[0].outcomes}
    certificates = [
        divergence_certificate(schedule, points[i], search, spec, C=C, table=table)
        for i in passing
    ]

    report = limsup_report(sets, certificates, level=search.level)
    _write_csv(config.out, 'stages.csv', lambda f: write_stages_csv(schedule, f, config_hash))
    _write_csv(config.out, 'bounds.csv', lambda f: write_bounds_csv(suite, f, config_hash))
    _write_search(config, sets, thresholds, config_hash)
    write_text(config.out, 'certificates.json', dumps_json({
        **certificates_document(certificates, config_hash),
        'cross_constant': C,
    }))
    write_text(config.out, 'limsup.json', dumps_json({'config_hash': config_hash, **report.export()}))

    # Traces of |S_t h_{v_k}(x)| around each t_k
    traced = [c for c in certificates if c.valid][:TRACED_CERTIFICATES]
    trace = [(i, p) for i, c in enumerate(traced) for p in certificate_trace(schedule, c, spec, table=table)]
    _write_csv(config.out, 'trace.csv', lambda f: write_trace_csv((p for _, p in trace), f, config_hash))
    for i, certificate in enumerate(traced):
        write_text(config.out, f'plot_certificate_{i}.svg', _trace_plot(
            certificate, [p for j, p in trace if j == i], config_hash))

    logger.info(f'{report.certified} of {report.certificates} certificates are valid')
    return 0


def cmd_report(config: RunConfig) -> int:
    """ Collate the artifacts of the other commands into report.md

    Raises:
        exc.ArtifactError: missing artifacts, or artifacts of different configurations
    """
    out = config.out
    config_hash = collate(out)

    fits = _read_json(out, 'fits.json')
    search = _read_json(out, 'search.json')
    certificates = _read_json(out, 'certificates.json')
    limsup = _read_json(out, 'limsup.json')
    bounds = _read_csv(out, 'bounds.csv')

    lines = [
        '# schrodloc report',
        '',
        f'Config hash: `{config_hash}`',
        '',
        '## Claims and measurements',
        '',
        '| claim | expected | measured | status |',
        '|---|---|---|---|',
    ]

    for fit in fits['fits']:
        slope = fit['corrected_slope'] if fit['corrected_slope'] is not None else fit['slope']
        expected = fit['expected_slope']
        status = {None: '', True: 'pass ', False: 'FAIL '}[fit.get('passed')]
        lines.append(f'| slope of {fit["quantity"]} vs {fit["abscissa"]} | {_num(expected)} '
                     f'{_tolerance(fit.get("tolerance"))}| {_num(slope)} | {status}(residual {_num(fit["residual"])}) |')

    for name in sorted({row['envelope'] for row in bounds}):
        rows = [row for row in bounds if row['envelope'] == name]
        passed = all(row['passed'] == '1' for row in rows)
        lines.append(f'| envelope {name} holds with one constant | C = {_num(float(rows[0]["constant"]))} '
                     f'| max ratio {_num(max(float(row["ratio"]) for row in rows))} | {"pass" if passed else "FAIL"} |')

    for stage in limsup['stages']:
        lo, hi = stage['interval']
        lines.append(f'| {stage["name"]} has positive measure | > 0 | {_num(stage["fraction"])} '
                     f'[{_num(lo)}, {_num(hi)}] | {"pass" if lo > 0 else "open"} |')
    lo, hi = limsup['intersection']['interval']
    lines.append(f'| every stage at once (finite truncation) | > 0 | {_num(limsup["intersection"]["fraction"])} '
                 f'[{_num(lo)}, {_num(hi)}] | {"pass" if lo > 0 else "open"} |')
    sound = sum(1 for c in certificates['certificates'] if c['ledgerSound'])
    lines.append(f'| certificates: |S_t h(x)| bounded below outside supp h | valid | '
                 f'{certificates["valid"]} of {certificates["total"]} | ledger sound in {sound} |')

    lines += [
        '',
        f'Thresholds: {", ".join(f"{k} = {_num(v)}" for k, v in sorted(search["thresholds"].items()))}',
        '',
        f'The intersection is a {limsup["label"]}.',
        '',
        '## Plots',
        '',
    ]
    for name in ('plot_scaling.svg', *sorted(_certificate_plots(out))):
        lines.append(f'![{name}]({name})')

    write_text(out, 'report.md', '\n'.join(lines) + '\n')
    return 0


COMMANDS = {
    'verify-bounds': cmd_verify_bounds,
    'scaling': cmd_scaling,
    'search': cmd_search,
    'certify': cmd_certify,
    'report': cmd_report,
}


def _norm_reports(config: RunConfig, spec: QuadratureSpec) -> list[NormReport]:
    return norm_suite(config.scaling_stages(), spec, s_values=config.s_values, A=config.A, N=config.N)


def _membership_schedule(config: RunConfig) -> Schedule:
    """ The plain recurrence from v1, over many stages """
    try:
        return build_schedule(config.n, config.v1, config.delta, MEMBERSHIP_STAGES)
    except exc.InvalidParameterError as e:
        raise exc.ConfigError('v1', str(e)) from e


def _search(config: RunConfig, schedule: Schedule) -> tuple[list[EmpiricalSet], Thresholds]:
    """ Thresholds (configured, or calibrated at the first configured stage), then one search per stage """
    spec = config.quadrature_spec()
    search: SearchConfig = config.search_config()
    indices = config.stage_indices(schedule)

    thresholds = search.thresholds
    if thresholds is None:
        thresholds = calibration_run(make_stage(schedule, indices[0]), search, spec)
        search = search.with_thresholds(thresholds)

    sets = [search_Ek(make_stage(schedule, k), search, spec) for k in indices]
    return sets, thresholds


def _write_search(config: RunConfig, sets: abc.Sequence[EmpiricalSet], thresholds: Thresholds, config_hash: str):
    for result in sets:
        _write_csv(config.out, f'search_k{result.k}.csv', lambda f, r=result: write_search_csv(r, f, config_hash))
    write_text(config.out, 'search.json', dumps_json({
        'config_hash': config_hash,
        'thresholds': thresholds.export(),
        'sets': [s.export() for s in sets],
    }))


def _write_csv(out: str, name: str, write: abc.Callable[[io.StringIO], object]) -> str:
    buffer = io.StringIO()
    write(buffer)
    return write_text(out, name, buffer.getvalue())


def _read_json(out: str, name: str) -> dict:
    with open(artifact_path(out, name)) as f:
        return json.load(f)


def _read_csv(out: str, name: str) -> list[dict]:
    with open(artifact_path(out, name)) as f:
        lines = [line for line in f if not line.startswith('#')]
    return list(csv.DictReader(lines))


def _certificate_plots(out: str) -> list[str]:
    return [name for name in os.listdir(out) if name.startswith('plot_certificate_') and name.endswith('.svg')]


def _scaling_plot(reports: abc.Sequence[NormReport], config_hash: str) -> str:
    series = {}
    for quantity in ('L2_fv', 'L1_fv', 'L2_Gv', 'L1_Gv', 'L1_hv'):
        chosen = select(reports, quantity)
        if chosen:
            series[quantity] = ([r.v for r in chosen], [r.measured for r in chosen])
    for s in sorted({r.s for r in reports if r.s is not None}):
        chosen = select(reports, 'Hs_hv', s)
        series[f'Hs_hv(s={s:g})'] = ([r.v for r in chosen], [r.measured for r in chosen])
    return line_plot(series, title='Norms against v', xlabel='v', ylabel='norm', log_x=True, log_y=True,
                     config_hash=config_hash)


def _trace_plot(certificate: Certificate, points: abc.Sequence, config_hash: str) -> str:
    series = {
        f'k={record.k}, t_k={fmt(record.t)[:10]}': (
            [p.t / record.t for p in points if p.k == record.k],
            [p.value for p in points if p.k == record.k],
        )
        for record in certificate.records
    }
    x = ', '.join(f'{c:.4f}' for c in certificate.point.export())
    return line_plot(series, title=f'|S_t h_(v_k)(x)| near t_k, x = ({x})', xlabel='t / t_k', ylabel='|S_t h_(v_k)(x)|',
                     config_hash=config_hash)


def _tolerance(value: Optional[float]) -> str:
    return f'± {_num(value)} ' if value is not None else ''


def _num(value: Optional[float]) -> str:
    if value is None:
        return '-'
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return f'{value:.4g}'
