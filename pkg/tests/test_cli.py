import json
import os

import pytest

from schrodloc import exc
from schrodloc.cli import RunConfig, collate, commands, load_config, main, read_hash
from schrodloc.cli.svg import line_plot
from schrodloc.sobolev import NormReport


def test_config_defaults():
    """ Test RunConfig: the defaults are the n = 2 demo """
    config = RunConfig()
    schedule = config.schedule()
    assert schedule.K == 1
    assert schedule.k_max == 3
    assert schedule.watermark == 'override:v'
    assert config.stage_indices(schedule) == [1, 2, 3]
    assert config.thresholds() is None
    assert len(config.scaling_stages()) == 6

    spec = config.quadrature_spec()
    assert spec.rel_tol == 1e-10
    assert spec.max_panels == 1 << 21


def test_config_text():
    """ Test RunConfig.loads() and dumps(): comments, lists, none """
    config = RunConfig.loads(
        '# A recurrence\n'
        'n = 3\n'
        'v = none\n'
        'v1 = 0.2   # below δ/4\n'
        '\n'
        'stages = 2, 1\n'
        'scaling_log2_R = 6, 8, 10, 12\n'
    )
    assert config.n == 3
    assert config.v is None
    assert config.v1 == 0.2
    assert config.stages == (2, 1)
    assert config.scaling_log2_R == (6.0, 8.0, 10.0, 12.0)

    assert RunConfig.loads(config.dumps()) == config
    assert 'v = none\n' in config.dumps()
    assert config.content_hash() == RunConfig.loads(config.dumps()).content_hash()

    # Ints and floats dump the same
    assert RunConfig(scaling_log2_R=(6, 8)).content_hash() == RunConfig(scaling_log2_R=(6.0, 8.0)).content_hash()
    assert RunConfig(seed=8).content_hash() != RunConfig().content_hash()


@pytest.mark.parametrize(('text', 'key'), [
    ('n = 1', 'n'),
    ('n = two', 'n'),
    ('delta = 1.5', 'delta'),
    ('tau_grid_size = 10', 'tau_grid_size'),
    ('s_values = -0.5', 's_values'),
    ('c0_f = 0.1', 'c0_f'),
    ('c0_f = -1\nc0_G = 0\nc0_product = 0', 'c0_f'),
    ('colour = blue', 'colour'),
    ('just words', 'line 1'),
])
def test_config_errors(text: str, key: str):
    with pytest.raises(exc.ConfigError) as e:
        RunConfig.loads(text)
    assert e.value.key == key
    assert isinstance(e.value, exc.InvalidParameterError)


def test_config_schedule_errors():
    # Not decreasing
    with pytest.raises(exc.ConfigError) as e:
        RunConfig(v=(0.24, 0.5)).schedule()
    assert e.value.key == 'v'

    config = RunConfig(stages=(3, 1, 3))
    assert config.stage_indices(config.schedule()) == [1, 3]
    with pytest.raises(exc.ConfigError):
        RunConfig(stages=(5,)).stage_indices(RunConfig().schedule())


def test_load_config(tmp_path):
    path = tmp_path / 'run.conf'
    path.write_text('samples = 12\nc0_f = 0.1\nc0_G = 0\nc0_product = 0.05\n')

    config = load_config(str(path), {'seed': 3, 'stages': [2]})
    assert config.samples == 12
    assert config.seed == 3
    assert config.stages == (2,)
    assert config.thresholds().c0_G == 0.0
    assert config.search_config().samples == 12

    assert load_config(None) == RunConfig()
    with pytest.raises(exc.ConfigError):
        load_config(str(tmp_path / 'missing.conf'))


@pytest.mark.parametrize('argv', [
    # Invalid config
    ['search', '--override-v', '0.24, 0.5'],
    ['search', '--stages', 'one'],
    # Missing artifacts
    ['report'],
    # Too few stages to fit
    ['scaling', '--config', '{few_stages}'],
])
def test_main_config_errors(tmp_path, argv: list):
    """ Test main(): configuration and artifact errors exit with 2, before any numerical work """
    few_stages = tmp_path / 'few.conf'
    few_stages.write_text('scaling_log2_R = 6, 8\n')
    argv = [arg.format(few_stages=few_stages) for arg in argv]

    assert main([*argv, '--out', str(tmp_path / 'out')]) == 2


def _write_artifacts(out, config_hash: str, *, mixed: bool = False):
    """ A minimal set of artifacts, as the other commands write them """
    os.makedirs(out, exist_ok=True)
    header = f'# config_hash={config_hash}\n'

    def write(name: str, text: str):
        with open(os.path.join(out, name), 'w') as f:
            f.write(text)

    write('stages.csv', header + 'k,v,R,D,lattice_lo,lattice_hi,p\n')
    write('norms.csv', header + 'k,v,R,quantity,s,measured,bound,constant,est_error\n')
    write('scaling.csv', header + 'quantity,v,R,y\n')
    write('bounds.csv', header + 'envelope,k,R,ratio,constant,passed\n'
                                 'G_sup,1,64,0.5,0.525,1\n'
                                 'G_sup,2,256,0.51,0.525,1\n')
    write('search_k1.csv', (header if not mixed else '# config_hash=other\n') + 'index,x1,x2,t,value,passed\n')
    write('fits.json', json.dumps({
        'config_hash': config_hash,
        'fits': [{'quantity': 'L2_fv', 'abscissa': 'v', 'slope': 0.5, 'corrected_slope': None,
                  'expected_slope': 0.5, 'tolerance': 0.005, 'passed': True, 'residual': 1e-9}],
        'envelopes': [],
    }))
    write('search.json', json.dumps({
        'config_hash': config_hash,
        'thresholds': {'c0_f': 1.0, 'c0_G': 0.1, 'c0_product': 0.05},
        'sets': [],
    }))
    write('certificates.json', json.dumps({'config_hash': config_hash, 'certificates': [], 'valid': 0, 'total': 0}))
    estimate = {'name': 'F_1', 'fraction': 0.5, 'interval': [0.3, 0.7]}
    write('limsup.json', json.dumps({
        'config_hash': config_hash,
        'label': 'finite-stage truncation of the limsup set',
        'stages': [estimate],
        'intersection': {**estimate, 'name': 'intersection'},
    }))


def test_collate(tmp_path):
    """ Test collate(): one hash across every artifact """
    out = str(tmp_path)
    _write_artifacts(out, 'abc')
    assert collate(out) == 'abc'
    assert read_hash(os.path.join(out, 'bounds.csv')) == 'abc'
    assert read_hash(os.path.join(out, 'fits.json')) == 'abc'

    _write_artifacts(out, 'abc', mixed=True)
    with pytest.raises(exc.ArtifactError) as e:
        collate(out)
    assert 'search_k1.csv=other' in e.value.hashes

    os.remove(os.path.join(out, 'fits.json'))
    with pytest.raises(exc.ArtifactError) as e:
        collate(out)
    assert e.value.missing == ('fits.json',)


def test_report(tmp_path):
    """ Test the `report` command: the claims table is built from the artifacts """
    out = str(tmp_path)
    _write_artifacts(out, 'abc')
    assert main(['report', '--out', out]) == 0

    with open(os.path.join(out, 'report.md')) as f:
        report = f.read()
    assert 'Config hash: `abc`' in report
    assert '| slope of L2_fv vs v | 0.5 ± 0.005 | 0.5 | pass (residual 1e-09) |' in report
    assert '| envelope G_sup holds with one constant | C = 0.525 | max ratio 0.51 | pass |' in report
    assert '| F_1 has positive measure | > 0 | 0.5 [0.3, 0.7] | pass |' in report
    assert 'finite-stage truncation' in report
    assert '![plot_scaling.svg](plot_scaling.svg)' in report


@pytest.mark.parametrize(('exponent', 'status'), [
    # On the expected slope
    (0.5, 0),
    # Off by far more than the tolerance
    (0.9, 1),
])
def test_scaling_exit_status(tmp_path, monkeypatch, exponent: float, status: int):
    """ Test the `scaling` command: a fit off its expected slope fails the run, and fits.json says so """
    def norm_reports(config, spec):
        return [
            NormReport(quantity='L2_fv', k=stage.k, v=stage.v, R=stage.R, measured=2 * stage.v ** exponent)
            for stage in config.scaling_stages()
        ]
    monkeypatch.setattr(commands, '_norm_reports', norm_reports)

    out = str(tmp_path)
    assert main(['scaling', '--out', out]) == status

    with open(os.path.join(out, 'fits.json')) as f:
        document = json.load(f)
    assert document['passed'] is (status == 0)
    fit, = document['fits']
    assert fit['quantity'] == 'L2_fv'
    assert fit['tolerance'] == 0.005
    assert fit['passed'] is (status == 0)
    assert fit['slope'] == pytest.approx(exponent)


def test_line_plot():
    svg = line_plot({'a': ([1.0, 10.0, 100.0], [1.0, 0.1, 0.0])}, title='t', xlabel='x', ylabel='y',
                    log_x=True, log_y=True, config_hash='abc')
    assert svg.startswith('<svg')
    assert '<!-- config_hash=abc -->' in svg
    assert '<polyline' in svg
