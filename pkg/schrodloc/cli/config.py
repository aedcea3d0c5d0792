""" Run configuration: a flat `key = value` file with # comments and comma-separated lists """

from __future__ import annotations

import dataclasses
import hashlib
from collections import abc
from typing import Optional, TypedDict

from schrodloc import exc
from schrodloc.construction import Schedule, ScheduleOverrides, Stage, build_schedule
from schrodloc.divergence_lab import EnvelopeGrid, SearchConfig, Thresholds
from schrodloc.quadrature import QuadratureSpec
from schrodloc.sobolev import dyadic_stages


class RunConfigDict(TypedDict, total=False):
    """ Dict representation of a run configuration """
    n: int
    v1: float
    v: Optional[list[float]]
    mu: Optional[float]
    delta: float
    K: Optional[int]
    k_max: int
    stages: Optional[list[int]]
    s_values: list[float]
    A: float
    N: int
    tolerance: float
    max_panels: int
    scaling_log2_R: list[float]
    tau_grid_size: int
    samples: int
    seed: int
    c0_f: Optional[float]
    c0_G: Optional[float]
    c0_product: Optional[float]
    c_window: float
    calibration_samples: int
    certify_limit: int
    envelope_x1_count: int
    envelope_t_count: int
    workers: int
    out: str


# How every key is parsed from its text
_KINDS = {
    'n': 'int',
    'v1': 'float',
    'v': 'floats?',
    'mu': 'float?',
    'delta': 'float',
    'K': 'int?',
    'k_max': 'int',
    'stages': 'ints?',
    's_values': 'floats',
    'A': 'float',
    'N': 'int',
    'tolerance': 'float',
    'max_panels': 'int',
    'scaling_log2_R': 'floats',
    'tau_grid_size': 'int',
    'samples': 'int',
    'seed': 'int',
    'c0_f': 'float?',
    'c0_G': 'float?',
    'c0_product': 'float?',
    'c_window': 'float',
    'calibration_samples': 'int',
    'certify_limit': 'int',
    'envelope_x1_count': 'int',
    'envelope_t_count': 'int',
    'workers': 'int',
    'out': 'str',
}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """ Everything a run depends on

    The defaults are the n = 2 demo: three explicit stages that satisfy v_k <= v_{k-1}^{2γ}
    and v_k² <= v_{k-1}^β, with v_1 < δ/4.
    """
    # Dimension
    n: int = 2

    # The recurrence starts at v1; an explicit `v` list replaces the recurrence
    v1: float = 0.24
    v: Optional[tuple[float, ...]] = (0.24, 0.028, 1.3e-4)
    mu: Optional[float] = None

    delta: float = 0.98
    K: Optional[int] = None
    k_max: int = 3

    # Schedule stages to search and certify. None: all of them.
    stages: Optional[tuple[int, ...]] = None

    # Sobolev exponents and the H_s split parameters
    s_values: tuple[float, ...] = (0.25,)
    A: float = 4.0
    N: int = 8

    # Quadrature
    tolerance: float = 1e-10
    max_panels: int = 1 << 21

    # Dyadic stages R = 2^j of the scaling and envelope suites
    scaling_log2_R: tuple[float, ...] = (6.0, 8.0, 10.0, 12.0, 14.0, 16.0)

    # Searches
    tau_grid_size: int = 65
    samples: int = 200
    seed: int = 7
    c0_f: Optional[float] = None
    c0_G: Optional[float] = None
    c0_product: Optional[float] = None
    c_window: float = 1.0
    calibration_samples: int = 32
    certify_limit: int = 20

    # Envelope grid
    envelope_x1_count: int = 4
    envelope_t_count: int = 7

    workers: int = 1

    # Output directory
    out: str = 'out'

    def __post_init__(self):
        # Normalize: 6 and 6.0 must dump the same
        for name, kind in _KINDS.items():
            value = getattr(self, name)
            if value is None:
                continue
            try:
                object.__setattr__(self, name, _COERCE[kind.rstrip('?')](value))
            except (TypeError, ValueError):
                raise exc.ConfigError(name, f'invalid value {value!r}') from None

        if self.n < 2:
            raise exc.ConfigError('n', f'the construction needs n >= 2, got {self.n!r}')
        if not 0 < self.delta < 1:
            raise exc.ConfigError('delta', f'must be in (0, 1), got {self.delta!r}')
        if self.k_max < 1:
            raise exc.ConfigError('k_max', f'must be >= 1, got {self.k_max!r}')
        if not self.tolerance > 0:
            raise exc.ConfigError('tolerance', f'must be > 0, got {self.tolerance!r}')
        if self.tau_grid_size < 64:
            raise exc.ConfigError('tau_grid_size', f'must be >= 64, got {self.tau_grid_size!r}')
        if self.samples < 1:
            raise exc.ConfigError('samples', f'must be >= 1, got {self.samples!r}')
        if any(not s >= 0 for s in self.s_values):
            raise exc.ConfigError('s_values', f'must be >= 0, got {list(self.s_values)!r}')
        thresholds = (self.c0_f, self.c0_G, self.c0_product)
        if any(c is not None for c in thresholds) and any(c is None for c in thresholds):
            raise exc.ConfigError('c0_f', 'set all three thresholds c0_f, c0_G, c0_product, or none of them')
        if any(c is not None and not c >= 0 for c in thresholds):
            raise exc.ConfigError('c0_f', f'thresholds must be >= 0, got {list(thresholds)!r}')

    @classmethod
    def from_dict(cls, config: RunConfigDict) -> RunConfig:
        """ Construct a config from a dict; missing keys keep their defaults

        Raises:
            exc.ConfigError: unknown keys or invalid values
        """
        unknown = set(config) - set(_KINDS)
        if unknown:
            key = sorted(unknown)[0]
            raise exc.ConfigError(key, 'unknown key')

        values = {
            key: tuple(value) if isinstance(value, list) else value
            for key, value in config.items()
        }
        try:
            return cls(**values)
        except exc.ConfigError:
            raise
        except (TypeError, ValueError) as e:
            raise exc.ConfigError('?', str(e)) from e

    def export(self) -> RunConfigDict:
        """ Convert back into a dict """
        return RunConfigDict(**{  # type: ignore[misc]
            field.name: list(value) if isinstance(value, tuple) else value
            for field in dataclasses.fields(self)
            for value in (getattr(self, field.name),)
        })

    @classmethod
    def loads(cls, text: str) -> RunConfig:
        """ Parse the config file format

        Raises:
            exc.ConfigError: a malformed line, an unknown key, or an invalid value
        """
        config = {}
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise exc.ConfigError(f'line {number}', f'expected "key = value", got {line!r}')
            key, value = (part.strip() for part in line.split('=', 1))
            if key not in _KINDS:
                raise exc.ConfigError(key, 'unknown key')
            config[key] = _parse(key, value)
        return cls.from_dict(config)  # type: ignore[arg-type]

    def dumps(self) -> str:
        """ The canonical text: every key, in field order """
        return ''.join(
            f'{name} = {_format(value)}\n'
            for name, value in self.export().items()
        )

    def content_hash(self) -> str:
        """ SHA-256 of the canonical text """
        return hashlib.sha256(self.dumps().encode()).hexdigest()

    def replace(self, **changes) -> RunConfig:
        """ A copy with some keys changed; command-line overrides go through here """
        return self.from_dict({**self.export(), **changes})  # type: ignore[typeddict-item]

    # ### Callbacks for commands
    # Commands build their numerical objects through these methods

    def quadrature_spec(self) -> QuadratureSpec:
        return QuadratureSpec.from_tolerance(self.tolerance, max_panels=self.max_panels)

    def schedule(self) -> Schedule:
        """ The schedule, with overrides

        Raises:
            exc.ConfigError: the schedule is invalid
        """
        overrides = ScheduleOverrides(mu=self.mu, v=self.v, K=self.K)
        try:
            return build_schedule(self.n, self.v1, self.delta, self.k_max, overrides)
        except exc.InvalidParameterError as e:
            raise exc.ConfigError('v' if self.v is not None else 'v1', str(e)) from e

    def stage_indices(self, schedule: Schedule) -> list[int]:
        """ The configured stages of a schedule

        Raises:
            exc.ConfigError: a stage outside of [K, k_max]
        """
        if self.stages is None:
            return list(schedule.stage_indices)
        bad = [k for k in self.stages if k not in schedule.stage_indices]
        if bad:
            raise exc.ConfigError('stages', f'stages {bad} are outside of [K, k_max] = [{schedule.K}, {schedule.k_max}]')
        return sorted(set(self.stages))

    def thresholds(self) -> Optional[Thresholds]:
        if self.c0_f is None or self.c0_G is None or self.c0_product is None:
            return None
        return Thresholds(c0_f=self.c0_f, c0_G=self.c0_G, c0_product=self.c0_product)

    def search_config(self) -> SearchConfig:
        return SearchConfig(
            samples=self.samples,
            seed=self.seed,
            tau_grid_size=self.tau_grid_size,
            thresholds=self.thresholds(),
            delta=self.delta,
            c_window=self.c_window,
            calibration_samples=self.calibration_samples,
            workers=self.workers,
        )

    def scaling_stages(self) -> list[Stage]:
        """ Dyadic stages of the scaling suites, coarsest first """
        try:
            return dyadic_stages(self.n, self.scaling_log2_R)
        except exc.InvalidParameterError as e:
            raise exc.ConfigError('scaling_log2_R', str(e)) from e

    def envelope_grid(self) -> EnvelopeGrid:
        return EnvelopeGrid(x1_count=self.envelope_x1_count, t_count=self.envelope_t_count)


_COERCE = {
    'int': int,
    'float': float,
    'ints': lambda values: tuple(int(x) for x in values),
    'floats': lambda values: tuple(float(x) for x in values),
    'str': str,
}


def _parse(key: str, text: str):
    kind = _KINDS[key]
    optional = kind.endswith('?')
    kind = kind.rstrip('?')
    if optional and text.lower() == 'none':
        return None
    try:
        if kind == 'int':
            return int(text)
        elif kind == 'float':
            return float(text)
        elif kind == 'ints':
            return [int(item) for item in _items(text)]
        elif kind == 'floats':
            return [float(item) for item in _items(text)]
        else:
            return text
    except ValueError:
        raise exc.ConfigError(key, f'cannot parse {text!r} as {kind}') from None


def _items(text: str) -> list[str]:
    return [item.strip() for item in text.split(',') if item.strip()]


def _format(value) -> str:
    if value is None:
        return 'none'
    if isinstance(value, list):
        return ', '.join(_format(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_list(key: str, text: str) -> list:
    """ A command-line list, parsed like the config value of `key` """
    return _parse(key, text)


def load_config(path: Optional[str], overrides: abc.Mapping[str, object] = {}) -> RunConfig:
    """ The config file at `path` (defaults when None), with command-line overrides

    Raises:
        exc.ConfigError: the file cannot be read or parsed
    """
    if path is None:
        config = RunConfig()
    else:
        try:
            with open(path) as f:
                config = RunConfig.loads(f.read())
        except OSError as e:
            raise exc.ConfigError('--config', f'cannot read {path}: {e}') from e
    return config.replace(**overrides) if overrides else config
