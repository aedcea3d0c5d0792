class BaseSchrodlocException(Exception):
    pass


class InvalidParameterError(BaseSchrodlocException, ValueError):
    """ Invalid input provided by the User

    Reported when a constructor or an operation receives parameters outside of its domain
    """

    def __init__(self, err: str):
        self.err = err
        super().__init__(f'Invalid parameter: {err}')


class ConfigError(InvalidParameterError):
    """ Invalid run configuration

    Reported when a config file or a command-line override cannot be parsed or fails validation
    """

    def __init__(self, key: str, err: str):
        self.key = key
        super().__init__(f'config key "{key}": {err}')


class ScheduleOverflowError(InvalidParameterError):
    """ Schedule truncation beyond the representable log-domain range """

    def __init__(self, k: int, log2_v: float):
        self.k = k
        self.log2_v = log2_v
        super().__init__(f'stage {k} has log2(v) = {log2_v!r}, outside of the representable range')


class DegenerateStageError(InvalidParameterError):
    """ A stage whose frequency lattice holds no integer

    Reported when R/D < 2, i.e. when v is too large for a meaningful stage
    """

    def __init__(self, k: int, R: float, ratio: float):
        self.k = k
        self.R = R
        self.ratio = ratio
        super().__init__(f'stage {k} is degenerate: R = {R!r}, R/D = {ratio!r} leaves no lattice point')


class DomainError(InvalidParameterError):
    """ An operation was evaluated outside of its domain (e.g. the kernel at t = 0) """


class NumericalError(BaseSchrodlocException):
    """ Base for numerical failures

    `where` names the operation that failed
    """

    def __init__(self, where: str, err: str):
        self.where = where
        super().__init__(f'{where}: {err}')


class QuadratureNonconvergenceError(NumericalError):
    """ The panel budget was exhausted before the tolerance was met

    The best value and its error estimate are kept, so that callers can report them
    """

    def __init__(self, where: str, value: complex, est_error: float, panels: int, target: float):
        self.value = value
        self.est_error = est_error
        self.panels = panels
        self.target = target
        super().__init__(where, f'quadrature did not converge: value={value!r}, est_error={est_error:.3e} '
                                f'> target={target:.3e} after {panels} panels')


class TruncationError(NumericalError):
    """ The decay envelope cannot certify the truncation of an improper integral """

    def __init__(self, where: str, needed: float, available: float):
        self.needed = needed
        self.available = available
        super().__init__(where, f'truncation at {needed!r} is required, but the table only reaches {available!r}')


class PrecisionLossError(NumericalError):
    """ A raw phase exceeds the magnitude the compensated phase arithmetic guarantees """

    def __init__(self, where: str, magnitude: float, ceiling: float):
        self.magnitude = magnitude
        self.ceiling = ceiling
        super().__init__(where, f'raw phase magnitude {magnitude:.3e} exceeds the ceiling {ceiling:.1e}')


class InvariantViolation(NumericalError):
    """ A verified property did not hold

    Reported by the verification suites
    """

    def __init__(self, where: str, check: str):
        self.check = check
        super().__init__(where, f'invariant violated: {check}')


class ArtifactError(BaseSchrodlocException):
    """ Output artifacts cannot be collated

    Reported when artifacts are missing or were produced by different configurations
    """

    def __init__(self, missing: tuple[str, ...] = (), hashes: tuple[str, ...] = ()):
        self.missing = missing
        self.hashes = hashes

        if missing:
            msg = f'missing artifacts: {", ".join(missing)}'
        else:
            msg = f'artifacts come from different configurations: {", ".join(hashes)}'
        super().__init__(msg)
