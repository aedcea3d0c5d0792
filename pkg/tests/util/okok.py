""" OkOk helpers for unit-tests: okay, okay! we're equal! """

import math


class _Whatever:
    """ Ok, whatever

    Use to pass equality tests with whatever objects

    Example:
        assert record.export() == {'k': 2, 'crossTerms': Whatever, ...}
    """
    def __eq__(self, other):
        return True

    def __repr__(self):
        return '<Whatever>'


Whatever = _Whatever()


class Near:
    """ Ok, close enough

    Equal to any float within a relative tolerance

    Example:
        assert stage.export() == {'v': Near(0.028), ...}
    """
    def __init__(self, value: float, rel: float = 1e-9, abs: float = 0.0):
        self.value = value
        self.rel = rel
        self.abs = abs

    def __eq__(self, other):
        try:
            return math.isclose(float(other), self.value, rel_tol=self.rel, abs_tol=self.abs)
        except (TypeError, ValueError):
            return False

    def __repr__(self):
        return f'<Near {self.value!r}>'
