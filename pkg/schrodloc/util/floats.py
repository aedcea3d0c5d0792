""" Float formatting for artifacts """

from __future__ import annotations

import math


def fmt(value: float) -> str:
    """ Format a float with 17 significant digits: exact round-trip for a double """
    value = float(value)
    if math.isnan(value):
        return 'nan'
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return f'{value:.17g}'
