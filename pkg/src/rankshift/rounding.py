"""Rounding conventions used throughout the package.

Two distinct kinds of rounding appear in an assessment run and they must not
be conflated:

* *count rounding* turns a real-valued product quota into an integer number
  of publications (:func:`round_count`), with a configurable tie rule;
* *display rounding* fixes decimal precision for reported percentages and
  ratios (:func:`round_half_up`), always half-up, as in the published tables.
"""

from __future__ import annotations

import math
from decimal import ROUND_HALF_UP, Decimal

ROUNDING_MODES = ("half_up", "half_even", "floor", "ceil")


def round_count(x: float, mode: str = "half_up") -> int:
    """Round a non-negative quota to an integer count.

    ``half_up`` rounds ties away from zero (2.5 -> 3), ``half_even`` is
    banker's rounding (2.5 -> 2), ``floor`` and ``ceil`` truncate in the
    obvious directions.
    """
    if x < 0:
        raise ValueError(f"quota must be non-negative, got {x!r}")
    if mode == "half_up":
        # floor(x + 0.5) is exact here: ties have an exact binary
        # representation, so adding 0.5 cannot drift across an integer.
        return math.floor(x + 0.5)
    if mode == "half_even":
        return round(x)
    if mode == "floor":
        return math.floor(x)
    if mode == "ceil":
        return math.ceil(x)
    raise ValueError(f"unknown rounding mode {mode!r}; expected one of {ROUNDING_MODES}")


def round_half_up(x: float, ndigits: int = 1) -> float:
    """Round to ``ndigits`` decimals with ties away from zero.

    Uses the shortest decimal representation of ``x`` (via ``repr``) so that
    e.g. ``8.85`` rounds to ``8.9`` even though its binary value is slightly
    below the tie.
    """
    exponent = Decimal(1).scaleb(-ndigits)
    return float(Decimal(repr(x)).quantize(exponent, rounding=ROUND_HALF_UP))


def ratio_display(staff_per_product: float) -> str:
    """Format a staff-per-product ratio, e.g. ``1 : 5.1`` (``1 : 4`` if whole).

    The right-hand side is rounded half-up to one decimal and a trailing
    ``.0`` is dropped.
    """
    rounded = round_half_up(staff_per_product, 1)
    return f"1 : {rounded:g}"


def percent_display(fraction: float) -> str:
    """Format a fraction as a percent label, e.g. ``0.089 -> '8.9%'``."""
    return f"{round(fraction * 100, 6):g}%"
