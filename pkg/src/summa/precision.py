"""Exact/decimal conversion helpers and the working-precision setting.

Rationals are :class:`fractions.Fraction`; arbitrary-precision floats are
:class:`mpmath.mpf`. Every floating evaluation in the package runs inside
``mpmath.workdps`` at an explicit digit budget.
"""

from __future__ import annotations

import os
from decimal import ROUND_HALF_EVEN, ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from numbers import Rational

import mpmath

DEFAULT_PRECISION = 50
PRECISION_ENV = "SUMMA_PRECISION"


def working_precision() -> int:
    """Decimal digits used for floating work; ``SUMMA_PRECISION`` overrides."""
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_PRECISION
    try:
        digits = int(raw)
    except ValueError:
        raise ValueError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if digits < 15:
        raise ValueError(f"{PRECISION_ENV} must be at least 15, got {digits}")
    return digits


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions, and strings such as ``"3/4"`` or ``"0.25"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, mpmath.mpf):
        return mpf_to_fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of a binary mpf."""
    man, exp = mpmath.mpf(x).man_exp
    man, exp = int(man), int(exp)
    if exp >= 0:
        return Fraction(man * 2**exp)
    return Fraction(man, 2**-exp)


def bigfloat(value):
    """Convert to mpf at the current working precision."""
    if isinstance(value, mpmath.mpf):
        return value
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, Decimal):
        return mpmath.mpf(str(value))
    return mpmath.mpf(value)


def round_fraction(value, decimals: int, rounding=ROUND_HALF_UP) -> Fraction:
    """Round to ``decimals`` places, returning the exact decimal as a Fraction."""
    return Fraction(_to_decimal(value, decimals, rounding))


def fixed(value, decimals: int, rounding=ROUND_HALF_UP) -> str:
    """Fixed-point rendering with '.' as separator, e.g. ``fixed(4/7, 10)``."""
    d = _to_decimal(value, decimals, rounding)
    text = f"{d:.{decimals}f}"
    if text.startswith("-") and Decimal(text) == 0:
        text = text[1:]
    return text


def _to_decimal(value, decimals, rounding) -> Decimal:
    if isinstance(value, mpmath.mpf):
        value = mpf_to_fraction(value)
    frac = as_rational(value)
    quantum = Decimal(1).scaleb(-decimals)
    digits = len(str(abs(frac.numerator))) + len(str(frac.denominator)) + decimals + 10
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(frac.numerator) / Decimal(frac.denominator)
        return d.quantize(quantum, rounding=rounding)


def decimal_places(text: str) -> int:
    """Number of printed decimals in a literal such as ``"0.59637255"``."""
    text = text.strip()
    return len(text.split(".", 1)[1]) if "." in text else 0


def render_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


__all__ = [
    "DEFAULT_PRECISION",
    "PRECISION_ENV",
    "ROUND_HALF_EVEN",
    "ROUND_HALF_UP",
    "as_rational",
    "bigfloat",
    "decimal_places",
    "fixed",
    "mpf_to_fraction",
    "render_rational",
    "round_fraction",
    "working_precision",
]
