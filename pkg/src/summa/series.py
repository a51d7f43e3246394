"""Series families, exact term generation, partial sums and genus probing.

Every series is handled as an explicit finite prefix plus the rule that
regenerates it; nothing here is lazy or infinite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DomainError, LengthError, PoleError, UnclassifiedSeries
from .precision import as_rational


class SignPattern(enum.Enum):
    ALTERNATING = "alternating"
    CONSTANT = "constant"


class Genus(enum.Enum):
    """The four kinds of divergent series."""

    I = "I"  # noqa: E741  bounded terms, constant sign
    II = "II"  # bounded terms, alternating sign
    III = "III"  # unbounded terms, constant sign
    IV = "IV"  # unbounded terms, alternating sign


# ---------------------------------------------------------------- families


@dataclass(frozen=True)
class Factorial:
    """1 - 1x + 2x^2 - 6x^3 + 24x^4 - ..."""

    name = "factorial"
    leading_power = Fraction(0)
    step = Fraction(1)

    def coefficient(self, k: int) -> Fraction:
        return Fraction((-1) ** k * math.factorial(k))


@dataclass(frozen=True)
class Hypergeometric:
    """x^m - p x^(m+q) + p(p+q) x^(m+2q) - p(p+q)(p+2q) x^(m+3q) + ..."""

    p: Fraction
    q: Fraction
    m: Fraction = Fraction(0)
    name = "hypergeom"

    def __post_init__(self):
        for attr in ("p", "q", "m"):
            object.__setattr__(self, attr, as_rational(getattr(self, attr)))

    @property
    def leading_power(self) -> Fraction:
        return self.m

    @property
    def step(self) -> Fraction:
        return self.q

    def coefficient(self, k: int) -> Fraction:
        c = Fraction(1)
        for j in range(k):
            c *= -(self.p + j * self.q)
        return c


@dataclass(frozen=True)
class OddDoubleFactorial:
    """x - 1x^3 + 1*3x^5 - 1*3*5x^7 + ..."""

    name = "oddfact"
    leading_power = Fraction(1)
    step = Fraction(2)

    def coefficient(self, k: int) -> Fraction:
        c = 1
        for j in range(1, 2 * k, 2):
            c *= j
        return Fraction((-1) ** k * c)


@dataclass(frozen=True)
class Geometric:
    """1 + r x + r^2 x^2 + ..."""

    ratio: Fraction
    name = "geometric"
    leading_power = Fraction(0)
    step = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "ratio", as_rational(self.ratio))

    def coefficient(self, k: int) -> Fraction:
        return self.ratio**k


@dataclass(frozen=True)
class Custom:
    """Explicit coefficient list c_0 + c_1 x + c_2 x^2 + ..."""

    coefficients: tuple
    name = "custom"
    leading_power = Fraction(0)
    step = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(as_rational(c) for c in self.coefficients))

    def coefficient(self, k: int) -> Fraction:
        if k >= len(self.coefficients):
            raise LengthError(
                f"custom series has {len(self.coefficients)} coefficients, term {k} requested"
            )
        return self.coefficients[k]


Family = Factorial | Hypergeometric | OddDoubleFactorial | Geometric | Custom


@dataclass(frozen=True)
class SeriesSpec:
    family: Family
    point_x: Fraction = Fraction(1)
    sign_pattern: SignPattern | None = None  # None keeps the family's own signs

    def __post_init__(self):
        object.__setattr__(self, "point_x", as_rational(self.point_x))

    def exponent(self, k: int) -> Fraction:
        return self.family.leading_power + k * self.family.step

    def coefficients(self, k: int) -> list[Fraction]:
        """First ``k`` coefficients in the variable ``x**step`` (leading power removed)."""
        return [self.family.coefficient(i) for i in range(k)]


@dataclass(frozen=True)
class TermSequence:
    values: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_rational(v) for v in self.values))

    @property
    def length(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


# ---------------------------------------------------------------- operations


def exact_power(x: Fraction, e: Fraction) -> Fraction:
    """x**e when the result is rational; raise DomainError otherwise."""
    if e.denominator == 1:
        if x == 0 and e < 0:
            raise PoleError("0 raised to a negative power")
        return x ** int(e)
    if x == 1:
        return Fraction(1)
    num = _exact_root(abs(x.numerator), e.denominator)
    den = _exact_root(x.denominator, e.denominator)
    if num is None or den is None or x < 0:
        raise DomainError(f"{x}^{e} is not rational")
    return Fraction(num, den) ** e.numerator


def _exact_root(n: int, k: int):
    r = round(n ** (1.0 / k)) if n < 2**1000 else None
    if r is None:
        return None
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def terms(spec: SeriesSpec, k: int) -> TermSequence:
    """First ``k`` signed terms of ``spec`` evaluated exactly at its point."""
    if k < 1:
        raise ValueError("k must be at least 1")
    out = []
    for i in range(k):
        c = spec.family.coefficient(i)
        if spec.sign_pattern is SignPattern.ALTERNATING:
            c = (-1) ** i * abs(c)
        elif spec.sign_pattern is SignPattern.CONSTANT:
            c = abs(c)
        out.append(c * exact_power(spec.point_x, spec.exponent(i)))
    return TermSequence(tuple(out))


def partial_sums(t: TermSequence | Sequence) -> list[Fraction]:
    sums, acc = [], Fraction(0)
    for v in t:
        acc += as_rational(v)
        sums.append(acc)
    return sums


def geometric_value(ratio) -> Fraction:
    """Value 1/(1 - ratio) of the expression that generates 1 + a + a^2 + ..."""
    ratio = as_rational(ratio)
    if ratio == 1:
        raise PoleError("1 + 1 + 1 + ... has its generating expression's pole at ratio 1")
    return 1 / (1 - ratio)


def classify_genus(spec: SeriesSpec, probe_depth: int = 32) -> Genus:
    """Sort a divergent series into genus I-IV from its first ``probe_depth`` terms.

    Term magnitudes must be monotone over the window. Bounded vs unbounded is
    read off the growth of the successive increments: non-shrinking increments
    or a power-law decay no faster than k**-1.2 count as unbounded, decay
    faster than k**-1.5 as bounded. Anything in between, non-monotone
    magnitudes, mixed signs, or terms shrinking to zero raise
    :class:`UnclassifiedSeries`.
    """
    if probe_depth < 8:
        raise ValueError("probe_depth must be at least 8")
    t = list(terms(spec, probe_depth))
    if any(v == 0 for v in t):
        raise UnclassifiedSeries("zero term inside the probe window")

    if all(v > 0 for v in t) or all(v < 0 for v in t):
        alternating = False
    elif all((t[i] > 0) != (t[i + 1] > 0) for i in range(len(t) - 1)):
        alternating = True
    else:
        raise UnclassifiedSeries("signs neither constant nor alternating")

    bounded = _magnitudes_bounded([abs(v) for v in t])
    if bounded:
        return Genus.II if alternating else Genus.I
    return Genus.IV if alternating else Genus.III


_UNBOUNDED_EXPONENT = 1.2
_BOUNDED_EXPONENT = 1.5


def _magnitudes_bounded(m: list[Fraction]) -> bool:
    d = [m[i + 1] - m[i] for i in range(len(m) - 1)]
    if all(x == 0 for x in d):
        return True
    increasing = all(x >= 0 for x in d)
    decreasing = all(x <= 0 for x in d)
    if not (increasing or decreasing):
        raise UnclassifiedSeries("term magnitudes are not monotone over the probe window")

    if increasing:
        if all(d[i + 1] >= d[i] for i in range(len(d) - 1)):
            return False
        alpha = _decay_exponent(d)
        if alpha is None:
            raise UnclassifiedSeries("increments vanish irregularly")
        if alpha <= _UNBOUNDED_EXPONENT:
            return False
        if alpha > _BOUNDED_EXPONENT:
            return True
        raise UnclassifiedSeries(f"growth exponent {alpha:.2f} is ambiguous")

    # Shrinking magnitudes: bounded only when the limit stays clear of zero.
    d1, d2 = d[-1], d[-2]
    if d1 == d2:
        raise UnclassifiedSeries("terms decrease linearly; they will cross zero")
    limit = m[-1] - d1 * d1 / (d1 - d2)
    if limit >= m[-1] / 2:
        return True
    raise UnclassifiedSeries("terms shrink toward zero; the series is not divergent")


def _decay_exponent(d: list[Fraction]):
    n = len(d)
    lo, hi = n // 2, n - 1
    if d[lo] <= 0 or d[hi] <= 0:
        return None
    ratio = _log(d[hi]) - _log(d[lo])
    return -ratio / math.log((hi + 1) / (lo + 1))


def _log(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


__all__ = [
    "Custom",
    "Factorial",
    "Family",
    "Genus",
    "Geometric",
    "Hypergeometric",
    "OddDoubleFactorial",
    "SeriesSpec",
    "SignPattern",
    "TermSequence",
    "classify_genus",
    "exact_power",
    "geometric_value",
    "partial_sums",
    "terms",
]
