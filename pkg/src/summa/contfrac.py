"""Continued fractions: series conversion, convergents, tail closure, regular CFs.

A unit-denominator fraction here is ``L/(1 + c1 y/(1 + c2 y/(1 + ...)))`` with
``y = x**power`` and ``L = leading * x**leading_power``. Its *levels* at a
point x are the partial numerators ``[L, c1 y, c2 y, ...]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import BracketError, BreakdownError, DomainError, LengthError
from .precision import as_rational, bigfloat, mpf_to_fraction, working_precision
from .series import (
    Custom,
    Factorial,
    Hypergeometric,
    OddDoubleFactorial,
    SeriesSpec,
    exact_power,
)

# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class EulerCF:
    numerators: tuple
    power: Fraction = Fraction(1)
    leading: Fraction = Fraction(1)
    leading_power: Fraction = Fraction(0)
    terminated: bool = False  # the expansion ended exactly (remainder vanished)

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(as_rational(c) for c in self.numerators))
        for attr in ("power", "leading", "leading_power"):
            object.__setattr__(self, attr, as_rational(getattr(self, attr)))

    def levels(self, x=1) -> list[Fraction]:
        x = as_rational(x)
        y = exact_power(x, self.power)
        return [self.leading * exact_power(x, self.leading_power)] + [c * y for c in self.numerators]


@dataclass(frozen=True)
class RegularCF:
    quotients: tuple
    truncated: bool = False  # precision ran out before max_quotients

    def __post_init__(self):
        q = tuple(int(a) for a in self.quotients)
        if any(a < 1 for a in q[1:]):
            raise DomainError("partial quotients after the first must be >= 1")
        object.__setattr__(self, "quotients", q)


class Side(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class ConvergentPair:
    p: object
    q: object
    index: int
    side: Side
    error_bound: Fraction | None = None  # 1/(q_k q_{k+1}) for regular CFs

    @property
    def value(self) -> Fraction:
        return Fraction(self.p) / Fraction(self.q)

    def reduced(self) -> "ConvergentPair":
        v = self.value
        return ConvergentPair(v.numerator, v.denominator, self.index, self.side, self.error_bound)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class LinearFractionalMap:
    """t -> (a + b t) / (c + d t)."""

    a: object
    b: object
    c: object
    d: object

    @classmethod
    def identity(cls) -> "LinearFractionalMap":
        return cls(0, 1, 1, 0)

    @property
    def determinant(self):
        return self.a * self.d - self.b * self.c

    def __call__(self, t):
        num, den = self.a + self.b * t, self.c + self.d * t
        if isinstance(num, int) and isinstance(den, int):
            return Fraction(num, den)
        return num / den

    def compose(self, inner: "LinearFractionalMap") -> "LinearFractionalMap":
        """``self(inner(t))``."""
        a, b, c, d = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = inner.a, inner.b, inner.c, inner.d
        return LinearFractionalMap(
            a * c2 + b * a2, a * d2 + b * b2, c * c2 + d * a2, c * d2 + d * b2
        )

    def inverse(self) -> "LinearFractionalMap":
        # s = (a + b t)/(c + d t)  <=>  t = (a - c s)/(d s - b) = (-a + c s)/(b - d s)
        return LinearFractionalMap(-self.a, self.c, self.b, -self.d)

    def as_integers(self) -> "LinearFractionalMap":
        """Clear denominators (no gcd reduction, so raw recurrence values survive)."""
        parts = [as_rational(v) for v in (self.a, self.b, self.c, self.d)]
        lcm = 1
        for v in parts:
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        return LinearFractionalMap(*(int(v * lcm) for v in parts))


@dataclass(frozen=True)
class TailClosure:
    a: Fraction
    s: object  # root of the closing cubic
    r: object  # closed value of the tail that starts at numerator a - 1
    polynomial: tuple  # highest degree first
    residual: object = None


# ---------------------------------------------------------------- power-series helpers


def _series_inverse(c: list[Fraction], n: int) -> list[Fraction]:
    if c[0] == 0:
        raise BreakdownError("series with zero constant term has no inverse")
    out = [1 / c[0]]
    for k in range(1, n):
        acc = sum((c[j] * out[k - j] for j in range(1, min(k, len(c) - 1) + 1)), Fraction(0))
        out.append(-acc / c[0])
    return out


def _series_mul(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: n - i]):
            out[i + j] += ai * bj
    return out


# ---------------------------------------------------------------- conversion


def series_to_cf(coefficients: Sequence, depth: int | None = None) -> EulerCF:
    """Successive division of ``1 + c1 y + c2 y^2 + ...`` into ``1/(1 + a1 y/(1 + a2 y/...))``.

    Each level inverts the current remainder series, strips the constant 1,
    factors out y and normalises by the new leading coefficient, which becomes
    the next partial numerator. A remainder that vanishes ends the fraction
    early (``terminated``); a zero leading coefficient with a nonzero
    remainder raises :class:`BreakdownError` naming the level.
    """
    c = [as_rational(v) for v in coefficients]
    if not c or c[0] != 1:
        raise DomainError("coefficients must be normalised so that c0 = 1")
    if depth is None:
        depth = len(c) - 1
    if depth > len(c) - 1:
        raise LengthError(f"depth {depth} needs {depth + 1} coefficients, got {len(c)}")

    nums = []
    u = c[: depth + 1]
    for level in range(depth):
        n = len(u)
        w = _series_inverse(u, n)
        v = w[1:]  # 1/u = 1 + y v
        if not v or all(x == 0 for x in v):
            return EulerCF(tuple(nums), terminated=True)
        if v[0] == 0:
            raise BreakdownError(f"zero leading remainder coefficient at level {level + 1}", level + 1)
        nums.append(v[0])
        u = [x / v[0] for x in v]
    return EulerCF(tuple(nums))


def cf_to_series(cf: EulerCF, order: int) -> list[Fraction]:
    """Expand ``1/(1 + a1 y/(1 + ...))`` back to ``order + 1`` power-series coefficients."""
    n = order + 1
    tail = [Fraction(0)] * n
    for a in reversed(cf.numerators):
        denom = [Fraction(1)] + tail[1:]
        denom[0] += tail[0]
        inv = _series_inverse(denom, n)
        tail = [Fraction(0)] + [a * x for x in inv[: n - 1]]
    denom = [Fraction(1) + tail[0]] + tail[1:]
    return [cf.leading * x for x in _series_inverse(denom, n)]


def hypergeometric_cf(p, q, depth: int) -> EulerCF:
    """Numerators p, q, p+q, 2q, p+2q, 3q, ... for ``1 - p y + p(p+q) y^2 - ...``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    p, q = as_rational(p), as_rational(q)
    nums = [p + (k // 2) * q if k % 2 == 0 else (k // 2 + 1) * q for k in range(depth)]
    return EulerCF(tuple(nums), power=q)


def ode_cf_numerators(f, a, b, c, m, n, depth: int) -> list:
    """Partial numerators of the fraction solving
    ``f x^(m+n) dx = x^(m+1) dz + a x^m z dx + b x^n z dx + c z^2 dx``.

    The fraction is ``f x^m/(b + N1 x^(m-n)/(b + N2 x^(m-n)/(b + ...)))`` with
    N1 = mb+ab+cf, N2 = mb-nb+cf, N3 = 2mb-nb+ab+cf, N4 = 2mb-2nb+cf, ...
    Arguments may be symbolic; only +, - and * are applied.
    """
    if b == 0:
        raise DomainError("b must be nonzero")
    out = []
    for k in range(depth):
        j = k // 2
        if k % 2 == 0:
            out.append((j + 1) * m * b - j * n * b + a * b + c * f)
        else:
            out.append((j + 1) * m * b - (j + 1) * n * b + c * f)
    return out


def ode_cf(f, a, b, c, m, n, depth: int) -> EulerCF:
    """Unit-denominator form of :func:`ode_cf_numerators` (numerators divided by b^2)."""
    f, a, b, c, m, n = (as_rational(v) for v in (f, a, b, c, m, n))
    raw = ode_cf_numerators(f, a, b, c, m, n, depth)
    return EulerCF(tuple(v / (b * b) for v in raw), power=m - n, leading=f / b, leading_power=m)


def cf_for(spec: SeriesSpec, depth: int) -> EulerCF:
    """Fraction for a series family: closed-form numerators when known, else successive division."""
    fam = spec.family
    if isinstance(fam, Factorial):
        return hypergeometric_cf(1, 1, depth)
    if isinstance(fam, OddDoubleFactorial):
        cf = hypergeometric_cf(1, 2, depth)
        return EulerCF(cf.numerators, power=2, leading_power=1)
    if isinstance(fam, Hypergeometric):
        cf = hypergeometric_cf(fam.p, fam.q, depth)
        return EulerCF(cf.numerators, power=fam.q, leading_power=fam.m)
    coeffs = spec.coefficients(depth + 1) if not isinstance(fam, Custom) else list(fam.coefficients)
    lead = coeffs[0]
    if lead == 0:
        raise BreakdownError("leading coefficient is zero", 0)
    cf = series_to_cf([v / lead for v in coeffs], min(depth, len(coeffs) - 1))
    return EulerCF(cf.numerators, power=fam.step, leading=lead, terminated=cf.terminated)


# ---------------------------------------------------------------- convergents


def _recurrence(levels: Sequence):
    """Convergents of ``levels[0]/(1 + levels[1]/(1 + ...))``, seeded with 0/1."""
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    out = [(p, q)]
    for a in levels:
        p_prev, p = p, p + a * p_prev
        q_prev, q = q, q + a * q_prev
        out.append((p, q))
    return out


def _plain(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def convergents(cf: EulerCF, x=1, count: int | None = None, reduce: bool = False) -> list[ConvergentPair]:
    """Convergents 0/1, L/1, ... by ``p_k = p_{k-1} + a_k p_{k-2}`` (same for q).

    Pairs are kept unreduced (20/34 stays 20/34) unless ``reduce``. Even
    indices bound the value from below, odd from above, when every level is
    positive.
    """
    levels = cf.levels(x)
    if count is None:
        count = len(levels) + 1
    if count > len(levels) + 1:
        raise LengthError(f"{count} convergents need {count - 1} levels, have {len(levels)}")
    pairs = _recurrence(levels[: count - 1])
    out = []
    for k, (p, q) in enumerate(pairs):
        cp = ConvergentPair(_plain(p), _plain(q), k, Side.LOWER if k % 2 == 0 else Side.UPPER)
        out.append(cp.reduced() if reduce else cp)
    return out


def interleave_means(values: Sequence, rounds: int) -> list[list]:
    """Replace the sequence by consecutive pairwise means, ``rounds`` times; return every round."""
    cur = list(values)
    out = []
    for _ in range(rounds):
        cur = [(cur[i] + cur[i + 1]) / 2 for i in range(len(cur) - 1)]
        out.append(cur)
    return out


# ---------------------------------------------------------------- blocks and tails


def block_map(levels: Sequence) -> LinearFractionalMap:
    """Map t -> levels[0]/(1 + levels[1]/(1 + ... levels[-1]/(1 + t)))."""
    if not levels:
        return LinearFractionalMap.identity()
    pairs = _recurrence(levels)
    (p1, q1), (p0, q0) = pairs[-1], pairs[-2]
    return LinearFractionalMap(_plain(p1), _plain(p0), _plain(q1), _plain(q0))


def compose_tail(cf: EulerCF, x, cut_indices: Sequence[int], tail_value):
    """Evaluate the fraction block by block around an approximate tail.

    ``cut_indices`` split the levels into blocks ``[0:c0], [c0:c1], ...``;
    ``tail_value`` stands for everything from level ``cut_indices[-1]`` on.
    Returns ``(value, maps)`` with one exact map per block.
    """
    levels = cf.levels(x)
    cuts = list(cut_indices)
    if any(b < a for a, b in zip([0] + cuts, cuts)) or (cuts and cuts[-1] > len(levels)):
        raise LengthError(f"cuts {cuts} do not partition {len(levels)} levels")
    maps = []
    start = 0
    for end in cuts:
        m = block_map(levels[start:end])
        if m.determinant == 0:
            raise BreakdownError(f"block {start}:{end} is degenerate", start)
        maps.append(m.as_integers() if _all_rational(m) else m)
        start = end
    value = tail_value
    for m in reversed(maps):
        value = m(value)
    return value, maps


def _all_rational(m: LinearFractionalMap) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in (m.a, m.b, m.c, m.d))


def tail_quadratic(a):
    """Positive root of r^2 + r = a: the tail when every numerator equals a."""
    a = as_rational(a)
    if a < 0:
        raise DomainError("a must be non-negative")
    with mpmath.workdps(working_precision()):
        return (mpmath.sqrt(4 * bigfloat(a) + 1) - 1) / 2


def _poly_eval(coeffs, x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_deriv(coeffs):
    n = len(coeffs) - 1
    return [c * (n - i) for i, c in enumerate(coeffs[:-1])]


def solve_bracketed(coeffs, lo, hi, digits: int):
    """Root of a polynomial in [lo, hi]: bisection to two decimals, Newton to ``digits``."""
    coeffs = [as_rational(c) for c in coeffs]
    lo, hi = as_rational(lo), as_rational(hi)
    flo, fhi = _poly_eval(coeffs, lo), _poly_eval(coeffs, hi)
    if flo == 0:
        return bigfloat(lo)
    if fhi == 0:
        return bigfloat(hi)
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > Fraction(1, 100):
        mid = (lo + hi) / 2
        fm = _poly_eval(coeffs, mid)
        if fm == 0:
            return bigfloat(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    deriv = _poly_deriv(coeffs)
    with mpmath.workdps(max(working_precision(), digits + 15)):
        s = bigfloat((lo + hi) / 2)
        fc = [bigfloat(c) for c in coeffs]
        dc = [bigfloat(c) for c in deriv]
        eps = mpmath.mpf(10) ** (-(digits + 5))
        for _ in range(200):
            step = _poly_eval(fc, s) / _poly_eval(dc, s)
            s -= step
            if abs(step) < eps:
                break
        else:  # pragma: no cover - Newton from a 0.01 bracket converges quadratically
            raise BracketError("Newton iteration did not settle")
        return +s


def tail_cubic(a, digits: int = 30, paired: bool = True) -> TailClosure:
    """Close a tail whose numerators grow by one per period.

    Paired numerators (a-1, a-1, a, a, a+1, ...): the tails r, s, t starting
    at a-1, a and a+1 are taken in arithmetic progression, giving
    ``2s^3 + 2s^2 - (2a-1)s - a = 0`` and ``r = (a-1)(s+1)/(s+a)``.

    Single numerators (a-1, a, a+1, ...): tails p, q, r starting there give
    ``2q^3 + 3q^2 - (2a-2)q - a = 0`` and ``p = (a-1)/(1+q)``.
    """
    a = as_rational(a)
    if a < 2:
        raise DomainError("a must be at least 2")
    if paired:
        poly = (Fraction(2), Fraction(2), -(2 * a - 1), -a)
    else:
        poly = (Fraction(2), Fraction(3), -(2 * a - 2), -a)
    guess = int(math.floor(tail_quadratic(a)))
    s = solve_bracketed(poly, max(0, guess - 1), guess + 2, digits)
    with mpmath.workdps(max(working_precision(), digits + 15)):
        if paired:
            r = (bigfloat(a) - 1) * (s + 1) / (s + bigfloat(a))
        else:
            r = (bigfloat(a) - 1) / (1 + s)
        residual = abs(_poly_eval([bigfloat(c) for c in poly], s))
    if residual >= mpmath.mpf(10) ** (-digits):
        raise BracketError(f"residual {residual} exceeds 1e-{digits}")
    return TailClosure(a=a, s=s, r=r, polynomial=poly, residual=residual)


def progression_polynomial(levels: Sequence, start: int, period: int) -> tuple:
    """Cubic whose root is the middle tail when tails at ``start``,
    ``start+period`` and ``start+2*period`` are in arithmetic progression.

    Tails obey ``T_i = M1(T_{i+P})`` and ``T_{i+P} = M2(T_{i+2P})``;
    ``M1(s) + M2^{-1}(s) = 2s`` clears to a cubic in ``s``.
    """
    need = start + 2 * period
    if need > len(levels):
        raise LengthError(f"closure at level {start} needs {need} levels, have {len(levels)}")
    m1 = block_map(levels[start : start + period])
    m2 = block_map(levels[start + period : need]).inverse()
    # (a1 + b1 s)(c2 + d2 s) + (a2 + b2 s)(c1 + d1 s) - 2 s (c1 + d1 s)(c2 + d2 s)
    a1, b1, c1, d1 = (as_rational(v) for v in (m1.a, m1.b, m1.c, m1.d))
    a2, b2, c2, d2 = (as_rational(v) for v in (m2.a, m2.b, m2.c, m2.d))
    cubic = -2 * d1 * d2
    quad = b1 * d2 + b2 * d1 - 2 * (c1 * d2 + d1 * c2)
    lin = a1 * d2 + b1 * c2 + a2 * d1 + b2 * c1 - 2 * c1 * c2
    const = a1 * c2 + a2 * c1
    return (cubic, quad, lin, const)


def progression_closure(levels: Sequence, start: int, period: int, digits: int = 30):
    """Approximate the tail from level ``start`` on; returns ``(value, middle_root, polynomial)``."""
    poly = progression_polynomial(levels, start, period)
    if poly[0] < 0:
        poly = tuple(-c for c in poly)
    # the middle tail sits near the constant-numerator estimate; widen upward if needed
    guess = int(math.floor(tail_quadratic(abs(as_rational(levels[start + period])))))
    lo, hi = max(0, guess - 1), guess + 2
    while (_poly_eval(poly, lo) > 0) == (_poly_eval(poly, hi) > 0) and hi < 4 * (guess + 2):
        hi += guess + 2
    s = solve_bracketed(poly, lo, hi, digits)
    with mpmath.workdps(max(working_precision(), digits + 15)):
        m1 = block_map(levels[start : start + period])
        value = m1(s)
    return value, s, poly


@dataclass(frozen=True)
class CFClosure:
    value: object
    maps: tuple
    cuts: tuple
    closure_start: int
    period: int
    tail: object  # closed tail value fed to the innermost block
    middle_root: object
    polynomial: tuple
    block_values: tuple = field(default_factory=tuple)  # value entering each block, innermost last


FACTORIAL_CUTS = (21, 31, 41)
ODDFACT_CUTS = (11,)


def cf_closure(
    spec: SeriesSpec,
    depth: int | None = None,
    digits: int = 30,
    cuts: Sequence[int] | None = None,
    period: int | None = None,
) -> CFClosure:
    """Build the fraction, close its tail, compose the blocks.

    Defaults follow the worked examples: the factorial series is cut at
    levels 21, 31 and 41 with a two-level closing period, the odd double
    factorial after level 11 with period one. ``depth`` replaces the cuts by
    a single cut at that level.
    """
    fam = spec.family
    if isinstance(fam, Custom):
        raise DomainError("tail closure needs a series family with a numerator law")
    if period is None:
        period = 1 if isinstance(fam, OddDoubleFactorial) else 2
    if cuts is None:
        if depth is not None:
            cuts = (depth,)
        elif isinstance(fam, Factorial):
            cuts = FACTORIAL_CUTS
        elif isinstance(fam, OddDoubleFactorial):
            cuts = ODDFACT_CUTS
        else:
            cuts = (41,)
    cuts = tuple(cuts)
    start = cuts[-1]
    cf = cf_for(spec, start + 2 * period)
    levels = cf.levels(spec.point_x)
    with mpmath.workdps(max(working_precision(), digits + 15)):
        tail, root, poly = progression_closure(levels, start, period, digits)
        value, maps = compose_tail(cf, spec.point_x, cuts, tail)
        entering = [tail]
        for m in reversed(maps[1:]):
            entering.append(m(entering[-1]))
    return CFClosure(
        value=value,
        maps=tuple(maps),
        cuts=cuts,
        closure_start=start,
        period=period,
        tail=tail,
        middle_root=root,
        polynomial=poly,
        block_values=tuple(reversed(entering)),
    )


def sum_by_cf_closure(spec: SeriesSpec, depth: int | None = None, digits: int = 30, **kw):
    """Value of the series from its continued fraction with a closed tail."""
    return cf_closure(spec, depth, digits, **kw).value


# ---------------------------------------------------------------- regular fractions


def real_to_regular_cf(value, max_quotients: int = 20, uncertainty=None) -> RegularCF:
    """Euclidean expansion ``[a0; a1, a2, ...]`` that never outruns the input's precision.

    The value is carried as an interval ``[v - u, v + u]``: Fractions are
    exact (u = 0), decimal strings are known to half a unit in the last
    printed place, mpf values to one unit in the last binary place. A
    quotient is emitted only when both ends agree on it; otherwise the
    result is flagged ``truncated``.
    """
    lo, hi = _interval(value, uncertainty)
    if hi <= 0:
        raise DomainError("value must be positive")
    quotients = []
    while len(quotients) < max_quotients:
        a_lo, a_hi = math.floor(lo), math.floor(hi)
        if a_lo != a_hi:
            return RegularCF(tuple(quotients), truncated=True)
        quotients.append(a_lo)
        lo, hi = lo - a_lo, hi - a_lo
        if lo == 0 and hi == 0:
            return RegularCF(tuple(quotients))
        if lo <= 0:
            return RegularCF(tuple(quotients), truncated=True)
        lo, hi = 1 / hi, 1 / lo
    return RegularCF(tuple(quotients))


def _interval(value, uncertainty):
    if isinstance(value, str):
        text = value.strip()
        v = Fraction(text)
        if uncertainty is None and "." in text:
            places = len(text.split(".", 1)[1])
            uncertainty = Fraction(1, 2 * 10**places)
    elif isinstance(value, mpmath.mpf):
        v = mpf_to_fraction(value)
        if uncertainty is None:
            man, exp = value.man_exp
            exp = int(exp)
            uncertainty = Fraction(2) ** exp if exp < 0 else Fraction(0)
    else:
        v = as_rational(value)
    u = as_rational(uncertainty or 0)
    return v - u, v + u


def regular_convergents(cf: RegularCF) -> list[ConvergentPair]:
    """p_k = a_k p_{k-1} + p_{k-2}; each pair carries ``1/(q_k q_{k+1})`` when q_{k+1} is known."""
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    raw = []
    for a in cf.quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        raw.append((p, q))
    out = []
    for k, (p, q) in enumerate(raw):
        bound = Fraction(1, q * raw[k + 1][1]) if k + 1 < len(raw) else None
        out.append(ConvergentPair(p, q, k, Side.LOWER if k % 2 == 0 else Side.UPPER, bound))
    return out


__all__ = [
    "CFClosure",
    "ConvergentPair",
    "FACTORIAL_CUTS",
    "ODDFACT_CUTS",
    "EulerCF",
    "LinearFractionalMap",
    "RegularCF",
    "Side",
    "TailClosure",
    "block_map",
    "cf_closure",
    "cf_for",
    "cf_to_series",
    "compose_tail",
    "convergents",
    "hypergeometric_cf",
    "interleave_means",
    "ode_cf",
    "ode_cf_numerators",
    "progression_closure",
    "progression_polynomial",
    "real_to_regular_cf",
    "regular_convergents",
    "series_to_cf",
    "solve_bracketed",
    "sum_by_cf_closure",
    "tail_cubic",
    "tail_quadratic",
]
