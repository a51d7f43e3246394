"""Integral representations of the summed series and the high-precision oracle.

The alternating factorial series sums to ``G = e E1(1)``, the area under
``y = e^(1 - 1/x)/x`` on [0, 1] (curve V1) and, after ``x = 1/(1 - ln v)``,
under ``y = 1/(1 - ln v)`` (curve V2). The odd double factorial series at
x = 1 is the area under ``e^(1/2) e^(-1/(2t^2))/t^2`` (curve ODDFACT).
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import mpmath

from .errors import DomainError, QuadratureError
from .precision import as_rational, bigfloat, working_precision


class CurveKind(enum.Enum):
    V1 = "v1"
    V2 = "v2"
    ODDFACT = "oddfact"
    CUSTOM = "custom"


@dataclass(frozen=True)
class CurveSpec:
    """An integrand on [lower, upper]; built-in curves vanish at their left endpoint."""

    kind: CurveKind
    func: Callable | None = None  # for CUSTOM; receives and returns mpf
    lower: Fraction = Fraction(0)
    upper: Fraction = Fraction(1)
    graded: bool = True  # grade the mesh geometrically toward ``lower``

    @classmethod
    def v1(cls) -> "CurveSpec":
        return cls(CurveKind.V1)

    @classmethod
    def v2(cls) -> "CurveSpec":
        return cls(CurveKind.V2)

    @classmethod
    def oddfact(cls) -> "CurveSpec":
        return cls(CurveKind.ODDFACT)

    @classmethod
    def custom(cls, func, lower=0, upper=1, graded: bool = False) -> "CurveSpec":
        return cls(CurveKind.CUSTOM, func, as_rational(lower), as_rational(upper), graded)

    def __call__(self, x):
        """Ordinate at x (mpf in, mpf out); 0 at the singular left endpoint."""
        if self.kind is CurveKind.CUSTOM:
            return self.func(x)
        if x == 0:
            return mpmath.mpf(0)
        if self.kind is CurveKind.V1:
            return mpmath.exp(1 - 1 / x) / x
        if self.kind is CurveKind.V2:
            return 1 / (1 - mpmath.log(x))
        return mpmath.exp(mpmath.mpf(1) / 2 - 1 / (2 * x * x)) / (x * x)


@dataclass(frozen=True)
class QuadratureResult:
    value: object
    error_estimate: object
    panels: int
    tolerance: object = None
    ordinates: tuple = ()  # (x, y) pairs, trapezoid only
    addends: tuple = ()  # weighted ordinates, trapezoid only


def _budget(digits: int | None) -> int:
    return max(working_precision(), (digits or 0) + 10)


def ordinates(curve: CurveSpec, grid: Sequence, digits: int | None = None) -> list:
    """y-values at the grid points, evaluated with ``digits + 10`` guard digits."""
    with mpmath.workdps(_budget(digits)):
        out = []
        for x in grid:
            xr = as_rational(x)
            if not curve.lower <= xr <= curve.upper:
                raise DomainError(f"grid point {xr} outside [{curve.lower}, {curve.upper}]")
            out.append(+curve(bigfloat(xr)))
        return out


def _trapezoid_sum(curve: CurveSpec, panels: int):
    h = (curve.upper - curve.lower) / panels
    grid = [curve.lower + i * h for i in range(panels + 1)]
    ys = [curve(bigfloat(x)) for x in grid]
    weights = [Fraction(1, 2)] + [Fraction(1)] * (panels - 1) + [Fraction(1, 2)]
    addends = [bigfloat(w * h) * y for w, y in zip(weights, ys)]
    return grid, ys, addends


def trapezoid(curve: CurveSpec, panels: int, digits: int | None = None) -> QuadratureResult:
    """Equal-width trapezoid rule with half-weight endpoints.

    With ``digits`` every addend ``w_i h y_i`` is rounded to that many decimals
    before summing, the way a hand computation proceeds. The error estimate is
    ``|T_n - T_2n| / 3``.
    """
    if panels < 1:
        raise DomainError("panels must be at least 1")
    with mpmath.workdps(_budget(digits)):
        grid, ys, exact = _trapezoid_sum(curve, panels)
        addends = exact
        if digits is not None:
            scale = mpmath.mpf(10) ** digits
            addends = [mpmath.nint(a * scale) / scale for a in exact]
        value = mpmath.fsum(addends)
        finer = mpmath.fsum(_trapezoid_sum(curve, 2 * panels)[2])
        estimate = abs(mpmath.fsum(exact) - finer) / 3
        return QuadratureResult(
            value=+value,
            error_estimate=+estimate,
            panels=panels,
            ordinates=tuple(zip(grid, ys)),
            addends=tuple(addends),
        )


# ---------------------------------------------------------------- Gauss-Legendre


@lru_cache(maxsize=32)
def gauss_legendre(n: int, dps: int) -> tuple:
    """Nodes and weights on [-1, 1]; Newton iteration on P_n from Chebyshev guesses."""
    with mpmath.workdps(dps + 10):
        nodes, weights = [], []
        eps = mpmath.mpf(10) ** (-(dps + 5))
        for i in range(1, n + 1):
            x = mpmath.cos(mpmath.pi * (i - mpmath.mpf(1) / 4) / (n + mpmath.mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpmath.mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                step = p1 / dp
                x -= step
                if abs(step) < eps:
                    break
            p0, p1 = mpmath.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
        return tuple(nodes), tuple(weights)


def _gauss(f, a, b, n: int, dps: int):
    nodes, weights = gauss_legendre(n, dps)
    half, mid = (b - a) / 2, (a + b) / 2
    return half * mpmath.fsum(w * f(mid + half * x) for x, w in zip(nodes, weights))


def _panel(f, a, b, dps):
    coarse = _gauss(f, a, b, 10, dps)
    fine = _gauss(f, a, b, 20, dps)
    return fine, abs(fine - coarse)


def adaptive_integral(curve: CurveSpec, tol=Fraction(1, 10**12), max_panels: int = 4000) -> QuadratureResult:
    """Adaptive Gauss-Legendre (20-point, checked against 10-point) on a graded mesh.

    Graded curves start from panels ``[2^-(j+1), 2^-j]`` down to a width
    where ``width * |y(width)|`` (a bound for integrands monotone near the
    endpoint) is below ``tol/4``; that sliver is dropped and its bound added
    to the error estimate. Panels whose two rules disagree most are bisected
    until the summed disagreement is below the remaining budget.
    """
    tol = as_rational(tol)
    if tol <= 0:
        raise DomainError("tol must be positive")
    digits = max(1, -int(mpmath.floor(mpmath.log10(bigfloat(tol)))))
    dps = _budget(digits + 5)
    with mpmath.workdps(dps):
        lo, hi = bigfloat(curve.lower), bigfloat(curve.upper)
        tolf = bigfloat(tol)
        edges = [hi]
        sliver = mpmath.mpf(0)
        if curve.graded:
            width = hi - lo
            while True:
                width /= 2
                edges.append(lo + width)
                bound = width * abs(curve(lo + width))
                if bound < tolf / 4:
                    sliver = bound
                    break
                if len(edges) > dps * 4:
                    raise QuadratureError("graded mesh did not reach the endpoint tolerance")
        else:
            edges.append(lo)
        edges.reverse()
        heap = []
        for a, b in zip(edges, edges[1:]):
            val, err = _panel(curve, a, b, dps)
            heapq.heappush(heap, (-err, a, b, val))
        budget = tolf - sliver
        while True:
            total_err = mpmath.fsum(-e for e, *_ in heap)
            if total_err < budget / 2:
                break
            if len(heap) >= max_panels:
                raise QuadratureError(f"tolerance {tol} unreachable within {max_panels} panels")
            _, a, b, _ = heapq.heappop(heap)
            m = (a + b) / 2
            for u, v in ((a, m), (m, b)):
                val, err = _panel(curve, u, v, dps)
                heapq.heappush(heap, (-err, u, v, val))
        value = mpmath.fsum(v for *_, v in heap)
        return QuadratureResult(value=+value, error_estimate=+(total_err + sliver), panels=len(heap), tolerance=tol)


# ---------------------------------------------------------------- oracles


def gompertz_constant(digits: int = 20):
    """``e E1(1) = 0.5963473623...`` from the V1 and V2 areas, which must agree."""
    if digits < 1 or digits > working_precision() - 10:
        raise DomainError(f"digits must lie in 1..{working_precision() - 10}")
    tol = Fraction(1, 10 ** (digits + 3))
    a = adaptive_integral(CurveSpec.v1(), tol)
    b = adaptive_integral(CurveSpec.v2(), tol)
    with mpmath.workdps(_budget(digits)):
        if abs(a.value - b.value) > mpmath.mpf(10) ** (-(digits + 1)):
            raise QuadratureError(f"V1 and V2 areas disagree: {a.value} vs {b.value}")
        return a.value


def gompertz_series(digits: int = 30):
    """``e E1(1)`` with ``E1(1) = -gamma + sum_{k>=1} (-1)^(k+1)/(k k!)``."""
    with mpmath.workdps(digits + 10):
        total = -mpmath.euler
        term_fact = mpmath.mpf(1)
        eps = mpmath.mpf(10) ** (-(digits + 5))
        k = 1
        while True:
            term_fact *= k
            t = mpmath.mpf(1) / (k * term_fact)
            total += t if k % 2 else -t
            if t < eps:
                break
            k += 1
        return +(mpmath.e * total)


def _erfc_series(z, digits: int):
    """``1 - (2/sqrt(pi)) sum (-1)^n z^(2n+1) / (n! (2n+1))``, for moderate z."""
    acc = mpmath.mpf(0)
    power = z
    fact = mpmath.mpf(1)
    eps = mpmath.mpf(10) ** (-(digits + 5))
    n = 0
    while True:
        t = power / (fact * (2 * n + 1))
        acc += t if n % 2 == 0 else -t
        if abs(t) < eps:
            break
        n += 1
        fact *= n
        power *= z * z
    return 1 - 2 / mpmath.sqrt(mpmath.pi) * acc


def odd_factorial_oracle(digits: int = 30):
    """``e^(1/2) sqrt(pi/2) erfc(1/sqrt 2) = 0.6556795424...``, the value of
    ``1 - 1 + 1*3 - 1*3*5 + ...`` (odd double factorials) at x = 1."""
    with mpmath.workdps(digits + 10):
        z = 1 / mpmath.sqrt(2)
        return +(mpmath.exp(mpmath.mpf(1) / 2) * mpmath.sqrt(mpmath.pi / 2) * _erfc_series(z, digits))


def hypergeometric_curve(p, q, x=1, m=0) -> CurveSpec:
    """Curve whose area on [0, 1] equals the sum of the series
    ``x^m (1 - p y + p(p+q) y^2 - ...)`` with ``y = x^q``.

    With ``a = p/q`` the sum is ``x^m/Gamma(a) int_0^inf t^(a-1) e^-t/(1 + q y t) dt``.
    For a > 1 take ``t = -ln u``; for a <= 1 first ``t = w^(1/a)`` (which removes
    the ``t^(a-1)`` singularity) and then ``w = -ln u``.
    """
    p, q, x, m = (as_rational(v) for v in (p, q, x, m))
    if p <= 0 or q <= 0 or x <= 0:
        raise DomainError("p, q and x must be positive")
    a = p / q

    def func(u):
        if u == 0 or u == 1 and a < 1:
            return mpmath.mpf(0)
        af = bigfloat(a)
        qy = bigfloat(q) * mpmath.power(bigfloat(x), bigfloat(q))
        scale = mpmath.power(bigfloat(x), bigfloat(m))
        L = -mpmath.log(u)
        if a > 1:
            return scale * mpmath.power(L, af - 1) / (1 + qy * L) / mpmath.gamma(af)
        t = mpmath.power(L, 1 / af)
        return scale * mpmath.exp(L - t) / (1 + qy * t) / mpmath.gamma(af + 1)

    return CurveSpec(CurveKind.CUSTOM, func, Fraction(0), Fraction(1), graded=True)


__all__ = [
    "CurveKind",
    "CurveSpec",
    "QuadratureResult",
    "adaptive_integral",
    "gauss_legendre",
    "gompertz_constant",
    "gompertz_series",
    "hypergeometric_curve",
    "odd_factorial_oracle",
    "ordinates",
    "trapezoid",
]
