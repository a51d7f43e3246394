"""Difference tables, the halved-difference transform of alternating series,
and extrapolation of tabulated sequences back to index 0."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import DomainError, LengthError
from .precision import as_rational, bigfloat, mpf_to_fraction, round_fraction, working_precision
from .series import TermSequence


@dataclass(frozen=True)
class DifferenceTable:
    """Ascending forward differences: ``rows[k+1][i] = rows[k][i+1] - rows[k][i]``."""

    rows: tuple

    @property
    def leading(self) -> list[Fraction]:
        """First entry of every row: a, alpha, beta, gamma, ..."""
        return [r[0] for r in self.rows]

    @property
    def depth(self) -> int:
        return len(self.rows) - 1


@dataclass(frozen=True)
class ExtrapolationReport:
    value: object  # Fraction when exact, mpf otherwise
    terms_used: int
    correction_series: tuple = field(default_factory=tuple)
    truncation_bound: object = None  # |first omitted term|; None when the data stop first
    passes: int = 1
    log10_value: object = None


def difference_table(values: Sequence, depth: int | None = None) -> DifferenceTable:
    """Exact forward differences of ``values`` down to order ``depth``.

    Callers strip the alternating signs first and pass magnitudes.
    """
    row = tuple(as_rational(v) for v in values)
    if depth is None:
        depth = len(row) - 1
    if depth < 0 or depth >= len(row):
        raise LengthError(f"depth {depth} needs more than {len(row)} values")
    rows = [row]
    for _ in range(depth):
        prev = rows[-1]
        rows.append(tuple(prev[i + 1] - prev[i] for i in range(len(prev) - 1)))
    return DifferenceTable(tuple(rows))


def alternating_magnitudes(signed_terms: Sequence) -> list[Fraction]:
    """Strip the signs of ``a - b + c - ...``; DomainError if the signs do not alternate."""
    out = []
    for k, t in enumerate(signed_terms):
        t = as_rational(t)
        if t != 0 and (t > 0) != (k % 2 == 0):
            raise DomainError(f"term {k} ({t}) breaks the + - + - sign pattern")
        out.append(abs(t))
    return out


def euler_transform_series(magnitudes: Sequence, strict: bool = True) -> TermSequence:
    """Terms a/2, -alpha/4, beta/8, -gamma/16, ... of the transformed series.

    ``magnitudes`` are a, b, c, ... of ``a - b + c - ...``. The output has the
    same length as the input so the transform can be applied again.
    """
    mags = [as_rational(m) for m in magnitudes]
    if not mags:
        return TermSequence(())
    if strict and any(m < 0 for m in mags):
        raise DomainError("negative magnitude: the series is not alternating with leading +")
    lead = difference_table(mags).leading
    return TermSequence(tuple((-1) ** k * d / 2 ** (k + 1) for k, d in enumerate(lead)))


def euler_transform_sum(
    magnitudes: Sequence,
    depth: int | None = None,
    *,
    strict: bool = True,
    passes: int | None = None,
    max_passes: int = 6,
) -> ExtrapolationReport:
    """Sum ``a - b + c - ...`` as ``a/2 - alpha/4 + beta/8 - gamma/16 + ...``.

    ``depth`` is the highest difference order kept (default: all the data
    allow). When ``passes`` is None the transform is re-applied while its
    output is still alternating and does not decay (1 - 3 + 9 - ... needs two
    passes); pass an explicit count to pin the schedule.

    ``strict=False`` admits negative "magnitudes", as when the correction
    series of a logarithmic table is not strictly alternating.
    """
    mags = [as_rational(m) for m in magnitudes]
    if not mags:
        raise LengthError("nothing to sum")
    if depth is None:
        depth = len(mags) - 1
    if depth < 0 or depth >= len(mags):
        raise LengthError(f"depth {depth} needs more than {len(mags)} values")

    series = euler_transform_series(mags, strict=strict)
    done = 1
    while passes is None or done < passes:
        if passes is None:
            if done >= max_passes or not _needs_another_pass(series):
                break
        series = euler_transform_series(alternating_magnitudes(series), strict=strict)
        done += 1

    kept = series.values[: depth + 1]
    bound = abs(series.values[depth + 1]) if depth + 1 < len(series) else None
    return ExtrapolationReport(
        value=sum(kept, Fraction(0)),
        terms_used=len(kept),
        correction_series=tuple(kept),
        truncation_bound=bound,
        passes=done,
    )


def _needs_another_pass(series: TermSequence) -> bool:
    v = series.values
    if len(v) < 2 or v[-1] == 0:
        return False
    try:
        alternating_magnitudes(v)
    except DomainError:
        return False
    first = next(x for x in v if x != 0)
    return abs(v[-1]) >= abs(first)


# ---------------------------------------------------------------- halved-factorial schedule


def wallis_magnitudes(n: int) -> list[int]:
    """1, 1, 2, 6, 24, ...: magnitudes of 1 - 1 + 2 - 6 + 24 - ..."""
    out, f = [], 1
    for k in range(n):
        if k:
            f *= k
        out.append(f)
    return out


@dataclass(frozen=True)
class ScheduleStage:
    label: str
    terms: tuple  # transformed series produced at this stage
    summed: tuple  # leading terms moved into the running total


def halving_stages(extra_terms: int = 1) -> list[ScheduleStage]:
    """The three transforms behind 38015/65536.

    1 - 1 cancels; the remainder 2 - 6 + 24 - ... is halved to
    1 - 3 + 12 - 60 + ... and transformed (eight magnitudes, as printed).
    Doubling gives A with the leading 1 - 1 cancelling again; the six
    surviving terms are transformed, the first two kept; the last four are
    transformed once more and all kept. ``extra_terms`` carries one more
    magnitude through the pipeline so the first omitted term is known.
    """
    w = wallis_magnitudes(10 + extra_terms)
    halved = [Fraction(m, 2) for m in w[2:]]
    first = euler_transform_series(halved)
    doubled = [2 * t for t in first.values[2:]]
    second = euler_transform_series(alternating_magnitudes(doubled))
    third = euler_transform_series(alternating_magnitudes(second.values[2:]))
    return [
        ScheduleStage("A/2 = 1 - 3 + 12 - ...", first.values, ()),
        ScheduleStage("A = 7/4 - 32/8 + ...", second.values, second.values[:2]),
        ScheduleStage("A - 5/16 = 81/128 - ...", third.values, third.values[:4]),
    ]


def reproduce_s16_schedule() -> ExtrapolationReport:
    """Run the three-stage transform of 1 - 1 + 2 - 6 + ...; value 38015/65536."""
    stages = halving_stages()
    kept = stages[1].summed + stages[2].summed
    omitted = stages[2].terms[4]
    return ExtrapolationReport(
        value=sum(kept, Fraction(0)),
        terms_used=len(kept),
        correction_series=kept,
        truncation_bound=abs(omitted),
        passes=3,
    )


# ---------------------------------------------------------------- extrapolation


def b_sequence(n: int) -> list[int]:
    """1, 2, 5, 16, 65, 326, 1957, ...: a_1 = 1, a_{k+1} = k a_k + 1."""
    out = [1]
    for k in range(1, n):
        out.append(k * out[-1] + 1)
    return out[:n]


def newton_extrapolate_zero(
    table_values: Sequence, depth: int | None = None, digits: int | None = None
) -> ExtrapolationReport:
    """Newton forward formula at index 0 for values tabulated at 1, 2, 3, ...

    With differences taken preceding-minus-following (alpha = c1 - c2, ...),
    the value at index 0 is ``c1 + alpha + beta + gamma + ...``. ``digits``
    rounds each tabulated value first, mimicking a fixed decimal budget;
    ``depth`` caps the difference order.
    """
    vals = [as_rational(v) for v in table_values]
    if len(vals) < 3:
        raise LengthError("need at least 3 tabulated values")
    if digits is not None:
        vals = [round_fraction(v, digits) for v in vals]
    if depth is None:
        depth = len(vals) - 1
    lead = difference_table(vals, depth).leading
    # preceding-minus-following differences are (-1)^k times the ascending ones
    series = [(-1) ** k * d for k, d in enumerate(lead)]
    full = difference_table(vals).leading
    bound = abs(full[depth + 1]) if depth + 1 < len(full) else None
    return ExtrapolationReport(
        value=sum(series, Fraction(0)),
        terms_used=len(series),
        correction_series=tuple(series),
        truncation_bound=bound,
    )


def log_extrapolate(
    table_values: Sequence, digits: int | None = 7, depth: int | None = None
) -> ExtrapolationReport:
    """Extrapolate to index 0 on base-10 logarithms, then exponentiate.

    The logs (rounded to ``digits`` decimals; None keeps full working
    precision) are differenced upward. Their leading differences alpha,
    beta, ... form ``log(1/A) + L1 = alpha - beta + gamma - ...``, which is
    summed with :func:`euler_transform_sum` in a single pass truncated at
    ``depth``.
    """
    vals = [as_rational(v) for v in table_values]
    if any(v <= 0 for v in vals):
        raise DomainError("logarithms need positive table values")
    if len(vals) < 2:
        raise LengthError("need at least 2 tabulated values")
    prec = working_precision()
    with mpmath.workdps(prec + 10):
        logs = [mpmath.log10(bigfloat(v)) for v in vals]
        if digits is None:
            logs = [mpf_to_fraction(x) for x in logs]
        else:
            logs = [round_fraction(x, digits) for x in logs]
        lead = difference_table(logs).leading
        mags = lead[1:]
        if not mags:
            log_value = logs[0]
            report = ExtrapolationReport(Fraction(0), 0)
        else:
            report = euler_transform_sum(mags, depth, strict=False, passes=1)
            log_value = logs[0] - report.value
        value = mpmath.power(10, bigfloat(log_value))
    return ExtrapolationReport(
        value=value,
        terms_used=report.terms_used,
        correction_series=report.correction_series,
        truncation_bound=report.truncation_bound,
        passes=1,
        log10_value=log_value,
    )


__all__ = [
    "DifferenceTable",
    "ExtrapolationReport",
    "ScheduleStage",
    "alternating_magnitudes",
    "b_sequence",
    "difference_table",
    "euler_transform_series",
    "euler_transform_sum",
    "log_extrapolate",
    "newton_extrapolate_zero",
    "reproduce_s16_schedule",
    "halving_stages",
    "wallis_magnitudes",
]
