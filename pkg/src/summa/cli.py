"""``summa`` command line: sum a series, print tables, rerun the worked examples.

Exit codes: 0 success, 1 reproduction mismatch, 2 usage error, 3 method breakdown.
"""

from __future__ import annotations

import csv
import io
import json
import re
import sys
from fractions import Fraction

import click
import mpmath

from . import contfrac, differences, quadrature, reproduce
from .errors import SummaError
from .precision import as_rational, fixed, render_rational, working_precision
from .series import (
    Custom,
    Factorial,
    Geometric,
    Hypergeometric,
    OddDoubleFactorial,
    SeriesSpec,
    geometric_value,
    terms,
)

EXIT_MISMATCH = 1
EXIT_BREAKDOWN = 3
CLI_CF_DEPTH = 121  # closure level for `sum --method cf`; error near 1e-16 for the factorial series

_SPEC_RE = re.compile(r"^(?P<name>[a-z]+)(?::(?P<params>[^@]*))?(?:@x=(?P<x>[^@]+))?$")


class SpecError(click.BadParameter):
    pass


def parse_spec(text: str, cycle_length: int = 64) -> SeriesSpec:
    """Parse ``factorial@x=1``, ``hypergeom:p=1,q=2@x=1``, ``geometric:r=2``,
    ``oddfact``, ``custom:[1,-1,2,-6]@x=1``.

    A custom list ending in ``...`` repeats its listed values cyclically.
    """
    m = _SPEC_RE.match(text.strip().replace(" ", ""))
    if not m:
        raise SpecError(f"cannot parse series {text!r}")
    name, params, x = m.group("name"), m.group("params"), m.group("x")
    try:
        point = as_rational(x) if x is not None else Fraction(1)
        if name == "factorial":
            family = Factorial()
        elif name == "oddfact":
            family = OddDoubleFactorial()
        elif name == "hypergeom":
            kv = _params(params)
            family = Hypergeometric(kv.pop("p"), kv.pop("q"), kv.pop("m", 0))
            if kv:
                raise SpecError(f"unknown parameters {sorted(kv)}")
        elif name == "geometric":
            kv = _params(params)
            family = Geometric(kv.pop("r"))
        elif name == "custom":
            if not params or not (params.startswith("[") and params.endswith("]")):
                raise SpecError("custom series need a list such as custom:[1,-1,2]")
            items = [s for s in params[1:-1].split(",") if s]
            cyclic = bool(items) and items[-1] == "..."
            if cyclic:
                items = items[:-1]
            values = [as_rational(s) for s in items]
            if not values:
                raise SpecError("custom series need at least one coefficient")
            if cyclic:
                values = [values[k % len(values)] for k in range(cycle_length)]
            family = Custom(tuple(values))
        else:
            raise SpecError(f"unknown series {name!r}")
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"bad series {text!r}: {exc}") from None
    return SeriesSpec(family, point)


def _params(text: str | None) -> dict:
    out = {}
    for part in (text or "").split(","):
        if not part:
            continue
        key, _, value = part.partition("=")
        if not value:
            raise SpecError(f"parameter {part!r} needs key=value")
        out[key] = as_rational(value)
    return out


# ---------------------------------------------------------------- output helpers


def _render(value, digits: int) -> str:
    if isinstance(value, Fraction) and value.denominator == 1:
        return str(value.numerator)
    return fixed(value, digits)


def _emit_record(record: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(record, indent=2))
    elif fmt == "csv":
        _emit_rows(["key", "value"], [[k, _flat(v)] for k, v in record.items()])
    else:
        click.echo(record["value"])
        for k, v in record.items():
            if k != "value":
                click.echo(f"{k}: {_flat(v)}")


def _flat(v) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v)
    return str(v)


def _emit_rows(header: list, rows: list) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    click.echo(buf.getvalue(), nl=False)


def _emit_table(header: list, rows: list, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps([dict(zip(header, r)) for r in rows], indent=2))
    elif fmt == "text":
        widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
        for r in [header] + rows:
            click.echo("  ".join(str(c).rjust(w) for c, w in zip(r, widths)).rstrip())
    else:
        _emit_rows(header, rows)


def _run(fn):
    """Map method failures to exit code 3."""
    try:
        return fn()
    except (SummaError, ArithmeticError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_BREAKDOWN)


# ---------------------------------------------------------------- commands

_digits = click.option("--digits", type=click.IntRange(1, 200), default=10, show_default=True,
                       help="Decimal places in rendered output.")
_depth = click.option("--depth", type=click.IntRange(0), default=None, help="Method depth (terms, levels, or orders).")


def _fmt(default: str):
    return click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default=default,
                        show_default=True)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Sum divergent series with difference, continued-fraction and integral methods."""


@main.command("sum")
@click.argument("series")
@click.option("--method", type=click.Choice(["euler", "extrapolate", "cf", "quadrature"]), default="euler",
              show_default=True)
@click.option("--variant", type=click.Choice(["newton", "log"]), default="newton", show_default=True,
              help="Extrapolation on reciprocals (newton) or on logarithms (log).")
@_digits
@_depth
@_fmt("text")
def cmd_sum(series, method, variant, digits, depth, fmt):
    """Sum SERIES by the chosen method."""
    spec = parse_spec(series)
    report = _run(lambda: _sum(spec, method, variant, digits, depth))
    record = {
        "series": series,
        "method": method,
        "value": _render(report.pop("value"), digits),
        "digits": digits,
        "precision": working_precision(),
        "report": report,
    }
    _emit_record(record, fmt)


def _sum(spec: SeriesSpec, method: str, variant: str, digits: int, depth: int | None) -> dict:
    fam = spec.family
    if method == "euler":
        if isinstance(fam, Geometric):
            return {"value": geometric_value(fam.ratio * spec.point_x ** fam.step), "route": "closed form 1/(1-r)"}
        n = (depth + 1) if depth is not None else (len(fam.coefficients) if isinstance(fam, Custom) else 24)
        seq = terms(spec, n)
        mags = differences.alternating_magnitudes(seq.values)
        rep = differences.euler_transform_sum(mags)
        return {
            "value": rep.value,
            "terms_used": rep.terms_used,
            "passes": rep.passes,
            "truncation_bound": None if rep.truncation_bound is None else fixed(rep.truncation_bound, digits),
        }
    if method == "extrapolate":
        if not isinstance(fam, Factorial) or spec.point_x != 1:
            raise click.UsageError("extrapolation is defined for factorial@x=1 only")
        if variant == "log":
            rep = differences.log_extrapolate(differences.b_sequence(9), digits=None, depth=depth or 5)
            return {"value": rep.value, "log10_value": fixed(rep.log10_value, digits), "terms_used": rep.terms_used}
        rep = differences.newton_extrapolate_zero(
            [Fraction(1, b) for b in differences.b_sequence((depth or 5) + 2)], depth=depth or 5
        )
        return {"value": 1 / rep.value, "inverse_value": fixed(rep.value, digits), "terms_used": rep.terms_used}
    if method == "cf":
        if isinstance(fam, Custom):
            cf = contfrac.cf_for(spec, depth if depth is not None else len(fam.coefficients) - 1)
            last = contfrac.convergents(cf, spec.point_x)[-1]
            return {"value": last.value, "numerators": [render_rational(c) for c in cf.numerators],
                    "route": "last convergent"}
        with mpmath.workdps(max(working_precision(), digits + 15)):
            closure = contfrac.cf_closure(spec, depth=depth if depth is not None else CLI_CF_DEPTH, digits=digits + 10)
            return {
                "value": closure.value,
                "closure_level": closure.closure_start,
                "period": closure.period,
                "tail": mpmath.nstr(closure.tail, digits + 2),
            }
    # quadrature
    if isinstance(fam, Factorial):
        curve = quadrature.hypergeometric_curve(1, 1, spec.point_x)
    elif isinstance(fam, OddDoubleFactorial):
        curve = quadrature.hypergeometric_curve(1, 2, spec.point_x, 1)
    elif isinstance(fam, Hypergeometric):
        curve = quadrature.hypergeometric_curve(fam.p, fam.q, spec.point_x, fam.m)
    else:
        raise click.UsageError("quadrature needs factorial, oddfact or hypergeom series")
    res = quadrature.adaptive_integral(curve, Fraction(1, 10 ** (digits + 3)))
    return {"value": res.value, "panels": res.panels, "error_estimate": mpmath.nstr(res.error_estimate, 3)}


@main.command("table")
@click.argument("kind", type=click.Choice(["differences", "convergents", "means", "ordinates"]))
@click.argument("target")
@click.option("--count", type=click.IntRange(1), default=10, show_default=True, help="Convergents to list.")
@click.option("--rounds", type=click.IntRange(1), default=2, show_default=True, help="Mean rounds.")
@click.option("--panels", type=click.IntRange(1), default=10, show_default=True, help="Ordinate panels.")
@_digits
@_depth
@_fmt("csv")
def cmd_table(kind, target, count, rounds, panels, digits, depth, fmt):
    """Print a table for TARGET (a series, or v1/v2/oddfact for ordinates)."""
    header, rows = _run(lambda: _table(kind, target, count, rounds, panels, digits, depth))
    _emit_table(header, rows, fmt)


def _table(kind, target, count, rounds, panels, digits, depth):
    if kind == "ordinates":
        curves = {"v1": quadrature.CurveSpec.v1, "v2": quadrature.CurveSpec.v2, "oddfact": quadrature.CurveSpec.oddfact}
        if target not in curves:
            raise click.UsageError(f"ordinates need one of {', '.join(curves)}")
        res = quadrature.trapezoid(curves[target](), panels, digits)
        rows = [[i, render_rational(x), fixed(y, digits), fixed(a, digits)]
                for i, ((x, y), a) in enumerate(zip(res.ordinates, res.addends))]
        rows.append(["sum", "", "", fixed(res.value, digits)])
        return ["index", "x", "y", "addend"], rows
    spec = parse_spec(target)
    if kind == "differences":
        fam = spec.family
        n = len(fam.coefficients) if isinstance(fam, Custom) else 10
        table = differences.difference_table(terms(spec, n).values, depth)
        width = len(table.rows[0])
        rows = [[k] + [render_rational(v) for v in row] + [""] * (width - len(row)) for k, row in enumerate(table.rows)]
        return ["order"] + [str(i) for i in range(width)], rows
    cf = contfrac.cf_for(spec, max(count - 1, 1))
    pairs = contfrac.convergents(cf, spec.point_x, count)
    if kind == "convergents":
        return ["index", "p", "q", "value", "side"], [
            [c.index, render_rational(Fraction(c.p)), render_rational(Fraction(c.q)), fixed(c.value, digits), c.side.value]
            for c in pairs
        ]
    values = [c.value for c in pairs]
    rows = [[0, i, fixed(v, digits)] for i, v in enumerate(values)]
    for r, seq in enumerate(contfrac.interleave_means(values, rounds), start=1):
        rows += [[r, i, fixed(v, digits)] for i, v in enumerate(seq)]
    return ["round", "index", "value"], rows


@main.command("reproduce")
@click.argument("section", type=click.Choice(list(reproduce.SECTIONS) + ["all"]))
@_digits
@_depth
@_fmt("json")
def cmd_reproduce(section, digits, depth, fmt):
    """Rerun a worked example and diff it against the printed figures."""
    reports = _run(lambda: reproduce.run_all() if section == "all" else [reproduce.run_section(section)])
    if fmt == "json":
        payload = [r.as_dict() for r in reports] if section == "all" else reports[0].as_dict()
        click.echo(json.dumps(payload, indent=2))
        for r in reports:
            click.echo(r.summary(), err=True)
    elif fmt == "csv":
        cols = ["section", "name", "paper", "computed", "diff", "tolerance_class", "tolerance", "pass", "note"]
        _emit_rows(cols, [[r.section] + [t[c] for c in cols[1:]] for r in reports for t in r.targets])
    else:
        for r in reports:
            click.echo(r.summary())
    if not all(r.passed for r in reports):
        sys.exit(EXIT_MISMATCH)


if __name__ == "__main__":  # pragma: no cover
    main()
