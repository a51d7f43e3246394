import csv
import io
import json

import pytest
from click.testing import CliRunner

from summa.cli import main, parse_spec
from summa.series import Custom, Factorial, Geometric, Hypergeometric, OddDoubleFactorial


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, list(args), env=env)

    return invoke


def test_parse_spec_grammar():
    assert isinstance(parse_spec("factorial@x=1").family, Factorial)
    h = parse_spec("hypergeom:p=1,q=2@x=1/2")
    assert h.family == Hypergeometric(1, 2) and h.point_x == 0.5
    assert parse_spec("geometric:r=2").family == Geometric(2)
    assert parse_spec("custom:[1,-1,2,-6]@x=1").family == Custom((1, -1, 2, -6))
    assert isinstance(parse_spec("oddfact").family, OddDoubleFactorial)


def test_parse_spec_cycle():
    fam = parse_spec("custom:[1,-1,...]").family
    assert fam.coefficients[:4] == (1, -1, 1, -1)


def test_sum_cf_matches_oracle_digits(run):
    res = run("sum", "factorial@x=1", "--method", "cf", "--digits", "10")
    assert res.exit_code == 0
    assert res.output.splitlines()[0] == "0.5963473623"


def test_sum_geometric(run):
    res = run("sum", "geometric:r=2", "--method", "euler")
    assert res.exit_code == 0 and res.output.splitlines()[0] == "-1"


def test_sum_custom_cycle_json(run):
    res = run("sum", "custom:[1,-1,1,-1,...]@x=1", "--method", "euler", "--format", "json")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["value"] == "0.5000000000"
    assert payload["precision"] == 50 and payload["digits"] == 10


def test_sum_quadrature_and_extrapolate(run):
    assert run("sum", "factorial", "--method", "quadrature").output.splitlines()[0] == "0.5963473623"
    assert run("sum", "oddfact", "--method", "quadrature").output.splitlines()[0] == "0.6556795424"
    out = run("sum", "factorial", "--method", "extrapolate", "--format", "json").output
    assert json.loads(out)["report"]["inverse_value"].startswith("1.65174")


def test_sum_csv(run):
    res = run("sum", "factorial", "--method", "cf", "--format", "csv")
    rows = list(csv.reader(io.StringIO(res.output)))
    assert rows[0] == ["key", "value"]
    assert ["value", "0.5963473623"] in rows


def test_precision_env(run):
    res = run("sum", "factorial", "--method", "cf", "--format", "json", env={"SUMMA_PRECISION": "30"})
    assert json.loads(res.output)["precision"] == 30


def test_unknown_series_is_usage_error(run):
    res = run("sum", "zeta@x=1")
    assert res.exit_code == 2


def test_unknown_method_is_usage_error(run):
    assert run("sum", "factorial", "--method", "borel").exit_code == 2


def test_breakdown_exit_code(run):
    res = run("sum", "custom:[1,2,3]", "--method", "euler")
    assert res.exit_code == 3


def test_cf_breakdown_exit_code(run):
    res = run("sum", "custom:[1,1,1,5]", "--method", "cf")
    assert res.exit_code == 3


def test_table_convergents(run):
    res = run("table", "convergents", "factorial", "--count", "10")
    assert res.exit_code == 0
    rows = list(csv.reader(io.StringIO(res.output)))
    assert rows[0] == ["index", "p", "q", "value", "side"]
    assert [f"{r[1]}/{r[2]}" for r in rows[1:]] == ["0/1", "1/1", "1/2", "2/3", "4/7", "8/13", "20/34", "44/73",
                                                   "124/209", "300/501"]
    assert b"\r\n" in res.stdout_bytes


def test_table_differences(run):
    res = run("table", "differences", "custom:[1,4,9,16,25]", "--depth", "2")
    rows = list(csv.reader(io.StringIO(res.output)))
    assert rows[0][0] == "order"
    assert [c for c in rows[2][1:] if c] == ["3", "5", "7", "9"]
    assert [c for c in rows[3][1:] if c] == ["2", "2", "2"]


def test_table_ordinates(run):
    res = run("table", "ordinates", "v1", "--panels", "10", "--digits", "8")
    rows = list(csv.reader(io.StringIO(res.output)))
    assert rows[0] == ["index", "x", "y", "addend"]
    assert [r[3] for r in rows[2:6]] == ["0.00012341", "0.00915782", "0.03232399", "0.05578254"]


def test_table_means(run):
    res = run("table", "means", "factorial", "--count", "10", "--rounds", "1")
    rows = list(csv.reader(io.StringIO(res.output)))
    round1 = [r[2] for r in rows[1:] if r[0] == "1"]
    assert round1[-1] == "0.5960519153"


def test_table_json_and_text(run):
    out = run("table", "convergents", "oddfact", "--count", "4", "--format", "json").output
    assert json.loads(out)[3]["p"] == "3"
    assert "23568" in run("table", "convergents", "oddfact", "--count", "12", "--format", "text").output


def test_table_bad_curve(run):
    assert run("table", "ordinates", "v9").exit_code == 2


def test_reproduce_json(run):
    res = run("reproduce", "s16")
    assert res.exit_code == 0
    payload = json.loads(res.stdout)
    assert payload["section"] == "s16"
    assert any(t["paper"] == "38015/65536" and t["pass"] for t in payload["targets"])
    assert json.dumps(payload, indent=2) == res.stdout.rstrip("\n")


def test_reproduce_all_text(run):
    res = run("reproduce", "all", "--format", "text")
    assert res.exit_code == 0
    assert len(res.output.splitlines()) == 8


def test_reproduce_csv(run):
    res = run("reproduce", "s19", "--format", "csv")
    rows = list(csv.reader(io.StringIO(res.output)))
    assert rows[0][:3] == ["section", "name", "paper"]


def test_reproduce_mismatch_exit(run, monkeypatch):
    from summa import reproduce
    from summa.reproduce import Target, ToleranceClass

    monkeypatch.setitem(reproduce.SECTIONS, "s15", lambda: [Target("bad", "1/3", 1, ToleranceClass.EXACT)])
    res = run("reproduce", "s15")
    assert res.exit_code == 1
    assert json.loads(res.stdout)["targets"][0]["pass"] is False


def test_reproduce_unknown_section(run):
    assert run("reproduce", "s99").exit_code == 2
