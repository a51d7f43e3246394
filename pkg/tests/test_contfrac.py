from fractions import Fraction as F
from math import prod

import mpmath
import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from summa.contfrac import (
    EulerCF,
    LinearFractionalMap,
    RegularCF,
    Side,
    block_map,
    cf_closure,
    cf_for,
    cf_to_series,
    compose_tail,
    convergents,
    hypergeometric_cf,
    interleave_means,
    ode_cf_numerators,
    progression_polynomial,
    real_to_regular_cf,
    regular_convergents,
    series_to_cf,
    solve_bracketed,
    sum_by_cf_closure,
    tail_cubic,
    tail_quadratic,
)
from summa.errors import BracketError, BreakdownError, DomainError, LengthError
from summa.precision import fixed
from summa.quadrature import gompertz_series, odd_factorial_oracle
from summa.series import Factorial, Hypergeometric, OddDoubleFactorial, SeriesSpec

FACTORIAL = SeriesSpec(Factorial())
ODDFACT = SeriesSpec(OddDoubleFactorial())


# ---------------------------------------------------------------- series_to_cf


def test_factorial_series_to_cf():
    cf = series_to_cf([1, -1, 2, -6, 24, -120, 720, -5040])
    assert cf.numerators == (1, 1, 2, 2, 3, 3, 4)


def test_geometric_series_terminates():
    cf = series_to_cf([(-1) ** k for k in range(8)])
    assert cf.numerators == (1,) and cf.terminated


def test_odd_double_factorial_in_x_squared():
    cf = series_to_cf(ODDFACT.coefficients(6))
    assert cf.numerators == (1, 2, 3, 4, 5)


def test_breakdown_reports_level():
    with pytest.raises(BreakdownError) as exc:
        series_to_cf([1, 0, 1, 0])
    assert exc.value.level == 1


def test_breakdown_at_deeper_level():
    # 1/(1 + y + y^2 + 5y^3) = 1 - y + 0 y^2 + ..., so the second remainder starts with 0
    with pytest.raises(BreakdownError) as exc:
        series_to_cf([1, 1, 1, 5])
    assert exc.value.level == 2


def test_series_to_cf_preconditions():
    with pytest.raises(DomainError):
        series_to_cf([2, 1])
    with pytest.raises(LengthError):
        series_to_cf([1, -1], 2)


FAMILIES = [Factorial(), OddDoubleFactorial(), Hypergeometric(2, 3), Hypergeometric(F(1, 2), 1)]


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("depth", [1, 5, 12])
def test_round_trip_families(family, depth):
    coeffs = SeriesSpec(family).coefficients(depth + 1)
    assert cf_to_series(series_to_cf(coeffs, depth), depth) == coeffs


@given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=20), min_size=1, max_size=12))
def test_round_trip_random(tail):
    coeffs = [F(1)] + tail
    try:
        cf = series_to_cf(coeffs)
    except BreakdownError:
        assume(False)
    assert cf_to_series(cf, len(tail)) == coeffs


# ---------------------------------------------------------------- generators


def test_hypergeometric_cf_examples():
    assert hypergeometric_cf(1, 1, 8).numerators == (1, 1, 2, 2, 3, 3, 4, 4)
    assert hypergeometric_cf(1, 2, 6).numerators == (1, 2, 3, 4, 5, 6)
    m, n = F(2, 3), F(5, 7)
    assert hypergeometric_cf(m, n, 6).numerators == (m, n, m + n, 2 * n, m + 2 * n, 3 * n)


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_hypergeometric_cf_matches_division(p, q):
    coeffs = SeriesSpec(Hypergeometric(p, q)).coefficients(9)
    assert series_to_cf(coeffs, 8).numerators == hypergeometric_cf(p, q, 8).numerators


def test_hypergeometric_cf_depth():
    with pytest.raises(ValueError):
        hypergeometric_cf(1, 1, 0)


def test_ode_law_reduces_symbolically():
    p, q, m = sympy.symbols("p q m")
    law = ode_cf_numerators(1, p - m, 1, 0, m, m - q, 8)
    expected = [p, q, p + q, 2 * q, p + 2 * q, 3 * q, p + 3 * q, 4 * q]
    assert all(sympy.simplify(a - b) == 0 for a, b in zip(law, expected))


def test_ode_law_zero_parameters():
    assert ode_cf_numerators(0, 0, 1, 0, 0, 0, 6) == [0] * 6


def test_ode_law_odd_double_factorial():
    assert ode_cf_numerators(1, 0, 1, 0, 1, -1, 5) == [1, 2, 3, 4, 5]


def test_ode_law_requires_b():
    with pytest.raises(DomainError):
        ode_cf_numerators(1, 0, 0, 0, 1, 1, 3)


# ---------------------------------------------------------------- convergents


def test_factorial_convergent_table():
    pairs = convergents(cf_for(FACTORIAL, 9), 1, 10)
    assert [str(c) for c in pairs] == ["0/1", "1/1", "1/2", "2/3", "4/7", "8/13", "20/34", "44/73", "124/209", "300/501"]
    assert [c.side for c in pairs[:2]] == [Side.LOWER, Side.UPPER]
    assert fixed(pairs[4].value, 10) == "0.5714285714"


def test_odd_double_factorial_convergent_table():
    pairs = convergents(cf_for(ODDFACT, 11), 1, 12)
    assert [str(c) for c in pairs] == ["0/1", "1/1", "1/2", "3/4", "6/10", "18/26", "48/76", "156/232", "492/764",
                                       "1740/2620", "6168/9496", "23568/35696"]


def test_reduce_flag():
    pairs = convergents(cf_for(FACTORIAL, 9), 1, 10, reduce=True)
    assert str(pairs[6]) == "10/17"


def test_convergent_count_bound():
    with pytest.raises(LengthError):
        convergents(hypergeometric_cf(1, 1, 3), 1, 6)


@given(st.sampled_from([(1, 1), (1, 2), (2, 1), (3, 2)]), st.integers(min_value=1, max_value=25))
def test_determinant_identity(pq, depth):
    cf = hypergeometric_cf(*pq, depth)
    pairs = convergents(cf, 1)
    levels = cf.levels(1)
    for k in range(1, len(pairs)):
        d = pairs[k].p * pairs[k - 1].q - pairs[k - 1].p * pairs[k].q
        assert d == (-1) ** (k + 1) * prod(levels[:k])


@pytest.mark.parametrize("spec, count", [(FACTORIAL, 10), (ODDFACT, 12)])
def test_interlacing(spec, count):
    value = sum_by_cf_closure(spec)
    for c in convergents(cf_for(spec, count - 1), 1, count):
        v = mpmath.mpf(c.p) / c.q
        assert (v < value) if c.side is Side.LOWER else (v > value)


def test_interleave_means():
    values = [c.value for c in convergents(cf_for(FACTORIAL, 9), 1, 10)]
    rounds = interleave_means(values, 2)
    assert [fixed(v, 10) for v in rounds[0][:4]] == ["0.5000000000", "0.7500000000", "0.5833333333", "0.6190476190"]
    assert fixed(rounds[0][-1], 10) == "0.5960519153"
    assert [fixed(v, 10) for v in rounds[1][:3]] == ["0.6250000000", "0.6666666667", "0.6011904762"]
    assert len(rounds[1]) == 8


def test_interleave_means_constant():
    assert interleave_means([F(3)] * 5, 3) == [[3] * 4, [3] * 3, [3] * 2]


# ---------------------------------------------------------------- tails


def test_tail_quadratic():
    with mpmath.workdps(30):
        assert abs(tail_quadratic(21) - (mpmath.sqrt(85) - 1) / 2) < mpmath.mpf(10) ** -28
        assert mpmath.nstr(tail_quadratic(21), 8) == "4.1097722"
    assert tail_quadratic(0) == 0


def test_tail_cubic_a22():
    closure = tail_cubic(22, digits=30)
    assert closure.polynomial == (2, 2, -43, -22)
    assert fixed(closure.s, 3) == "4.423" and fixed(closure.r, 2) == "4.31"
    assert closure.residual < mpmath.mpf(10) ** -30
    with mpmath.workdps(40):
        assert abs(closure.r - 21 * (closure.s + 1) / (closure.s + 22)) < mpmath.mpf(10) ** -30
    assert F("113.883") / F("26.423") == (21 * F("4.423") + 21) / (F("4.423") + 22)


def test_tail_estimates_bracket_true_tail():
    # the tail from numerator 21 on, evaluated backward from 5000 levels deep
    levels = [int(v) for v in hypergeometric_cf(1, 1, 5000).levels(1)]
    with mpmath.workdps(30):
        true_tail = mpmath.mpf(0)
        for a in reversed(levels[41:]):
            true_tail = a / (1 + true_tail)
        assert mpmath.nstr(true_tail, 8) == "4.3021826"
        # growing numerators raise the tail above the constant-numerator estimate
        assert tail_quadratic(21) < true_tail < tail_cubic(22).r


def test_tail_cubic_single_form():
    closure = tail_cubic(12, paired=False)
    assert closure.polynomial == (2, 3, -22, -12)
    assert fixed(closure.s, 2) == "2.94" and fixed(closure.r, 2) == "2.79"


def test_tail_cubic_domain():
    with pytest.raises(DomainError):
        tail_cubic(1)


def test_bracket_error():
    with pytest.raises(BracketError):
        solve_bracketed([1, 0, 1], 0, 3, 10)


def test_progression_polynomial_matches_closed_form():
    # tails r, s, t starting at numerators 21, 22, 23 in arithmetic progression
    levels = cf_for(FACTORIAL, 46).levels(1)
    poly = progression_polynomial(levels, 41, 2)
    ratio = poly[0] / 2
    assert tuple(c / ratio for c in poly) == (2, 2, -43, -22)


# ---------------------------------------------------------------- blocks


def test_factorial_block_maps():
    closure = cf_closure(FACTORIAL)
    a, p, q = closure.maps
    assert (a.a, a.b, a.c, a.d) == (491459820, 139931620, 824073141, 234662231)
    assert (p.a, p.b, p.c, p.d) == (2381951, 649286, 887640, 187440)
    assert (q.a, q.b, q.c, q.d) == (11437136, 2924816, 3697925, 643025)
    assert all(m.determinant != 0 for m in closure.maps)


def test_empty_block_is_identity():
    assert block_map([]) == LinearFractionalMap.identity()


def test_whole_fraction_with_zero_tail_is_last_convergent():
    cf = hypergeometric_cf(1, 1, 12)
    levels = cf.levels(1)
    value, maps = compose_tail(cf, 1, [len(levels)], 0)
    assert value == convergents(cf, 1)[-1].value


def test_degenerate_block():
    cf = EulerCF((0, 1, 1))
    with pytest.raises(BreakdownError):
        compose_tail(cf, 1, [2, 4], 0)


def test_bad_cuts():
    with pytest.raises(LengthError):
        compose_tail(hypergeometric_cf(1, 1, 4), 1, [3, 2], 0)


maps = st.tuples(*[st.integers(min_value=1, max_value=50)] * 4).map(lambda t: LinearFractionalMap(*t))


@given(maps, maps, maps, st.fractions(min_value=0, max_value=10, max_denominator=50))
def test_composition_associative(m1, m2, m3, t):
    left = m1.compose(m2).compose(m3)
    right = m1.compose(m2.compose(m3))
    assert left == right
    assert left(F(t)) == m1(m2(m3(F(t))))


@given(st.lists(st.integers(min_value=1, max_value=30), min_size=1, max_size=10), st.integers(min_value=0, max_value=10))
def test_block_map_matches_direct_evaluation(levels, t):
    direct = F(t)
    for a in reversed(levels):
        direct = F(a) / (1 + direct)
    assert block_map(levels)(F(t)) == direct


# ---------------------------------------------------------------- closure


def test_factorial_closure_full_precision():
    with mpmath.workdps(40):
        assert abs(sum_by_cf_closure(FACTORIAL) - gompertz_series(30)) < mpmath.mpf(10) ** -8


def test_factorial_closure_intermediate_p():
    closure = cf_closure(FACTORIAL)
    assert abs(closure.block_values[0] - mpmath.mpf("3.0266600163")) < 1e-6


def test_deeper_closure_converges():
    with mpmath.workdps(40):
        g = gompertz_series(30)
        errors = [abs(sum_by_cf_closure(FACTORIAL, depth=d) - g) for d in (41, 81, 121)]
    assert errors[0] > errors[1] > errors[2]


def test_odd_double_factorial_closure():
    z = sum_by_cf_closure(ODDFACT)
    assert abs(z - mpmath.mpf("0.65568")) < 5e-5
    assert abs(z - odd_factorial_oracle(20)) < 1e-3


def test_hypergeometric_closure():
    with mpmath.workdps(30):
        z = sum_by_cf_closure(SeriesSpec(Hypergeometric(1, 1)))
        assert abs(z - gompertz_series(25)) < 1e-8


# ---------------------------------------------------------------- regular fractions


def test_regular_cf_of_printed_value():
    rcf = real_to_regular_cf(F("0.5963473621372"), 11)
    assert rcf.quotients == (0, 1, 1, 2, 10, 1, 1, 4, 2, 2, 13)


def test_regular_cf_half():
    assert real_to_regular_cf(F(1, 2)).quotients == (0, 2)


def test_regular_cf_never_outruns_precision():
    rcf = real_to_regular_cf("0.5963473621372", 40)
    assert rcf.truncated
    with mpmath.workdps(60):
        deep = real_to_regular_cf(gompertz_series(50), 40)
    with mpmath.workdps(15):
        shallow = real_to_regular_cf(+gompertz_series(15), 40)
    assert shallow.truncated and len(shallow.quotients) < 40
    assert deep.quotients[: len(shallow.quotients)] == shallow.quotients


def test_regular_cf_invariant():
    with pytest.raises(DomainError):
        RegularCF((0, 1, 0))


def test_regular_convergents():
    pairs = regular_convergents(RegularCF((0, 1, 1, 2, 10)))
    assert [str(c) for c in pairs] == ["0/1", "1/1", "1/2", "3/5", "31/52"]
    assert str(regular_convergents(RegularCF((2,)))[0]) == "2/1"


def test_regular_convergent_bound():
    a = F("0.5963473621372")
    pairs = regular_convergents(real_to_regular_cf(a, 12))
    assert [str(c) for c in pairs[4:10]] == ["31/52", "34/57", "65/109", "294/493", "653/1095", "1600/2683"]
    assert pairs[10].q == 35974
    assert pairs[9].error_bound == F(1, 2683 * 35974)
    assert abs(a - pairs[9].value) < pairs[9].error_bound
    assert 1 / pairs[9].value == F("1.676875")
