"""Summation of divergent series by difference, continued-fraction and integral methods."""

from .contfrac import (
    ConvergentPair,
    EulerCF,
    LinearFractionalMap,
    RegularCF,
    TailClosure,
    cf_closure,
    compose_tail,
    convergents,
    hypergeometric_cf,
    interleave_means,
    ode_cf_numerators,
    real_to_regular_cf,
    regular_convergents,
    series_to_cf,
    sum_by_cf_closure,
    tail_cubic,
    tail_quadratic,
)
from .differences import (
    difference_table,
    euler_transform_sum,
    log_extrapolate,
    newton_extrapolate_zero,
    reproduce_s16_schedule,
)
from .errors import BracketError, BreakdownError, DomainError, LengthError, PoleError, QuadratureError, SummaError
from .quadrature import CurveSpec, adaptive_integral, gompertz_constant, odd_factorial_oracle, ordinates, trapezoid
from .series import (
    Custom,
    Factorial,
    Genus,
    Geometric,
    Hypergeometric,
    OddDoubleFactorial,
    SeriesSpec,
    classify_genus,
    partial_sums,
    terms,
)

__all__ = [name for name in dir() if not name.startswith("_")]
