"""Numerical verification of Loewner-order inequalities for positive matrices."""

from .constants import RatioConstant, big_K, grid_oracle, jensen_lower, jensen_upper, small_k
from .errors import InputError, LoewnerLabError, NumericFailure
from .explorer import (
    GeneratorSpec,
    HuntResult,
    conforming_pair,
    hunt_violations,
    probe_hypothesis_satisfiability,
    random_symmetric_with_spectrum,
)
from .functions import ScalarFunction, affine, exp, from_spec, inverse_shift, log, parse_function, power
from .hypotheses import (
    HypothesisReport,
    hh_condition,
    power_condition,
    sandwich_condition,
    thm1_condition,
    thm2_condition,
)
from .inequalities import CHECKERS
from .means import arithmetic_mean, geometric_mean, hh_integral_mean
from .reports import InequalityReport
from .spectral import (
    Interval,
    LoewnerVerdict,
    Relation,
    SymMatrix,
    apply_function,
    eigen_decompose,
    loewner_compare,
    matrix_power,
    spectral_interval,
)

__version__ = "0.1.0"

__all__ = [
    "CHECKERS",
    "GeneratorSpec",
    "HuntResult",
    "HypothesisReport",
    "InequalityReport",
    "InputError",
    "Interval",
    "LoewnerLabError",
    "LoewnerVerdict",
    "NumericFailure",
    "RatioConstant",
    "Relation",
    "ScalarFunction",
    "SymMatrix",
    "affine",
    "apply_function",
    "arithmetic_mean",
    "big_K",
    "conforming_pair",
    "eigen_decompose",
    "exp",
    "from_spec",
    "geometric_mean",
    "grid_oracle",
    "hh_condition",
    "hh_integral_mean",
    "hunt_violations",
    "inverse_shift",
    "jensen_lower",
    "jensen_upper",
    "loewner_compare",
    "log",
    "matrix_power",
    "parse_function",
    "power",
    "power_condition",
    "probe_hypothesis_satisfiability",
    "random_symmetric_with_spectrum",
    "sandwich_condition",
    "small_k",
    "spectral_interval",
    "thm1_condition",
    "thm2_condition",
]
