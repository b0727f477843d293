"""Exact multiplicative character sums and additive combinatorics over F_p."""

from .field import (
    FieldContext,
    MultiplicativeCharacter,
    UnitValue,
    additive_eval,
    char_eval,
    discrete_log,
    legendre,
    make_character,
    make_field,
)
from .sets import (
    ResidueSet,
    additive_energy,
    dilate,
    difference_set,
    full_set,
    multiplicative_energy,
    random_subset,
    representation_function,
    residue_set,
    sumset,
    translate,
)
from .sums import (
    PolynomialSpec,
    SumValue,
    bilinear_exponential_sum,
    is_lth_power,
    mixed_quaternary_sum,
    moment_sum,
    mult_ternary_sum,
    paley_sum,
    polynomial,
    polynomial_char_sum,
    ternary_sum,
)
from .sarkozy import decide_sumset, quadratic_residues, sarkozy_sweep

__version__ = "0.1.0"
