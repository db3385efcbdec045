"""Exact multiplicative character sums over affine subspaces of finite fields."""

__version__ = "0.1.0"

from .characters import (
    AddChar,
    MultChar,
    all_chars,
    eval_char,
    gauss_sum,
    jacobi_sum,
    jacobi_via_gauss,
    lift_char,
    product_char,
)
from .charsum import (
    CharSumResult,
    LinearFormSystem,
    ParamSumResult,
    char_sum,
    char_sum_reference,
    hyperplane_reduction_check,
    param_sum,
)
from .cyclotomic import ComplexApprox, Cyclotomic, canonicalize, change_order, conj, cyclotomic_polynomial, embed
from .errors import *  # noqa: F401,F403
from .ff import Field, FieldEmbedding, det, dlog, extend, make_field, norm, rank, row_reduce
from .lfunc import (
    BoundReport,
    IntegralityViolated,
    LPolynomial,
    WeightProfile,
    l_polynomial,
    newton_to_coeffs,
    poly_roots,
    verify_bounds,
    weight_profile,
)
from .rng import SplitMix64
from .subspace import (
    AffineSubspace,
    PositionReport,
    classify_position,
    dim_intersection,
    enumerate_points,
    minors_criterion,
    translates_criterion,
)
