"""Decreasing rearrangements and first-coordinate symmetrization under the
standard Gaussian measure, with numerical checks of the associated
gradient-rearrangement inequalities and Orlicz identities.

The isoperimetric profile convention used throughout is
I(t) = phi(Phi_inv(t)); see :mod:`gausym.gaussian`.
"""

from .errors import (
    BracketingError,
    CellBudgetError,
    DomainError,
    ExpressionError,
    GausymError,
    IntervalError,
    InvalidParameterError,
    NonSmoothFieldError,
    UnknownFieldError,
    WeightSumError,
)
from .fields import (
    ScalarField,
    builtin_field,
    corpus_names,
    describe_field,
    gradient_at,
    gradient_norm,
    parse_field,
)
from .gaussian import (
    GaussianGrid,
    Phi,
    Phi_inv,
    equal_measure_grid,
    iso_profile,
    phi,
)
from .majorize import (
    DEFAULT_NORM_FAMILY,
    CalderonReport,
    HlpEquivalenceReport,
    MajorizationVerdict,
    RINorm,
    YoungFunction,
    calderon_check,
    hlp_equivalence_check,
    majorizes,
    orlicz_integral,
    parse_norm,
    ri_norm,
)
from .rearrange import (
    GridCurve,
    Profile,
    decreasing_rearrangement,
    distribution_function,
    equimeasurability_gap,
    gradient_rearrangement,
    lebesgue_rearrangement,
    neg_derivative,
)
from .symmetrize import (
    pointwise_identity_gap,
    symmetrization_preserves_rearrangement,
    symmetrized_field,
)
from .verify import (
    ConvergenceStudy,
    IneqReport,
    check_interval_bound,
    check_mazya_talenti,
    check_norm_inequality,
    check_orlicz_equality,
    check_polya_szego,
    check_reformulated,
    convergence_study,
)

__version__ = "0.1.0"
