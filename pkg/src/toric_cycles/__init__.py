"""Exact cycle-level intersection theory on toric varieties."""

from .complements import (
    Explicit,
    Flag,
    InnerProduct,
    explicit,
    from_flag,
    from_inner_product,
    project,
)
from .divisors import (
    Cycle,
    QCartierDivisor,
    degree,
    divisor_cycle,
    divisor_from_ray_coefficients,
    polytope_of,
    polytope_volume,
    principal_divisor,
    toric_divisor,
)
from .errors import FormulaExtensionWarning, SchemaError, ToricError
from .fan import Fan, build_fan
from .intersection import (
    Evaluator,
    evaluate_polynomial,
    flag_closed_form,
    flag_simplex_coefficient,
    intersect,
    power,
    symbolic_flag_coefficient,
)
from .morphisms import (
    Properness,
    ToricMorphism,
    build_morphism,
    is_proper_restricted,
    projection_formula_check,
    pullback_divisor,
    pushforward,
    simplicialize,
    star_subdivision,
)
from .polynomial import Polynomial
from .ring import (
    CycleRing,
    RingPresentation,
    chern_cycle,
    lefschetz_injectivity,
    todd_cycle,
    verify_presentation,
)

__version__ = "0.1.0"
