"""Knot Floer homology from immersed-curve tangle invariants on the
four-punctured sphere: exact pairing of multicurves, bigradings via lifts to
the plane minus the integer lattice, and the L-space obstruction analysis.
"""

from .model import (
    AlexGrading,
    BigradedSpace,
    CurveComponent,
    Generator,
    InternalAssertionError,
    LocalSystem,
    Multicurve,
    NotDivisibleError,
    OrderedMatching,
    Slope,
    ValidationError,
    alex_equal,
    matching_for_separation,
    rational,
    reduce_slope,
    special,
    strip_V,
    univariate_alex,
)
from .mcg import (
    TwistElement,
    mirror,
    mirror_multicurve,
    normalize_special,
    twist_component,
    twist_multicurve,
    twist_slope,
)
from .pairing import (
    NotSkeletal,
    contiguous_space,
    floer_homology,
    hf_multicurve,
    hfk_of_gluing,
    hfr,
    nonskeletal_witness,
    pair_components,
    pair_special_rational_closed_form,
    pair_specials_closed_form,
)
from .lspace import (
    ObstructionVerdict,
    StaircaseVerdict,
    convexity_filter,
    gap_delta_check,
    is_contiguous,
    is_skeletal,
    lspace_obstruction,
    pinch,
    split_detection,
    staircase_check,
    staircase_space,
)
from .pairgeom import (
    alex_steps,
    delta_steps,
    domain_alex,
    find_punctured_bigons,
    generator_bigrading,
    lift,
    minimal_intersections,
)
from .specfile import ParseError, builtin_curve, parse_curvespec, print_curvespec

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
