"""Certified approximations of amoebas via lopsidedness of cyclic resultants."""

from .bounds import (
    BoundInputs,
    lattice_count_bound,
    lattice_points,
    lopsided_bound_n,
    onevar_bound_n,
    superlopsided_bound_n,
    theorem_inputs,
    uniform_lattice_constant,
)
from .errors import (
    AmoebaError,
    BudgetExceeded,
    DimensionMismatch,
    LPFailure,
    NoCandidateTerm,
    NoFeasibleComponents,
    PolynomialFormatError,
    PrecisionExhausted,
    RootFindingError,
    TooCloseToAmoeba,
    ZeroPolynomialError,
)
from .geometry import (
    Halfspace,
    HalfspaceSystem,
    approximate_spine,
    component_polyhedron,
    enumerate_components,
    lp_feasible,
    spine_membership,
)
from .ideals import certify_outside_ideal, witness_polynomial
from .lopsided import (
    LopsidedVerdict,
    is_lopsided,
    is_superlopsided,
    la_membership,
    sa_membership,
)
from .membership import (
    Certificate,
    NotCertified,
    certify_outside,
    component_index,
    oracle_membership_r1,
    oracle_membership_r2,
    region_grid,
    verify_certificate,
)
from .polynomial import (
    LaurentPolynomial,
    MagnitudeList,
    load_polynomial,
    magnitude_list,
    multiply,
    newton_polytope,
    parse_polynomial,
    rotate,
    serialize_polynomial,
)
from .resultant import FilterReport, cyclic_resultant, general_cyclic_resultant
from .tropical import (
    TropicalPolynomial,
    ValuedPolynomial,
    tropical_lopsided,
    tropical_magnitude_list,
    tropical_membership,
    tropicalize,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
