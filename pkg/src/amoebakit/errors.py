"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class AmoebaError(Exception):
    """Base class for all library errors."""


class PolynomialFormatError(AmoebaError, ValueError):
    """Malformed polynomial / valued-polynomial JSON or inconsistent data."""


class DimensionMismatch(AmoebaError, ValueError):
    pass


class ZeroPolynomialError(AmoebaError, ValueError):
    """An analysis operation received the zero polynomial."""


class BudgetExceeded(AmoebaError):
    """The predicted size of a cyclic resultant is above the configured cap."""

    def __init__(self, message, *, predicted_terms=None, cap=None, n_needed=None):
        super().__init__(message)
        self.predicted_terms = predicted_terms
        self.cap = cap
        self.n_needed = n_needed


class PrecisionExhausted(AmoebaError):
    """A coefficient that must vanish by symmetry survived above the noise floor."""


class TooCloseToAmoeba(AmoebaError):
    """A slice has a root within tolerance of the circle being counted against."""


class NoCandidateTerm(AmoebaError):
    """The resultant has no monomial at the scaled candidate exponent."""


class NoFeasibleComponents(AmoebaError):
    pass


class LPFailure(AmoebaError):
    """Numerical trouble in the simplex solver, distinct from infeasibility."""


class RootFindingError(AmoebaError):
    pass
