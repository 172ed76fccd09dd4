"""Max-plus polynomials: tropicalization, weights, tropical hypersurfaces.

Valuations are supplied directly as real numbers (max-convention), so no
arithmetic over a valued field is needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import PolynomialFormatError
from .polynomial import Exponent

DEFAULT_TIE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class TropicalPolynomial:
    """``x -> max_k (coeff_k + k . x)`` over a finite set of exponents."""

    r: int
    terms: Mapping[Exponent, float]

    def __post_init__(self):
        if self.r < 1:
            raise PolynomialFormatError("r must be positive")
        if not self.terms:
            raise PolynomialFormatError("a tropical polynomial needs at least one term")
        clean = {}
        for e, v in self.terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != self.r:
                raise PolynomialFormatError(f"exponent {e} does not have length {self.r}")
            clean[e] = float(v)
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(clean.items()))))

    def weights(self, x: Sequence[float]) -> list[tuple[Exponent, float]]:
        if len(x) != self.r:
            raise ValueError(f"point has {len(x)} coordinates, expected {self.r}")
        return [(e, c + sum(k * xi for k, xi in zip(e, x))) for e, c in self.terms.items()]

    def __call__(self, x: Sequence[float]) -> float:
        return max(w for _, w in self.weights(x))

    def __eq__(self, other):
        if not isinstance(other, TropicalPolynomial):
            return NotImplemented
        return self.r == other.r and dict(self.terms) == dict(other.terms)

    __hash__ = None

    def to_json_dict(self) -> dict:
        return {"r": self.r, "terms": [{"exp": list(e), "coeff": c} for e, c in self.terms.items()]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "TropicalPolynomial":
        try:
            return cls(int(data["r"]), {tuple(t["exp"]): float(t["coeff"]) for t in data["terms"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise PolynomialFormatError(f"bad tropical polynomial: {exc}") from exc


@dataclass(frozen=True, eq=False)
class ValuedPolynomial:
    """Exponents paired with the valuations of their coefficients."""

    r: int
    terms: Mapping[Exponent, float]

    def __post_init__(self):
        if not self.terms:
            raise PolynomialFormatError("valued polynomial needs at least one term")
        for e, v in self.terms.items():
            if len(e) != self.r:
                raise PolynomialFormatError(f"exponent {e} does not have length {self.r}")
            if v != v or v in (float("inf"), float("-inf")):
                raise PolynomialFormatError("valuations must be finite reals")

    @classmethod
    def from_items(cls, r: int, items: Iterable[tuple[Sequence[int], float]]):
        terms: dict[Exponent, float] = {}
        for e, v in items:
            e = tuple(int(x) for x in e)
            # the valuation of a sum is bounded by the tropical sum; without the
            # field elements the best representative is the max
            terms[e] = max(terms[e], float(v)) if e in terms else float(v)
        return cls(r, terms)


def parse_valued(text) -> ValuedPolynomial:
    data = json.loads(text) if isinstance(text, (str, bytes)) else text
    try:
        r = data["r"]
        items = [(t["exp"], float(t["val"])) for t in data["terms"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise PolynomialFormatError(f"bad valued polynomial: {exc}") from exc
    if not isinstance(r, int) or r < 1:
        raise PolynomialFormatError("r must be a positive integer")
    if any(len(e) != r for e, _ in items):
        raise PolynomialFormatError("inconsistent exponent lengths")
    return ValuedPolynomial.from_items(r, items)


def tropicalize(vp: ValuedPolynomial) -> TropicalPolynomial:
    return TropicalPolynomial(vp.r, dict(vp.terms))


def tropical_magnitude_list(T: TropicalPolynomial, x: Sequence[float]) -> list[tuple[Exponent, float]]:
    return T.weights(x)


def tropical_lopsided(weights: Sequence[tuple[Exponent, float]], tie_tol: float | None = None) -> bool:
    """Lopsided in max-plus terms: the maximum is attained exactly once."""
    values = [w for _, w in weights]
    top = max(values)
    tol = DEFAULT_TIE_TOL * (1.0 + abs(top)) if tie_tol is None else tie_tol
    return sum(1 for v in values if v >= top - tol) == 1


def tropical_membership(T: TropicalPolynomial, x: Sequence[float], tie_tol: float | None = None) -> bool:
    from .geometry import spine_membership

    return spine_membership(T, x, tie_tol)
