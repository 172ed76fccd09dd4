"""Sparse Laurent polynomials with arbitrary-precision complex coefficients.

Coefficients are :class:`gmpy2.mpc` values carried at a per-polynomial binary
precision (256 bits unless ``AMOEBA_PRECISION_BITS`` says otherwise).  Terms
are stored in a read-only mapping keyed by integer exponent tuples, sorted
lexicographically, with exact zeros pruned.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import gmpy2
from gmpy2 import mpc, mpfr

from ._hull import IntegerHull
from .errors import DimensionMismatch, PolynomialFormatError, ZeroPolynomialError

Exponent = tuple[int, ...]

PRECISION_ENV = "AMOEBA_PRECISION_BITS"
MIN_PRECISION_BITS = 64
_FALLBACK_PRECISION = 256


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None or raw.strip() == "":
        return _FALLBACK_PRECISION
    try:
        bits = int(raw)
    except ValueError as exc:
        raise ValueError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from exc
    return _check_precision(bits)


def _check_precision(bits: int) -> int:
    if int(bits) != bits or bits < MIN_PRECISION_BITS:
        raise ValueError(f"precision_bits must be an integer >= {MIN_PRECISION_BITS}")
    return int(bits)


def context(bits: int):
    """gmpy2 context manager for arithmetic at ``bits`` of precision."""
    return gmpy2.context(precision=bits)


def to_mpfr(value, bits: int) -> mpfr:
    with context(bits):
        if isinstance(value, str):
            try:
                return mpfr(value.strip())
            except ValueError as exc:
                raise PolynomialFormatError(f"not a decimal number: {value!r}") from exc
        return mpfr(value)


def to_coefficient(value, bits: int) -> mpc:
    """Convert str / int / float / complex / gmpy2 / (re, im) pairs to ``mpc``."""
    with context(bits):
        if isinstance(value, tuple):
            re, im = value
            return mpc(to_mpfr(re, bits), to_mpfr(im, bits))
        if isinstance(value, str):
            return mpc(to_mpfr(value, bits), mpfr(0))
        if isinstance(value, complex):
            return mpc(mpfr(value.real), mpfr(value.imag))
        if isinstance(value, (int, float)):
            return mpc(mpfr(value), mpfr(0))
        if isinstance(value, (type(mpfr(0)), type(mpc(0)))):
            return mpc(value)
        # numpy scalars and friends
        return to_coefficient(complex(value), bits)


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True, eq=False)
class LaurentPolynomial:
    """Immutable sparse Laurent polynomial in ``r`` variables.

    Prefer :meth:`from_terms` for construction from raw data: it sums
    duplicate exponents. The dataclass constructor expects a mapping.
    """

    r: int
    terms: Mapping[Exponent, mpc]
    precision_bits: int = _FALLBACK_PRECISION

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 1:
            raise PolynomialFormatError("r must be a positive integer")
        bits = _check_precision(self.precision_bits)
        clean: dict[Exponent, mpc] = {}
        for exp, coeff in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.r:
                raise PolynomialFormatError(
                    f"exponent {exp} has length {len(exp)}, expected r={self.r}"
                )
            c = to_coefficient(coeff, bits)
            if not gmpy2.is_zero(c):
                clean[exp] = c
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(clean.items()))))

    # construction -------------------------------------------------------
    @classmethod
    def from_terms(cls, r: int, items: Iterable[tuple[Sequence[int], object]],
                   precision_bits: int | None = None) -> "LaurentPolynomial":
        bits = default_precision() if precision_bits is None else precision_bits
        acc: dict[Exponent, mpc] = {}
        with context(bits):
            for exp, coeff in items:
                exp = tuple(int(e) for e in exp)
                if len(exp) != r:
                    raise PolynomialFormatError(
                        f"exponent {exp} has length {len(exp)}, expected r={r}"
                    )
                c = to_coefficient(coeff, bits)
                acc[exp] = acc[exp] + c if exp in acc else c
        return cls(r, acc, bits)

    @classmethod
    def from_dict(cls, r: int, data: Mapping, precision_bits: int | None = None):
        return cls.from_terms(r, data.items(), precision_bits)

    @classmethod
    def zero(cls, r: int, precision_bits: int | None = None):
        return cls(r, {}, default_precision() if precision_bits is None else precision_bits)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1, precision_bits: int | None = None):
        return cls.from_terms(len(exp), [(exp, coeff)], precision_bits)

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return len(self.terms) == 0

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def support(self) -> list[Exponent]:
        return list(self.terms)

    def coefficient(self, exp: Sequence[int]) -> mpc:
        return self.terms.get(tuple(exp), mpc(0))

    def require_nonzero(self, what: str = "operation") -> None:
        if self.is_zero():
            raise ZeroPolynomialError(f"{what} is undefined for the zero polynomial")

    def evaluate(self, z: Sequence) -> mpc:
        """Value at a point of the torus, computed at this polynomial's precision."""
        if len(z) != self.r:
            raise DimensionMismatch(f"point has {len(z)} coordinates, expected {self.r}")
        bits = self.precision_bits
        with context(bits):
            zz = [to_coefficient(v, bits) for v in z]
            total = mpc(0)
            for exp, c in self.terms.items():
                term = c
                for zi, e in zip(zz, exp):
                    if e:
                        term *= zi ** e
                total += term
            return total

    def to_complex_dict(self) -> dict[Exponent, complex]:
        return {e: complex(c) for e, c in self.terms.items()}

    # arithmetic ---------------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, LaurentPolynomial):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        _check_same_r(self, other)
        bits = max(self.precision_bits, other.precision_bits)
        acc = dict(self.terms)
        with context(bits):
            for e, c in other.terms.items():
                acc[e] = acc[e] + c if e in acc else mpc(c)
        return LaurentPolynomial(self.r, acc, bits)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = LaurentPolynomial.monomial((0,) * self.r, 1, self.precision_bits)
        base = self
        while k:
            if k & 1:
                result = multiply(result, base)
            base = multiply(base, base)
            k >>= 1
        return result

    def scale(self, factor) -> "LaurentPolynomial":
        bits = self.precision_bits
        with context(bits):
            lam = to_coefficient(factor, bits)
            return LaurentPolynomial(self.r, {e: c * lam for e, c in self.terms.items()}, bits)

    def shift(self, exp: Sequence[int]) -> "LaurentPolynomial":
        """Multiply by the monomial ``z**exp``."""
        exp = tuple(exp)
        return LaurentPolynomial(
            self.r, {_add_exp(e, exp): c for e, c in self.terms.items()}, self.precision_bits
        )

    def with_precision(self, bits: int) -> "LaurentPolynomial":
        return LaurentPolynomial(self.r, dict(self.terms), bits)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.r == other.r and dict(self.terms) == dict(other.terms)

    __hash__ = None

    def max_relative_difference(self, other: "LaurentPolynomial") -> float:
        """Largest |a_e - b_e| / max(|a_e|, |b_e|) over the union of supports."""
        _check_same_r(self, other)
        bits = max(self.precision_bits, other.precision_bits)
        worst = mpfr(0)
        with context(bits):
            for e in set(self.terms) | set(other.terms):
                a = self.terms.get(e, mpc(0))
                b = other.terms.get(e, mpc(0))
                denom = max(abs(a), abs(b))
                worst = max(worst, abs(a - b) / denom)
        return float(worst)

    def __repr__(self):
        parts = []
        for e, c in self.terms.items():
            cc = complex(c)
            coeff = f"{cc.real:g}" if cc.imag == 0 else f"({cc.real:g}{cc.imag:+g}j)"
            parts.append(f"{coeff}*z^{list(e)}")
        body = " + ".join(parts) if parts else "0"
        return f"LaurentPolynomial(r={self.r}: {body})"

    # serialization ------------------------------------------------------
    def to_json_dict(self) -> dict:
        digits = _decimal_digits(self.precision_bits)
        return {
            "r": self.r,
            "terms": [
                {"exp": list(e), "re": _format_mpfr(c.real, digits), "im": _format_mpfr(c.imag, digits)}
                for e, c in self.terms.items()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())


def _check_same_r(f: LaurentPolynomial, g: LaurentPolynomial) -> None:
    if f.r != g.r:
        raise DimensionMismatch(f"polynomials live in different tori (r={f.r} vs r={g.r})")


def _decimal_digits(bits: int) -> int:
    return int(math.ceil(bits * math.log10(2))) + 2


def _format_mpfr(x: mpfr, digits: int) -> str:
    if gmpy2.is_zero(x):
        return "0"
    mant, exp, _ = x.digits(10, digits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1}"


def parse_polynomial(text, precision_bits: int | None = None) -> LaurentPolynomial:
    """Parse the polynomial JSON interchange format (string or decoded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PolynomialFormatError(f"malformed JSON: {exc}") from exc
    else:
        data = text
    if not isinstance(data, dict) or "r" not in data or "terms" not in data:
        raise PolynomialFormatError('expected an object with keys "r" and "terms"')
    r = data["r"]
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise PolynomialFormatError("r must be a positive integer")
    if not isinstance(data["terms"], list):
        raise PolynomialFormatError('"terms" must be a list')
    items = []
    for term in data["terms"]:
        if not isinstance(term, dict) or "exp" not in term:
            raise PolynomialFormatError(f"bad term entry: {term!r}")
        exp = term["exp"]
        if not isinstance(exp, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in exp):
            raise PolynomialFormatError(f"exponent must be a list of integers: {exp!r}")
        re, im = term.get("re", "0"), term.get("im", "0")
        if not isinstance(re, str) or not isinstance(im, str):
            raise PolynomialFormatError("coefficients must be decimal strings")
        items.append((exp, (re, im)))
    return LaurentPolynomial.from_terms(r, items, precision_bits)


def serialize_polynomial(f: LaurentPolynomial) -> str:
    return f.dumps()


def load_polynomial(path, precision_bits: int | None = None) -> LaurentPolynomial:
    with open(path, encoding="utf-8") as fh:
        return parse_polynomial(fh.read(), precision_bits)


# ---------------------------------------------------------------------------
# products and rotations


def multiply(f: LaurentPolynomial, g: LaurentPolynomial) -> LaurentPolynomial:
    _check_same_r(f, g)
    bits = max(f.precision_bits, g.precision_bits)
    return LaurentPolynomial(f.r, _convolve(f.terms, g.terms, bits), bits)


def _convolve(a: Mapping[Exponent, mpc], b: Mapping[Exponent, mpc], bits: int) -> dict:
    out: dict[Exponent, mpc] = {}
    get = out.get
    with context(bits):
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                prev = get(e)
                out[e] = ca * cb if prev is None else prev + ca * cb
    return out


def rotate(f: LaurentPolynomial, phases: Sequence, tol: float = 1e-12) -> LaurentPolynomial:
    """Substitute ``z_i -> phases[i] * z_i``; every phase must be unimodular."""
    if len(phases) != f.r:
        raise DimensionMismatch(f"expected {f.r} phases, got {len(phases)}")
    bits = f.precision_bits
    with context(bits):
        ph = [to_coefficient(p, bits) for p in phases]
        for p in ph:
            if abs(abs(p) - 1) > tol:
                raise ValueError(f"phase {complex(p)} is not of unit modulus")
        out = {}
        for e, c in f.terms.items():
            t = c
            for p, k in zip(ph, e):
                if k:
                    t *= p ** k
            out[e] = t
    return LaurentPolynomial(f.r, out, bits)


# ---------------------------------------------------------------------------
# Newton polytope


@dataclass(frozen=True)
class NewtonPolytopeData:
    support: tuple[Exponent, ...]
    vertices: tuple[Exponent, ...]
    widths: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.widths)

    @property
    def max_width(self) -> int:
        return max(self.widths)

    def hull(self) -> IntegerHull:
        return IntegerHull(self.support)


def newton_polytope(f: LaurentPolynomial) -> NewtonPolytopeData:
    f.require_nonzero("newton_polytope")
    support = tuple(f.terms)
    hull = IntegerHull(support)
    widths = tuple(
        max(e[i] for e in support) - min(e[i] for e in support) for i in range(f.r)
    )
    return NewtonPolytopeData(support, tuple(sorted(hull.vertices)), widths)


def coordinate_width(f: LaurentPolynomial, i: int) -> int:
    f.require_nonzero("coordinate_width")
    col = [e[i] for e in f.terms]
    return max(col) - min(col)


# ---------------------------------------------------------------------------
# magnitude lists


@dataclass(frozen=True)
class MagnitudeList:
    """Log-magnitudes of the monomials of a polynomial over one fibre of Log.

    ``entries`` pairs each exponent with ``log|b| + exp . a`` as an ``mpfr``.
    """

    entries: tuple[tuple[Exponent, mpfr], ...]
    precision_bits: int = _FALLBACK_PRECISION

    def __len__(self):
        return len(self.entries)

    @property
    def exponents(self) -> list[Exponent]:
        return [e for e, _ in self.entries]

    @property
    def logs(self) -> list[mpfr]:
        return [v for _, v in self.entries]

    def as_floats(self) -> list[float]:
        return [float(v) for _, v in self.entries]

    @classmethod
    def from_magnitudes(cls, values: Sequence, exponents=None, precision_bits: int | None = None):
        """Build a list directly from positive magnitudes (mainly for tests)."""
        bits = default_precision() if precision_bits is None else precision_bits
        if exponents is None:
            exponents = [(i,) for i in range(len(values))]
        with context(bits):
            entries = tuple((tuple(e), gmpy2.log(to_mpfr(v, bits))) for e, v in zip(exponents, values))
        return cls(entries, bits)


def log_abs_coefficients(f: LaurentPolynomial) -> dict[Exponent, mpfr]:
    with context(f.precision_bits):
        return {e: gmpy2.log(abs(c)) for e, c in f.terms.items()}


def magnitude_list(f: LaurentPolynomial, a: Sequence[float], log_coeffs=None) -> MagnitudeList:
    """Entry per term: ``log|b_j| + j . a``, in canonical exponent order.

    ``log_coeffs`` may carry precomputed ``log|b_j|`` values when the same
    polynomial is scanned over many points.
    """
    f.require_nonzero("magnitude_list")
    if len(a) != f.r:
        raise DimensionMismatch(f"point has {len(a)} coordinates, expected {f.r}")
    bits = f.precision_bits
    logs = log_abs_coefficients(f) if log_coeffs is None else log_coeffs
    with context(bits):
        aa = [to_mpfr(x, bits) for x in a]
        entries = []
        for e in f.terms:
            v = logs[e]
            for ai, k in zip(aa, e):
                if k:
                    v += k * ai
            entries.append((e, v))
    return MagnitudeList(tuple(entries), bits)
