"""Membership tests for amoebas of ideals via a point-dependent witness.

For generators f_1..f_k and a point a, the witness
``sum_i f_i(z) * conj(f_i)(e^{2a_1}/z_1, ..., e^{2a_r}/z_r)`` lies in the
ideal and equals ``sum_i |f_i(z)|^2`` on the fibre over a, so it vanishes
there exactly where the variety meets the fibre. It must be rebuilt for
every point.
"""

from __future__ import annotations

from typing import Sequence

import gmpy2

from .errors import DimensionMismatch
from .lopsided import SINGLE_TERM_MARGIN
from .membership import Certificate, NotCertified, certify_outside, default_schedule, theorem_n
from .polynomial import LaurentPolynomial, context, multiply, to_mpfr
from .resultant import DEFAULT_TERM_BUDGET

DEFAULT_N_MAX = 64


def reflected_conjugate(g: LaurentPolynomial, a: Sequence[float]) -> LaurentPolynomial:
    """``conj(g)(e^{2a_1} z_1^{-1}, ...)`` as a Laurent polynomial."""
    bits = g.precision_bits
    with context(bits):
        aa = [to_mpfr(x, bits) for x in a]
        out = {}
        for e, c in g.terms.items():
            shift = sum((2 * k * ai for k, ai in zip(e, aa)), gmpy2.mpfr(0))
            out[tuple(-k for k in e)] = c.conjugate() * gmpy2.exp(shift)
    return LaurentPolynomial(g.r, out, bits)


def witness_polynomial(gens: Sequence[LaurentPolynomial], a: Sequence[float]) -> LaurentPolynomial:
    if not gens:
        raise ValueError("need at least one generator")
    r = gens[0].r
    if any(g.r != r for g in gens):
        raise DimensionMismatch("generators live in different tori")
    if len(a) != r:
        raise DimensionMismatch(f"point has {len(a)} coordinates, expected {r}")
    total = None
    for g in gens:
        g.require_nonzero("witness_polynomial")
        term = multiply(g, reflected_conjugate(g, a))
        total = term if total is None else total + term
    return total


def certify_outside_ideal(gens: Sequence[LaurentPolynomial], a: Sequence[float], epsilon: float,
                          n_max: int = DEFAULT_N_MAX, *, mode: str = "lopsided",
                          slack: float | None = None, budget: int = DEFAULT_TERM_BUDGET):
    """Certificate when some cyclic resultant of the witness is lopsided at ``a``.

    A NotCertified answer whose ``conclusive`` flag is set says only that ``a``
    is within ``epsilon`` of the amoeba of this witness polynomial.
    """
    fa = witness_polynomial(gens, a)
    if fa.is_monomial():
        # e.g. the unit ideal: a single term is lopsided by convention
        exp = next(iter(fa.terms))
        return Certificate(tuple(float(x) for x in a), 1, mode, exp, SINGLE_TERM_MARGIN, float(epsilon))
    bound_n = theorem_n(fa, epsilon, mode)
    schedule = [n for n in default_schedule(bound_n) if n <= n_max]
    cache: dict = {}
    last = None
    for n in schedule:
        res = certify_outside(fa, a, epsilon, mode, n_override=n, slack=slack, budget=budget, cache=cache)
        if isinstance(res, Certificate):
            return res
        last = res
    tried = tuple(schedule)
    best = last.best_margin if last is not None else float("-inf")
    return NotCertified(tuple(float(x) for x in a), float(epsilon), mode, tried, bound_n, best)
