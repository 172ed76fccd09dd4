"""Cyclic resultants as expanded products over roots of unity.

The n_1 * ... * n_r rotated copies of f are multiplied one variable at a
time: after the stage for variable i the partial product is invariant under
rotating z_i, so every surviving exponent must be divisible by n_i there.
That divisibility is checked numerically. Alongside the coefficients the
product of absolute-value polynomials (the *envelope*) is carried; a
coefficient is numerical noise when it is smaller than its envelope by more
than the working precision minus ``GUARD_BITS``. Noise at non-divisible
exponents is removed; anything larger there raises PrecisionExhausted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import gmpy2
from gmpy2 import mpc, mpfr

from .bounds import box_count, predicted_terms, uniform_lattice_constant
from .errors import BudgetExceeded, DimensionMismatch, PrecisionExhausted
from .polynomial import Exponent, LaurentPolynomial, context, newton_polytope

DEFAULT_TERM_BUDGET = 10**7
GUARD_BITS = 24


@dataclass(frozen=True)
class FilterReport:
    """What the symmetry filter removed while building a resultant."""

    removed_offlattice: int
    removed_noise: int
    worst_removed_log2: float  # log2(|c| / envelope) of the largest removed coefficient
    threshold_log2: float

    @property
    def clean(self) -> bool:
        return self.worst_removed_log2 <= self.threshold_log2


def predicted_resultant_terms(f: LaurentPolynomial, ns: Sequence[int]) -> float:
    P = newton_polytope(f)
    if len(set(ns)) == 1:
        return predicted_terms(uniform_lattice_constant(P), ns[0], f.r)
    total = math.prod(ns)
    # exponent i is a multiple of n_i inside (prod n) * widths_i
    return float(math.prod(total * w // n + 1 for w, n in zip(P.widths, ns)))


def _check_budget(f, ns, budget):
    predicted = predicted_resultant_terms(f, ns)
    if predicted > budget:
        raise BudgetExceeded(
            f"resultant of order {tuple(ns)} may have {predicted:.3g} terms (cap {budget})",
            predicted_terms=predicted, cap=budget, n_needed=max(ns),
        )


def _unit_roots(n: int, bits: int) -> list[mpc]:
    with context(bits):
        two_pi = 2 * gmpy2.const_pi()
        roots = []
        for m in range(n):
            theta = two_pi * m / n
            roots.append(mpc(gmpy2.cos(theta), gmpy2.sin(theta)))
        roots[0] = mpc(1)
        if n % 2 == 0:
            roots[n // 2] = mpc(-1)
        if n % 4 == 0:
            roots[n // 4] = mpc(0, 1)
            roots[3 * n // 4] = mpc(0, -1)
    return roots


def _mul_tracked(a, a_env, b, b_env, bits):
    out: dict[Exponent, mpc] = {}
    env: dict[Exponent, mpfr] = {}
    with context(bits):
        for ea, ca in a.items():
            sa = a_env[ea]
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                prod = ca * cb
                s = sa * b_env[eb]
                if e in out:
                    out[e] += prod
                    env[e] += s
                else:
                    out[e] = prod
                    env[e] = s
    return out, env


def _rotated(terms: Mapping[Exponent, mpc], var: int, k: int, n: int, roots, bits):
    with context(bits):
        return {e: c * roots[(k * e[var]) % n] for e, c in terms.items()}


def general_cyclic_resultant_with_report(f: LaurentPolynomial, ns: Sequence[int], *,
                                         budget: int = DEFAULT_TERM_BUDGET):
    f.require_nonzero("cyclic resultant")
    ns = tuple(int(n) for n in ns)
    if len(ns) != f.r:
        raise DimensionMismatch(f"need {f.r} orders, got {len(ns)}")
    if any(n < 1 for n in ns):
        raise ValueError("orders must be positive integers")
    _check_budget(f, ns, budget)

    bits = f.precision_bits
    cutoff_log2 = -(bits - GUARD_BITS)
    with context(bits):
        terms = dict(f.terms)
        env = {e: abs(c) for e, c in terms.items()}
        cutoff = mpfr(2) ** cutoff_log2
    removed_off = removed_noise = 0
    worst = -math.inf

    for var, n in enumerate(ns):
        if n == 1:
            continue
        roots = _unit_roots(n, bits)
        acc, acc_env = terms, env
        for k in range(1, n):
            acc, acc_env = _mul_tracked(acc, acc_env, _rotated(terms, var, k, n, roots, bits), env, bits)
        kept: dict[Exponent, mpc] = {}
        kept_env: dict[Exponent, mpfr] = {}
        with context(bits):
            for e, c in acc.items():
                scale = acc_env[e]
                mag = abs(c)
                noise = mag <= scale * cutoff
                if e[var] % n:
                    if not noise:
                        raise PrecisionExhausted(
                            f"coefficient at {e} (not divisible by {n} in variable {var + 1}) "
                            f"is only 2^{float(gmpy2.log2(mag / scale)):.1f} below its envelope; "
                            f"increase precision_bits"
                        )
                    removed_off += 1
                elif noise:
                    removed_noise += 1
                else:
                    floor = scale * cutoff
                    re, im = c.real, c.imag
                    if abs(re) <= floor:
                        re = mpfr(0)
                    if abs(im) <= floor:
                        im = mpfr(0)
                    kept[e] = mpc(re, im)
                    kept_env[e] = scale
                    continue
                if not gmpy2.is_zero(mag):
                    worst = max(worst, float(gmpy2.log2(mag / scale)))
        terms, env = kept, kept_env

    report = FilterReport(removed_off, removed_noise, worst, float(cutoff_log2))
    return LaurentPolynomial(f.r, terms, bits), report


def general_cyclic_resultant(f: LaurentPolynomial, ns: Sequence[int], *,
                             budget: int = DEFAULT_TERM_BUDGET) -> LaurentPolynomial:
    """Product of f over all (n_1, ..., n_r)-th root of unity rotations."""
    return general_cyclic_resultant_with_report(f, ns, budget=budget)[0]


def cyclic_resultant(f: LaurentPolynomial, n: int, *, budget: int = DEFAULT_TERM_BUDGET) -> LaurentPolynomial:
    return general_cyclic_resultant(f, (n,) * f.r, budget=budget)


def cyclic_resultant_with_report(f: LaurentPolynomial, n: int, *, budget: int = DEFAULT_TERM_BUDGET):
    return general_cyclic_resultant_with_report(f, (n,) * f.r, budget=budget)
