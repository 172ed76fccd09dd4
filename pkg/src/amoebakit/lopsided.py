"""Lopsidedness and d'-superlopsidedness of magnitude lists.

All comparisons run in log space at the magnitude list's precision. A list
is reported lopsided only when the winning gap exceeds ``slack``; ties and
near-ties are treated as *not* lopsided so a positive answer is always safe
to use as a certificate of exclusion from the amoeba.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import gmpy2
from gmpy2 import mpfr

from .polynomial import Exponent, LaurentPolynomial, MagnitudeList, context, magnitude_list

# Margin reported for single-term lists, which are lopsided by convention.
SINGLE_TERM_MARGIN = 1.0e300


def default_slack(precision_bits: int) -> float:
    return 2.0 ** (-(precision_bits / 2))


@dataclass(frozen=True)
class LopsidedVerdict:
    lopsided: bool
    dominant_exponent: Exponent | None
    margin: float  # log-domain gap when lopsided, otherwise <= 0

    def __bool__(self):
        return self.lopsided


class RegionTest(NamedTuple):
    """Outcome of an LA/SA test: ``inside`` means *not certified outside*."""

    inside: bool
    verdict: LopsidedVerdict


def _argmax(logs: Sequence[mpfr]) -> int:
    best = 0
    for i in range(1, len(logs)):
        if logs[i] > logs[best]:
            best = i
    return best


def logsumexp(values: Sequence[mpfr], bits: int) -> mpfr:
    with context(bits):
        top = max(values)
        if gmpy2.is_infinite(top):
            return top
        total = mpfr(0)
        for v in values:
            total += gmpy2.exp(v - top)
        return top + gmpy2.log(total)


def _verdict(L: MagnitudeList, i: int, gap: mpfr, slack: float) -> LopsidedVerdict:
    g = float(gap)
    if gap > slack:
        return LopsidedVerdict(True, L.entries[i][0], g)
    return LopsidedVerdict(False, None, min(g, 0.0))


def is_lopsided(L: MagnitudeList, slack: float | None = None) -> LopsidedVerdict:
    if len(L) == 0:
        raise ValueError("empty magnitude list")
    if slack is None:
        slack = default_slack(L.precision_bits)
    if slack < 0:
        raise ValueError("slack must be non-negative")
    if len(L) == 1:
        return LopsidedVerdict(True, L.entries[0][0], SINGLE_TERM_MARGIN)
    logs = L.logs
    i = _argmax(logs)
    rest = logs[:i] + logs[i + 1:]
    with context(L.precision_bits):
        gap = logs[i] - logsumexp(rest, L.precision_bits)
    return _verdict(L, i, gap, slack)


def is_superlopsided(L: MagnitudeList, d_prime: float, slack: float | None = None) -> LopsidedVerdict:
    """True iff one entry exceeds ``d_prime`` times every other entry."""
    if len(L) == 0:
        raise ValueError("empty magnitude list")
    if d_prime < 1:
        raise ValueError("d_prime must be at least 1")
    if slack is None:
        slack = default_slack(L.precision_bits)
    if len(L) == 1:
        return LopsidedVerdict(True, L.entries[0][0], SINGLE_TERM_MARGIN)
    logs = L.logs
    i = _argmax(logs)
    with context(L.precision_bits):
        runner_up = max(logs[:i] + logs[i + 1:])
        gap = logs[i] - runner_up - gmpy2.log(mpfr(d_prime))
    return _verdict(L, i, gap, slack)


def default_d_prime(L: MagnitudeList) -> int:
    """The plain notion of superlopsided: one less than the list length, at least 1."""
    return max(1, len(L) - 1)


def la_membership(f: LaurentPolynomial, a: Sequence[float], slack: float | None = None) -> RegionTest:
    """``inside`` is False exactly when f{a} is lopsided (a is then outside the amoeba)."""
    verdict = is_lopsided(magnitude_list(f, a), slack)
    return RegionTest(not verdict.lopsided, verdict)


def sa_membership(f: LaurentPolynomial, a: Sequence[float], slack: float | None = None,
                  d_prime: float | None = None) -> RegionTest:
    L = magnitude_list(f, a)
    verdict = is_superlopsided(L, default_d_prime(L) if d_prime is None else d_prime, slack)
    return RegionTest(not verdict.lopsided, verdict)
