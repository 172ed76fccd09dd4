import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from amoebakit.lopsided import (
    SINGLE_TERM_MARGIN,
    default_slack,
    is_lopsided,
    is_superlopsided,
    la_membership,
    logsumexp,
    sa_membership,
)
from amoebakit.membership import oracle_membership_r1
from amoebakit.polynomial import LaurentPolynomial, MagnitudeList, magnitude_list

from conftest import LOG2, LOG3, poly


def mags(*values):
    return MagnitudeList.from_magnitudes(values)


def test_lopsided_examples():
    v = is_lopsided(mags(5, 1, 2))
    assert v.lopsided and v.dominant_exponent == (0,)
    assert v.margin == pytest.approx(math.log(5 / 3))
    assert not is_lopsided(mags(1, 1, 2)).lopsided
    assert not is_lopsided(mags(1, 1, 1)).lopsided


def test_verdict_invariants():
    v = is_lopsided(mags(1, 1, 2))
    assert v.dominant_exponent is None and v.margin <= 0
    assert not bool(v)


def test_single_entry():
    v = is_lopsided(mags(3))
    assert v.lopsided and v.margin == SINGLE_TERM_MARGIN
    assert is_superlopsided(mags(3), 100).lopsided


def test_empty_list_rejected():
    with pytest.raises(ValueError):
        is_lopsided(mags())
    with pytest.raises(ValueError):
        is_superlopsided(mags(1, 2), 0.5)


def test_superlopsided_examples():
    assert is_superlopsided(mags(10, 1, 2), 2).lopsided
    L = mags(10, 1, 6)
    assert not is_superlopsided(L, 2).lopsided
    assert is_lopsided(L).lopsided


def test_slack_blocks_near_ties():
    L = mags(2 + 1e-12, 1, 1)
    assert not is_lopsided(L, slack=1e-9).lopsided
    assert is_lopsided(mags(2 + 1e-6, 1, 1), slack=0).lopsided
    assert default_slack(256) == 2.0 ** -128


def test_logsumexp_large_values():
    import gmpy2

    with gmpy2.context(precision=128):
        vals = [gmpy2.mpfr(10000), gmpy2.mpfr(10000)]
        assert float(logsumexp(vals, 128)) == pytest.approx(10000 + math.log(2))


def test_la_membership_examples(trinomial):
    out = la_membership(trinomial, [LOG2, LOG3])
    assert not out.inside and out.verdict.dominant_exponent == (0, 2)
    onepz = poly(1, (0, 1), (1, 1))
    assert la_membership(onepz, [0]).inside
    assert not la_membership(onepz, [1]).inside


def test_sa_uses_terms_minus_one(trinomial):
    # 9 > 7 is lopsided; 9 > 2 * 6 fails
    assert sa_membership(trinomial, [LOG2, LOG3]).inside
    assert not sa_membership(trinomial, [LOG2, LOG3], d_prime=1).inside


mag_lists = st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=7)


@given(mag_lists)
def test_superlopsided_implies_lopsided(values):
    L = mags(*values)
    if is_superlopsided(L, len(values) - 1).lopsided:
        assert is_lopsided(L).lopsided


coeff = st.tuples(st.floats(-5, 5), st.floats(-5, 5)).filter(lambda c: abs(complex(*c)) > 1e-3)


@st.composite
def univariate(draw):
    deg = draw(st.integers(1, 8))
    cs = draw(st.lists(coeff, min_size=deg + 1, max_size=deg + 1))
    return LaurentPolynomial.from_terms(1, [((i,), complex(*c)) for i, c in enumerate(cs)])


@given(univariate(), st.floats(-4, 4))
def test_soundness_against_roots(f, a):
    if f.is_monomial():
        return
    if is_lopsided(magnitude_list(f, [a])).lopsided:
        assert oracle_membership_r1(f, a).distance > 0


@given(univariate(), st.floats(-3, 3), coeff, st.integers(-4, 4))
def test_scale_and_shift_invariance(f, a, lam, shift):
    g = f.scale(complex(*lam)).shift((shift,))
    v, w = is_lopsided(magnitude_list(f, [a])), is_lopsided(magnitude_list(g, [a]))
    assert v.lopsided == w.lopsided
    if v.lopsided and abs(v.margin) > 1e-9:
        assert w.dominant_exponent == (v.dominant_exponent[0] + shift,)
        assert w.margin == pytest.approx(v.margin, abs=1e-9)
