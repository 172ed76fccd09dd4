"""End-to-end acceptance checks, one test (or small group) per criterion.

A summary line per criterion is printed at the end of the pytest run.
"""

import itertools
import math
import time

import gmpy2
import numpy as np
import pytest
from scipy.spatial import cKDTree

from amoebakit.bounds import (
    BoundInputs,
    lopsided_bound_n,
    lopsided_conclusion,
    lopsided_hypothesis,
    onevar_bound_n,
    onevar_conclusions,
    onevar_hypothesis,
    superlopsided_bound_n,
    tail_series_conclusion,
    theorem_inputs,
)
from amoebakit.errors import PrecisionExhausted
from amoebakit.geometry import approximate_spine, enumerate_components, spine_membership
from amoebakit.ideals import certify_outside_ideal, witness_polynomial
from amoebakit.lopsided import is_lopsided
from amoebakit.membership import (
    Certificate,
    cell_centers,
    certify_outside,
    component_index,
    oracle_grid_r2,
    oracle_membership_r1,
    region_grid,
)
from amoebakit.polynomial import LaurentPolynomial, default_precision, magnitude_list
from amoebakit.resultant import cyclic_resultant, general_cyclic_resultant, general_cyclic_resultant_with_report
from amoebakit.tropical import tropical_membership

from conftest import poly, record

LINE = poly(2, ((0, 0), 1), ((1, 0), 1), ((0, 1), 1))
TRINOMIAL = poly(2, ((0, 0), 1), ((1, 1), 1), ((0, 2), 1))


def from_roots(roots):
    f = poly(1, (0, 1))
    for z in roots:
        f = f * poly(1, (0, -gmpy2.mpc(complex(z))), (1, 1))
    return f


def exact_log_moduli(roots):
    # at working precision: a float log|z| can sit genuinely off a degree-1 amoeba
    with gmpy2.context(gmpy2.get_context(), precision=default_precision()):
        return [gmpy2.log(abs(gmpy2.mpc(complex(z)))) for z in roots]


def random_roots(rng, deg):
    return np.exp(rng.uniform(-2, 2, size=deg) + 1j * rng.uniform(0, 2 * np.pi, size=deg))


# 1 -----------------------------------------------------------------------

def test_criterion_1_trinomial_exactness():
    t0 = time.perf_counter()
    xs = cell_centers(-2, 2, 50)
    inside = region_grid(TRINOMIAL, (-2, -2, 2, 2), (50, 50), "la", 1) == 0
    oracle = oracle_grid_r2(TRINOMIAL, xs, xs, 128, 0.02)
    elapsed = time.perf_counter() - t0
    agree = float(np.mean(inside == oracle))
    stray = 0
    for iy, ix in zip(*np.nonzero(inside != oracle)):
        block = oracle[max(iy - 1, 0):iy + 2, max(ix - 1, 0):ix + 2]
        stray += not np.any(block != oracle[iy, ix])
    ok = agree >= 0.98 and stray == 0 and elapsed < 60
    record(1, "grid", ok, f"agreement {agree:.4f}, {stray} off-boundary disagreements, {elapsed:.1f}s")
    assert ok


# 2 -----------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4])
def test_criterion_2_closed_form(n):
    one_minus = lambda e: poly(2, ((0, 0), 1), (e, -1))
    f = one_minus((1, 0)) * one_minus((0, 1))
    expected = one_minus((n, 0)) ** n * one_minus((0, n)) ** n
    res = cyclic_resultant(f, n)
    err = res.max_relative_difference(expected)
    ok = res.support == expected.support and err < 1e-30
    record(2, f"n={n}", ok, f"max rel err {err:.1e}")
    assert ok


# 3 -----------------------------------------------------------------------

def test_criterion_3_support_divisibility():
    rng = np.random.default_rng(2024)
    bad = 0
    checked = 0
    for _ in range(100):
        r = int(rng.integers(1, 3))
        t = int(rng.integers(1, 6))
        exps = rng.integers(-3, 4, size=(t, r))
        cs = rng.normal(size=t) + 1j * rng.normal(size=t)
        f = LaurentPolynomial.from_terms(r, [(tuple(int(v) for v in e), complex(c)) for e, c in zip(exps, cs)])
        for n in (2, 3):
            try:
                res, report = general_cyclic_resultant_with_report(f, (n,) * r)
            except PrecisionExhausted:
                bad += 1
                continue
            checked += 1
            if any(v % n for e in res.support for v in e) or report.worst_removed_log2 > report.threshold_log2:
                bad += 1
    record(3, "random", bad == 0, f"{checked} resultants, {bad} violations")
    assert bad == 0


# 4 -----------------------------------------------------------------------

def test_criterion_4_soundness_and_sufficiency():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    failures, false_certs, certified, in_points = [], 0, 0, 0
    for trial in range(200):
        roots = random_roots(rng, int(rng.integers(1, 7)))
        f = from_roots(roots)
        for eps in (0.5, 0.25):
            while True:
                a = float(rng.uniform(-3, 3))
                if oracle_membership_r1(f, a).distance >= eps:
                    break
            bound = superlopsided_bound_n(theorem_inputs(f, eps))
            res = certify_outside(f, [a], eps, "superlopsided")
            if isinstance(res, Certificate) and res.n <= bound:
                certified += 1
            else:
                failures.append((trial, eps, a))
        for a in exact_log_moduli(roots):
            in_points += 1
            res = certify_outside(f, [a], 0.25, "superlopsided")
            false_certs += isinstance(res, Certificate) and oracle_membership_r1(f, float(a)).inside
    elapsed = time.perf_counter() - t0
    ok = not failures and false_certs == 0 and elapsed < 300
    record(4, "r=1", ok, f"{certified}/400 certified within bound, {false_certs} of {in_points} In points "
                         f"certified, {elapsed:.0f}s")
    assert ok, failures[:5]


# 5 -----------------------------------------------------------------------

def _hausdorff_sa(n, xs, pts_in, grid):
    X, Y = np.meshgrid(xs, xs)
    inside = region_grid(LINE, (-3, -3, 3, 3), (100, 100), "sa", n) == 0
    S = np.stack([X[inside], Y[inside]], 1)
    d1 = cKDTree(pts_in).query(S)[0].max()
    d2 = cKDTree(S).query(pts_in)[0].max()
    return max(d1, d2), inside


@pytest.fixture(scope="module")
def hausdorff_data():
    xs = cell_centers(-3, 3, 100)
    oracle = oracle_grid_r2(LINE, xs, xs, 128, 0.02)
    X, Y = np.meshgrid(xs, xs)
    pts_in = np.stack([X[oracle], Y[oracle]], 1)
    out = {}
    cumulative = np.ones_like(oracle)
    for n in (1, 2, 4):
        d, inside = _hausdorff_sa(n, xs, pts_in, oracle)
        cumulative &= inside
        S = np.stack([X[cumulative], Y[cumulative]], 1)
        dc = max(cKDTree(pts_in).query(S)[0].max(), cKDTree(S).query(pts_in)[0].max())
        out[n] = (d, dc)
    return out


def test_criterion_5_bound_at_4(hausdorff_data):
    bound = 0.25 * (3 * math.log(4) + math.log(16 / 3 * 1 * 3))
    d4 = hausdorff_data[4][0]
    cum = [hausdorff_data[n][1] for n in (1, 2, 4)]
    ok = d4 < bound and all(b <= a for a, b in zip(cum, cum[1:]))
    record(5, "n=4 below bound", d4 < bound, f"{d4:.3f} < {bound:.3f}")
    record(5, "cumulative region monotone", all(b <= a for a, b in zip(cum, cum[1:])),
           ", ".join(f"{v:.3f}" for v in cum))
    assert ok


@pytest.mark.xfail(strict=True, reason="the per-order SA region of 1+z1+z2 widens from n=1 to n=2 "
                                       "along the tentacles (x2 < -log 2 versus x2 < -log(10)/2)")
def test_criterion_5_per_order_monotone(hausdorff_data):
    ds = [hausdorff_data[n][0] for n in (1, 2, 4)]
    ok = all(b <= a for a, b in zip(ds, ds[1:]))
    record(5, "per-order monotone", ok, ", ".join(f"{v:.3f}" for v in ds))
    assert ok


# 6 -----------------------------------------------------------------------

def test_criterion_6_dominant_term_law():
    rng = np.random.default_rng(6)
    count, bad = 0, 0
    while count < 50:
        f = from_roots(random_roots(rng, int(rng.integers(1, 6))))
        a = float(rng.uniform(-3, 3))
        if oracle_membership_r1(f, a).distance < 0.25:
            continue
        cert = certify_outside(f, [a], 0.25, "lopsided")
        if not isinstance(cert, Certificate):
            continue
        count += 1
        k = component_index(f, [a], seed=count)
        bad += cert.dominant_exponent != (cert.n * k[0],)
    record(6, "r=1", bad == 0, f"{count} certificates, {bad} mismatches")
    assert bad == 0


# 7 -----------------------------------------------------------------------

def test_criterion_7_polyhedra():
    from amoebakit.membership import oracle_membership_r2

    recs = {r.k: r for r in enumerate_components(LINE, 1)}
    feasible = set(recs) == {(0, 0), (1, 0), (0, 1)} and all(r.feasible for r in recs.values())
    outside = all(not oracle_membership_r2(LINE, r.witness).inside for r in recs.values())
    H = recs[(0, 0)].system
    shape = sorted((h.normal, h.offset) for h in H.inequalities)
    exact = [n for n, _ in shape] == [(-1, 0), (0, -1)] and all(abs(o + math.log(2)) < 1e-12 for _, o in shape)
    ok = feasible and outside and exact
    record(7, "line n=1", ok, f"feasible={feasible} witnesses_out={outside} quadrant={exact}")
    assert ok


# 8 -----------------------------------------------------------------------

def ronkin(x, samples=256):
    th = 2 * np.pi * np.arange(samples) / samples
    z1 = np.exp(x[0] + 1j * th)[:, None]
    z2 = np.exp(x[1] + 1j * th)[None, :]
    return float(np.mean(np.log(np.abs(1 + z1 + z2))))


def test_criterion_8_spine():
    coeffs, oracle_gap = {}, 0.0
    for n in (2, 4, 8):
        comps = enumerate_components(LINE, n)
        T = approximate_spine(LINE, n, components=comps)
        coeffs[n] = dict(T.terms)
        for c in comps:
            if c.feasible:
                want = ronkin(c.witness) - float(np.dot(c.k, c.witness))
                oracle_gap = max(oracle_gap, abs(T.terms[c.k] - want))
    shrinking = all(abs(coeffs[n][k]) <= abs(coeffs[n // 2][k]) for n in (4, 8) for k in coeffs[n])
    small = all(abs(v) < 0.05 for v in coeffs[8].values())
    rng = np.random.default_rng(8)
    pts = rng.uniform(-3, 3, size=(10_000, 2))
    T = approximate_spine(LINE, 8)
    agree = all(spine_membership(T, p) == tropical_membership(T, p) for p in pts)
    ok = shrinking and small and oracle_gap < 0.02 and agree
    record(8, "line", ok, f"|c| at n=8: {max(abs(v) for v in coeffs[8].values()):.2e}, "
                          f"Ronkin gap {oracle_gap:.1e}, membership agreement {agree}")
    assert ok


# 9 -----------------------------------------------------------------------

def test_criterion_9_ideal_witness():
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(50):
        r = int(rng.integers(1, 3))
        gens = []
        while len(gens) < 2:
            t = int(rng.integers(1, 5))
            exps = rng.integers(-2, 3, size=(t, r))
            cs = rng.normal(size=t) + 1j * rng.normal(size=t)
            g = LaurentPolynomial.from_terms(r, [(tuple(int(v) for v in e), complex(c)) for e, c in zip(exps, cs)])
            if not g.is_zero():
                gens.append(g)
        a = rng.uniform(-1.5, 1.5, size=r)
        fa = witness_polynomial(gens, a.tolist())
        for _ in range(100):
            z = np.exp(a + 1j * rng.uniform(0, 2 * np.pi, size=r)).tolist()
            want = sum(abs(complex(g.evaluate(z))) ** 2 for g in gens)
            worst = max(worst, abs(complex(fa.evaluate(z)) - want) / want)
    cert = certify_outside_ideal([poly(1, (0, -1), (1, 1)), poly(1, (0, -2), (1, 1))], [0.0], 0.5)
    ok = worst < 1e-10 and isinstance(cert, Certificate)
    record(9, "torus identity + empty variety", ok, f"worst rel err {worst:.1e}, certified={isinstance(cert, Certificate)}")
    assert ok


# 10 ----------------------------------------------------------------------

GAMMAS = (0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99)
WIDTHS = (1, 2, 5, 10)


def test_criterion_10_appendix():
    a1 = a1_bad = 0
    for g, c0, c1, D0, D1 in itertools.product(GAMMAS, WIDTHS, WIDTHS, range(4), range(4)):
        n0 = onevar_bound_n(g, c0, D0, c1, D1)
        for n in range(n0, n0 + 51):
            if onevar_hypothesis(n, g, c0, D0, c1, D1):
                a1 += 1
                a1_bad += onevar_conclusions(n, g, c0, D0, c1, D1) != (True, True)
    a2 = a2_bad = 0
    for r, g, c in itertools.product(range(1, 7), GAMMAS, WIDTHS):
        n0 = lopsided_bound_n(BoundInputs(-math.log(g), r, c))
        for n in range(max(1, n0 - 1), n0 + 51):
            if lopsided_hypothesis(n, g, c, r):
                a2 += 1
                a2_bad += not lopsided_conclusion(n, g, c, r)
    a3_bad = sum(not tail_series_conclusion(x, s) for x in (0.01, 0.1, 0.5, 1.0) for s in range(1, 7))
    record(10, "A.1", a1_bad == 0, f"{a1} cases")
    record(10, "A.2", a2_bad == 0, f"{a2} cases")
    record(10, "A.3", a3_bad == 0, "24 cases")
    assert a1_bad == a2_bad == a3_bad == 0


# 11 ----------------------------------------------------------------------

POINT = [-0.5, -0.5]
PRODUCT = poly(2, ((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 1))


def test_criterion_11_unbalanced_not_lopsided():
    n2 = math.ceil(math.exp(0.5 * 4))
    verdict = is_lopsided(magnitude_list(general_cyclic_resultant(PRODUCT, (4, n2)), POINT))
    family = [is_lopsided(magnitude_list(general_cyclic_resultant(PRODUCT, (m, math.ceil(math.exp(0.5 * m)))),
                                         POINT)).lopsided for m in range(2, 9)]
    balanced = [is_lopsided(magnitude_list(cyclic_resultant(PRODUCT, m), POINT)).lopsided for m in range(2, 9)]
    ok = n2 == 8 and not verdict.lopsided and not any(family) and balanced[4:] == [True, True, True]
    record(11, "Res_{4,8} not lopsided", not verdict.lopsided, f"margin {verdict.margin:.3f}")
    record(11, "balanced Res_n lopsided from n=6", balanced[4:] == [True] * 3 and not any(family),
           "unbalanced family never lopsided for n1 = 2..8")
    assert ok


@pytest.mark.xfail(strict=True, reason="Res_4[(1+z1)(1+z2)] = (1-z1^4)^4 (1-z2^4)^4 has non-dominant mass "
                                       "(1+e^-2)^8 - 1 = 1.76 > 1 at (-0.5,-0.5)")
def test_criterion_11_balanced_res4_lopsided():
    verdict = is_lopsided(magnitude_list(cyclic_resultant(PRODUCT, 4), POINT))
    record(11, "Res_4 lopsided", verdict.lopsided, f"margin {verdict.margin:.3f}")
    assert verdict.lopsided
