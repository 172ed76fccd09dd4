"""How large the cyclic-resultant order must be, and lattice-point counts.

All logarithms are natural. The smallest admissible order is found by
galloping then bisection, which returns the same answer as an upward scan.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np

from .polynomial import LaurentPolynomial, NewtonPolytopeData, newton_polytope

ENUMERATION_CAP = 10**7
SCAN_CAP = 10**9
_CHUNK = 200_000


@dataclass(frozen=True)
class BoundInputs:
    epsilon: float
    r: int
    c: int
    d: float = 1.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.r < 1:
            raise ValueError("r must be positive")
        if self.c < 1:
            raise ValueError("c must be at least 1 (monomials have no amoeba)")
        if not self.d > 0:
            raise ValueError("d must be positive")


# ---------------------------------------------------------------------------
# lattice points


def lattice_points(P: NewtonPolytopeData, m: int = 1) -> list[tuple[int, ...]]:
    """Integer points of the dilate ``m * Delta`` (exact enumeration)."""
    if m < 1:
        raise ValueError("dilation factor must be positive")
    hull = P.hull()
    lo = [m * min(e[i] for e in P.support) for i in range(P.r)]
    hi = [m * max(e[i] for e in P.support) for i in range(P.r)]
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    found: list[tuple[int, ...]] = []
    it = itertools.product(*ranges)
    while True:
        chunk = list(itertools.islice(it, _CHUNK))
        if not chunk:
            break
        arr = np.array(chunk, dtype=np.int64)
        mask = hull.contains(arr, scale=m)
        found.extend(tuple(int(v) for v in row) for row in arr[mask])
    return found


def box_count(P: NewtonPolytopeData, m: int) -> int:
    return math.prod(m * w + 1 for w in P.widths)


def lattice_count_bound(P: NewtonPolytopeData, m: int = 1, *, enumeration_cap: int = ENUMERATION_CAP,
                        allow_fallback: bool = True) -> float:
    """``#(Z^r ∩ m·Δ) / m^r``, exactly when the bounding box is small enough.

    Larger boxes fall back to the bounding-box count, which still bounds the
    ratio from above.
    """
    box = box_count(P, m)
    if box <= enumeration_cap:
        return len(lattice_points(P, m)) / m ** P.r
    if not allow_fallback:
        raise OverflowError(f"bounding box holds {box} lattice points, cap is {enumeration_cap}")
    return box / m ** P.r


def uniform_lattice_constant(P: NewtonPolytopeData) -> float:
    """A value of d valid for every dilation factor.

    For r <= 2 the lattice count ratio is maximal at m = 1 (Pick's formula makes
    it decreasing), so the exact count is used. In higher dimension the
    bounding-box count at m = 1 is used since it dominates every dilate.
    """
    if P.r <= 2:
        return lattice_count_bound(P, 1)
    return float(box_count(P, 1))


def theorem_inputs(f: LaurentPolynomial, epsilon: float) -> BoundInputs:
    P = newton_polytope(f)
    return BoundInputs(epsilon=epsilon, r=f.r, c=P.max_width, d=uniform_lattice_constant(P))


def predicted_terms(d: float, n: int, r: int) -> float:
    """Upper bound on the number of terms of the order-n cyclic resultant."""
    return d * float(n) ** (r * r - r)


# ---------------------------------------------------------------------------
# smallest admissible n


def _smallest_n(holds: Callable[[int], bool], cap: int = SCAN_CAP) -> int:
    # every predicate here is "g(n) >= 0" with g concave and unbounded above,
    # so the admissible set is an up-ray and bisection is exact.
    if holds(1):
        return 1
    lo, hi = 1, 2
    while not holds(hi):
        lo = hi
        hi *= 2
        if hi > cap:
            raise OverflowError(f"no admissible n below {cap}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


def lopsided_bound_n(inp: BoundInputs) -> int:
    """Smallest n with n*eps >= (r-1) log n + log((r+3) 2^(r+1) c)."""
    r, eps = inp.r, inp.epsilon
    const = math.log((r + 3) * 2 ** (r + 1) * inp.c)
    return _smallest_n(lambda n: n * eps >= (r - 1) * math.log(n) + const)


def superlopsided_bound_n(inp: BoundInputs) -> int:
    """Smallest n with n*eps >= (r^2-1) log n + log(16/3 c d)."""
    r, eps = inp.r, inp.epsilon
    const = math.log(16.0 / 3.0 * inp.c * inp.d)
    return _smallest_n(lambda n: n * eps >= (r * r - 1) * math.log(n) + const)


def onevar_bound_n(gamma: float, c0: int, D0: int, c1: int, D1: int) -> int:
    """Smallest n with n log(1/gamma) >= (D0+D1) log n + log(8/3 c0 c1)."""
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie strictly between 0 and 1")
    rate = -math.log(gamma)
    const = math.log(8.0 / 3.0 * c0 * c1)
    return _smallest_n(lambda n: n * rate >= (D0 + D1) * math.log(n) + const)


def resolution_at(n: int, r: int, c: int, d: float) -> float:
    """The epsilon for which n is exactly the superlopsided bound's threshold."""
    return ((r * r - 1) * math.log(n) + math.log(16.0 / 3.0 * c * d)) / n


# ---------------------------------------------------------------------------
# appendix inequalities, evaluated at 50 significant digits


def _mp(x):
    return mpmath.mpf(x)


def onevar_hypothesis(n, gamma, c0, D0, c1, D1) -> bool:
    with mpmath.workdps(50):
        lhs = n * mpmath.log(1 / _mp(gamma))
        rhs = (D0 + D1) * mpmath.log(n) + mpmath.log(_mp(8) / 3 * c0 * c1)
        return bool(lhs >= rhs)


def onevar_conclusions(n, gamma, c0, D0, c1, D1) -> tuple[bool, bool]:
    """Both consequences of the one-variable hypothesis, checked numerically."""
    with mpmath.workdps(50):
        g = _mp(gamma) ** n
        power = mpmath.power(1 + g, c0 * _mp(n) ** D0)
        first = c1 * _mp(n) ** D1 * (power - 1) < mpmath.mpf(1) / 2
        second = power < mpmath.mpf(3) / 2
        return bool(first), bool(second)


def lopsided_hypothesis(n, gamma, c, r) -> bool:
    with mpmath.workdps(50):
        lhs = n * mpmath.log(1 / _mp(gamma))
        rhs = (r - 1) * mpmath.log(n) + mpmath.log((r + 3) * _mp(2) ** (r + 1) * c)
        return bool(lhs >= rhs)


def lopsided_ratio(n, gamma, c, r):
    with mpmath.workdps(50):
        x = c * _mp(n) ** (r - 1) * _mp(gamma) ** n
        return (mpmath.exp((r + 2) * x) - 1) / (2 - mpmath.exp(x))


def lopsided_conclusion(n, gamma, c, r) -> bool:
    with mpmath.workdps(50):
        return bool(lopsided_ratio(n, gamma, c, r) < _mp(2) ** (-r - 1))


def tail_series_upper(x: float, s: int, tol: float = 1e-40):
    """Rigorous upper bound for sum_{w0>=1} C(w0+s-1, s-1) sum_{w>=w0} x^w / w!.

    After swapping the sums the series is sum_{w>=1} (C(w+s, s) - 1) x^w / w!.
    Terms with weight C(w+s, s) have consecutive ratio x (w+1+s) / (w+1)^2,
    which decreases in w, so once it drops below 1/2 the remainder is bounded
    by a geometric series.
    """
    with mpmath.workdps(60):
        xx = _mp(x)
        total = mpmath.mpf(0)
        w = 1
        term = xx  # x^w / w!
        while True:
            weight = mpmath.binomial(w + s, s)
            total += (weight - 1) * term
            big = weight * term
            ratio = xx * (w + 1 + s) / (w + 1) ** 2
            if ratio < 0.5 and big < tol:
                # remainder <= big * ratio / (1 - ratio)
                return total + big * ratio / (1 - ratio)
            w += 1
            term = term * xx / w


def tail_series_conclusion(x: float, s: int) -> bool:
    with mpmath.workdps(60):
        return bool(tail_series_upper(x, s) < mpmath.exp((s + 1) * _mp(x)) - 1)
