"""Certified exclusion from hypersurface amoebas, component indices, oracles.

A :class:`Certificate` is produced only when the magnitude list of a cyclic
resultant is (super)lopsided at the point, which proves the point is not in
the amoeba. Failure at the order prescribed by the convergence bound proves
instead that the point is within epsilon of the amoeba.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import gmpy2
import numpy as np

from . import bounds
from .errors import BudgetExceeded, RootFindingError, TooCloseToAmoeba
from .lopsided import LopsidedVerdict, default_d_prime, is_lopsided, is_superlopsided
from .polynomial import Exponent, LaurentPolynomial, context, magnitude_list
from .resultant import DEFAULT_TERM_BUDGET, cyclic_resultant, predicted_resultant_terms
from .roots import nonzero_roots, nonzero_roots_batch, trim_bounds

MODES = ("lopsided", "superlopsided")
CIRCLE_TOL = 1e-6


def normalize_mode(mode: str) -> str:
    if mode in ("super", "sa"):
        return "superlopsided"
    if mode in ("la",):
        return "lopsided"
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return mode


@dataclass(frozen=True)
class Certificate:
    point: tuple[float, ...]
    n: int
    mode: str
    dominant_exponent: Exponent
    margin: float
    epsilon: float

    def to_json_dict(self) -> dict:
        return {
            "point": list(self.point),
            "n": self.n,
            "mode": self.mode,
            "dominant_exp": list(self.dominant_exponent),
            "margin": self.margin,
            "epsilon": self.epsilon,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Certificate":
        return cls(
            point=tuple(float(x) for x in data["point"]),
            n=int(data["n"]),
            mode=normalize_mode(data["mode"]),
            dominant_exponent=tuple(int(v) for v in data["dominant_exp"]),
            margin=float(data["margin"]),
            epsilon=float(data["epsilon"]),
        )


@dataclass(frozen=True)
class NotCertified:
    point: tuple[float, ...]
    epsilon: float
    mode: str
    n_tried: tuple[int, ...]
    theorem_n: int
    best_margin: float

    @property
    def conclusive(self) -> bool:
        """True when the bound's order was tried, so dist(a, amoeba) < epsilon."""
        return self.theorem_n in self.n_tried

    @property
    def last_n(self) -> int:
        return self.n_tried[-1] if self.n_tried else 0

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["point"] = list(self.point)
        d["n_tried"] = list(self.n_tried)
        d["certified"] = False
        d["conclusive"] = self.conclusive
        return d


def default_schedule(bound_n: int) -> list[int]:
    """1, 2, 4, ... below the bound, then the bound itself."""
    sched = []
    n = 1
    while n < bound_n:
        sched.append(n)
        n *= 2
    sched.append(bound_n)
    return sched


def theorem_n(f: LaurentPolynomial, epsilon: float, mode: str) -> int:
    inp = bounds.theorem_inputs(f, epsilon)
    if normalize_mode(mode) == "lopsided":
        return bounds.lopsided_bound_n(inp)
    return bounds.superlopsided_bound_n(inp)


def resultant_verdict(resf: LaurentPolynomial, a: Sequence[float], mode: str,
                   slack: float | None = None) -> LopsidedVerdict:
    L = magnitude_list(resf, a)
    if normalize_mode(mode) == "lopsided":
        return is_lopsided(L, slack)
    return is_superlopsided(L, default_d_prime(L), slack)


def certify_outside(f: LaurentPolynomial, a: Sequence[float], epsilon: float, mode: str = "lopsided",
                    n_override: int | None = None, *, slack: float | None = None,
                    budget: int = DEFAULT_TERM_BUDGET, cache: dict | None = None,
                    max_n: int | None = None):
    """Try to prove ``a`` lies outside the amoeba of ``f``.

    Orders 1, 2, 4, ... up to the convergence bound for ``epsilon`` are tried
    and the first success is returned. ``max_n`` truncates the schedule
    (the result is then inconclusive if it stops before the bound).
    """
    f.require_nonzero("certify_outside")
    if f.is_monomial():
        raise ValueError("monomials have an empty amoeba; nothing to certify against")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    mode = normalize_mode(mode)
    # keep the caller's values (str / mpfr allowed) for the computation itself
    a_record = tuple(float(x) for x in a)
    if len(a) != f.r:
        raise ValueError(f"point has {len(a)} coordinates, expected {f.r}")
    bound_n = theorem_n(f, epsilon, mode)
    if n_override is not None:
        schedule = [int(n_override)]
    else:
        schedule = default_schedule(bound_n)
        if max_n is not None:
            schedule = [n for n in schedule if n <= max_n]
    cache = {} if cache is None else cache
    tried: list[int] = []
    best = -math.inf
    for n in schedule:
        if n not in cache:
            predicted = predicted_resultant_terms(f, (n,) * f.r)
            if predicted > budget:
                raise BudgetExceeded(
                    f"order {n} may need {predicted:.3g} terms (cap {budget}); "
                    f"the bound for epsilon={epsilon} is n={bound_n}",
                    predicted_terms=predicted, cap=budget, n_needed=bound_n,
                )
            cache[n] = cyclic_resultant(f, n, budget=budget)
        verdict = resultant_verdict(cache[n], a, mode, slack)
        tried.append(n)
        if verdict.lopsided:
            return Certificate(a_record, n, mode, verdict.dominant_exponent, verdict.margin, float(epsilon))
        best = max(best, verdict.margin)
    return NotCertified(a_record, float(epsilon), mode, tuple(tried), bound_n, best)


def verify_certificate(f: LaurentPolynomial, cert: Certificate, slack: float | None = None,
                       budget: int = DEFAULT_TERM_BUDGET, point=None) -> bool:
    """Recompute the resultant and check the recorded verdict independently.

    ``point`` overrides the (float) coordinates stored in the certificate when
    the original was certified at higher precision.
    """
    a = cert.point if point is None else point
    verdict = resultant_verdict(cyclic_resultant(f, cert.n, budget=budget), a, cert.mode, slack)
    return (
        verdict.lopsided
        and verdict.dominant_exponent == tuple(cert.dominant_exponent)
        and verdict.margin >= cert.margin * (1 - 1e-12)
    )


def dominance_ratio(resf: LaurentPolynomial, a: Sequence[float]) -> float:
    """(sum of non-dominant magnitudes) / (dominant magnitude) at ``a``."""
    L = magnitude_list(resf, a)
    logs = L.logs
    top = max(logs)
    i = logs.index(top)
    with context(L.precision_bits):
        total = sum(gmpy2.exp(v - top) for j, v in enumerate(logs) if j != i)
    return float(total)


# ---------------------------------------------------------------------------
# univariate slices


def _term_arrays(f: LaurentPolynomial):
    exps = np.array(list(f.terms), dtype=np.int64)
    with context(f.precision_bits):
        logmag = np.array([float(gmpy2.log(abs(c))) for c in f.terms.values()])
        phase = np.array([float(gmpy2.atan2(c.imag, c.real)) for c in f.terms.values()])
    return exps, logmag + 1j * phase


def slice_coefficients(f: LaurentPolynomial, var: int, log_zeta: np.ndarray):
    """Coefficients of ``z -> f(zeta_1, .., z, .., zeta_r)`` for many zeta at once.

    ``log_zeta`` has shape (N, r) holding complex logarithms ``a_l + i theta_l``;
    column ``var`` is ignored. Returns ``(coeffs, mindeg)`` where ``coeffs`` has
    shape (N, width) ordered from z**mindeg upwards. Each row is rescaled by
    a positive constant to avoid overflow, which does not move roots.
    """
    exps, logb = _term_arrays(f)
    log_zeta = np.atleast_2d(np.asarray(log_zeta, dtype=complex))
    others = [l for l in range(f.r) if l != var]
    w = logb[None, :] + log_zeta[:, others] @ exps[:, others].T.astype(float)
    w = w - np.max(w.real, axis=1, keepdims=True)
    vals = np.exp(w)
    powers = exps[:, var]
    mindeg = int(powers.min())
    width = int(powers.max()) - mindeg + 1
    onehot = np.zeros((len(powers), width))
    onehot[np.arange(len(powers)), powers - mindeg] = 1.0
    return vals @ onehot, mindeg


def component_index(f: LaurentPolynomial, a: Sequence[float], *, seed: int = 0, trials: int = 3,
                    circle_tol: float = CIRCLE_TOL) -> Exponent:
    """Index of the complement component containing ``a``.

    For every variable, roots of a univariate slice through a random point of
    the fibre over ``a`` are counted inside the circle of radius ``e^{a_i}``,
    offset by the slice's lowest exponent.
    """
    f.require_nonzero("component_index")
    a = np.asarray(a, dtype=float)
    rng = np.random.default_rng(seed)
    index = []
    for var in range(f.r):
        counts = set()
        for _ in range(trials):
            theta = rng.uniform(0.0, 2.0 * np.pi, size=f.r)
            coeffs, mindeg = slice_coefficients(f, var, (a + 1j * theta)[None, :])
            row = coeffs[0]
            ends = trim_bounds(row)
            if ends is None:
                raise TooCloseToAmoeba("slice vanishes identically; point is in the amoeba")
            low = mindeg + ends[0]
            roots = nonzero_roots(row)
            radius = np.abs(roots) / math.exp(a[var])
            if np.any(np.abs(radius - 1.0) < circle_tol):
                raise TooCloseToAmoeba(
                    f"slice in variable {var + 1} has a root on |z| = e^{a[var]:.6g}"
                )
            counts.add(int(np.sum(radius < 1.0)) + low)
        if len(counts) != 1:
            raise TooCloseToAmoeba(f"index disagrees across random fibres: {sorted(counts)}")
        index.append(counts.pop())
    return tuple(index)


# ---------------------------------------------------------------------------
# oracles


class OracleResult(NamedTuple):
    inside: bool
    distance: float
    skipped: int = 0


def root_logs_r1(f: LaurentPolynomial) -> np.ndarray:
    """log|root| for every nonzero root of a univariate Laurent polynomial."""
    if f.r != 1:
        raise ValueError("univariate oracle needs r = 1")
    f.require_nonzero("oracle")
    coeffs, _ = slice_coefficients(f, 0, np.zeros((1, 1)))
    return np.log(np.abs(nonzero_roots(coeffs[0])))


def oracle_membership_r1(f: LaurentPolynomial, a: float, tol: float = 1e-9) -> OracleResult:
    logs = root_logs_r1(f)
    if logs.size == 0:
        return OracleResult(False, math.inf)
    dist = float(np.min(np.abs(logs - float(a))))
    return OracleResult(dist <= tol, dist)


def root_logs_r2(f: LaurentPolynomial, a1: float, phase_samples: int = 128):
    """log|z2| over all roots of the slices ``z2 -> f(e^{a1 + i theta}, z2)``.

    Returns ``(logs, skipped)``; ``skipped`` counts phases whose slice was
    identically zero or constant in z2 (degenerate and ignored).
    """
    if f.r != 2:
        raise ValueError("bivariate oracle needs r = 2")
    f.require_nonzero("oracle")
    theta = 2.0 * np.pi * np.arange(phase_samples) / phase_samples
    log_zeta = np.zeros((phase_samples, 2), dtype=complex)
    log_zeta[:, 0] = a1 + 1j * theta
    coeffs, _ = slice_coefficients(f, 1, log_zeta)
    found = []
    skipped = 0
    for roots in nonzero_roots_batch(coeffs):
        if roots is None or roots.size == 0:
            skipped += 1
            continue
        found.append(np.log(np.abs(roots)))
    logs = np.concatenate(found) if found else np.zeros(0)
    return logs, skipped


def oracle_membership_r2(f: LaurentPolynomial, a: Sequence[float], phase_samples: int = 128,
                         tol: float = 0.02) -> OracleResult:
    """Sampling oracle: an ``inside`` answer is certain, ``outside`` is not."""
    logs, skipped = root_logs_r2(f, float(a[0]), phase_samples)
    if logs.size == 0:
        return OracleResult(False, math.inf, skipped)
    dist = float(np.min(np.abs(logs - float(a[1]))))
    return OracleResult(dist <= tol, dist, skipped)


def oracle_grid_r2(f: LaurentPolynomial, xs: Sequence[float], ys: Sequence[float],
                   phase_samples: int = 128, tol: float = 0.02) -> np.ndarray:
    """Oracle verdicts on a grid: boolean array indexed ``[iy, ix]``."""
    ys = np.asarray(ys, dtype=float)
    out = np.zeros((len(ys), len(xs)), dtype=bool)
    for ix, x in enumerate(xs):
        logs, _ = root_logs_r2(f, float(x), phase_samples)
        if logs.size == 0:
            continue
        logs = np.sort(logs)
        pos = np.searchsorted(logs, ys)
        left = np.abs(ys - logs[np.clip(pos - 1, 0, logs.size - 1)])
        right = np.abs(logs[np.clip(pos, 0, logs.size - 1)] - ys)
        out[:, ix] = np.minimum(left, right) <= tol
    return out


# ---------------------------------------------------------------------------
# rasters


def cell_centers(lo: float, hi: float, count: int) -> np.ndarray:
    step = (hi - lo) / count
    return lo + step * (np.arange(count) + 0.5)


def _grid_rows(resf: LaurentPolynomial, xs, ys, mode: str, slack) -> list[list[int]]:
    rows = []
    for y in ys:
        row = []
        for x in xs:
            verdict = resultant_verdict(resf, (float(x), float(y)), mode, slack)
            row.append(1 if verdict.lopsided else 0)
        rows.append(row)
    return rows


def _grid_worker(args):
    text, bits, xs, ys, mode, slack = args
    from .polynomial import parse_polynomial

    return _grid_rows(parse_polynomial(text, bits), xs, ys, mode, slack)


def region_grid(f: LaurentPolynomial, bbox: Sequence[float], res: Sequence[int], mode: str, n: int, *,
                slack: float | None = None, budget: int = DEFAULT_TERM_BUDGET, jobs: int = 1) -> np.ndarray:
    """Certified-out mask on the cell centres of ``bbox``; ``[iy, ix]``, y ascending.

    1 marks a cell whose centre is certified outside the amoeba by the
    (super)lopsidedness of ``Res_n[f]``; 0 marks the approximation's interior.
    """
    if f.r != 2:
        raise ValueError("rasters need r = 2")
    x0, y0, x1, y1 = (float(v) for v in bbox)
    W, H = (int(v) for v in res)
    if W < 1 or H < 1 or not (x1 > x0 and y1 > y0):
        raise ValueError("need a non-empty box and positive resolution")
    mode = normalize_mode(mode)
    resf = cyclic_resultant(f, n, budget=budget)
    xs = cell_centers(x0, x1, W).tolist()
    ys = cell_centers(y0, y1, H).tolist()
    if jobs <= 1 or H == 1:
        return np.array(_grid_rows(resf, xs, ys, mode, slack), dtype=np.int8)
    from concurrent.futures import ProcessPoolExecutor

    text = resf.dumps()
    chunks = [ys[i::jobs] for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_grid_worker, [(text, resf.precision_bits, xs, c, mode, slack) for c in chunks]))
    out = np.zeros((H, W), dtype=np.int8)
    for i, part in enumerate(parts):
        out[i::jobs] = np.array(part, dtype=np.int8).reshape(-1, W)
    return out
