"""Polyhedral approximations of complement components and approximate spines.

For a candidate index k the component of the complement of the superlopsided
approximation of ``Res_n[f]`` is cut out by one strict inequality per other
term ``j`` of the resultant::

    (n^r k - j) . x + log|B_k| - log|b_j| - log D > 0

where ``B_k`` is the coefficient at ``n^r k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import gmpy2
import numpy as np

from .bounds import lattice_points, predicted_terms, uniform_lattice_constant
from .errors import LPFailure, NoCandidateTerm, NoFeasibleComponents
from .lopsided import is_lopsided
from .polynomial import Exponent, LaurentPolynomial, context, magnitude_list, newton_polytope
from .resultant import DEFAULT_TERM_BUDGET, cyclic_resultant
from .simplex import solve_lp
from .tropical import DEFAULT_TIE_TOL, TropicalPolynomial

DEFAULT_STRICT_SLACK = 1e-9
DEFAULT_BOX = 1e6
D_POLICIES = ("terms", "lattice")


@dataclass(frozen=True)
class Halfspace:
    """The open halfspace ``normal . x + offset > 0``."""

    normal: tuple[int, ...]
    offset: float

    def value(self, x: Sequence[float]) -> float:
        return sum(a * b for a, b in zip(self.normal, x)) + self.offset


@dataclass(frozen=True)
class HalfspaceSystem:
    inequalities: tuple[Halfspace, ...]
    component_index: Exponent
    n: int

    @property
    def r(self) -> int:
        return len(self.component_index)

    def margin(self, x: Sequence[float]) -> float:
        """Smallest slack over all inequalities (+inf for the empty system)."""
        if not self.inequalities:
            return math.inf
        return min(h.value(x) for h in self.inequalities)

    def contains(self, x: Sequence[float], slack: float = 0.0) -> bool:
        return self.margin(x) > slack

    def to_json_dict(self, feasible: bool | None = None, witness=None) -> dict:
        out = {
            "k": list(self.component_index),
            "n": self.n,
            "ineqs": [{"normal": list(h.normal), "offset": h.offset} for h in self.inequalities],
        }
        if feasible is not None:
            out["feasible"] = feasible
            out["witness"] = None if witness is None else [float(v) for v in witness]
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "HalfspaceSystem":
        ineqs = tuple(Halfspace(tuple(int(v) for v in h["normal"]), float(h["offset"])) for h in data["ineqs"])
        return cls(ineqs, tuple(int(v) for v in data["k"]), int(data["n"]))


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    witness: tuple[float, ...] | None
    margin: float | None


def component_polyhedron(resf: LaurentPolynomial, k: Sequence[int], n: int, D: float) -> HalfspaceSystem:
    """Inequalities for the component of index ``k`` built from ``resf = Res_n[f]``."""
    r = resf.r
    k = tuple(int(v) for v in k)
    if len(k) != r:
        raise ValueError(f"index {k} does not have length {r}")
    if not D > 0:
        raise ValueError("D must be positive")
    scale = n ** r
    target = tuple(scale * v for v in k)
    if target not in resf.terms:
        raise NoCandidateTerm(f"no term at exponent {target} in the resultant of order {n}")
    bits = resf.precision_bits
    with context(bits):
        log_B = gmpy2.log(abs(resf.terms[target]))
        log_D = gmpy2.log(gmpy2.mpfr(D))
        ineqs = []
        for j, b in resf.terms.items():
            if j == target:
                continue
            normal = tuple(t - e for t, e in zip(target, j))
            offset = float(log_B - gmpy2.log(abs(b)) - log_D)
            ineqs.append(Halfspace(normal, offset))
    return HalfspaceSystem(tuple(ineqs), k, n)


def _max_margin(H: HalfspaceSystem, cap: float, box: float | None):
    # variables: x = p - q (2r entries), t = u - v; maximise t
    r = H.r
    rows, rhs = [], []
    for h in H.inequalities:
        nrm = np.asarray(h.normal, dtype=float)
        rows.append(np.concatenate([-nrm, nrm, [1.0, -1.0]]))
        rhs.append(h.offset)
    rows.append(np.concatenate([np.zeros(2 * r), [1.0, -1.0]]))
    rhs.append(cap)
    if box is not None:
        for i in range(r):
            e = np.zeros(2 * r + 2)
            e[i], e[r + i] = 1.0, -1.0
            rows.append(e.copy())
            rhs.append(box)
            rows.append(-e)
            rhs.append(box)
    c = np.zeros(2 * r + 2)
    c[-2], c[-1] = 1.0, -1.0
    sol = solve_lp(c, np.array(rows), np.array(rhs))
    if sol.status != "optimal":
        raise LPFailure(f"margin LP ended with status {sol.status}")
    x = sol.x[:r] - sol.x[r: 2 * r]
    return x, sol.value


def lp_feasible(H: HalfspaceSystem, strict_slack: float = DEFAULT_STRICT_SLACK, *,
                box: float = DEFAULT_BOX, margin_cap: float = 1.0) -> LPResult:
    """Decide whether some x satisfies every inequality with slack ``strict_slack``.

    The witness maximises the smallest slack (capped at ``margin_cap``), so it
    sits inside the polyhedron rather than on its boundary. If the first
    solve lands outside the box ``|x_i| <= box`` the problem is re-solved with
    the box imposed.
    """
    if not H.inequalities:
        return LPResult(True, (0.0,) * H.r, math.inf)
    x, t = _max_margin(H, margin_cap, None)
    if np.max(np.abs(x)) > box:
        x, t = _max_margin(H, margin_cap, box)
    if t < strict_slack:
        return LPResult(False, None, t)
    actual = H.margin(x)
    if actual < 0.5 * strict_slack:
        raise LPFailure(f"LP reported margin {t:g} but witness only achieves {actual:g}")
    return LPResult(True, tuple(float(v) for v in x), actual)


@dataclass(frozen=True)
class ComponentRecord:
    k: Exponent
    system: HalfspaceSystem | None
    feasible: bool
    witness: tuple[float, ...] | None

    def to_json_dict(self) -> dict:
        if self.system is None:
            return {"k": list(self.k), "n": None, "ineqs": [], "feasible": False, "witness": None,
                    "note": "no candidate term"}
        return self.system.to_json_dict(self.feasible, self.witness)


def choose_D(f: LaurentPolynomial, resf: LaurentPolynomial, n: int, policy: str = "terms") -> float:
    """``terms``: one less than the number of terms of the resultant (the
    superlopsided threshold itself). ``lattice``: the coarser d * n^(r^2 - r)."""
    if policy == "terms":
        return float(max(1, len(resf) - 1))
    if policy == "lattice":
        return predicted_terms(uniform_lattice_constant(newton_polytope(f)), n, f.r)
    raise ValueError(f"unknown D policy {policy!r}; expected one of {D_POLICIES}")


def enumerate_components(f: LaurentPolynomial, n: int, *, d_policy: str = "terms",
                         strict_slack: float = DEFAULT_STRICT_SLACK,
                         budget: int = DEFAULT_TERM_BUDGET, resf: LaurentPolynomial | None = None):
    """One record per lattice point of the Newton polytope of ``f``."""
    f.require_nonzero("enumerate_components")
    if resf is None:
        resf = cyclic_resultant(f, n, budget=budget)
    D = choose_D(f, resf, n, d_policy)
    records = []
    for k in sorted(lattice_points(newton_polytope(f), 1)):
        try:
            H = component_polyhedron(resf, k, n, D)
        except NoCandidateTerm:
            records.append(ComponentRecord(k, None, False, None))
            continue
        res = lp_feasible(H, strict_slack)
        records.append(ComponentRecord(k, H, res.feasible, res.witness))
    return records


def approximate_spine(f: LaurentPolynomial, n: int, *, components=None, rule: str = "sa",
                      budget: int = DEFAULT_TERM_BUDGET, resf: LaurentPolynomial | None = None) -> TropicalPolynomial:
    """Tropical polynomial ``max_k (log|B_{n^r k}| / n^r + k . x)`` over components.

    ``rule="sa"`` keeps the indices whose polyhedron is feasible. ``rule="la"``
    is an experimental alternative: an index is kept when the resultant is
    lopsided with that dominant term at the witness of the polyhedron built
    with D = 1 (the region where that term beats each other term singly).
    """
    f.require_nonzero("approximate_spine")
    if resf is None:
        resf = cyclic_resultant(f, n, budget=budget)
    r = f.r
    scale = n ** r
    keep: list[Exponent] = []
    if rule == "sa":
        if components is None:
            components = enumerate_components(f, n, resf=resf)
        keep = [c.k for c in components if c.feasible]
    elif rule == "la":
        for k in sorted(lattice_points(newton_polytope(f), 1)):
            try:
                H = component_polyhedron(resf, k, n, 1.0)
            except NoCandidateTerm:
                continue
            res = lp_feasible(H)
            if res.feasible:
                verdict = is_lopsided(magnitude_list(resf, res.witness))
                if verdict.lopsided and verdict.dominant_exponent == tuple(scale * v for v in k):
                    keep.append(k)
    else:
        raise ValueError("rule must be 'sa' or 'la'")
    if not keep:
        raise NoFeasibleComponents(f"no complement component detected at order {n}")
    with context(resf.precision_bits):
        coeffs = {
            k: float(gmpy2.log(abs(resf.terms[tuple(scale * v for v in k)])) / scale) for k in keep
        }
    return TropicalPolynomial(r, coeffs)


def spine_membership(T: TropicalPolynomial, x: Sequence[float], tie_tol: float | None = None) -> bool:
    """True when the maximum is attained by at least two exponents (within tolerance)."""
    weights = [w for _, w in T.weights(x)]
    top = max(weights)
    tol = DEFAULT_TIE_TOL * (1.0 + abs(top)) if tie_tol is None else tie_tol
    return sum(1 for w in weights if w >= top - tol) >= 2
