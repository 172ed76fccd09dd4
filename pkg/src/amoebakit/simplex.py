"""Dense two-phase tableau simplex for small problems.

Solves ``max c.v  s.t.  A v <= b, v >= 0`` with Bland's rule, which cannot
cycle. Intended for the handful of inequalities describing one polyhedral
component, not for large-scale work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LPFailure


@dataclass
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    value: float | None


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]


def _run(T: np.ndarray, basis: list[int], allowed: int, tol: float, max_iter: int) -> str:
    """Iterate on tableau ``T`` whose last row is the objective row (reduced costs)."""
    m = T.shape[0] - 1
    for _ in range(max_iter):
        obj = T[-1, :allowed]
        entering = next((j for j in range(allowed) if obj[j] < -tol), None)
        if entering is None:
            return "optimal"
        col = T[:m, entering]
        best, leaving = None, None
        for i in range(m):
            if col[i] > tol:
                ratio = T[i, -1] / col[i]
                if best is None or ratio < best - tol or (abs(ratio - best) <= tol and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            return "unbounded"
        _pivot(T, leaving, entering)
        basis[leaving] = entering
    raise LPFailure(f"simplex did not terminate within {max_iter} pivots")


def solve_lp(c, A, b, *, tol: float = 1e-10, max_iter: int = 50_000) -> LPSolution:
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, nv = A.shape
    if m == 0:
        if np.any(c > tol):
            return LPSolution("unbounded", None, None)
        return LPSolution("optimal", np.zeros(nv), 0.0)
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
        raise LPFailure("non-finite data in linear program")

    neg = b < 0
    n_art = int(neg.sum())
    width = nv + m + n_art + 1
    T = np.zeros((m + 1, width))
    sign = np.where(neg, -1.0, 1.0)
    T[:m, :nv] = A * sign[:, None]
    T[:m, nv: nv + m] = np.diag(sign)
    T[:m, -1] = b * sign
    basis: list[int] = []
    art_col = nv + m
    for i in range(m):
        if neg[i]:
            T[i, art_col] = 1.0
            basis.append(art_col)
            art_col += 1
        else:
            basis.append(nv + i)

    if n_art:
        # phase 1: maximise -sum(artificials)
        T[-1, nv + m: nv + m + n_art] = 1.0
        for i in range(m):
            if basis[i] >= nv + m:
                T[-1] -= T[i]
        status = _run(T, basis, nv + m + n_art, tol, max_iter)
        if status != "optimal":
            raise LPFailure("phase 1 reported an unbounded auxiliary problem")
        scale = max(1.0, float(np.max(np.abs(b))))
        if -T[-1, -1] > tol * scale * 10:
            return LPSolution("infeasible", None, None)
        # drive remaining artificials out of the basis
        keep = []
        for i in range(m):
            if basis[i] >= nv + m:
                cand = next((j for j in range(nv + m) if abs(T[i, j]) > tol), None)
                if cand is None:
                    continue  # redundant row
                _pivot(T, i, cand)
                basis[i] = cand
            keep.append(i)
        T = np.vstack([T[keep][:, list(range(nv + m)) + [width - 1]], np.zeros((1, nv + m + 1))])
        basis = [basis[i] for i in keep]
        m = len(keep)

    # phase 2
    T[-1, :] = 0.0
    T[-1, :nv] = -c
    for i, j in enumerate(basis):
        if T[-1, j] != 0.0:
            T[-1] -= T[-1, j] * T[i]
    status = _run(T, basis, T.shape[1] - 1, tol, max_iter)
    if status == "unbounded":
        return LPSolution("unbounded", None, None)
    x = np.zeros(T.shape[1] - 1)
    for i, j in enumerate(basis):
        x[j] = T[i, -1]
    v = x[:nv]
    return LPSolution("optimal", v, float(c @ v))
