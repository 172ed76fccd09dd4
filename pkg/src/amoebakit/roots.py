"""Batched numerical root finding for the validation oracles.

Roots come from eigenvalues of companion matrices (numpy), grouped by the
effective degree of each row so that many slices are solved in one call.
"""

from __future__ import annotations

import numpy as np

from .errors import RootFindingError

_REL_ZERO = 1e-13


def trim_bounds(row: np.ndarray) -> tuple[int, int] | None:
    """Indices of the lowest and highest non-negligible coefficients."""
    scale = np.max(np.abs(row)) if row.size else 0.0
    if scale == 0.0:
        return None
    nz = np.nonzero(np.abs(row) > _REL_ZERO * scale)[0]
    return int(nz[0]), int(nz[-1])


def _companion_roots(block: np.ndarray) -> np.ndarray:
    """Roots of each row of ``block`` (coefficients low -> high, nonzero ends)."""
    m, width = block.shape
    deg = width - 1
    monic = block[:, :-1] / block[:, -1:]
    comp = np.zeros((m, deg, deg), dtype=complex)
    comp[:, 0, :] = -monic[:, ::-1]
    if deg > 1:
        idx = np.arange(deg - 1)
        comp[:, idx + 1, idx] = 1.0
    vals = np.linalg.eigvals(comp)
    if not np.all(np.isfinite(vals)):
        raise RootFindingError("non-finite eigenvalues in companion matrix")
    return vals


def nonzero_roots_batch(coeffs: np.ndarray) -> list[np.ndarray | None]:
    """Nonzero roots of each row of ``coeffs`` (low -> high order).

    A row that vanishes identically yields ``None``; roots at the origin are
    dropped (they are not on the torus).
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    out: list[np.ndarray | None] = [None] * len(coeffs)
    groups: dict[tuple[int, int], list[int]] = {}
    for i, row in enumerate(coeffs):
        tb = trim_bounds(row)
        if tb is None:
            continue
        groups.setdefault(tb, []).append(i)
    for (lo, hi), rows in groups.items():
        if hi == lo:
            for i in rows:
                out[i] = np.zeros(0, dtype=complex)
            continue
        block = coeffs[rows, lo: hi + 1]
        vals = _companion_roots(block)
        for i, v in zip(rows, vals):
            out[i] = v
    return out


def nonzero_roots(coeffs) -> np.ndarray:
    res = nonzero_roots_batch(np.asarray(coeffs, dtype=complex)[None, :])[0]
    if res is None:
        raise RootFindingError("identically zero polynomial has no isolated roots")
    return res
