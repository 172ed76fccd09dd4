"""Convex hulls of integer point sets, including lower-dimensional ones."""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull

_TOL = 1e-9


class IntegerHull:
    """Convex hull of a finite set of integer points in R^r.

    Degenerate configurations (collinear points in the plane, a single point,
    ...) are handled by projecting onto a coordinate subset that is injective
    on the affine span.
    """

    def __init__(self, points):
        pts = np.asarray(points, dtype=np.int64)
        if pts.ndim != 2 or len(pts) == 0:
            raise ValueError("need a non-empty 2-d array of points")
        self.points = pts
        self.r = pts.shape[1]
        self.origin = pts[0].astype(float)
        diffs = (pts - pts[0]).astype(float)
        self.dim = int(np.linalg.matrix_rank(diffs)) if len(pts) > 1 else 0
        self._coords = self._independent_columns(diffs, self.dim)
        proj = pts[:, self._coords].astype(float)
        if self.dim == 0:
            self.vertex_indices = [0]
            self._equations = np.zeros((0, 1))
        elif self.dim == 1:
            col = proj[:, 0]
            lo, hi = int(np.argmin(col)), int(np.argmax(col))
            self.vertex_indices = sorted({lo, hi})
            self._equations = np.array([[-1.0, col[lo]], [1.0, -col[hi]]])
        else:
            hull = ConvexHull(proj)
            self.vertex_indices = sorted(int(v) for v in hull.vertices)
            self._equations = hull.equations
        if self.dim > 0:
            # rows of B span the direction space of the affine hull
            u, s, vt = np.linalg.svd(diffs, full_matrices=False)
            self._basis = vt[: self.dim]
        else:
            self._basis = np.zeros((0, self.r))

    @staticmethod
    def _independent_columns(diffs, dim):
        chosen: list[int] = []
        for j in range(diffs.shape[1]):
            trial = chosen + [j]
            if np.linalg.matrix_rank(diffs[:, trial]) == len(trial):
                chosen = trial
            if len(chosen) == dim:
                break
        return chosen

    @property
    def vertices(self):
        return [tuple(int(v) for v in self.points[i]) for i in self.vertex_indices]

    def contains(self, candidates, scale=1):
        """Boolean mask of which candidate points lie in ``scale`` times the hull."""
        cand = np.atleast_2d(np.asarray(candidates, dtype=float))
        rel = cand - scale * self.origin
        if self.dim == 0:
            return np.all(np.abs(rel) <= _TOL, axis=1)
        # membership in the (scaled) affine span
        resid = rel - (rel @ self._basis.T) @ self._basis
        in_span = np.all(np.abs(resid) <= 1e-7 * max(1.0, scale), axis=1)
        proj = cand[:, self._coords]
        normals = self._equations[:, :-1]
        offsets = self._equations[:, -1] * scale
        inside = np.all(proj @ normals.T + offsets <= 1e-7 * max(1.0, scale), axis=1)
        return in_span & inside
