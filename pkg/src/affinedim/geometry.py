"""Squared Euclidean distance computations on labeled point scatters.

All distances here are *squared* distances.  Pairwise matrices are computed
from coordinate differences directly (never via the Gram expansion), which
avoids catastrophic cancellation for near-coincident points; the Gram-based
reconstruction exists separately for round-trip checks and for callers that
start from an association matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

# Two points count as one location when their squared distance falls below
# COINCIDENCE_RTOL * (max squared origin distance + 1).
COINCIDENCE_RTOL = 1e-18


@dataclass(eq=False)
class Configuration:
    """A scatter of N points in p dimensions, optionally labeled and weighted.

    Parameters
    ----------
    coords : (N, p) array of finite reals
    labels : optional list of N text tags
    weights : optional (N,) array of strictly positive multiplicities
    """

    coords: np.ndarray
    labels: list[str] | None = None
    weights: np.ndarray | None = None

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim != 2:
            raise InputError(f"coords must be a 2-D matrix, got ndim={coords.ndim}")
        if coords.shape[0] < 1 or coords.shape[1] < 1:
            raise InputError(f"coords must be at least 1x1, got shape {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise InputError("coords contain non-finite entries")
        self.coords = coords
        if self.labels is not None:
            self.labels = [str(s) for s in self.labels]
            if len(self.labels) != coords.shape[0]:
                raise InputError(
                    f"got {len(self.labels)} labels for {coords.shape[0]} points"
                )
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (coords.shape[0],):
                raise InputError(f"weights shape {w.shape} does not match N={coords.shape[0]}")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise InputError("weights must be finite and strictly positive")
            self.weights = w

    @property
    def n_points(self) -> int:
        return self.coords.shape[0]

    @property
    def n_dims(self) -> int:
        return self.coords.shape[1]

    def effective_weights(self) -> np.ndarray:
        """Weights with the default of 1 per point filled in."""
        if self.weights is None:
            return np.ones(self.n_points)
        return self.weights.copy()

    def effective_labels(self) -> list[str]:
        """Labels with defaults P1..PN filled in."""
        if self.labels is None:
            return [f"P{i + 1}" for i in range(self.n_points)]
        return list(self.labels)

    def with_coords(self, coords: np.ndarray) -> "Configuration":
        """Same labels/weights, new coordinates (must keep N)."""
        if coords.shape[0] != self.n_points:
            raise InputError("with_coords must preserve the number of points")
        labels = None if self.labels is None else list(self.labels)
        weights = None if self.weights is None else self.weights.copy()
        return Configuration(coords, labels, weights)


def as_configuration(obj) -> Configuration:
    """Coerce an array-like or Configuration into a Configuration."""
    if isinstance(obj, Configuration):
        return obj
    return Configuration(np.asarray(obj, dtype=float))


def squared_distances(c) -> np.ndarray:
    """Full N x N matrix of pairwise squared Euclidean distances.

    Computed row by row from coordinate differences, so the result is exactly
    symmetric with an exactly zero diagonal.
    """
    x = as_configuration(c).coords
    n = x.shape[0]
    d2 = np.empty((n, n))
    for i in range(n):
        diff = x - x[i]
        d2[i] = np.einsum("ij,ij->i", diff, diff)
    return d2


def origin_sq_distances(c) -> np.ndarray:
    """Squared distance of every point from the current origin (x_i' x_i)."""
    x = as_configuration(c).coords
    return np.einsum("ij,ij->i", x, x)


def association_matrix(c) -> np.ndarray:
    """Outer-product matrix XX' of the configuration."""
    x = as_configuration(c).coords
    return x @ x.T


def reconstruct_d2(a: np.ndarray) -> np.ndarray:
    """Squared-distance matrix implied by an association (outer-product) matrix.

    The input must be symmetric (checked) and positive semidefinite within
    round-off (assumed): entries are a_ii + a_jj - 2 a_ij with tiny negative
    round-off clipped to zero.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"association matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError("association matrix contains non-finite entries")
    scale = np.abs(a).max() if a.size else 0.0
    if np.abs(a - a.T).max(initial=0.0) > 1e-10 * (1.0 + scale):
        raise InputError("association matrix is not symmetric")
    a = 0.5 * (a + a.T)
    d0 = np.diag(a)
    d2 = d0[:, None] + d0[None, :] - 2.0 * a
    np.fill_diagonal(d2, 0.0)
    return np.maximum(d2, 0.0)


def augment_origin(c) -> Configuration:
    """Append an explicit point at the origin (all-zero row, label ORIGIN)."""
    cfg = as_configuration(c)
    coords = np.vstack([cfg.coords, np.zeros((1, cfg.n_dims))])
    labels = cfg.effective_labels() + ["ORIGIN"]
    weights = np.append(cfg.effective_weights(), 1.0)
    return Configuration(coords, labels, weights)


def coincidence_threshold(c) -> float:
    """Squared-distance threshold under which two points count as one location."""
    d0 = origin_sq_distances(c)
    return COINCIDENCE_RTOL * (float(d0.max()) + 1.0)


def coincident_groups(c) -> list[list[int]]:
    """Group point indices by location, in order of first occurrence.

    Each point joins the first existing group whose representative (the
    group's first member) lies within the coincidence threshold.
    """
    cfg = as_configuration(c)
    x = cfg.coords
    tol = coincidence_threshold(cfg)
    groups: list[list[int]] = []
    reps: list[np.ndarray] = []
    for i in range(cfg.n_points):
        for g, rep in zip(groups, reps):
            diff = x[i] - rep
            if float(diff @ diff) < tol:
                g.append(i)
                break
        else:
            groups.append([i])
            reps.append(x[i])
    return groups
