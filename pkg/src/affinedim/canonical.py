"""Centered SVD producing the whitened canonical form of a scatter.

The canonical form factors the centered coordinates as H diag(lambda_sqrt) G',
where H is N x r with orthonormal columns (standardized principal coordinates)
orthogonal to the centering vector, and G' holds direction cosines.  H H' and
the pairwise squared distances of H are invariant under every nonsingular
affine transformation of the input, which is what makes H the right starting
point for the origin-centric reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .centering import center, mean_gamma, point_gamma, validate_gamma
from .errors import DegenerateInputError, InputError
from .geometry import Configuration, as_configuration, coincident_groups

DEFAULT_RANK_TOL = 1e-10


@dataclass(eq=False)
class CanonicalForm:
    """Result of the centered SVD.

    h : (N, r) semi-orthogonal matrix of standardized principal coordinates
    lambda_sqrt : (r,) strictly positive singular values, descending
    g_t : (r, p) semi-orthogonal matrix of direction cosines
    rank : r
    gamma : the centering vector that was applied
    """

    h: np.ndarray
    lambda_sqrt: np.ndarray
    g_t: np.ndarray
    rank: int
    gamma: np.ndarray


def _apply_sign_convention(h: np.ndarray, g_t: np.ndarray) -> None:
    """Flip column signs in place so each H column's largest-|entry| is positive.

    Ties break toward the lowest row index (np.argmax's behavior).  The
    matching row of g_t is flipped with it, so any reconstruction is unchanged.
    """
    for k in range(h.shape[1]):
        idx = int(np.argmax(np.abs(h[:, k])))
        if h[idx, k] < 0:
            h[:, k] = -h[:, k]
            g_t[k, :] = -g_t[k, :]


def canonical_form(c, gamma, tol: float = DEFAULT_RANK_TOL, weighted: bool = False) -> CanonicalForm:
    """Centered SVD (I - 1 gamma') X = H diag(lambda_sqrt) G'.

    Parameters
    ----------
    c : Configuration or array-like, N >= 2 points
    gamma : centering vector (entries sum to 1)
    tol : relative rank threshold; singular values <= tol * largest are dropped
    weighted : if True, rows of the centered matrix are scaled by sqrt(weight)
        before the SVD (opt-in multiplicity weighting; note gamma-orthogonality
        of H then holds in the weighted metric, not verbatim)

    Raises
    ------
    DegenerateInputError
        if the centered matrix is exactly zero (all points coincide with the
        gamma-origin).
    """
    cfg = as_configuration(c)
    if cfg.n_points < 2:
        raise InputError(f"canonical form needs N >= 2 points, got N={cfg.n_points}")
    if not 0.0 < tol < 1.0:
        raise InputError(f"rank tolerance must be in (0, 1), got {tol}")
    g = validate_gamma(gamma, cfg.n_points)
    xc = center(cfg, g).coords
    if weighted:
        xc = np.sqrt(cfg.effective_weights())[:, None] * xc
    u, s, vt = np.linalg.svd(xc, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        raise DegenerateInputError("centered matrix is zero: every point coincides with the gamma-origin")
    r = int(np.sum(s > tol * s[0]))
    if r == 0:
        raise DegenerateInputError("no singular value exceeds the rank threshold")
    h = u[:, :r].copy()
    g_t = vt[:r, :].copy()
    _apply_sign_convention(h, g_t)
    return CanonicalForm(h=h, lambda_sqrt=s[:r].copy(), g_t=g_t, rank=r, gamma=g)


def projector(cf: CanonicalForm) -> np.ndarray:
    """The idempotent, symmetric projection matrix H H'."""
    return cf.h @ cf.h.T


def dedup_weighted(c) -> Configuration:
    """Merge coincident points into one representative with summed weights.

    Labels of merged points are concatenated with '+'.  An all-distinct
    configuration is returned unchanged.
    """
    cfg = as_configuration(c)
    groups = coincident_groups(cfg)
    if all(len(g) == 1 for g in groups):
        return cfg
    coords = np.array([cfg.coords[g[0]] for g in groups])
    weights_in = cfg.effective_weights()
    weights = np.array([weights_in[g].sum() for g in groups])
    labels = None
    if cfg.labels is not None:
        labels = ["+".join(cfg.labels[i] for i in g) for g in groups]
    return Configuration(coords, labels, weights)


def _helmert_basis(n: int) -> np.ndarray:
    """Orthonormal N x (N-1) basis of the subspace orthogonal to the ones vector."""
    h = np.zeros((n, n - 1))
    for j in range(1, n):
        c = 1.0 / np.sqrt(j * (j + 1.0))
        h[:j, j - 1] = c
        h[j, j - 1] = -j * c
    return h


def simplex_h(n: int, kind: str = "mean-centered") -> CanonicalForm:
    """Canonical form of the limiting equal-spacing configuration in N-1 dimensions.

    mean-centered: N points, every pairwise squared distance 2, every squared
    origin distance (N-1)/N.  point-centered: the first N-1 rows form an
    orthogonal matrix (pairwise squared distance 2, origin distance 1) and the
    last row is the origin point itself.
    """
    if n < 2:
        raise InputError(f"simplex needs n >= 2, got {n}")
    if kind == "mean-centered":
        h = _helmert_basis(n)
        g_t = h.T.copy()
        gamma = mean_gamma(n)
    elif kind == "point-centered":
        h = np.vstack([np.eye(n - 1), np.zeros((1, n - 1))])
        g_t = np.eye(n - 1)
        gamma = point_gamma(n, n - 1)
    else:
        raise InputError(f"unknown simplex kind {kind!r}")
    _apply_sign_convention(h, g_t)
    return CanonicalForm(h=h, lambda_sqrt=np.ones(n - 1), g_t=g_t, rank=n - 1, gamma=gamma)
