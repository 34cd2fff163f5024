"""The squared-Frobenius discrepancy between squared-distance matrices.

The reduction objective compares the full pairwise squared-distance matrix of
a source scatter against that of a candidate low-dimensional image.  Besides
the direct double sum, a closed form splits the value into a Gram-difference
term, two terms in the vector of origin-distance discrepancies, and a cross
term that vanishes identically under mean centering (it is generally nonzero
for point- or median-centered forms, so it is always computed and reported).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .geometry import squared_distances


@dataclass(eq=False)
class ObjectiveValue:
    """Objective value, optionally with its closed-form decomposition.

    The direct evaluation knows only the two distance matrices, so it fills
    just `value`; the closed form fills every field and satisfies
    value == gram_term + rho_sum_term + rho_quad_term + cross_term.
    """

    value: float
    rho: np.ndarray | None = None
    gram_term: float | None = None
    rho_sum_term: float | None = None
    rho_quad_term: float | None = None
    cross_term: float | None = None


def _check_matrix(m, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"{name} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} contains non-finite entries")
    return m


def norm2_direct(dx, dz, weights=None) -> ObjectiveValue:
    """Double sum of (weighted) squared discrepancies between two D matrices.

    value = sum_ij w_i w_j (dx_ij - dz_ij)^2; unit weights give the plain
    objective.  The zero diagonals contribute exactly nothing.
    """
    dx = _check_matrix(dx, "dx")
    dz = _check_matrix(dz, "dz")
    if dx.shape != dz.shape:
        raise InputError(f"distance matrices differ in size: {dx.shape} vs {dz.shape}")
    diff = dx - dz
    sq = diff * diff
    if weights is not None:
        w = np.asarray(weights, dtype=float)
        if w.shape != (dx.shape[0],):
            raise InputError(f"weights shape {w.shape} does not match N={dx.shape[0]}")
        # multiply before summing so unit weights reproduce the unweighted
        # value bit for bit
        sq = sq * np.outer(w, w)
    return ObjectiveValue(value=float(sq.sum()))


def rho(h, b) -> np.ndarray:
    """Per-point discrepancy in squared origin distance between H and H B."""
    h = np.asarray(h, dtype=float)
    b = np.asarray(b, dtype=float)
    if h.ndim != 2 or b.ndim != 2 or h.shape[1] != b.shape[0]:
        raise InputError(f"shapes not conformable for H B: {h.shape} x {b.shape}")
    z = h @ b
    return np.einsum("ij,ij->i", h, h) - np.einsum("ij,ij->i", z, z)


def norm2_closed(h, b) -> ObjectiveValue:
    """Closed-form objective with all four decomposition terms.

    With E = H H' - (H B)(H B)' and rho = diag(E):
    value = 4 ||E||^2 + 2 (rho' 1)^2 + 2 N rho' rho - 8 rho' E 1.
    The last (cross) term is identically zero whenever 1' H == 0, which is the
    mean-centered case; the three-term form is exact only there.
    """
    h = np.asarray(h, dtype=float)
    b = np.asarray(b, dtype=float)
    if h.ndim != 2 or b.ndim != 2 or h.shape[1] != b.shape[0]:
        raise InputError(f"shapes not conformable for H B: {h.shape} x {b.shape}")
    n = h.shape[0]
    z = h @ b
    e = h @ h.T - z @ z.T
    r = np.diag(e).copy()
    gram_term = 4.0 * float(np.sum(e * e))
    rho_sum_term = 2.0 * float(r.sum()) ** 2
    rho_quad_term = 2.0 * n * float(r @ r)
    cross_term = -8.0 * float(r @ e.sum(axis=1))
    value = gram_term + rho_sum_term + rho_quad_term + cross_term
    return ObjectiveValue(
        value=max(value, 0.0),
        rho=r,
        gram_term=gram_term,
        rho_sum_term=rho_sum_term,
        rho_quad_term=rho_quad_term,
        cross_term=cross_term,
    )


def value_and_gradient(h, b, dx=None, weights=None) -> tuple[float, np.ndarray]:
    """Objective value and its analytic gradient with respect to B.

    dx may be passed to reuse a precomputed squared-distance matrix of H
    (it is recomputed otherwise).  With C the (optionally w_i w_j weighted)
    matrix of distance discrepancies, the gradient is
    -8 H' (diag(C 1) - C) H B.
    """
    h = np.asarray(h, dtype=float)
    b = np.asarray(b, dtype=float)
    if h.ndim != 2 or b.ndim != 2 or h.shape[1] != b.shape[0]:
        raise InputError(f"shapes not conformable for H B: {h.shape} x {b.shape}")
    if dx is None:
        dx = squared_distances(h)
    dz = squared_distances(h @ b)
    delta = dx - dz
    if weights is not None:
        w = np.asarray(weights, dtype=float)
        if w.shape != (h.shape[0],):
            raise InputError(f"weights shape {w.shape} does not match N={h.shape[0]}")
        value = float(w @ (delta * delta) @ w)
        c = delta * np.outer(w, w)
    else:
        value = float(np.sum(delta * delta))
        c = delta
    row_sums = c.sum(axis=1)
    m = h.T @ (row_sums[:, None] * h) - h.T @ (c @ h)
    grad = -8.0 * (m @ b)
    return value, grad


def gradient_norm2(h, b, weights=None) -> np.ndarray:
    """Analytic gradient of the direct objective at Z = H B, w.r.t. B."""
    return value_and_gradient(h, b, weights=weights)[1]
