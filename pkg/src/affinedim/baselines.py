"""PCA baseline and interpretation aids for recovered scatters.

The PCA here is the traditional comparison point: SVD of an already
standardized matrix.  The equal-variance witness demonstrates why PCA cannot
order the components of a whitened canonical form: every unit direction of H
carries exactly unit sum of squares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import CanonicalForm
from .errors import InputError
from .geometry import Configuration, as_configuration

ZERO_AXIS_TOL = 1e-12


@dataclass(eq=False)
class PcaResult:
    scores: np.ndarray           # N x q
    loadings: np.ndarray         # p x q, orthonormal columns of direction cosines
    singular_values: np.ndarray  # q, descending
    explained_fraction: np.ndarray  # q, fractions of total squared scale


@dataclass(eq=False)
class SwarmStats:
    """Polar view of a recovered scatter around its explicit origin."""

    radii: np.ndarray
    min_radius: float
    max_radius: float
    angles: np.ndarray | None        # radians in [0, 2 pi), 2-D only
    angular_order: list | None       # point indices (or labels) sorted by angle


@dataclass(eq=False)
class EqualVarianceWitness:
    """Sampled one-dimensional projections of H, all of unit sum of squares."""

    values: np.ndarray
    max_abs_deviation: float
    n_directions: int
    seed: int


@dataclass(eq=False)
class VariableAxes:
    """Unit direction (per original variable) of the composite map into Z."""

    directions: np.ndarray   # p x q, rows unit length where defined
    pre_norms: np.ndarray    # p, row norms before normalization
    defined: np.ndarray      # p, False where the row is numerically zero


def standardize(c, mode: str = "mean") -> Configuration:
    """Column standardization: 'mean' centers; 'correlation' also scales.

    Correlation mode divides each centered column by its sample standard
    deviation (ddof=1) and refuses zero-variance columns.
    """
    cfg = as_configuration(c)
    x = cfg.coords
    centered = x - x.mean(axis=0)[None, :]
    if mode == "mean":
        return cfg.with_coords(centered)
    if mode == "correlation":
        if cfg.n_points < 2:
            raise InputError("correlation standardization needs at least 2 points")
        sd = centered.std(axis=0, ddof=1)
        col_scale = np.abs(x).max(axis=0)
        bad = np.where(sd <= 1e-12 * (1.0 + col_scale))[0]
        if bad.size:
            raise InputError(f"column {bad[0]} has zero variance; cannot standardize to correlation form")
        return cfg.with_coords(centered / sd[None, :])
    raise InputError(f"unknown standardization mode {mode!r}")


def pca(c, q: int) -> PcaResult:
    """Top-q SVD of an already standardized matrix.

    scores = H_q diag(s_q), loadings = right singular vectors, and the
    explained fractions come from squared singular values over their total.
    Column signs follow the largest-|loading|-positive convention.
    """
    cfg = as_configuration(c)
    x = cfg.coords
    u, s, vt = np.linalg.svd(x, full_matrices=False)
    rank = int(np.sum(s > 1e-10 * s[0])) if s.size and s[0] > 0 else 0
    if not 1 <= q <= rank:
        raise InputError(f"q={q} is out of range for matrix rank {rank}")
    scores = u[:, :q] * s[:q][None, :]
    loadings = vt[:q].T.copy()
    for k in range(q):
        idx = int(np.argmax(np.abs(loadings[:, k])))
        if loadings[idx, k] < 0:
            loadings[:, k] = -loadings[:, k]
            scores[:, k] = -scores[:, k]
    total = float(np.sum(s * s))
    explained = (s[:q] * s[:q]) / total
    return PcaResult(scores=scores, loadings=loadings,
                     singular_values=s[:q].copy(), explained_fraction=explained)


def equal_variance_witness(cf: CanonicalForm, n_directions: int = 100,
                           seed: int = 0) -> EqualVarianceWitness:
    """Show that every unit direction u gives u' H' H u == 1.

    This is the obstruction to running PCA on the canonical form: no direction
    has more spread than any other, so components cannot be ordered.
    """
    rng = np.random.default_rng(seed)
    hth = cf.h.T @ cf.h
    values = np.empty(n_directions)
    for i in range(n_directions):
        u = rng.standard_normal(cf.rank)
        u = u / np.linalg.norm(u)
        values[i] = float(u @ hth @ u)
    return EqualVarianceWitness(values=values,
                                max_abs_deviation=float(np.abs(values - 1.0).max()),
                                n_directions=n_directions, seed=seed)


def variable_axes(cf: CanonicalForm, b) -> VariableAxes:
    """Direction, per original variable, of the composite map X_centered -> Z.

    The map is L = G diag(1/lambda_sqrt) B; each row is normalized to unit
    length when its norm exceeds ZERO_AXIS_TOL and flagged undefined otherwise.
    """
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[0] != cf.rank:
        raise InputError(f"B shape {b.shape} does not match rank {cf.rank}")
    l = cf.g_t.T @ (b / cf.lambda_sqrt[:, None])
    norms = np.linalg.norm(l, axis=1)
    defined = norms > ZERO_AXIS_TOL
    directions = np.zeros_like(l)
    directions[defined] = l[defined] / norms[defined, None]
    return VariableAxes(directions=directions, pre_norms=norms, defined=defined)


def swarm_stats(z, labels=None) -> SwarmStats:
    """Radii (and, in 2-D, angles and angular order) of points around the origin."""
    z = np.asarray(z, dtype=float)
    if z.ndim != 2 or z.shape[1] < 1:
        raise InputError(f"coordinates must be N x q with q >= 1, got shape {z.shape}")
    radii = np.linalg.norm(z, axis=1)
    angles = None
    order = None
    if z.shape[1] == 2:
        angles = np.mod(np.arctan2(z[:, 1], z[:, 0]), 2.0 * np.pi)
        idx = np.argsort(angles, kind="stable")
        order = [labels[i] for i in idx] if labels is not None else [int(i) for i in idx]
    return SwarmStats(radii=radii, min_radius=float(radii.min()),
                      max_radius=float(radii.max()), angles=angles,
                      angular_order=order)
