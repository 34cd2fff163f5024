"""Generalized-inverse centering transforms and the hull-peeling affine median.

A centering vector gamma is any N-vector whose entries sum to 1.  Centering
subtracts the gamma-weighted mean from every row, which relocates the origin;
applying a second centering wipes out and replaces the first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import InputError, InternalError
from .geometry import Configuration, as_configuration, coincident_groups

# Feasibility tolerance for the convex-combination linear program.
HULL_FEASIBILITY_TOL = 1e-9

GAMMA_SUM_TOL = 1e-12


def mean_gamma(n: int) -> np.ndarray:
    """Centering vector of the ordinary centroid: every entry 1/n."""
    if n < 1:
        raise InputError(f"need at least one point, got n={n}")
    return np.full(n, 1.0 / n)


def point_gamma(n: int, i: int) -> np.ndarray:
    """Centering vector that puts the origin on point i (indicator vector)."""
    if n < 1:
        raise InputError(f"need at least one point, got n={n}")
    if not 0 <= i < n:
        raise InputError(f"point index {i} out of range for n={n}")
    g = np.zeros(n)
    g[i] = 1.0
    return g


def validate_gamma(gamma, n: int) -> np.ndarray:
    """Check that gamma has length n and sums to 1 within tolerance."""
    g = np.asarray(gamma, dtype=float)
    if g.shape != (n,):
        raise InputError(f"centering vector shape {g.shape} does not match N={n}")
    if not np.all(np.isfinite(g)):
        raise InputError("centering vector contains non-finite entries")
    if abs(g.sum() - 1.0) > GAMMA_SUM_TOL:
        raise InputError(f"centering vector entries sum to {g.sum()!r}, not 1")
    return g


def center(c, gamma) -> Configuration:
    """Apply the centering X - 1 (gamma' X): row i becomes x_i' - gamma' X."""
    cfg = as_configuration(c)
    g = validate_gamma(gamma, cfg.n_points)
    shift = g @ cfg.coords
    return cfg.with_coords(cfg.coords - shift[None, :])


def hull_vertex_flags(c) -> np.ndarray:
    """Flag each point that is NOT a convex combination of the other locations.

    Point i is tested against the distinct locations of all points not
    coincident with it, via a linear feasibility program (find lambda >= 0
    with sum 1 reproducing the point) on the scatter normalized to unit scale;
    infeasibility means the point is extreme.  Coincident copies of an extreme
    location are all flagged.  A point with no other distinct locations (e.g.
    everything coincident) is extreme by convention.
    """
    cfg = as_configuration(c)
    x = cfg.coords
    n = cfg.n_points
    groups = coincident_groups(cfg)
    group_of = np.empty(n, dtype=int)
    for gi, g in enumerate(groups):
        for i in g:
            group_of[i] = gi
    rep_coords = np.array([x[g[0]] for g in groups])

    # Normalize to unit scale so the feasibility tolerance is scale-free.
    centroid = rep_coords.mean(axis=0)
    y = rep_coords - centroid
    scale = float(np.sqrt((y * y).sum(axis=1).max()))
    if scale > 0:
        y = y / scale

    lp_options = {
        "primal_feasibility_tolerance": HULL_FEASIBILITY_TOL,
        "dual_feasibility_tolerance": HULL_FEASIBILITY_TOL,
    }
    flags = np.ones(n, dtype=bool)
    cache: dict[int, bool] = {}
    for i in range(n):
        gi = group_of[i]
        if gi in cache:
            flags[i] = cache[gi]
            continue
        others = [k for k in range(len(groups)) if k != gi]
        if not others:
            cache[gi] = True
            continue
        a_eq = np.vstack([y[others].T, np.ones((1, len(others)))])
        b_eq = np.append(y[gi], 1.0)
        res = linprog(np.zeros(len(others)), A_eq=a_eq, b_eq=b_eq,
                      bounds=(0.0, None), method="highs", options=lp_options)
        if res.status == 0:
            cache[gi] = False  # expressible as a convex combination
        elif res.status == 2:
            cache[gi] = True  # infeasible: extreme location
        else:
            raise InternalError(
                f"hull feasibility LP failed for point {i}: "
                f"status {res.status} ({res.message})")
        flags[i] = cache[gi]
    return flags


@dataclass(eq=False)
class MedianResult:
    """Outcome of convex-hull peeling: the median centering vector.

    gamma gives equal weight 1/|final_hull| to the surviving points and zero
    elsewhere; peel_stages lists the point indices removed at each stage.
    """

    gamma: np.ndarray
    peel_stages: list[list[int]]
    final_hull: list[int]


def affine_median_gamma(c) -> MedianResult:
    """Peel exterior convex hulls until only an all-extreme, all-distinct set remains.

    At each stage the current hull-vertex set is removed, except that each
    location with coincident copies loses exactly one copy (the highest index;
    earlier copies survive).  Peeling stops, without removal, as soon as every
    remaining point is a hull vertex and no two remaining points coincide;
    those survivors share the gamma weight equally.
    """
    cfg = as_configuration(c)
    n = cfg.n_points
    remaining = list(range(n))
    stages: list[list[int]] = []
    while True:
        sub = Configuration(cfg.coords[remaining])
        flags = hull_vertex_flags(sub)
        groups = coincident_groups(sub)
        has_coincident = any(len(g) > 1 for g in groups)
        if flags.all() and not has_coincident:
            final = list(remaining)
            break
        removed_local: list[int] = []
        for g in groups:
            if not flags[g[0]]:
                continue  # interior location survives this stage
            if len(g) == 1:
                removed_local.append(g[0])
            else:
                removed_local.append(g[-1])  # set aside one coincident copy
        if not removed_local:
            raise InternalError("hull peeling found no extreme points to remove")
        removed_set = set(removed_local)
        stages.append([remaining[k] for k in sorted(removed_local)])
        remaining = [remaining[k] for k in range(len(remaining)) if k not in removed_set]

    gamma = np.zeros(n)
    gamma[final] = 1.0 / len(final)
    return MedianResult(gamma=gamma, peel_stages=stages, final_hull=final)
