"""Multi-start local minimization of the distance-discrepancy objective over B.

The objective is a smooth quartic in the entries of B with multiple local
minima and an orthogonal gauge freedom (B and B Q give the same geometry), so
the search runs many independent descents, canonicalizes each endpoint's
gauge, and catalogs the distinct minima.  Every start is a pure function of
the seed, and results are gathered in start order, so the catalog is
bit-identical no matter how many worker threads execute the starts.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .canonical import CanonicalForm
from .errors import InputError, SearchError
from .geometry import squared_distances
from .objective import value_and_gradient

ARMIJO_C1 = 1e-4
MAX_BACKTRACKS = 60
RANK_CHECK_RTOL = 1e-8


@dataclass
class SearchOptions:
    """Knobs for the multi-start search; defaults suit desk-scale problems."""

    n_starts: int = 64
    seed: int = 0
    max_iterations: int = 2000
    gradient_tolerance: float = 1e-9
    value_dedup_tolerance: float = 1e-6
    gram_dedup_tolerance: float = 1e-5
    workers: int = 1
    scale_grid: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0)
    n_angle_starts: int = 36

    def __post_init__(self):
        for name in ("n_starts", "max_iterations", "gradient_tolerance",
                     "value_dedup_tolerance", "gram_dedup_tolerance", "workers",
                     "n_angle_starts"):
            if getattr(self, name) <= 0:
                raise InputError(f"SearchOptions.{name} must be positive")
        if not self.scale_grid or any(s <= 0 for s in self.scale_grid):
            raise InputError("scale_grid entries must be positive")


@dataclass(eq=False)
class LocalMinimum:
    """Endpoint of one descent: B, value, and convergence bookkeeping."""

    b: np.ndarray
    value: float
    start_id: int
    iterations: int
    converged: bool
    gradient_norm: float


@dataclass(eq=False)
class ReductionResult:
    """Global best of a multi-start run plus the catalog of distinct minima."""

    b: np.ndarray
    z: np.ndarray
    value: float
    local_minima: list[LocalMinimum]
    seed: int
    starts_used: int
    rank_deficient: bool


def angle_starts(k: int) -> list[np.ndarray]:
    """k unit-length 2x1 starts (sin phi_j, cos phi_j)', phi_j = j pi / k.

    Angles in [0, pi) suffice because B and -B give the same geometry.
    Only meaningful for rank-2 forms reduced to one dimension.
    """
    if k < 1:
        raise InputError(f"need k >= 1 angle starts, got {k}")
    phis = np.arange(k) * (np.pi / k)
    return [np.array([[np.sin(p)], [np.cos(p)]]) for p in phis]


def random_starts(r: int, q: int, n: int, seed: int,
                  scale_grid=(0.25, 0.5, 0.75, 1.0)) -> list[np.ndarray]:
    """n random r x q orthonormal frames, each scaled by a cycled grid entry.

    Frames are Haar-ish uniform (QR of a Gaussian matrix with the sign fix),
    so F'F = s^2 I exactly up to round-off.  Deterministic for a fixed seed.
    """
    if not 1 <= q < r:
        raise InputError(f"need 1 <= q < r, got q={q}, r={r}")
    if n < 1:
        raise InputError(f"need n >= 1 starts, got {n}")
    rng = np.random.default_rng(seed)
    starts = []
    for i in range(n):
        g = rng.standard_normal((r, q))
        qmat, rmat = np.linalg.qr(g)
        signs = np.sign(np.diag(rmat))
        signs[signs == 0] = 1.0
        starts.append(qmat * signs[None, :] * scale_grid[i % len(scale_grid)])
    return starts


def canonicalize_b(b) -> np.ndarray:
    """Resolve the orthogonal gauge: rotate B so B'B is diagonal descending.

    Returns B V from the SVD B = U S V', with each column's sign fixed so its
    largest-magnitude entry is positive (ties toward the lowest row index).
    B B' is unchanged.
    """
    b = np.asarray(b, dtype=float)
    vt = np.linalg.svd(b, full_matrices=False)[2]
    out = b @ vt.T
    for k in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, k])))
        if out[idx, k] < 0:
            out[:, k] = -out[:, k]
    return out


def local_minimize(h, b0, opts: SearchOptions | None = None, start_id: int = 0,
                   _dx=None) -> LocalMinimum:
    """BFGS descent with Armijo backtracking from b0.

    Stops when ||grad|| <= gradient_tolerance * (1 + |value|), when the line
    search can make no further progress, or at max_iterations.  Accepted steps
    never increase the objective.  A non-finite objective at the start, or at
    every trial step of a line search, raises SearchError carrying the last
    finite iterate.
    """
    opts = opts or SearchOptions()
    h = np.asarray(h, dtype=float)
    b0 = np.asarray(b0, dtype=float)
    if h.ndim != 2 or b0.ndim != 2 or h.shape[1] != b0.shape[0]:
        raise InputError(f"shapes not conformable for H B: {h.shape} x {b0.shape}")
    r, q = b0.shape
    dx = squared_distances(h) if _dx is None else _dx

    def fg(vec):
        val, grad = value_and_gradient(h, vec.reshape(r, q), dx=dx)
        return val, grad.ravel()

    # overflow to inf is detected and handled explicitly in the loop, so the
    # numerics run with those warnings silenced
    with np.errstate(over="ignore", invalid="ignore"):
        return _minimize_loop(fg, b0, opts, start_id, r, q)


def _minimize_loop(fg, b0, opts, start_id, r, q):
    x = b0.ravel().astype(float).copy()
    f, g = fg(x)
    if not np.isfinite(f):
        raise SearchError(f"objective is non-finite at the start (start {start_id})",
                          last_iterate=None, last_value=None)
    dim = x.size
    hinv = np.eye(dim)
    first_update = True
    iterations = 0
    converged = False
    gnorm = float(np.linalg.norm(g))

    def line_search(p, gp):
        alpha = 1.0
        saw_finite = False
        # f carries a couple of ulps of evaluation noise, so the endgame
        # branch treats values inside that band as ties and demands a
        # decisive gradient halving instead; ||g|| can halve at most ~60
        # times, which bounds any tie-creep far below the noise itself.
        f_noise = 4.0 * np.spacing(1.0 + abs(f))
        for _ in range(MAX_BACKTRACKS):
            xn = x + alpha * p
            fn, gn = fg(xn)
            if np.isfinite(fn) and np.all(np.isfinite(gn)):
                saw_finite = True
                gn_norm = float(np.linalg.norm(gn))
                # Accepted steps strictly decrease (f, ||g||) lexicographically;
                # near the minimum true f-decreases underflow the resolution
                # of f and the gradient norm takes over as progress measure.
                strict_progress = fn < f or (fn == f and gn_norm < gnorm)
                if fn <= f + ARMIJO_C1 * alpha * gp and strict_progress:
                    return xn, fn, gn, gn_norm, saw_finite
                if fn <= f + f_noise and gn_norm < 0.5 * gnorm:
                    return xn, fn, gn, gn_norm, saw_finite
            alpha *= 0.5
        return None, None, None, None, saw_finite

    while iterations < opts.max_iterations:
        if gnorm <= opts.gradient_tolerance * (1.0 + abs(f)):
            converged = True
            break
        p = -(hinv @ g)
        gp = float(g @ p)
        if gp >= 0.0:  # stale curvature model; fall back to steepest descent
            hinv = np.eye(dim)
            first_update = True
            p = -g
            gp = float(g @ p)
        xn, fn, gn, gn_norm, saw_finite = line_search(p, gp)
        if xn is None and not np.array_equal(p, -g):
            # quasi-Newton direction made no progress; retry along -g, which
            # reduces the gradient norm for small enough steps
            hinv = np.eye(dim)
            first_update = True
            p = -g
            gp = float(g @ p)
            xn, fn, gn, gn_norm, sf2 = line_search(p, gp)
            saw_finite = saw_finite or sf2
        if xn is None:
            if not saw_finite:
                raise SearchError(
                    f"objective became non-finite along the search direction (start {start_id})",
                    last_iterate=x.reshape(r, q).copy(), last_value=f)
            break  # no representable progress left; report as-is
        s = xn - x
        y = gn - g
        sy = float(s @ y)
        if sy > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            if first_update:
                hinv = np.eye(dim) * (sy / float(y @ y))
                first_update = False
            rho_bfgs = 1.0 / sy
            hy = hinv @ y
            hinv = (hinv
                    - rho_bfgs * (np.outer(s, hy) + np.outer(hy, s))
                    + rho_bfgs * (1.0 + rho_bfgs * float(y @ hy)) * np.outer(s, s))
        x, f, g = xn, fn, gn
        gnorm = float(np.linalg.norm(g))
        iterations += 1
    if not converged:
        converged = gnorm <= opts.gradient_tolerance * (1.0 + abs(f))

    return LocalMinimum(b=x.reshape(r, q).copy(), value=f, start_id=start_id,
                        iterations=iterations, converged=converged, gradient_norm=gnorm)


def _same_minimum(a: LocalMinimum, b: LocalMinimum, opts: SearchOptions) -> bool:
    vtol = opts.value_dedup_tolerance * (1.0 + min(abs(a.value), abs(b.value)))
    if abs(a.value - b.value) > vtol:
        return False
    gram_diff = a.b @ a.b.T - b.b @ b.b.T
    return float(np.linalg.norm(gram_diff)) <= opts.gram_dedup_tolerance


def reduce(cf: CanonicalForm, q: int, opts: SearchOptions | None = None) -> ReductionResult:
    """Multi-start minimization over r x q matrices B; Z = H B.

    Runs angle-grid starts (only when r == 2 and q == 1) plus seeded random
    frame starts, canonicalizes each endpoint's gauge, and dedups the catalog:
    two endpoints are the same minimum when both their values and their B B'
    Gram matrices agree within the configured tolerances.  The representative
    kept for each cluster is its lowest-value member, so the reported global
    value is exactly the catalog minimum.
    """
    opts = opts or SearchOptions()
    r = cf.rank
    if not 1 <= q < r:
        raise InputError(f"target dimension must satisfy 1 <= q < rank={r}, got q={q}")
    h = cf.h
    dx = squared_distances(h)

    starts: list[np.ndarray] = []
    if r == 2 and q == 1:
        starts.extend(angle_starts(opts.n_angle_starts))
    starts.extend(random_starts(r, q, opts.n_starts, opts.seed, opts.scale_grid))

    def run_one(item):
        sid, b0 = item
        return local_minimize(h, b0, opts, start_id=sid, _dx=dx)

    items = list(enumerate(starts))
    if opts.workers > 1:
        with ThreadPoolExecutor(max_workers=opts.workers) as pool:
            results = list(pool.map(run_one, items))
    else:
        results = [run_one(it) for it in items]
    results.sort(key=lambda lm: lm.start_id)
    results = [replace(lm, b=canonicalize_b(lm.b)) for lm in results]

    catalog: list[LocalMinimum] = []
    for lm in results:
        for idx, rep in enumerate(catalog):
            if _same_minimum(lm, rep, opts):
                if lm.value < rep.value:
                    catalog[idx] = lm
                break
        else:
            catalog.append(lm)
    catalog.sort(key=lambda lm: (lm.value, lm.start_id))

    best = catalog[0]
    sv = np.linalg.svd(best.b, compute_uv=False)
    rank_deficient = bool(sv[-1] <= RANK_CHECK_RTOL * sv[0])
    return ReductionResult(b=best.b, z=h @ best.b, value=best.value,
                           local_minima=catalog, seed=opts.seed,
                           starts_used=len(starts), rank_deficient=rank_deficient)
