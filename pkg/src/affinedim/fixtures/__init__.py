"""Built-in datasets: two 6-point canonical forms and the Longley table.

hexagon: six points at 60-degree spacing, radius 1/sqrt(3).  This is already
a mean-centered canonical form (column sums zero, H'H = I) and its
one-dimensional reduction landscape is degenerate in an instructive way:
every projection direction attains the same minimized objective, so the
catalog of minima is a whole circle of equal-value solutions.

sixpoint: an asymmetric 6-point canonical form whose one-dimensional
landscape has two genuinely distinct local-minimum values; frozen constants,
used to exercise multi-minimum cataloging.

longley: the 16-year, 6-variable US economic table as published (the NIST
regression benchmark copy), bundled as a checksummed CSV; the year column is
used only for labels.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from ..errors import InputError, LoadError
from ..geometry import Configuration

LONGLEY_SHA256 = "109f717d168638d913bfeac6168786f2a86432c89019ab626e4cc8a188d10446"
LONGLEY_COLUMNS = ["GNP_DEFLATOR", "GNP", "UNEMPLOYED", "ARMED_FORCES",
                   "POPULATION", "EMPLOYED"]


@dataclass(eq=False)
class Fixture:
    """A named built-in dataset plus recorded oracle values for regression tests."""

    name: str
    configuration: Configuration
    expected: dict[str, tuple[float, str]] = field(default_factory=dict)


def hexagon_h() -> Configuration:
    """Six points at angles k*60 degrees, radius 1/sqrt(3).

    Entries are written out exactly (only one irrational constant) so the
    column sums and H'H = I hold to the last floating-point digit.
    """
    a = 1.0 / np.sqrt(3.0)
    b = a / 2.0
    coords = np.array([
        [a, 0.0],
        [b, 0.5],
        [-b, 0.5],
        [-a, 0.0],
        [-b, -0.5],
        [b, -0.5],
    ])
    labels = [f"P{i + 1}" for i in range(6)]
    return Configuration(coords, labels=labels)


def sixpoint_h() -> Configuration:
    """An asymmetric 6-point mean-centered canonical form (frozen constants).

    Derived once from the scatter [[2,.3],[.9,1.4],[-.7,1.1],[-1.9,.2],
    [-.6,-1.3],[1,-1.6]] via the centered SVD with the package's sign
    convention.  Its q=1 landscape has two distinct local-minimum values.
    """
    coords = np.array([
        [-0.585170572088804, -0.13455927812193663],
        [-0.22518094318368662, -0.516260073380578],
        [0.27110198846856337, -0.3803780537671252],
        [0.6336018798078793, -0.0329501474578387],
        [0.20528187039075843, 0.49089638990415596],
        [-0.2996342233947105, 0.5732511628233224],
    ])
    labels = [f"S{i + 1}" for i in range(6)]
    return Configuration(coords, labels=labels)


def longley() -> Configuration:
    """The bundled Longley economic table: 16 rows, 6 columns, year labels.

    Column order: GNP deflator, GNP, number unemployed, size of armed forces,
    population, total employed.  The file's SHA-256 is pinned; a mismatch
    raises LoadError.
    """
    try:
        raw = (resources.files(__package__) / "data" / "longley.csv").read_bytes()
    except (FileNotFoundError, OSError) as exc:
        raise LoadError(f"bundled longley.csv is missing: {exc}")
    digest = hashlib.sha256(raw).hexdigest()
    if digest != LONGLEY_SHA256:
        raise LoadError(
            "longley.csv checksum mismatch: expected "
            f"{LONGLEY_SHA256}, got {digest}"
        )
    rows = list(csv.DictReader(raw.decode("utf-8").splitlines()))
    labels = [r["YEAR"] for r in rows]
    coords = np.array([[float(r[c]) for c in LONGLEY_COLUMNS] for r in rows])
    return Configuration(coords, labels=labels)


_FACTORIES = {
    "hexagon": hexagon_h,
    "sixpoint": sixpoint_h,
    "longley": longley,
}

_EXPECTED: dict[tuple[str, str], tuple[float, str]] = {}


def fixture_names() -> list[str]:
    return sorted(_FACTORIES)


def get_fixture(name: str) -> Fixture:
    """Fresh copy of a named fixture with its recorded oracle values."""
    if name not in _FACTORIES:
        raise InputError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
    expected = {k: v for (n, k), v in _EXPECTED.items() if n == name}
    return Fixture(name=name, configuration=_FACTORIES[name](), expected=expected)


def register_expected(name: str, key: str, value: float, provenance: str) -> None:
    """Record an oracle value for a fixture; duplicate keys are rejected."""
    if name not in _FACTORIES:
        raise InputError(f"cannot register value for unknown fixture {name!r}")
    if (name, key) in _EXPECTED:
        raise InputError(f"expected value {key!r} already registered for {name!r}")
    _EXPECTED[(name, key)] = (float(value), str(provenance))


def expected_value(name: str, key: str) -> float | None:
    """Recorded oracle value, or None when absent."""
    entry = _EXPECTED.get((name, key))
    return entry[0] if entry else None


def expected_provenance(name: str, key: str) -> str | None:
    entry = _EXPECTED.get((name, key))
    return entry[1] if entry else None


def _register_builtin() -> None:
    # Regression values recorded from this package's own oracles; see each
    # provenance string.  Tolerances are chosen by the tests that consume them.
    register_expected(
        "hexagon", "q1_global_norm2", 7.999999999999999,
        "angle x scale grid oracle (0.5 deg x 0.005 steps, Nelder-Mead polish), "
        "2026-08-10; the hexagon's q=1 landscape is direction-independent, so "
        "every angle attains this value")
    register_expected(
        "hexagon", "q1_value_cluster_count", 1.0,
        "distinct local-minimum value clusters on the angle-grid oracle; the "
        "flat landscape yields a single value level, 2026-08-10")
    register_expected(
        "sixpoint", "q1_global_norm2", 7.539732094070544,
        "angle x scale grid oracle (0.5 deg x 0.005 steps, Nelder-Mead polish), "
        "2026-08-10")
    register_expected(
        "sixpoint", "q1_second_norm2", 7.825282763732904,
        "second distinct local-minimum value, angle-grid oracle with "
        "Nelder-Mead polish, 2026-08-10")
    register_expected(
        "sixpoint", "q1_value_cluster_count", 2.0,
        "distinct local-minimum value clusters on the angle-grid oracle, "
        "2026-08-10")
    register_expected(
        "longley", "q2_global_norm2", 38.39128137003815,
        "first converged multi-start run (mean centering, rank tol 1e-10, "
        "seed 0, 100 random starts, default search options), 2026-08-10; "
        "regression value, not an external truth")
    register_expected(
        "longley", "q2_min_radius", 0.30962291873971026,
        "first converged multi-start run (mean centering, rank tol 1e-10, "
        "seed 0, 100 random starts, default search options), 2026-08-10; "
        "regression value, not an external truth")
    register_expected(
        "longley", "q2_top_axis_var_a", 1.0,
        "smaller 1-based index of the two variables with the largest "
        "pre-normalization variable-axis norms at the q=2 optimum of the raw "
        "table; first run 2026-08-10 (note: this statistic depends on the "
        "original column units and is not affine invariant)")
    register_expected(
        "longley", "q2_top_axis_var_b", 4.0,
        "larger 1-based index of the two variables with the largest "
        "pre-normalization variable-axis norms at the q=2 optimum of the raw "
        "table; first run 2026-08-10")


_register_builtin()
