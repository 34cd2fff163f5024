"""Command-line front end: canonize, reduce, pca, median, compare.

Every command reads one input (a CSV file or a named fixture), runs its
pipeline, and writes JSON reports, delimited matrices, and SVG figures into
the output directory.  Numeric results are deterministic for a fixed seed,
whatever the worker count; run ids and timings live under a separate "meta"
key so the "results" object can be compared byte for byte between runs.

Exit codes: 0 success, 2 input or configuration error, 1 internal error.
Errors are also emitted as one-line JSON on stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import fixtures as fixtures_mod
from .baselines import pca, standardize, swarm_stats, variable_axes
from .canonical import canonical_form, dedup_weighted
from .centering import affine_median_gamma, center, mean_gamma, point_gamma
from .errors import AffineDimError, InputError
from .geometry import Configuration, coincident_groups
from .objective import norm2_closed
from .optimizer import SearchOptions, reduce as reduce_b
from .plots import save_biplot, save_compare, save_number_line, save_scatter
from .report import (dumps_json, ensure_out_dir, read_configuration_csv,
                     read_gamma_file, write_json, write_matrix_csv)


@dataclass
class RunConfig:
    """Echo of everything that determines a run's numeric output."""

    command: str
    input_path: str | None
    fixture: str | None
    gamma_mode: str
    q: int | None
    rank_tol: float
    n_starts: int
    seed: int
    workers: int
    out_dir: str
    standardize_mode: str | None
    weights_column: str | None
    label_column: str | None
    plot_radius_size: bool
    axis_arrows: bool

    def echo(self) -> dict:
        return {
            "command": self.command,
            "input": self.input_path,
            "fixture": self.fixture,
            "gamma": self.gamma_mode,
            "q": self.q,
            "rank_tol": self.rank_tol,
            "starts": self.n_starts,
            "seed": self.seed,
            "workers": self.workers,
            "standardize": self.standardize_mode,
            "weights_column": self.weights_column,
            "label_column": self.label_column,
            "plot_radius_size": self.plot_radius_size,
            "axis_arrows": self.axis_arrows,
        }


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affinedim",
        description="Origin-centric affine dimensionality reduction toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_q=False, q_default=None):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", help="CSV file with a header row")
        src.add_argument("--fixture", choices=fixtures_mod.fixture_names(),
                         help="built-in dataset")
        p.add_argument("--gamma", default="mean",
                       help="centering: mean | point:<i> | median | file:<path>")
        p.add_argument("--rank-tol", type=float, default=1e-10,
                       help="relative singular-value threshold for the rank")
        p.add_argument("--out", default="affinedim-out", help="output directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--label-column", default=None,
                       help="input CSV column holding point labels")
        p.add_argument("--weights", default=None, dest="weights_column",
                       help="input CSV column holding point multiplicities")
        if needs_q:
            p.add_argument("--q", type=int, required=q_default is None,
                           default=q_default, help="target dimension")

    p = sub.add_parser("canonize", help="emit the centered SVD factors")
    add_common(p)

    p = sub.add_parser("reduce", help="multi-start origin-centric reduction")
    add_common(p, needs_q=True)
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--plot-radius-size", action="store_true",
                   help="draw marker area proportional to recovered radius")
    p.add_argument("--no-axis-arrows", action="store_true",
                   help="omit variable-axis arrows from figures")

    p = sub.add_parser("pca", help="PCA baseline on standardized input")
    add_common(p, needs_q=True)
    p.add_argument("--standardize", choices=("mean", "correlation"),
                   default="correlation")

    p = sub.add_parser("median", help="hull-peeling affine median weights")
    add_common(p)

    p = sub.add_parser("compare", help="side-by-side PCA and origin-centric run")
    add_common(p, needs_q=True, q_default=2)
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--standardize", choices=("mean", "correlation"),
                   default="correlation")
    p.add_argument("--plot-radius-size", action="store_true")
    p.add_argument("--no-axis-arrows", action="store_true")
    return parser


def _load_input(args) -> Configuration:
    if args.fixture:
        return fixtures_mod.get_fixture(args.fixture).configuration
    return read_configuration_csv(args.input, label_column=args.label_column,
                                  weights_column=args.weights_column)


def _resolve_gamma(mode: str, cfg: Configuration) -> np.ndarray:
    n = cfg.n_points
    if mode == "mean":
        return mean_gamma(n)
    if mode == "median":
        return affine_median_gamma(cfg).gamma
    if mode.startswith("point:"):
        try:
            idx = int(mode.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad point index in gamma mode {mode!r}")
        return point_gamma(n, idx)
    if mode.startswith("file:"):
        return read_gamma_file(mode.split(":", 1)[1], n)
    raise InputError(f"unknown gamma mode {mode!r}; use mean, point:<i>, median, or file:<path>")


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=getattr(args, "input", None),
        fixture=getattr(args, "fixture", None),
        gamma_mode=args.gamma,
        q=getattr(args, "q", None),
        rank_tol=args.rank_tol,
        n_starts=getattr(args, "starts", 0),
        seed=args.seed,
        workers=getattr(args, "workers", 1),
        out_dir=args.out,
        standardize_mode=getattr(args, "standardize", None),
        weights_column=args.weights_column,
        label_column=args.label_column,
        plot_radius_size=getattr(args, "plot_radius_size", False),
        axis_arrows=not getattr(args, "no_axis_arrows", False),
    )


def _legend(run: RunConfig) -> str:
    return f"gamma={run.gamma_mode}  q={run.q}  seed={run.seed}"


def _search_options(run: RunConfig) -> SearchOptions:
    return SearchOptions(n_starts=run.n_starts, seed=run.seed, workers=run.workers)


def _meta(run_id: str, elapsed: float) -> dict:
    return {"run_id": run_id, "timing_seconds": elapsed}


def _run_id(run: RunConfig) -> str:
    stamp = time.strftime("%Y%m%dT%H%M%S", time.gmtime())
    return f"{run.command}-{stamp}-{os.getpid()}"


def _reduction_dict(red) -> dict:
    return {
        "value": red.value,
        "b": red.b,
        "z": red.z,
        "seed": red.seed,
        "starts_used": red.starts_used,
        "rank_deficient": red.rank_deficient,
        "local_minima": [
            {
                "value": lm.value,
                "b": lm.b,
                "start_id": lm.start_id,
                "iterations": lm.iterations,
                "converged": lm.converged,
                "gradient_norm": lm.gradient_norm,
            }
            for lm in red.local_minima
        ],
    }


def _swarm_dict(stats) -> dict:
    return {
        "radii": stats.radii,
        "min_radius": stats.min_radius,
        "max_radius": stats.max_radius,
        "angles": stats.angles,
        "angular_order": stats.angular_order,
    }


def _pca_dict(res) -> dict:
    return {
        "scores": res.scores,
        "loadings": res.loadings,
        "singular_values": res.singular_values,
        "explained_fraction": res.explained_fraction,
    }


def _axes_dict(axes) -> dict:
    return {
        "directions": axes.directions,
        "pre_norms": axes.pre_norms,
        "defined": axes.defined.tolist(),
    }


def _variable_names(cfg: Configuration) -> list[str]:
    return [f"X{j + 1}" for j in range(cfg.n_dims)]


def cmd_canonize(args) -> int:
    run = _config_from_args(args)
    t0 = time.perf_counter()
    cfg = dedup_weighted(_load_input(args))
    gamma = _resolve_gamma(run.gamma_mode, cfg)
    cf = canonical_form(cfg, gamma, tol=run.rank_tol)
    centered = center(cfg, gamma)
    out = ensure_out_dir(run.out_dir)
    labels = cfg.effective_labels()
    h_cols = [f"h{k + 1}" for k in range(cf.rank)]
    write_matrix_csv(os.path.join(out, "centered.csv"), centered.coords,
                     _variable_names(cfg), labels)
    write_matrix_csv(os.path.join(out, "h.csv"), cf.h, h_cols, labels)
    write_matrix_csv(os.path.join(out, "lambda_sqrt.csv"), cf.lambda_sqrt[None, :], h_cols)
    write_matrix_csv(os.path.join(out, "g_t.csv"), cf.g_t, _variable_names(cfg),
                     labels=h_cols, label_header="COMPONENT")
    write_matrix_csv(os.path.join(out, "gamma.csv"), cf.gamma[:, None], ["gamma"], labels)
    report = {
        "config": run.echo(),
        "results": {
            "n_points": cfg.n_points,
            "n_dims": cfg.n_dims,
            "canonical_rank": cf.rank,
            "lambda_sqrt": cf.lambda_sqrt,
            "gamma": cf.gamma,
        },
        "meta": _meta(_run_id(run), time.perf_counter() - t0),
    }
    write_json(os.path.join(out, "canonize.json"), report)
    print(f"canonize: rank r={cf.rank}, outputs in {out}")
    return 0


def cmd_reduce(args) -> int:
    run = _config_from_args(args)
    t0 = time.perf_counter()
    cfg = dedup_weighted(_load_input(args))
    gamma = _resolve_gamma(run.gamma_mode, cfg)
    cf = canonical_form(cfg, gamma, tol=run.rank_tol)
    red = reduce_b(cf, run.q, _search_options(run))
    labels = cfg.effective_labels()
    stats = swarm_stats(red.z, labels=labels)
    axes = variable_axes(cf, red.b)
    out = ensure_out_dir(run.out_dir)
    z_cols = [f"z{k + 1}" for k in range(run.q)]
    write_matrix_csv(os.path.join(out, "z.csv"), red.z, z_cols, labels)
    write_matrix_csv(os.path.join(out, "b.csv"), red.b, z_cols,
                     labels=[f"h{k + 1}" for k in range(cf.rank)],
                     label_header="COMPONENT")
    report = {
        "config": run.echo(),
        "results": {
            "canonical_rank": cf.rank,
            "seed": run.seed,
            "reduction": _reduction_dict(red),
            "swarm": _swarm_dict(stats),
            "variable_axes": _axes_dict(axes),
        },
        "meta": _meta(_run_id(run), time.perf_counter() - t0),
    }
    write_json(os.path.join(out, "report.json"), report)
    legend = _legend(run)
    arrows = axes.directions if (run.axis_arrows and run.q == 2) else None
    if run.q == 2:
        save_scatter(os.path.join(out, "reduction.svg"), red.z, labels, legend,
                     rings=True, size_by_radius=run.plot_radius_size,
                     axes_arrows=arrows, arrow_names=_variable_names(cfg),
                     title="Origin-centric reduction (q=2)")
    else:
        save_number_line(os.path.join(out, "reduction.svg"), red.z[:, 0], labels,
                         legend, title=f"Origin-centric reduction (q={run.q})")
    print(f"reduce: rank r={cf.rank}, objective {red.value:.9g}, "
          f"{len(red.local_minima)} distinct local minima, outputs in {out}")
    return 0


def cmd_pca(args) -> int:
    run = _config_from_args(args)
    t0 = time.perf_counter()
    cfg = _load_input(args)
    std = standardize(cfg, run.standardize_mode)
    res = pca(std, run.q)
    labels = cfg.effective_labels()
    out = ensure_out_dir(run.out_dir)
    pc_cols = [f"pc{k + 1}" for k in range(run.q)]
    write_matrix_csv(os.path.join(out, "scores.csv"), res.scores, pc_cols, labels)
    write_matrix_csv(os.path.join(out, "loadings.csv"), res.loadings, pc_cols,
                     labels=_variable_names(cfg), label_header="VARIABLE")
    report = {
        "config": run.echo(),
        "results": {
            "standardize": run.standardize_mode,
            "pca": _pca_dict(res),
        },
        "meta": _meta(_run_id(run), time.perf_counter() - t0),
    }
    write_json(os.path.join(out, "pca.json"), report)
    if run.q == 2:
        save_biplot(os.path.join(out, "pca.svg"), res.scores, res.loadings,
                    labels, _variable_names(cfg), _legend(run),
                    title=f"PCA ({run.standardize_mode} form, q=2)")
    print(f"pca: explained fractions {np.round(res.explained_fraction, 4)}, outputs in {out}")
    return 0


def cmd_median(args) -> int:
    run = _config_from_args(args)
    t0 = time.perf_counter()
    cfg = _load_input(args)
    med = affine_median_gamma(cfg)
    out = ensure_out_dir(run.out_dir)
    report = {
        "config": run.echo(),
        "results": {
            "gamma": med.gamma,
            "peel_stages": [list(map(int, s)) for s in med.peel_stages],
            "final_hull": list(map(int, med.final_hull)),
        },
        "meta": _meta(_run_id(run), time.perf_counter() - t0),
    }
    write_json(os.path.join(out, "median.json"), report)
    print(f"median: {len(med.final_hull)} points share the weight, outputs in {out}")
    return 0


def cmd_compare(args) -> int:
    run = _config_from_args(args)
    if run.q != 2:
        raise InputError(f"compare requires q=2, got q={run.q}")
    t0 = time.perf_counter()
    raw = _load_input(args)
    labels = raw.effective_labels()

    std = standardize(raw, run.standardize_mode)
    pca_res = pca(std, 2)

    cfg = dedup_weighted(raw)
    gamma = _resolve_gamma(run.gamma_mode, cfg)
    cf = canonical_form(cfg, gamma, tol=run.rank_tol)
    red = reduce_b(cf, 2, _search_options(run))
    stats = swarm_stats(red.z, labels=cfg.effective_labels())
    axes = variable_axes(cf, red.b)
    closed = norm2_closed(cf.h, red.b)

    out = ensure_out_dir(run.out_dir)
    write_matrix_csv(os.path.join(out, "pca_scores.csv"), pca_res.scores,
                     ["pc1", "pc2"], labels)
    write_matrix_csv(os.path.join(out, "z.csv"), red.z, ["z1", "z2"],
                     cfg.effective_labels())
    report = {
        "config": run.echo(),
        "results": {
            "canonical_rank": cf.rank,
            "seed": run.seed,
            "pca": _pca_dict(pca_res),
            "pca_variable_axes": {"directions": pca_res.loadings},
            "reduction": _reduction_dict(red),
            "objective_terms": {
                "gram_term": closed.gram_term,
                "rho_sum_term": closed.rho_sum_term,
                "rho_quad_term": closed.rho_quad_term,
                "cross_term": closed.cross_term,
            },
            "swarm": _swarm_dict(stats),
            "variable_axes": _axes_dict(axes),
        },
        "meta": _meta(_run_id(run), time.perf_counter() - t0),
    }
    write_json(os.path.join(out, "compare.json"), report)
    arrows = axes.directions if run.axis_arrows else None
    save_compare(os.path.join(out, "compare.svg"), pca_res.scores,
                 pca_res.loadings, red.z, arrows, labels,
                 _variable_names(raw), _legend(run),
                 size_by_radius=run.plot_radius_size)
    print(f"compare: rank r={cf.rank}, objective {red.value:.9g}, "
          f"min radius {stats.min_radius:.6g}, outputs in {out}")
    return 0


_DISPATCH = {
    "canonize": cmd_canonize,
    "reduce": cmd_reduce,
    "pca": cmd_pca,
    "median": cmd_median,
    "compare": cmd_compare,
}


def _emit_error(category: str, message: str) -> None:
    sys.stderr.write(dumps_json({"error": {"category": category, "message": message}},
                                indent=0).replace("\n", "") + "\n")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except InputError as exc:
        _emit_error("input", str(exc))
        return 2
    except AffineDimError as exc:
        _emit_error("internal", str(exc))
        return 1
    except OSError as exc:
        _emit_error("input", str(exc))
        return 2
    except Exception as exc:  # pragma: no cover - genuine bugs
        _emit_error("internal", f"{type(exc).__name__}: {exc}")
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
