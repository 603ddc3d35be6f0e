"""Command line entry point.

Subcommands:
  theory       closed-form predictions for one parameter point
  simulate     Monte Carlo trials at a single point, emitted as CSV/JSON
  sweep        trials across a mu- or p-grid, optional threshold estimate
  communities  overlap communities of an edge-list graph

simulate and sweep require --seed so every emitted file is reproducible.
Exit codes: 0 success, 2 invalid parameters or bad input, 3 resource guard.
"""

from __future__ import annotations

import argparse
import sys

from .components import components_by_shared_vertices, format_components
from .cliques import enumerate_k_cliques
from .errors import (
    InvalidParameterError,
    NoCrossingError,
    ParseError,
    ResourceGuardError,
)
from .experiments import (
    ExperimentConfig,
    TOOL_VERSION,
    emit,
    estimate_threshold,
    run_simulate,
    run_sweep,
    theory_report,
)
from .graphs import load_edge_list


def _add_point_args(sub: argparse.ArgumentParser, *, seed_required: bool) -> None:
    sub.add_argument("--variant", default="shared",
                     choices=["shared", "oriented", "edge-joined", "motif-c4"])
    sub.add_argument("--n", type=int, required=True, help="number of vertices")
    sub.add_argument("--k", type=int, required=True, help="clique order")
    sub.add_argument("--ell", type=int, required=True, help="overlap threshold")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float, help="edge probability")
    group.add_argument("--mu", type=float,
                       help="target mean offspring; inverted to p in closed form")
    sub.add_argument("--orientation", default="transitive",
                     choices=["transitive", "mixed-k4"],
                     help="pattern for the oriented variant")
    if seed_required:
        sub.add_argument("--seed", type=int, required=True,
                         help="master seed (required: no silent nondeterminism)")
        sub.add_argument("--trials", type=int, default=1)
        sub.add_argument("--format", default="csv", choices=["csv", "json"])
        sub.add_argument("--output", default=None,
                         help="output path (default: stdout)")


def _parse_grid(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise InvalidParameterError(f"bad grid value in {text!r}") from exc
    if not values:
        raise InvalidParameterError("grid must be non-empty")
    return values


def _make_config(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        variant=args.variant,
        n=args.n,
        k=args.k,
        ell=args.ell,
        trials=getattr(args, "trials", 1),
        p=args.p,
        mu=args.mu,
        master_seed=getattr(args, "seed", 0),
        orientation=args.orientation,
        output=getattr(args, "output", None),
    )


def _emit_result(result, args: argparse.Namespace) -> None:
    if args.output is None:
        emit(result, args.format, sys.stdout)
    else:
        emit(result, args.format, args.output)


def _cmd_theory(args: argparse.Namespace) -> int:
    config = _make_config(args)
    report = theory_report(config)
    print(f"variant      {report.variant}")
    print(f"n            {report.n}")
    print(f"k            {report.k}")
    print(f"ell          {report.ell}")
    print(f"p            {report.p!r}")
    print(f"mu           {report.mu_value!r}")
    print(f"critical_p   {report.critical_p!r}")
    sigma = report.sigma_prediction
    print(f"sigma        {'n/a' if sigma is None else repr(sigma)}")
    print(f"nu           {report.nu_prediction!r}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _make_config(args)
    result = run_simulate(config)
    _emit_result(result, args)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _make_config(args)
    mu_grid = _parse_grid(args.mu_grid) if args.mu_grid else None
    p_grid = _parse_grid(args.p_grid) if args.p_grid else None
    result = run_sweep(config, mu_grid=mu_grid, p_grid=p_grid)
    _emit_result(result, args)
    if args.estimate_threshold is not None:
        p_hat = estimate_threshold(result, args.estimate_threshold)
        # stderr keeps stdout clean for CSV piping
        print(f"estimated threshold p = {p_hat!r}", file=sys.stderr)
    return 0


def _cmd_communities(args: argparse.Namespace) -> int:
    if args.ell is None:
        args.ell = args.k - 1
    if not (args.k >= 2 and 1 <= args.ell <= args.k - 1):
        raise InvalidParameterError("need k >= 2 and ell in [1, k-1]")
    if args.input == "-":
        graph, labels = load_edge_list(sys.stdin)
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            graph, labels = load_edge_list(fh)
    cliques = enumerate_k_cliques(graph, args.k)
    summary = components_by_shared_vertices(cliques, args.ell)
    names = {idx: name for name, idx in labels.items()}
    text = format_components(cliques, summary, labels=names)
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliqueperc",
        description="Clique percolation: Monte Carlo experiments and "
                    "branching-process predictions on random graphs.",
    )
    parser.add_argument("--version", action="version", version=TOOL_VERSION)
    subs = parser.add_subparsers(dest="command", required=True)

    p_theory = subs.add_parser("theory", help="closed-form predictions for one point")
    _add_point_args(p_theory, seed_required=False)
    p_theory.set_defaults(func=_cmd_theory)

    p_sim = subs.add_parser("simulate", help="Monte Carlo trials at one point")
    _add_point_args(p_sim, seed_required=True)
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = subs.add_parser("sweep", help="trials across a mu- or p-grid")
    _add_point_args(p_sweep, seed_required=True)
    grid = p_sweep.add_mutually_exclusive_group(required=True)
    grid.add_argument("--mu-grid", help="comma-separated mu values")
    grid.add_argument("--p-grid", help="comma-separated p values")
    p_sweep.add_argument("--estimate-threshold", type=float, metavar="EPS",
                         help="report p where mean frac_c1 crosses EPS (to stderr)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_comm = subs.add_parser("communities",
                             help="overlap communities of an edge-list graph")
    p_comm.add_argument("--input", required=True,
                        help="edge list path, or - for stdin")
    p_comm.add_argument("--k", type=int, default=3, help="clique order (default 3)")
    p_comm.add_argument("--ell", type=int, default=None,
                        help="overlap threshold (default k-1)")
    p_comm.add_argument("--output", default=None,
                        help="output path (default: stdout)")
    p_comm.set_defaults(func=_cmd_communities)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvalidParameterError, ParseError, NoCrossingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
