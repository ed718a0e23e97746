"""
Command Line Module for t-Improper Colouring

Subcommands:

- theory      thresholds kappa_p(tau) / kappa(tau) and predicted scales
- sample      write a seeded G(n,p) or G(n,m) graph file
- solve       alpha^t, chi^t or the bounds report for a graph file
- experiment  run a Monte Carlo campaign (or the step experiment) from JSON

Configuration precedence for experiment: flags > config file > defaults.
Exit codes: 0 success, 2 validation, 3 I/O, 4 exact-solver cap exceeded.
"""

import argparse
import json
import logging
import math
import sys

import pandas as pd

from modules.colouring import (
    ALPHA_NODE_LIMIT,
    CHI_EXACT_CAP,
    alpha_t_search,
    bounds_report,
    chi_t_exact,
    greedy_peel_colouring,
    lovasz_decomposition,
)
from modules.errors import CapExceededError, ColouringToolsError, ValidationError, exit_code_for
from modules.experiments import (
    DEFAULT_EPS,
    load_config,
    round_half_up,
    run_experiment,
    run_step_from_config,
    theory_curve,
)
from modules.graph_core import edge_count, max_degree, sample_gnm, sample_gnp
from modules.graph_io import FORMATS, format_graph, get_supported_formats, read_graph, write_text_atomic
from modules.ld_theory import TheoryParams, kappa_p, kappa_sparse, lambda_star, sparse_chi_lower_scale
from modules.results_io import round_floats
from modules.version import get_app_info

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(verbosity):
    """
    Install one stderr handler on the root logger

    Parameters:
    verbosity: 0 WARNING, 1 INFO, 2+ DEBUG
    """
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _print_json(payload):
    print(json.dumps(round_floats(payload), indent=2, ensure_ascii=False))


def _format_help(lead):
    described = "; ".join(f"{key} = {text}" for key, text in get_supported_formats().items())
    return f"{lead} ({described})"


def _version_text():
    info = get_app_info()
    return f"{info['name']} {info['version']} - {info['description']} (Python {info['python_requirement']})"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tdep-colouring",
        description="t-improper colouring of Erdos-Renyi random graphs",
        epilog="Experiment settings: command-line flags override the JSON config, which overrides defaults.",
    )
    parser.add_argument("--version", action="version", version=_version_text())
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    sub = parser.add_subparsers(dest="command", required=True)

    theory = sub.add_parser("theory", help="threshold functions and predicted scales")
    theory.add_argument("--p", type=float, help="edge probability (required unless --sparse without --n)")
    theory.add_argument("--tau", type=float, help="tau = t / ln n (or t / ln d with --sparse)")
    theory.add_argument("--n", type=int, help="vertex count; with --t derives tau")
    theory.add_argument("--t", type=int, help="degree budget; needs --n")
    theory.add_argument("--eps", type=float, default=DEFAULT_EPS, help="failure budget for k* (default: 0.05)")
    theory.add_argument("--sparse", action="store_true", help="use the sparse threshold kappa(tau)")
    theory.add_argument("--json", action="store_true", help="print JSON only")
    theory.set_defaults(handler=cmd_theory)

    sample = sub.add_parser("sample", help="write a seeded random graph")
    sample.add_argument("--n", type=int, required=True, help="vertex count")
    model = sample.add_mutually_exclusive_group(required=True)
    model.add_argument("--p", type=float, help="G(n,p) edge probability")
    model.add_argument("--m", type=int, help="G(n,m) edge count")
    sample.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed (default: 0)")
    sample.add_argument("--out", help="output file (default: stdout)")
    sample.add_argument("--format", choices=FORMATS, default="edgelist", help=_format_help("graph file format"))
    sample.add_argument("--json", action="store_true", help="print a JSON description")
    sample.set_defaults(handler=cmd_sample)

    solve = sub.add_parser("solve", help="alpha^t, chi^t and bounds for a graph file")
    solve.add_argument("input", help="graph file (edge list or DIMACS-like)")
    solve.add_argument("--t", type=int, required=True, help="degree budget")
    solve.add_argument("--format", choices=FORMATS, help=_format_help("input format, detected when omitted"))
    mode = solve.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact", help="exact chi^t")
    mode.add_argument("--greedy", dest="mode", action="store_const", const="greedy", help="heuristic upper bounds")
    mode.add_argument("--bounds", dest="mode", action="store_const", const="bounds", help="bounds report (default)")
    mode.add_argument("--alpha", dest="mode", action="store_const", const="alpha", help="alpha^t with a witness")
    solve.add_argument("--cap", type=int, default=CHI_EXACT_CAP, help=f"exact chi^t size cap (default: {CHI_EXACT_CAP})")
    solve.add_argument(
        "--node-limit",
        type=int,
        default=ALPHA_NODE_LIMIT,
        help=f"alpha^t search-node budget before falling back to bounds (default: {ALPHA_NODE_LIMIT})",
    )
    solve.add_argument("--json", action="store_true", help="print JSON only")
    solve.set_defaults(handler=cmd_solve, mode="bounds")

    experiment = sub.add_parser(
        "experiment",
        help="Monte Carlo campaign from a JSON config",
        description="Flags override the corresponding config fields.",
    )
    experiment.add_argument("config", help="JSON experiment configuration")
    experiment.add_argument("--step", action="store_true", help="run the step experiment (config t_spec must use x)")
    experiment.add_argument("--trials", type=int, help="override trials")
    experiment.add_argument("--seed", type=int, dest="master_seed", help="override master_seed")
    experiment.add_argument("--workers", type=int, help="override workers")
    experiment.add_argument("--output", help="override output path")
    experiment.add_argument("--solver", choices=("exact", "greedy", "both"), help="override solver")
    experiment.add_argument("--json", action="store_true", help="print JSON only")
    experiment.set_defaults(handler=cmd_experiment)
    return parser


def _theory_tau(args, ln_scale):
    if args.tau is not None:
        if args.t is not None:
            raise ValidationError("give either --tau or --n with --t, not both")
        return args.tau
    if args.t is None or args.n is None:
        raise ValidationError("give --tau, or --n together with --t")
    if ln_scale is None or ln_scale <= 0:
        raise ValidationError("tau = t / ln(scale) needs a scale above 1")
    return args.t / ln_scale


def cmd_theory(args):
    if args.tau is not None and args.tau < 0:
        raise ValidationError(f"tau must be non-negative, got {args.tau}")
    if args.t is not None and args.t < 0:
        raise ValidationError(f"t must be non-negative, got {args.t}")
    if args.sparse:
        return _theory_sparse(args)

    if args.p is None:
        raise ValidationError("--p is required")
    params = TheoryParams.from_p(args.p)
    if args.n is not None and args.n < 3:
        raise ValidationError(f"--n must be at least 3, got {args.n}")
    tau = _theory_tau(args, math.log(args.n) if args.n else None)
    kappa = kappa_p(tau, params)
    grid = [0.0, params.p / 4, params.p / 2, 3 * params.p / 4, params.p]
    payload = {
        "p": params.p,
        "tau": tau,
        "kappa_p": kappa,
        "lambda_star": [{"x": x, "value": lambda_star(x, params)} for x in grid],
        "prediction": None,
    }
    if args.n is not None:
        t = args.t if args.t is not None else round_half_up(tau * math.log(args.n))
        payload["prediction"] = theory_curve(args.n, params.p, t, eps=args.eps).to_dict()
    if args.json:
        _print_json(payload)
        return 0
    print(f"p = {params.p:g}, tau = {tau:.6g}")
    print(f"kappa_p = {kappa:.10f}")
    print("Lambda* samples:")
    print(pd.DataFrame(payload["lambda_star"]).to_string(index=False, float_format=lambda v: f"{v:.6g}"))
    prediction = payload["prediction"]
    if prediction:
        print(f"n = {prediction['n']}, t = {prediction['t']}")
        print(f"alpha_t ~ {prediction['alpha_predicted']:.4f}")
        print(f"chi_t ~ {prediction['chi_predicted']:.4f}")
        print(f"k* (eps = {args.eps:g}) = {prediction['k_star']}")
        if prediction["chi_sparse_lower"] is not None:
            print(f"sparse chi_t lower scale = {prediction['chi_sparse_lower']:.4f}")
    return 0


def _theory_sparse(args):
    d = None
    if args.n is not None:
        if args.p is None:
            raise ValidationError("--sparse with --n also needs --p")
        d = args.n * TheoryParams.from_p(args.p).p
        if d <= 1:
            raise ValidationError(f"the sparse scale needs d = np > 1, got {d:g}")
    tau = _theory_tau(args, math.log(d) if d else None)
    payload = {"tau": tau, "kappa": kappa_sparse(tau), "d": d, "chi_lower_scale": None}
    if d is not None:
        t = args.t if args.t is not None else round_half_up(tau * math.log(d))
        payload["chi_lower_scale"] = sparse_chi_lower_scale(args.n, args.p, t)
    if args.json:
        _print_json(payload)
        return 0
    print(f"tau = {tau:.6g}")
    print(f"kappa = {payload['kappa']:.10f}")
    if d is not None:
        print(f"d = {d:.6g}, chi_t lower scale = {payload['chi_lower_scale']:.4f}")
    return 0


def cmd_sample(args):
    if args.p is not None:
        G = sample_gnp(args.n, args.p, args.seed)
    else:
        G = sample_gnm(args.n, args.m, args.seed)
    text = format_graph(G, args.format)
    if args.out:
        write_text_atomic(args.out, text)
    if args.json:
        payload = {"n": G.n, "m": edge_count(G), "seed": args.seed, "format": args.format, "path": args.out}
        if not args.out:
            payload["graph"] = text
        _print_json(payload)
    elif args.out:
        print(f"wrote {G.n} vertices, {edge_count(G)} edges to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _classes_json(colouring):
    return [sorted(members) for members in colouring.classes()]


def cmd_solve(args):
    if args.node_limit < 1:
        raise ValidationError(f"--node-limit must be positive, got {args.node_limit}")
    if args.t < 0:
        raise ValidationError(f"t must be non-negative, got {args.t}")
    G = read_graph(args.input, args.format)
    t = args.t
    payload = {"n": G.n, "m": edge_count(G), "t": t, "mode": args.mode}
    lines = []
    if args.mode == "exact":
        count, colouring = chi_t_exact(G, t, cap=args.cap)
        payload.update(chi_t=count, classes=_classes_json(colouring))
        lines.append(f"chi_t = {count}")
    elif args.mode == "greedy":
        greedy = greedy_peel_colouring(G, t)
        lovasz = lovasz_decomposition(G, t)
        payload.update(
            chi_upper_greedy=greedy.class_count,
            chi_upper_lovasz=lovasz.class_count,
            classes=_classes_json(greedy),
        )
        lines.append(f"chi_t <= {greedy.class_count} (greedy peeling)")
        lines.append(f"chi_t <= {lovasz.class_count} (Lovasz decomposition)")
    elif args.mode == "alpha":
        search = alpha_t_search(G, t, node_limit=args.node_limit)
        size, exact, witness = search.size, search.exact, search.witness
        payload.update(alpha_t=size, exact=exact, witness=sorted(witness), nodes=search.nodes)
        lines.append(f"alpha_t {'=' if exact else '>='} {size}")
        lines.append(f"witness: {sorted(witness)}")
    else:
        report = bounds_report(G, t, exact_cap=args.cap, node_limit=args.node_limit)
        payload.update(report.to_dict())
        lines.append(f"n = {G.n}, max degree = {max_degree(G)}, t = {t}")
        lines.append(f"alpha_t {'=' if report.alpha_exact else '<='} {report.alpha_t}")
        lines.append(f"{report.lower()} <= chi_t <= {report.upper()}")
        if report.chi_t is not None:
            lines.append(f"chi_t = {report.chi_t}")
    if args.json:
        _print_json(payload)
    else:
        print("\n".join(lines))
    return 0


def _summary_frame(result):
    rows = []
    for n, stats in result.summary.items():
        prediction = result.theory.get(n)
        mean = stats["mean"]
        rows.append(
            {
                "n": n,
                "trials": stats["trials"],
                "alpha_hat": mean["alpha_hat"],
                "chi_lower_ratio": mean["chi_lower_ratio"],
                "chi_upper_greedy": mean["chi_upper_greedy"],
                "chi_upper_lovasz": mean["chi_upper_lovasz"],
                "chi_predicted": prediction.chi_predicted if prediction else math.nan,
                "k_star": prediction.k_star if prediction else None,
            }
        )
    return pd.DataFrame(rows)


def cmd_experiment(args):
    config = load_config(args.config).with_overrides(
        trials=args.trials,
        master_seed=args.master_seed,
        workers=args.workers,
        output=args.output,
        solver=args.solver,
    )
    if args.step or config.mode == "step":
        return _run_step(config, args)
    result = run_experiment(config)
    if args.json:
        _print_json(
            {
                "records": [r.to_dict() for r in result.records],
                "summary": {str(n): s for n, s in result.summary.items()},
                "theory": result.theory_json(),
                "paths": [str(p) for p in result.paths],
            }
        )
        return 0
    print(f"{len(result.records)} trials")
    print(_summary_frame(result).to_string(index=False, float_format=lambda v: f"{v:.3f}"))
    for path in result.paths:
        print(f"wrote {path}")
    return 0


def _run_step(config, args):
    reports = run_step_from_config(config)
    payload = {"step": [report.to_dict() for report in reports]}
    if config.output:
        write_text_atomic(config.output, json.dumps(round_floats(payload), indent=2) + "\n")
    if args.json:
        _print_json(payload)
        return 0
    for report in reports:
        print(
            f"n = {report.n}, x = {report.x:g}, t = {report.t}: k* = {report.k_star}, "
            f"lower certified = {report.lower_certified}, "
            f"<= {report.step_value} classes in {report.upper_fraction:.0%}, "
            f"chi_t = {report.step_value} concluded in {report.success_fraction:.0%}"
        )
    if config.output:
        print(f"wrote {config.output}")
    return 0


def main(argv=None):
    """
    Run the command line

    Parameters:
    argv: argument list without the program name (default: sys.argv[1:])

    Returns:
    int: process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except CapExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        print("hint: rerun with --greedy for heuristic bounds", file=sys.stderr)
        return exit_code_for(e)
    except (ColouringToolsError, ValueError, OSError) as e:
        logger.debug("command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)
