"""Command-line interface: ``kppdr <command> ...``.

Exit codes: 0 success, 2 usage, 3 infeasible probabilities, 4 certificate
failure, 5 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from kppdr import chain, mixsim, numsolve, optimal, stratify
from kppdr.linalg import EigenConvergenceError
from kppdr.topology import TopologyError, build_graph, format_edge_list, make_spec

EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_CERTIFICATE = 4
EXIT_NONCONVERGED = 5


class UsageError(Exception):
    pass


def _add_spec_args(p: argparse.ArgumentParser):
    p.add_argument("--family", required=True, help="symmetric, semi-symmetric, cycle or semi-cycle")
    p.add_argument("--k", type=int, required=True, help="number of partite sets K")
    p.add_argument("--n", type=int, required=True, help="nodes per set")
    p.add_argument("--pattern", default=None, help="comma-separated layer kinds, e.g. F,S,F")


def _add_output_args(p: argparse.ArgumentParser):
    p.add_argument("--out", default=None, help="write output to FILE instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="json")


def _spec(args):
    return make_spec(args.family, args.k, args.n, args.pattern)


def resolve_probs(spec, token: str) -> tuple[float, ...]:
    """``optimal``, ``mh`` or comma-separated per-orbit values in layer order."""
    token = token.strip().lower()
    if token == "optimal":
        return optimal.optimal_probabilities(spec).probs
    if token in ("mh", "metropolis-hastings"):
        return chain.metropolis_hastings(build_graph(spec))
    try:
        values = tuple(float(v) for v in token.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"cannot parse probabilities {token!r}") from None
    if len(values) != spec.layers:
        raise UsageError(f"expected {spec.layers} probabilities for this network, got {len(values)}")
    return values


def _format_text(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)) and not _is_flat_numbers(value):
                lines.append(f"{prefix}{key}:")
                lines += _format_text(value, prefix + "  ")
            else:
                lines.append(f"{prefix}{key}: {_fmt(value)}")
    elif isinstance(obj, list):
        for value in obj:
            lines += _format_text(value, prefix + "- ") if isinstance(value, dict) else [f"{prefix}{_fmt(value)}"]
    else:
        lines.append(f"{prefix}{_fmt(obj)}")
    return lines


def _is_flat_numbers(value) -> bool:
    return isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    if isinstance(value, list):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


def _emit(args, payload, raw: str | None = None):
    if raw is None:
        if getattr(args, "format", "json") == "text":
            raw = "\n".join(_format_text(payload)) + "\n"
        else:
            raw = json.dumps(payload, indent=2) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(raw)
    else:
        sys.stdout.write(raw)


def cmd_build(args):
    g = build_graph(_spec(args))
    _emit(args, None, format_edge_list(g))
    return 0


def cmd_slem(args):
    spec = _spec(args)
    p = chain.assemble(spec, resolve_probs(spec, args.probs))
    spectrum = chain.spectrum(p)
    _emit(args, {
        "spec": spec.to_dict(),
        "probs": list(p.probs),
        "slem": chain.slem(p),
        "spectrum": spectrum.tolist(),
    })
    return 0


def cmd_optimal(args):
    _emit(args, optimal.optimal_probabilities(_spec(args)).to_dict())
    return 0


def cmd_mh(args):
    spec = _spec(args)
    probs = chain.metropolis_hastings(build_graph(spec))
    _emit(args, {"spec": spec.to_dict(), "probs": list(probs)})
    return 0


def cmd_certify(args):
    cert = optimal.dual_certificate(args.k, args.n)
    _emit(args, cert.to_dict())
    return 0 if cert.valid else EXIT_CERTIFICATE


def cmd_stratify(args):
    spec = _spec(args)
    report = stratify.verify_spectrum_partition(spec, resolve_probs(spec, args.probs))
    _emit(args, report.to_dict())
    return 0


def cmd_optimize(args):
    spec = _spec(args)
    cfg = numsolve.SolveConfig(
        tol=args.tol,
        max_evals=args.max_evals,
        restarts=args.restarts,
        seed=args.seed,
        warm_start=not args.cold,
    )
    result = numsolve.minimize_slem(spec, cfg)
    payload = result.to_dict()
    closed = optimal.optimal_probabilities(spec)
    payload["closed_form"] = {"probs": list(closed.probs), "slem": closed.slem, "feasible": closed.feasible}
    _emit(args, payload)
    return 0 if result.converged else EXIT_NONCONVERGED


def _trial_config(args) -> mixsim.TrialConfig:
    return mixsim.TrialConfig(
        trials=args.trials, iterations=args.iters, seed=args.seed, init=args.init, aggregate=args.aggregate
    )


def cmd_simulate(args):
    spec = _spec(args)
    p = chain.assemble(spec, resolve_probs(spec, args.probs))
    trace = mixsim.simulate(p, _trial_config(args))
    if trace.redraws:
        print(f"note: {trace.redraws} degenerate initial vectors were redrawn", file=sys.stderr)
    _emit(args, None, trace.to_csv())
    return 0


def cmd_compare(args):
    try:
        doc = json.loads(Path(args.specs).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read specs file: {exc}") from None
    entries = doc["traces"] if isinstance(doc, dict) else doc
    defaults = doc if isinstance(doc, dict) else {}
    cfg = mixsim.TrialConfig(
        trials=int(defaults.get("trials", args.trials)),
        iterations=int(defaults.get("iterations", args.iters)),
        seed=int(defaults.get("seed", args.seed)),
        init=defaults.get("init", "uniform"),
        aggregate=defaults.get("aggregate", "arithmetic"),
    )
    traces, labels = [], []
    for i, entry in enumerate(entries):
        spec = make_spec(entry["family"], entry["k"], entry["n"], entry.get("pattern"))
        probs = entry.get("probs", "optimal")
        if isinstance(probs, list):
            probs = ",".join(str(v) for v in probs)
        p = chain.assemble(spec, resolve_probs(spec, str(probs)))
        traces.append(mixsim.simulate(p, cfg))
        labels.append(entry.get("label", f"trace-{i}"))
    report = mixsim.compare(
        traces,
        labels,
        window=int(defaults.get("window", args.window)),
        rate_tol=float(defaults.get("rate_tol", 0.02)),
    )
    if args.long_csv:
        Path(args.long_csv).write_text(mixsim.long_format_csv(traces, labels))
    _emit(args, report.to_dict())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kppdr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="print the edge list of a network")
    _add_spec_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("slem", help="SLEM and spectrum for given orbit probabilities")
    _add_spec_args(p)
    p.add_argument("--probs", required=True)
    _add_output_args(p)
    p.set_defaults(func=cmd_slem)

    p = sub.add_parser("optimal", help="closed-form optimal probabilities")
    _add_spec_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("mh", help="Metropolis-Hastings orbit probabilities")
    _add_spec_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_mh)

    p = sub.add_parser("certify", help="dual optimality certificate (symmetric family)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_output_args(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("stratify", help="block decomposition report")
    _add_spec_args(p)
    p.add_argument("--probs", required=True)
    _add_output_args(p)
    p.set_defaults(func=cmd_stratify)

    p = sub.add_parser("optimize", help="numerical SLEM minimization")
    _add_spec_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--max-evals", type=int, default=20000)
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--cold", action="store_true", help="do not start from the closed form")
    _add_output_args(p)
    p.set_defaults(func=cmd_optimize)

    for name, func in (("simulate", cmd_simulate), ("compare", cmd_compare)):
        p = sub.add_parser(name, help="mixing trace CSV" if name == "simulate" else "compare mixing traces")
        if name == "simulate":
            _add_spec_args(p)
            p.add_argument("--probs", default="optimal")
        else:
            p.add_argument("--specs", required=True, help="JSON file describing the traces")
            p.add_argument("--window", type=int, default=50)
            p.add_argument("--long-csv", default=None, help="also write label,iteration,distance CSV")
        p.add_argument("--trials", type=int, default=200)
        p.add_argument("--iters", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--init", choices=("uniform", "point-mass"), default="uniform")
        p.add_argument("--aggregate", choices=("arithmetic", "geometric"), default="arithmetic")
        _add_output_args(p)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, TopologyError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except chain.InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except EigenConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
