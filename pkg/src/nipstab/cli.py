"""Command line entry point: ``nipstab {suite,bounds,axioms,induce,stability,generate}``."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import ConfigError, DivergenceError, NipstabError
from .harness.config import (ExperimentConfig, default_suite_text, load_config, parse_config,
                             validate_experiment)
from .harness.experiments import generate_instance, run_experiment
from .harness.suite import run_suite
from .stability import Scheme
from .stability.control import closed_form_bound


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _print_checks(result, as_json: bool) -> int:
    checks = result.checks()
    if as_json:
        print(json.dumps({"experiment_id": result.config.experiment_id,
                          "verdict": "pass" if result.passed else "fail",
                          "checks": checks, "details": result.summary}, indent=2))
    else:
        print(f"{'check':<22} {'samples':>7} {'fail':>5} {'max_defect':>12}  verdict")
        for name, c in checks.items():
            print(f"{name:<22} {c['samples']:>7} {c['failures']:>5} "
                  f"{c['max_defect']:>12.4e}  {c['verdict']}")
        print(f"overall: {'pass' if result.passed else 'fail'} ({result.runtime:.2f} s)")
    return 0 if result.passed else 1


def _run_single(exp: ExperimentConfig, as_json: bool) -> int:
    try:
        validate_experiment(exp)
    except ConfigError as err:
        key, msg = err.args
        print(f"error: --{key}: {msg}", file=sys.stderr)
        return 2
    return _print_checks(run_experiment(exp), as_json)


def cmd_suite(args) -> int:
    try:
        suite = load_config(args.config) if args.config else parse_config(default_suite_text())
    except ConfigError as err:
        print(f"{args.config or '<default suite>'}: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if args.threads is not None:
        suite.threads = args.threads
    report = run_suite(suite, args.out)
    for res in report.results:
        fails = sum(not r.passed for r in res.rows)
        print(f"{res.config.experiment_id:<28} {'pass' if res.passed else 'FAIL':<5} "
              f"rows={len(res.rows):<7} failures={fails:<5} {res.runtime:6.2f} s")
    print(f"suite: {'pass' if report.passed else 'FAIL'}; outputs in {args.out}")
    return report.exit_code


def cmd_bounds(args) -> int:
    schemes = [Scheme.parse(s) for s in args.scheme.split(",")]
    print(f"{'scheme':<17} {'order':>5} {'theta':>8} {'p':>8} {'constant':>22} "
          f"{'bound(|x|=' + format(args.norm, 'g') + ')':>22}")
    status = 0
    for scheme in schemes:
        for order in _ints(args.order):
            for theta in _floats(args.theta):
                for p in _floats(args.p):
                    head = f"{scheme.value:<17} {order:>5} {theta:>8g} {p:>8g}"
                    try:
                        scheme.check_p(p, order)
                        const = closed_form_bound(scheme, 1.0, p, 1.0, order)
                        bound = closed_form_bound(scheme, theta, p, args.norm, order)
                    except DivergenceError as err:
                        print(f"{head}  diverges: {err}")
                        status = 1
                        continue
                    print(f"{head} {const:>22.15g} {bound:>22.15g}")
    return status


def cmd_axioms(args) -> int:
    exp = ExperimentConfig("cli_axioms", "axioms", n=args.n, dim_X=args.dim,
                           samples=args.samples, seed=args.seed, tol=args.tol)
    return _run_single(exp, args.json)


def cmd_induce(args) -> int:
    exp = ExperimentConfig("cli_induce", "induce", n=args.n, dim_X=args.dim,
                           samples=args.samples, seed=args.seed, tol=args.tol,
                           anchors=args.anchors, k=args.k, max_condition=args.max_condition)
    return _run_single(exp, args.json)


def cmd_stability(args) -> int:
    kind = "stability_nip" if args.n else "stability_hilbert"
    exp = ExperimentConfig(
        "cli_stability", kind, scheme=args.scheme, theta=args.theta, p=args.p,
        n=args.n or 2, dim_X=args.dim_x, dim_Y=args.dim_y, seed=args.seed, l_max=args.l_max,
        samples=args.samples, maps=args.maps, tol=args.tol, complement=args.complement)
    return _run_single(exp, args.json)


def cmd_generate(args) -> int:
    params = {}
    for item in args.param:
        key, _, value = item.partition("=")
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    try:
        sys.stdout.write(generate_instance(args.kind, args.seed, params).decode() + "\n")
    except (ConfigError, DivergenceError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nipstab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"nipstab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("suite", help="run a JSON experiment suite")
    p.add_argument("--config", help="suite JSON (default: the shipped suite)")
    p.add_argument("--out", default="report", help="output directory")
    p.add_argument("--threads", type=int, help="override the config thread count")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("bounds", help="print closed-form bound tables")
    p.add_argument("--theta", default="1", help="comma separated list")
    p.add_argument("--p", default="0.5", help="comma separated list")
    p.add_argument("--scheme", default="doubling,jensen_tripling,jensen_shrinking")
    p.add_argument("--order", default="1", help="1 for inner products, n for n-inner products")
    p.add_argument("--norm", type=float, default=1.0, help="|x| at which to evaluate the bound")
    p.set_defaults(func=cmd_bounds)

    def common(p, samples, tol):
        p.add_argument("--samples", type=int, default=samples)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=tol)
        p.add_argument("--json", action="store_true", help="print the full result as JSON")

    p = sub.add_parser("axioms", help="certify the Gram n-inner product axioms")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--dim", type=int, default=3)
    common(p, 200, 1e-9)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("induce", help="check an induced inner product")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--anchors", choices=("random", "orthonormal"), default="random")
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--max-condition", type=float, default=1e6)
    common(p, 200, 1e-9)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("stability", help="run the direct method on perturbed maps")
    p.add_argument("--scheme", default="doubling")
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--n", type=int, default=0, help="n >= 2 for n-inner products, 0 for plain")
    p.add_argument("--dim-x", type=int, default=3)
    p.add_argument("--dim-y", type=int)
    p.add_argument("--l-max", type=int)
    p.add_argument("--maps", type=int, default=1)
    p.add_argument("--complement", action="store_true")
    common(p, 100, 1e-6)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("generate", help="print a seeded instance as JSON")
    p.add_argument("--kind", required=True,
                   choices=("axioms", "induce", "stability_hilbert", "stability_nip"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NipstabError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
