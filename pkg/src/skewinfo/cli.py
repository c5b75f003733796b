"""Command-line front end.

Exit codes: 0 success, 1 failing checks, 2 parse or flag error,
3 validation error, 4 singular metric.
"""

import argparse
import json
import sys

from . import __version__
from .checker import TrialConfig, run_suite, CHECKS, FIXTURES
from .io import load_matrix, MatrixFormatError, report_to_json, write_report
from .linalg import as_density, as_hermitian, variance, ValidationError, DomainError
from .metrics import DEFAULT_METRICS, get_metric, UnsupportedParameterError, SingularMetricError
from .search import violation_search, CONSTRAINTS
from .skew import skew_information

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_SINGULAR = 4


class UsageError(Exception):
    pass


def _fmt(x):
    """Twelve significant digits, trailing zeros kept."""
    return f"{x:#.12g}"


def parse_dims(text):
    """``"2,3,2x2"`` -> ``[2, 3, (2, 2)]``."""
    out = []
    for item in str(text).split(","):
        item = item.strip().lower()
        try:
            if "x" in item:
                parts = item.split("x")
                if len(parts) != 2:
                    raise ValueError
                pair = (int(parts[0]), int(parts[1]))
                if min(pair) < 1:
                    raise ValueError
                out.append(pair)
            else:
                n = int(item)
                if n < 1:
                    raise ValueError
                out.append(n)
        except ValueError:
            raise UsageError(f"malformed dims entry {item!r}; use e.g. 2,3,2x2") from None
    return out


def _parse_pair(text):
    dims = parse_dims(text)
    if len(dims) != 1 or not isinstance(dims[0], tuple):
        raise UsageError(f"expected bipartite dims like 2x2, got {text!r}")
    return dims[0]


def _parse_metrics(text):
    ids = [m.strip() for m in str(text).split(",") if m.strip()]
    if not ids:
        raise UsageError("empty metric list")
    try:
        return tuple(get_metric(m).id for m in ids)
    except UnsupportedParameterError as exc:
        raise UsageError(str(exc)) from None


def _load_pair(state_path, observable_path):
    rho = as_density(load_matrix(state_path))
    a = as_hermitian(load_matrix(observable_path))
    if a.shape != rho.shape:
        raise ValidationError(f"state is {rho.shape[0]}-dimensional, observable {a.shape[0]}")
    return rho, a


def cmd_skew(args):
    try:
        spec = get_metric(args.metric)
    except UnsupportedParameterError as exc:
        raise UsageError(str(exc)) from None
    rho, a = _load_pair(args.state, args.observable)
    print(_fmt(skew_information(rho, a, spec).value))
    return EXIT_OK


def cmd_variance(args):
    rho, a = _load_pair(args.state, args.observable)
    print(_fmt(variance(rho, a)))
    return EXIT_OK


def _check_config(args):
    kw = {"seed": args.seed, "trials_per_check": args.trials}
    if args.dims is not None:
        dims = parse_dims(args.dims)
        kw["single_dims"] = tuple(d for d in dims if isinstance(d, int))
        kw["pair_dims"] = tuple(d for d in dims if isinstance(d, tuple))
    if args.metrics is not None:
        kw["metric_ids"] = _parse_metrics(args.metrics)
    if args.checks is not None:
        kw["checks"] = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    if args.fixtures is not None:
        kw["fixtures"] = tuple(c.strip() for c in args.fixtures.split(",") if c.strip())
    try:
        return TrialConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_check(args):
    cfg = _check_config(args)
    reports = run_suite(cfg)
    failing = [r for r in reports if not r.passed]
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.check_id} {r.metric_id} {r.dims} "
              f"failures={r.failures}/{r.trials} worst={r.worst_residual:.12g}"
              + ("" if r.passed else f" replay_seed={r.worst_case_seed}"))
    print(f"{len(reports) - len(failing)}/{len(reports)} checks passed")
    if args.out:
        write_report(args.out, report_to_json(cfg, reports))
    return EXIT_FAILURES if failing else EXIT_OK


def cmd_search(args):
    try:
        spec = get_metric(args.metric)
    except UnsupportedParameterError as exc:
        raise UsageError(str(exc)) from None
    dims = _parse_pair(args.dims)
    if not args.budget >= args.restarts >= 1:
        raise UsageError("need budget >= restarts >= 1")
    result = violation_search(spec.id, dims, budget=args.budget, seed=args.seed,
                              restarts=args.restarts, constrain=args.constrain)
    print(f"metric={result.metric_id} dims={dims[0]}x{dims[1]} constrain={result.constrain}")
    print(f"best_gap={_fmt(result.best_gap)}")
    rg = "n/a" if result.reverified_gap is None else _fmt(result.reverified_gap)
    print(f"reverified={str(result.reverified).lower()} reverified_gap={rg}")
    print(f"evaluations={result.evaluations} violation_found={str(result.violation_found).lower()}")
    if args.out:
        doc = {
            "config": {"metric": result.metric_id, "dims": list(dims), "budget": args.budget,
                       "seed": args.seed, "restarts": args.restarts,
                       "constrain": args.constrain},
            "result": result.to_dict(),
            "version": __version__,
        }
        write_report(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_zoo(args):
    print(f"{'id':<12} {'class':<12} m(c)")
    for spec in (get_metric(m) for m in DEFAULT_METRICS):
        m = spec.metric_constant
        print(f"{spec.id:<12} {'regular' if spec.regular else 'non-regular':<12} "
              f"{'-' if m is None else f'{m:.12g}'}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="skewinfo", description="Metric adjusted skew information toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn, text in (("skew", cmd_skew, "skew information of an observable in a state"),
                           ("variance", cmd_variance, "variance of an observable in a state")):
        s = sub.add_parser(name, help=text)
        s.add_argument("state", help="matrix file of the density matrix")
        s.add_argument("observable", help="matrix file of the observable")
        if name == "skew":
            s.add_argument("--metric", default="wyd:0.5", help="catalog id (default wyd:0.5)")
        s.set_defaults(func=fn)

    c = sub.add_parser("check", help="run the property suite")
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--trials", type=int, default=500)
    c.add_argument("--dims", help="comma list, e.g. 2,3,4,2x2,2x3")
    c.add_argument("--metrics", help="comma list of catalog ids")
    c.add_argument("--checks", help=f"comma list from: {', '.join(CHECKS)}")
    c.add_argument("--fixtures", help=f"known non-monotone functions to include, from: "
                                      f"{', '.join(FIXTURES)} (these are expected to fail)")
    c.add_argument("--out", help="write a JSON report here")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("search", help="search for negative superadditivity gaps")
    s.add_argument("--metric", default="wyd:0.5")
    s.add_argument("--dims", default="2x2")
    s.add_argument("--budget", type=int, default=20000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=4)
    s.add_argument("--constrain", choices=CONSTRAINTS, default="none")
    s.add_argument("--out", help="write a JSON report here")
    s.set_defaults(func=cmd_search)

    z = sub.add_parser("zoo", help="list the metric catalog")
    z.set_defaults(func=cmd_zoo)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatrixFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularMetricError as exc:
        print(f"singular metric: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (ValidationError, DomainError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
