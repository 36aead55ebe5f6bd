"""Command-line front end.

Subcommands: cdf, rate, mink, mc, validate, report. Data commands print CSV
or JSON to stdout or --output; report renders the figure set to a directory
with the data files alongside. A config file (key = value per line, keys
mirroring the long flags) supplies defaults; explicit flags win.

Exit codes: 0 success, 2 validation error, 3 numerical non-convergence,
4 oracle-validation failure.
"""
import argparse
import os
import sys
from typing import Dict, List, Optional, Tuple

from .errors import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    OracleValidationError,
)
from .model import Scheme
from .sweeps import (
    CDF_COLUMNS,
    MINK_COLUMNS,
    RATE_COLUMNS,
    SweepSpec,
    render,
    run_cdf,
    run_mink,
    run_rate,
)
from . import validation

_BOOL_DESTS = {"with_quadrature", "tail_ok", "no_mc"}
_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}


def _parse_float_grid(text: str) -> Tuple[float, ...]:
    """Scalar, comma list, or inclusive start:stop:step range."""
    text = text.strip()
    try:
        if ":" in text:
            start_s, stop_s, step_s = text.split(":")
            start, stop, step = float(start_s), float(stop_s), float(step_s)
            if step <= 0:
                raise DomainError(f"grid step must be positive, got {step!r}")
            if stop < start:
                raise DomainError(f"grid stop {stop!r} below start {start!r}")
            count = int((stop - start) / step + 1e-9) + 1
            return tuple(start + i * step for i in range(count))
        if "," in text:
            return tuple(float(part) for part in text.split(",") if part.strip())
        return (float(text),)
    except ValueError as exc:
        raise DomainError(f"cannot parse grid {text!r}: {exc}") from None


def _parse_int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise DomainError(f"cannot parse integer list {text!r}: {exc}") from None


def _parse_schemes(text: str) -> Tuple[Scheme, ...]:
    seen: List[Scheme] = []
    for part in text.split(","):
        if part.strip():
            scheme = Scheme.parse(part)
            if scheme not in seen:
                seen.append(scheme)
    if not seen:
        raise DomainError("no scheme given")
    return tuple(seen)


def _default_workers() -> int:
    env = os.environ.get("COOPSIR_WORKERS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise DomainError(f"COOPSIR_WORKERS must be an integer, got {env!r}") from None
        if value < 1:
            raise DomainError(f"COOPSIR_WORKERS must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def _add_shared_flags(p: argparse.ArgumentParser, schemes: str) -> None:
    p.add_argument("--scheme", default=schemes,
                   help="comma list of: full, silencing, mrt")
    p.add_argument("--eta", type=int, default=10, help="number of neighboring RRHs")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--k", type=int, default=None, help="single cooperation level")
    group.add_argument("--k-list", default=None, help="comma list of cooperation levels")
    p.add_argument("--delta", type=float, default=0.5, help="distance ratio d0/dj in (0,1]")
    p.add_argument("--alpha", type=float, default=3.5, help="path-loss exponent > 2")
    p.add_argument("--seed", type=int, default=0, help="unsigned 64-bit Monte Carlo seed")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None, help="output file (default stdout)")
    p.add_argument("--config", default=None, help="key = value defaults file")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel sampling processes (default: COOPSIR_WORKERS or all cores)")


def build_parser() -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="coopsir",
        description="Outage, reliability, rate and cooperation planning for a "
                    "downlink user served by coordinated radio heads.")
    subs = parser.add_subparsers(dest="command", required=True)
    by_name = {}

    p = subs.add_parser("cdf", help="closed-form outage sweep, optionally with oracles")
    _add_shared_flags(p, schemes="full,silencing,mrt")
    p.add_argument("--theta-db", default="-10:30:2",
                   help="threshold grid in dB: scalar, comma list, or start:stop:step")
    p.add_argument("--mc-samples", type=int, default=None,
                   help="add Monte Carlo columns with this many draws")
    p.add_argument("--with-quadrature", action="store_true",
                   help="add the quadrature oracle column")
    p.add_argument("--tail-ok", action="store_true",
                   help="sample even where outage is below the MC resolution floor")
    by_name["cdf"] = p

    p = subs.add_parser("mc", help="Monte Carlo estimate next to the closed form")
    _add_shared_flags(p, schemes="full,silencing,mrt")
    p.add_argument("--theta-db", default="-10:30:2")
    p.add_argument("--mc-samples", type=int, default=10 ** 6)
    p.add_argument("--with-quadrature", action="store_true")
    p.add_argument("--tail-ok", action="store_true")
    by_name["mc"] = p

    p = subs.add_parser("rate", help="rate meeting a reliability constraint, per k")
    _add_shared_flags(p, schemes="silencing,mrt")
    p.add_argument("--epsilon", default=None, help="single constraint level")
    p.add_argument("--epsilon-list", default="1e-5",
                   help="comma list of constraint levels")
    by_name["rate"] = p

    p = subs.add_parser("mink", help="minimum cooperating RRHs meeting an outage budget")
    _add_shared_flags(p, schemes="silencing,mrt")
    p.add_argument("--theta-db", default="0.3")
    p.add_argument("--epsilon", default=None)
    p.add_argument("--epsilon-list", default="1e-1,1e-2,1e-3,1e-4,1e-5,1e-6,1e-7")
    by_name["mink"] = p

    p = subs.add_parser("validate", help="run the versioned oracle self-check grid")
    p.add_argument("--mc-samples", type=int, default=validation.DEFAULT_MC_SAMPLES)
    p.add_argument("--seed", type=int, default=validation.DEFAULT_VALIDATION_SEED)
    p.add_argument("--no-mc", action="store_true",
                   help="quadrature and identity checks only (development aid)")
    p.add_argument("--config", default=None)
    p.add_argument("--workers", type=int, default=None)
    by_name["validate"] = p

    p = subs.add_parser("report", help="render the figure set with data files alongside")
    p.add_argument("--output", default="report", help="target directory")
    p.add_argument("--mc-samples", type=int, default=None,
                   help="overlay Monte Carlo points on the outage figure")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None)
    p.add_argument("--workers", type=int, default=None)
    by_name["report"] = p

    return parser, by_name


def _config_defaults(path: str, sub: argparse.ArgumentParser) -> Dict[str, object]:
    known = {a.dest for a in sub._actions if a.dest not in ("help", "config")}
    overrides: Dict[str, object] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DomainError(f"cannot read config {path!r}: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        dest = key.strip().lower().replace("-", "_")
        value = value.strip()
        if dest not in known:
            raise DomainError(f"{path}:{lineno}: unknown key {key.strip()!r}")
        if dest in _BOOL_DESTS:
            low = value.lower()
            if low in _TRUE_WORDS:
                overrides[dest] = True
            elif low in _FALSE_WORDS:
                overrides[dest] = False
            else:
                raise DomainError(f"{path}:{lineno}: boolean key {key.strip()!r} "
                                  f"takes true/false, got {value!r}")
        else:
            overrides[dest] = value
    return overrides


def _spec_from_args(args, need_theta: bool, need_epsilon: bool,
                    force_k0: bool = False) -> SweepSpec:
    if args.k is not None and args.k_list is not None:
        raise DomainError("--k and --k-list are mutually exclusive")
    if force_k0:
        k_list: Tuple[int, ...] = (0,)
    elif args.k is not None:
        k_list = (args.k,)
    elif args.k_list is not None:
        k_list = _parse_int_list(args.k_list)
    elif need_epsilon and not need_theta:
        k_list = tuple(range(args.eta))  # every level both schemes support
    else:
        k_list = (0,)
    thetas = _parse_float_grid(args.theta_db) if need_theta else ()
    if need_epsilon:
        if getattr(args, "epsilon", None) is not None:
            epsilons = _parse_float_grid(args.epsilon)
        else:
            epsilons = _parse_float_grid(args.epsilon_list)
    else:
        epsilons = ()
    return SweepSpec(
        schemes=_parse_schemes(args.scheme),
        eta=args.eta,
        k_list=k_list,
        delta=args.delta,
        alpha=args.alpha,
        theta_db_values=thetas,
        epsilon_values=epsilons,
        mc_samples=getattr(args, "mc_samples", None),
        seed=args.seed,
        with_quadrature=getattr(args, "with_quadrature", False),
        workers=args.workers if args.workers is not None else _default_workers(),
        allow_deep_tails=getattr(args, "tail_ok", False),
    )


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_cdf(args) -> int:
    spec = _spec_from_args(args, need_theta=True, need_epsilon=False)
    rows = run_cdf(spec)
    _emit(render(rows, CDF_COLUMNS, args.format, "cdf"), args.output)
    return 0


def cmd_rate(args) -> int:
    spec = _spec_from_args(args, need_theta=False, need_epsilon=True)
    rows = run_rate(spec)
    _emit(render(rows, RATE_COLUMNS, args.format, "rate"), args.output)
    return 0


def cmd_mink(args) -> int:
    # the search ranges over k itself, so the spec's k list is irrelevant here
    spec = _spec_from_args(args, need_theta=True, need_epsilon=True, force_k0=True)
    rows = run_mink(spec)
    _emit(render(rows, MINK_COLUMNS, args.format, "mink"), args.output)
    return 0


def cmd_validate(args) -> int:
    workers = args.workers if args.workers is not None else _default_workers()
    mc_samples = None if args.no_mc else args.mc_samples
    report = validation.run_self_check(mc_samples=mc_samples, seed=args.seed,
                                       workers=workers)
    for line in report.format_lines():
        print(line)
    return 0 if report.passed else 4


def cmd_report(args) -> int:
    from . import figures  # matplotlib import deferred to the one path that needs it

    workers = args.workers if args.workers is not None else _default_workers()
    written = figures.render_report(args.output, mc_samples=args.mc_samples,
                                    seed=args.seed, workers=workers)
    for path in written:
        print(path)
    return 0


# flags whose values may start with a minus sign ("-10:30:2"); argparse only
# recognizes bare negative numbers, so fold these into --flag=value form
_LEADING_MINUS_FLAGS = ("--theta-db", "--epsilon", "--epsilon-list", "--k-list")


def _fold_negative_values(argv: List[str]) -> List[str]:
    folded = []
    i = 0
    while i < len(argv):
        token = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (token in _LEADING_MINUS_FLAGS and nxt is not None
                and nxt.startswith("-") and len(nxt) > 1
                and (nxt[1].isdigit() or nxt[1] == ".")):
            folded.append(f"{token}={nxt}")
            i += 2
        else:
            folded.append(token)
            i += 1
    return folded


def main(argv=None) -> int:
    argv = _fold_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        parser, by_name = build_parser()
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            overrides = _config_defaults(args.config, by_name[args.command])
            parser, by_name = build_parser()
            by_name[args.command].set_defaults(**overrides)
            args = parser.parse_args(argv)
        handler = {
            "cdf": cmd_cdf,
            "mc": cmd_cdf,
            "rate": cmd_rate,
            "mink": cmd_mink,
            "validate": cmd_validate,
            "report": cmd_report,
        }[args.command]
        return handler(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OracleValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
