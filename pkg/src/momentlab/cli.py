"""Command-line entry point: ``momentlab <command> [flags]``."""
from __future__ import annotations

import argparse
import sys

from .experiments import SUITES, run
from .report import (COMMANDS, FORMATS, PRECISIONS, ConfigError, RunConfig, emit, finalize,
                     threads_from_env)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(2)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _ell_pairs(text: str) -> tuple[tuple[int, int], ...]:
    """'1,1' or '1,1;2,3' -> ((1, 1), (2, 3))."""
    pairs = []
    for chunk in text.split(";"):
        vals = _int_list(chunk)
        if len(vals) != 2:
            raise argparse.ArgumentTypeError(f"an ell pair needs two integers, got {chunk!r}")
        pairs.append(vals)
    return tuple(pairs)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="momentlab", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--q", type=_int_list, default=None,
                   help="comma-separated primes (default 101; 101,...,2003 for moment-ladder)")
    p.add_argument("--ell", type=_ell_pairs, default=((1, 1),),
                   help="ell1,ell2 pairs separated by ';'")
    p.add_argument("--lambda", dest="lam", type=float, default=1e-3)
    p.add_argument("--pmax", type=int, default=10**6)
    p.add_argument("--threads", type=int, default=None,
                   help="worker count (falls back to MOMENT_LAB_THREADS, then 1)")
    p.add_argument("--precision", choices=PRECISIONS, default="double")
    p.add_argument("--format", dest="output", choices=FORMATS, default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", default="", help=f"identity suites, any of {','.join(SUITES)}")
    p.add_argument("--timing", action="store_true", help="record wall time in the report")
    return p


LADDER_Q = (101, 211, 499, 1009, 2003)


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    suites = tuple(x for x in args.suite.split(",") if x)
    unknown = [x for x in suites if x not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
    q_list = args.q or (LADDER_Q if args.command == "moment-ladder" else (101,))
    cfg = RunConfig(command=args.command, q_list=q_list, ell_pairs=args.ell, lam=args.lam,
                    p_max=args.pmax, precision=args.precision,
                    threads=threads_from_env(args.threads), output=args.output,
                    seed=args.seed, suites=suites, timing=args.timing)
    return cfg.validate()


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except ConfigError as exc:
        print(f"momentlab: error: {exc}", file=sys.stderr)
        return 2
    # the non-finite guard may add failures, so the exit status is read after it
    report = finalize(run(cfg))
    sys.stdout.write(emit(report, cfg.output))
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
