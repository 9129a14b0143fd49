"""Brute fourth moments against the predicted main term over a ladder of primes.

Usage: python3 scripts/moment_ladder.py [--ell 1,1] [--q 101,211,...] [--method bluestein]
"""
import argparse

from momentlab.cli import LADDER_Q
from momentlab.oracles import moment_report


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--ell", action="append", default=None,
                   help="ell1,ell2 (repeatable; default 1,1)")
    p.add_argument("--q", default=",".join(map(str, LADDER_Q)))
    p.add_argument("--method", choices=("naive", "bluestein"), default="bluestein")
    args = p.parse_args()
    pairs = [tuple(int(x) for x in e.split(",")) for e in (args.ell or ["1,1"])]
    qs = [int(x) for x in args.q.split(",")]
    print(f"{'ell':>7} {'q':>6} {'brute':>12} {'predicted':>12} {'diag':>12} {'offdiag':>12} "
          f"{'rel_err':>9} {'ms':>6}")
    for e1, e2 in pairs:
        for q in qs:
            r = moment_report(q, e1, e2, method=args.method)
            b = r.predicted
            diag = (b.diag_even + b.diag_odd) / 2
            off = (b.offdiag_even + b.offdiag_odd) / 2
            print(f"{e1:>3},{e2:<3} {q:>6} {r.brute_value:12.6f} {b.total:12.6f} {diag:12.6f} "
                  f"{off:12.6f} {r.rel_error:9.4f} {r.wall_time_ms:6d}")


if __name__ == "__main__":
    main()
