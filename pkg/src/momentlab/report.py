"""Run configuration and machine-readable reports."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .arith import is_probable_prime

SCHEMA_VERSION = "1"
COMMANDS = ("identities", "main-terms", "moment-ladder", "mollified", "constants",
            "voronoi", "exp-sums")
FORMATS = ("json", "csv", "pretty")
PRECISIONS = ("double", "extended")
THREADS_ENV = "MOMENT_LAB_THREADS"


class ConfigError(ValueError):
    """All validation problems of a RunConfig, joined into one message."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    q_list: tuple[int, ...] = (101,)
    ell_pairs: tuple[tuple[int, int], ...] = ((1, 1),)
    lam: float = 1e-3
    p_max: int = 10**6
    precision: str = "double"
    threads: int = 1
    output: str = "json"
    seed: int = 0
    suites: tuple[str, ...] = ()
    timing: bool = False

    def problems(self) -> list[str]:
        out = []
        if self.command not in COMMANDS:
            out.append(f"unknown command {self.command!r}")
        for q in self.q_list:
            if q < 3 or not is_probable_prime(q):
                out.append(f"q={q} is not an odd prime")
        for e1, e2 in self.ell_pairs:
            if e1 < 1 or e2 < 1:
                out.append(f"ell pair ({e1},{e2}) must be positive")
            elif math.gcd(e1, e2) != 1:
                out.append(f"ell pair ({e1},{e2}) is not coprime")
            for q in self.q_list:
                if (e1 * e2) % q == 0:
                    out.append(f"ell pair ({e1},{e2}) is not coprime to q={q}")
        if not (self.lam > 0 and math.isfinite(self.lam)):
            out.append("lambda must be a positive number")
        if self.p_max < 100:
            out.append("pmax must be at least 100")
        if self.precision not in PRECISIONS:
            out.append(f"unknown precision {self.precision!r}")
        elif self.precision == "extended":
            out.append("extended precision is not available in this build")
        if self.threads < 1:
            out.append("threads must be at least 1")
        if self.output not in FORMATS:
            out.append(f"unknown format {self.output!r}")
        if self.seed < 0:
            out.append("seed must be non-negative")
        return out

    def validate(self) -> "RunConfig":
        problems = self.problems()
        if problems:
            raise ConfigError("; ".join(problems))
        return self

    def echo(self) -> dict:
        d = asdict(self)
        d["q_list"] = list(self.q_list)
        d["ell_pairs"] = [list(p) for p in self.ell_pairs]
        d["suites"] = list(self.suites)
        return d


def threads_from_env(flag: int | None) -> int:
    if flag is not None:
        return flag
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer") from exc


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    config_echo: dict
    results: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    version: str = SCHEMA_VERSION

    @property
    def exit_status(self) -> int:
        return 0 if not self.failures else 1

    def to_dict(self) -> dict:
        return {"version": self.version, "config_echo": self.config_echo,
                "results": self.results, "failures": self.failures, "timing": self.timing}

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(config_echo=d["config_echo"], results=d["results"], failures=d["failures"],
                   timing=d["timing"], version=d["version"])


def _clean(value, where: str, failures: list[dict]):
    """Plain JSON data; non-finite floats become None plus a failure entry."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    if isinstance(value, float):
        if not math.isfinite(value):
            failures.append({"kind": "non_finite", "where": where, "detail": repr(value)})
            return None
        return value
    if isinstance(value, complex):
        return _clean(value.real, where, failures)
    if isinstance(value, dict):
        return {str(k): _clean(v, f"{where}.{k}", failures) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v, f"{where}[{i}]", failures) for i, v in enumerate(value)]
    if hasattr(value, "item"):  # numpy scalars
        return _clean(value.item(), where, failures)
    if hasattr(value, "tolist"):
        return _clean(value.tolist(), where, failures)
    raise TypeError(f"cannot serialise {type(value).__name__} at {where}")


def finalize(report: Report) -> Report:
    """Apply the non-finite guard; the returned report is plain JSON data."""
    failures = [dict(f) for f in report.failures]
    results = [_clean(r, f"results[{i}]", failures) for i, r in enumerate(report.results)]
    timing = _clean(report.timing, "timing", failures)
    return Report(config_echo=_clean(report.config_echo, "config_echo", failures),
                  results=results, failures=failures, timing=timing, version=report.version)


def _fmt(v) -> str:
    if isinstance(v, float):
        return "%.17g" % v
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"), sort_keys=True)
    return str(v)


def _columns(rows: list[dict]) -> list[str]:
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def emit(report: Report, fmt: str = "json") -> str:
    report = finalize(report)
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=False, allow_nan=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        cols = _columns(report.results)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for r in report.results:
            writer.writerow([_fmt(r.get(c)) for c in cols])
        return buf.getvalue()
    if fmt == "pretty":
        cols = _columns(report.results)
        cells = [[_short(r.get(c)) for c in cols] for r in report.results]
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
        lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)) for row in cells]
        if report.failures:
            lines.append(f"{len(report.failures)} failure(s):")
            lines += [f"  {json.dumps(f, sort_keys=True)}" for f in report.failures]
        if report.timing:
            lines.append("timing: " + json.dumps(report.timing, sort_keys=True))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _short(v) -> str:
    if isinstance(v, float):
        return "%.10g" % v
    return _fmt(v)
