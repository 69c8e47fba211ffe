"""Command-line front end: figure sweeps as CSV, state reports, self-test.

Examples
--------
    gaussqfi fig1a --mu 0.1111111111 --steps 101 --out fig1a.csv
    gaussqfi fig1b --m 0.3,0.4,0.5
    gaussqfi fig3 --N 3 --m 0.4 --phi 0 --steps 181 --jobs 4
    gaussqfi report --N 1 --m 0.6
    gaussqfi selftest --json

Exit codes: 0 success, 1 failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .correlation import correlation_report, q2_closed
from .metrology import metrology_point
from .states import (
    STSParams,
    is_entangled,
    log_negativity,
    make_sts,
    sts_parameters,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "fig1a": {"mu": 1 / 9, "m_max": 1.0, "steps": 101},
    "fig1b": {"m": "0.3,0.4,0.5", "steps": 100},
    "fig3": {"N": 3.0, "m": 0.4, "phi": 0.0, "steps": 181},
    "report": {"N": 3.0, "m": 0.4, "threshold": 0.5},
    "selftest": {},
}
COMMON = {"jobs": 1, "out": None}
_TYPES = {"mu": float, "m_max": float, "steps": int, "N": float, "phi": float,
          "threshold": float, "jobs": int, "out": str, "m": str}


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    """9 significant digits; scientific notation below 1e-4 or from 1e7 up."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    if abs(x) < 1e-4 or abs(x) >= 1e7:
        return f"{x:.8e}"
    return f"{x:.9g}"


def write_csv(stream, header, rows) -> None:
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")


def _pmap(func, items, jobs):
    if jobs <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


def n_from_purity(mu: float) -> float:
    if not 0 < mu <= 1:
        raise UsageError(f"mu must lie in (0, 1], got {mu}")
    return (1 / math.sqrt(mu) - 1) / 2


def _sts_row(n_thermal, m):
    p = STSParams(n_thermal, float(m))
    return q2_closed(sts_parameters(p)), log_negativity(make_sts(p))


def cmd_fig1a(mu, m_max, steps, jobs=1):
    """Rows ``(m, q2, logneg)`` at fixed purity."""
    n_thermal = n_from_purity(mu)
    if steps < 2 or m_max < 0:
        raise UsageError("need steps >= 2 and m_max >= 0")
    ms = np.linspace(0.0, m_max, steps)
    vals = _pmap(lambda m: _sts_row(n_thermal, m), ms, jobs)
    return ["m", "q2", "logneg"], [(m, q, ln) for m, (q, ln) in zip(ms, vals)]


def cmd_fig1b(m_list, mu_steps, jobs=1):
    """Long-form rows ``(m, mu, q2)`` with ``mu`` on ``(0, 1]``."""
    if mu_steps < 2:
        raise UsageError("need steps >= 2")
    if any(m < 0 for m in m_list):
        raise UsageError("squeezing values must be non-negative")
    mus = np.linspace(0.0, 1.0, mu_steps + 1)[1:]
    grid = [(m, mu) for m in m_list for mu in mus]
    vals = _pmap(lambda t: _sts_row(n_from_purity(t[1]), t[0])[0], grid, jobs)
    return ["m", "mu", "q2"], [(m, mu, q) for (m, mu), q in zip(grid, vals)]


def cmd_fig3(n_thermal, m, phi, steps, jobs=1):
    """Rows ``(theta, lqfi, tqfi, ratio)`` for the same generator on both modes."""
    if steps < 2:
        raise UsageError("need steps >= 2")
    try:
        state = make_sts(STSParams(n_thermal, m))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    thetas = np.linspace(0.0, math.pi, steps)
    pts = _pmap(lambda t: metrology_point(state, float(t), phi), thetas, jobs)
    return ["theta", "lqfi", "tqfi", "ratio"], [
        (p.theta, p.lqfi_a, p.tqfi, p.ratio) for p in pts
    ]


def cmd_report(n_thermal, m, threshold=0.5):
    try:
        state = make_sts(STSParams(n_thermal, m))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = correlation_report(state)
    fields = [
        ("N", n_thermal), ("m", m), ("q2", rep.q2), ("p2", rep.p2),
        ("nu_tilde", rep.nu_tilde), ("log_neg", rep.log_neg), ("purity", rep.purity),
        ("qcr_low", rep.qcr_low), ("qcr_high", rep.qcr_high),
        ("argmin_x", rep.argmin_direction[0]), ("argmin_y", rep.argmin_direction[1]),
        ("argmin_z", rep.argmin_direction[2]),
        ("entangled", float(is_entangled(state, threshold))),
    ]
    return fields


def cmd_selftest(stream, as_json=False) -> int:
    from .acceptance import run_all

    results = run_all()
    if as_json:
        json.dump([r.as_dict() for r in results], stream, indent=2, allow_nan=True)
        stream.write("\n")
    else:
        for r in results:
            stream.write(r.line() + "\n")
        n_ok = sum(r.passed for r in results)
        stream.write(f"{n_ok}/{len(results)} checks passed\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    conf = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in _TYPES and key != "json":
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        conf[key] = value
    return conf


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; command-line flags take precedence")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--jobs", type=int, help="parallel sweep width")

    parser = argparse.ArgumentParser(
        prog="gaussqfi",
        description="QFI-based Gaussian quantum correlation and metrology sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig1a", parents=[common], help="q2 and log-negativity vs m at fixed purity")
    p.add_argument("--mu", type=float, help="purity (1+2N)^-2")
    p.add_argument("--m-max", dest="m_max", type=float)
    p.add_argument("--steps", type=int)

    p = sub.add_parser("fig1b", parents=[common], help="q2 vs purity for several m")
    p.add_argument("--m", help="comma-separated squeezing values")
    p.add_argument("--steps", type=int, help="number of purity samples")

    p = sub.add_parser("fig3", parents=[common], help="lQFI, tQFI and their ratio vs theta")
    p.add_argument("--N", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--steps", type=int)

    p = sub.add_parser("report", parents=[common], help="correlation report for one STS state")
    p.add_argument("--N", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--threshold", type=float, choices=[0.5, 1.0])

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.add_argument("--json", action="store_true", default=None)
    return parser


def _resolve(args) -> dict:
    """Merge defaults < config file < explicit flags."""
    opts = dict(COMMON)
    opts.update(DEFAULTS[args.command])
    if args.config:
        for key, value in read_config(args.config).items():
            if key == "json":
                opts["json"] = value.lower() in ("1", "true", "yes")
                continue
            if key not in opts:
                raise UsageError(f"key {key!r} does not apply to {args.command}")
            try:
                opts[key] = _TYPES[key](value)
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {value!r}") from exc
    for key, value in vars(args).items():
        if value is not None and key not in ("command", "config"):
            opts[key] = value
    if opts.get("threshold") not in (None, 0.5, 1.0):
        raise UsageError("threshold must be 0.5 or 1")
    if opts["jobs"] < 1:
        raise UsageError("jobs must be >= 1")
    return opts


def _dispatch(command, opts, stream) -> int:
    jobs = opts["jobs"]
    if command == "fig1a":
        write_csv(stream, *cmd_fig1a(opts["mu"], opts["m_max"], opts["steps"], jobs))
    elif command == "fig1b":
        try:
            m_list = [float(x) for x in str(opts["m"]).split(",") if x.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --m list: {opts['m']!r}") from exc
        write_csv(stream, *cmd_fig1b(m_list, opts["steps"], jobs))
    elif command == "fig3":
        write_csv(stream, *cmd_fig3(opts["N"], float(opts["m"]), opts["phi"],
                                    opts["steps"], jobs))
    elif command == "report":
        fields = cmd_report(opts["N"], float(opts["m"]), opts["threshold"])
        width = max(len(k) for k, _ in fields)
        for k, v in fields:
            text = str(bool(v)).lower() if k == "entangled" else fmt(v)
            stream.write(f"{k:<{width}}  {text}\n")
        if opts["out"]:
            with open(opts["out"], "w", newline="\n") as fh:
                write_csv(fh, [k for k, _ in fields], [[v for _, v in fields]])
    elif command == "selftest":
        return cmd_selftest(stream, bool(opts.get("json")))
    return EXIT_OK


def main(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        opts = _resolve(args)
        if opts["out"] and args.command != "report":
            with open(opts["out"], "w", newline="\n") as fh:
                return _dispatch(args.command, opts, fh)
        return _dispatch(args.command, opts, stdout)
    except UsageError as exc:
        print(f"gaussqfi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
