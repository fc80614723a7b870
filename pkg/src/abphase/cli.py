"""Command-line front end.

::

    abphase phase   [--config FILE] [--out DIR] [--quiet]
    abphase loop | fringes | simulate | gauge-check | dispersion-check ...
    abphase accept  [--criteria 1,2,3]

Every run writes ``summary.json`` and ``config.effective.txt`` into the
output directory, plus ``<name>.csv`` for each fringe pattern it produced.

Exit codes: 0 success, 2 configuration error, 3 numerical-contract
violation (including a failed acceptance criterion), 4 incomplete run,
5 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import platform
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__, presets
from .config import ConfigError, ExperimentConfig, format_config, load_config, parse_config
from .errors import ABPhaseError, IncompleteRunError, PreconditionError
from .fringes import FringePattern

__all__ = ["main", "emit_csv", "read_csv", "emit_summary", "EXIT_CODES"]

EXIT_CODES = {"ok": 0, "config": 2, "numerical": 3, "incomplete": 4, "io": 5}

_PRESETS = {
    "phase": presets.phase_preset,
    "loop": presets.loop_preset,
    "fringes": presets.fringes_preset,
    "simulate": presets.simulate_preset,
    "gauge-check": presets.gauge_check_preset,
    "dispersion-check": presets.dispersion_check_preset,
}


def _atomic_write(path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_csv(pattern: FringePattern, path):
    """Write ``y_m,intensity`` rows; 17 significant digits round-trip doubles exactly."""
    y = np.asarray(pattern.screen_positions, dtype=float)
    i = np.asarray(pattern.intensity, dtype=float)
    if len(y) < 16 or y.shape != i.shape:
        raise PreconditionError("pattern must hold at least 16 samples")
    rows = [f"{a:.16e},{b:.16e}" for a, b in zip(y.tolist(), i.tolist())]
    _atomic_write(path, "y_m,intensity\n" + "\n".join(rows) + "\n")


def read_csv(path):
    """Inverse of :func:`emit_csv`: returns ``(y, intensity)`` arrays."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "y_m,intensity":
            raise ValueError(f"{path}: unexpected header {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return data[:, 0], data[:, 1]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) if math.isfinite(obj) else repr(float(obj))
    return obj


def versions() -> dict:
    return {"abphase": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def emit_summary(results: dict, path, kind: str, config: ExperimentConfig, timings: dict | None = None):
    """Write the JSON summary: ``kind``, ``results``, ``config``, ``versions``, ``timings``.

    ``results`` must carry exactly the documented key set for ``kind``.
    """
    expected = presets.RESULT_KEYS.get(kind)
    if expected is not None and set(results) != set(expected):
        raise PreconditionError(f"{kind} results have keys {sorted(results)}, expected {sorted(expected)}")
    doc = {
        "kind": kind,
        "results": _jsonable(results),
        "config": _jsonable(config.echo()),
        "versions": versions(),
        "timings": _jsonable(timings or {}),
    }
    _atomic_write(path, json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value configuration file")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--seed", type=int, default=None, help="reserved; runs are deterministic")
    common.add_argument("--quiet", action="store_true", help="suppress console output")
    parser = argparse.ArgumentParser(prog="abphase", description="Aharonov-Bohm phase-plate simulations")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in _PRESETS:
        sub.add_parser(kind, parents=[common])
    acc = sub.add_parser("accept", parents=[common], help="run the acceptance criteria")
    acc.add_argument("--criteria", default=None, help="comma-separated criterion numbers")
    return parser


def _run_preset(args, cfg: ExperimentConfig, say) -> int:
    t0 = time.perf_counter()
    results, patterns = _PRESETS[args.kind](cfg)
    elapsed = time.perf_counter() - t0
    args.out.mkdir(parents=True, exist_ok=True)
    for name, pattern in patterns.items():
        emit_csv(pattern, args.out / f"{name}.csv")
    _atomic_write(args.out / "config.effective.txt", format_config(cfg))
    emit_summary(results, args.out / "summary.json", args.kind, cfg, {"wall_s": elapsed})
    for key in presets.RESULT_KEYS[args.kind]:
        value = results[key]
        if key == "table":
            for row in value:
                say("  " + "  ".join(f"{k}={v:.9g}" if isinstance(v, float) else f"{k}={v}"
                                     for k, v in row.items()))
        else:
            say(f"{key} = {value:.9g}" if isinstance(value, float) else f"{key} = {value}")
    return EXIT_CODES["ok"]


def _run_accept(args, cfg: ExperimentConfig, say) -> int:
    from .acceptance import CRITERIA, run_all

    numbers = None
    if args.criteria:
        try:
            numbers = [int(n) for n in args.criteria.split(",")]
        except ValueError:
            raise ConfigError(f"bad --criteria list {args.criteria!r}") from None
        unknown = sorted(set(numbers) - set(CRITERIA))
        if unknown:
            raise ConfigError(f"unknown criteria {unknown}")
    t0 = time.perf_counter()
    results = run_all(numbers, report=lambda r: say(r.line()))
    args.out.mkdir(parents=True, exist_ok=True)
    summary = {
        "criteria": [{"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail,
                      "seconds": r.seconds} for r in results],
        "all_passed": all(r.passed for r in results),
    }
    emit_summary(summary, args.out / "summary.json", "accept", cfg, {"wall_s": time.perf_counter() - t0})
    return EXIT_CODES["ok"] if summary["all_passed"] else EXIT_CODES["numerical"]


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    say = (lambda msg: None) if args.quiet else print
    try:
        cfg = load_config(args.config) if args.config else parse_config("")
        if args.kind == "accept":
            return _run_accept(args, cfg, say)
        return _run_preset(args, cfg, say)
    except ConfigError as exc:
        print(f"abphase: configuration error: {exc}", file=sys.stderr)
        return EXIT_CODES["config"]
    except IncompleteRunError as exc:
        print(f"abphase: incomplete run: {exc}", file=sys.stderr)
        return EXIT_CODES["incomplete"]
    except OSError as exc:
        print(f"abphase: I/O error: {exc}", file=sys.stderr)
        return EXIT_CODES["io"]
    except (ABPhaseError, ValueError) as exc:
        print(f"abphase: numerical contract violated: {exc}", file=sys.stderr)
        return EXIT_CODES["numerical"]


if __name__ == "__main__":
    sys.exit(main())
