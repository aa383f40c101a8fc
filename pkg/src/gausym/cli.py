"""Command-line front end: run inequality checks and manage the corpus.

Usage:
    gausym --expr "exp(-x1^2)" --dim 1 --grid 1024 --checks uno,dos --out r.json
    gausym --builtin monotone1d --checks dos --equality
    gausym corpus list
    gausym corpus describe coordinate

Exit codes: 0 all checks passed, 1 at least one check failed, 2 bad
configuration, 3 runtime failure while checking.  Report files are
written atomically (temp file + rename), so a crash never leaves a
partial report behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Optional

import numpy as np

from .errors import GausymError
from .fields import builtin_field, corpus_names, describe_field, parse_field
from .gaussian import equal_measure_grid
from .majorize import DEFAULT_NORM_FAMILY, parse_norm
from .verify import (
    IneqReport,
    check_interval_bound,
    check_mazya_talenti,
    check_norm_inequality,
    check_orlicz_equality,
    check_polya_szego,
    check_reformulated,
    convergence_study,
    validate_intervals,
)

CHECK_TOKENS = ("uno", "dos", "norm", "mt", "interval", "orlicz", "converge")

DEFAULTS = {
    "dim": 1,
    "grid": 1024,
    "sgrid": 4096,
    "checks": "uno,dos",
    "intervals": "0.1,0.2;0.6,0.7",
    "norms": "",
    "tol": None,
    "equality": False,
    "seed": 0,
    "out": None,
    "curves": None,
}


class ConfigError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gausym",
        description="Rearrangement-inequality checks under the Gaussian measure.",
    )
    parser.add_argument("--expr", help="field expression in x1..xn")
    parser.add_argument("--builtin", help="builtin field name (see 'gausym corpus list')")
    parser.add_argument("--param", action="append", default=[], metavar="K=V",
                        help="builtin field parameter, repeatable")
    parser.add_argument("--dim", type=int, choices=(1, 2, 3))
    parser.add_argument("--grid", type=int, metavar="N", help="cells per axis")
    parser.add_argument("--sgrid", type=int, metavar="M", help="s-grid size (default 4096)")
    parser.add_argument("--checks", help=f"comma list from {{{','.join(CHECK_TOKENS)}}}")
    parser.add_argument("--intervals", help="finite union 'a,b[;c,d]...' for the interval check")
    parser.add_argument("--norms", help="comma list of norm specs, e.g. lp:2,lorentz:2")
    parser.add_argument("--tol", type=float, help="tolerance override for all checks")
    parser.add_argument("--equality", action="store_true", default=None,
                        help="two-sided comparison (equality cases)")
    parser.add_argument("--seed", type=int, help="reserved for randomized corpus extensions")
    parser.add_argument("--out", help="JSON report path")
    parser.add_argument("--curves", help="directory for per-check CSV curves")
    parser.add_argument("--config", help="flat key=value config file (flags win)")
    return parser


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
                values[key.strip()] = value.strip()
        return values
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc


def _merge_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    cfg.update({"expr": None, "builtin": None, "param": []})
    if args.config:
        file_values = _read_config_file(args.config)
        for key, text in file_values.items():
            if key not in cfg:
                raise ConfigError(f"unknown config key {key!r}")
            if key in ("dim", "grid", "sgrid", "seed"):
                cfg[key] = int(text)
            elif key == "tol":
                cfg[key] = float(text)
            elif key == "equality":
                cfg[key] = text.lower() in ("1", "true", "yes")
            elif key == "param":
                cfg[key] = text.split(";")
            else:
                cfg[key] = text
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None and value != []:
            cfg[key] = value
    return cfg


def _parse_params(pairs) -> dict:
    params = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--param needs K=V, got {item!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"--param {key}: {value!r} is not a number") from exc
    return params


def _parse_intervals(text: str) -> list:
    intervals = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = part.split(",")
        if len(bits) != 2:
            raise ConfigError(f"interval {part!r} must be 'a,b'")
        try:
            intervals.append((float(bits[0]), float(bits[1])))
        except ValueError as exc:
            raise ConfigError(f"interval {part!r} has non-numeric bounds") from exc
    if not intervals:
        raise ConfigError("no intervals given")
    return intervals


def _validate(cfg: dict) -> dict:
    if cfg["grid"] < 2:
        raise ConfigError("grid must be ≥ 2")
    if cfg["dim"] not in (1, 2, 3):
        raise ConfigError("dim must be 1, 2 or 3")
    if cfg["sgrid"] < 8:
        raise ConfigError("sgrid must be >= 8")
    if (cfg["expr"] is None) == (cfg["builtin"] is None):
        raise ConfigError("exactly one of --expr or --builtin is required")
    tokens = [t.strip() for t in str(cfg["checks"]).split(",") if t.strip()]
    unknown = [t for t in tokens if t not in CHECK_TOKENS]
    if unknown:
        raise ConfigError(f"unknown checks {unknown}; choose from {','.join(CHECK_TOKENS)}")
    if not tokens:
        raise ConfigError("no checks requested")
    cfg["check_tokens"] = tokens
    cfg["interval_list"] = (
        validate_intervals(_parse_intervals(cfg["intervals"])) if "interval" in tokens else None
    )
    try:
        cfg["norm_list"] = (
            [parse_norm(s) for s in cfg["norms"].split(",") if s.strip()]
            if cfg["norms"]
            else list(DEFAULT_NORM_FAMILY)
        )
    except GausymError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def _build_field(cfg: dict):
    if cfg["expr"] is not None:
        return parse_field(cfg["expr"], cfg["dim"])
    params = _parse_params(cfg["param"])
    return builtin_field(cfg["builtin"], params or None, dim=cfg["dim"])


def _converge_rows(cfg: dict, field, M: int, tol) -> list[IneqReport]:
    # Default refinement ladder derived from --grid: N/16, N/4, N.
    N = cfg["grid"]
    Ns = sorted({max(2, N // 16), max(2, N // 4), N})
    inner = [t for t in cfg["check_tokens"] if t in ("uno", "dos", "mt")] or ["uno"]
    rows = []
    for study in convergence_study(field, inner, Ns, M=M, dim=cfg["dim"]):
        # Rows share the study verdict; the recorded tolerance is the worst
        # violation in the ladder so the schema stays numeric.
        row_tol = tol if tol is not None else max(max(study.violations), 1e-12)
        for n_cells, violation in zip(study.Ns, study.violations):
            rows.append(
                IneqReport(
                    check_name=f"converge:{study.check_name}[N={n_cells}]",
                    field_label=field.label,
                    dim=cfg["dim"],
                    N=n_cells,
                    M=M,
                    s_grid=np.array([1.0]),
                    lhs_curve=np.array([violation]),
                    rhs_curve=np.array([0.0]),
                    max_violation=violation,
                    tolerance=row_tol,
                    passed=study.passed,
                    runtime_ms=0,
                    extra={"empirical_order": study.empirical_order},
                )
            )
    return rows


def _run_checks(cfg: dict, field, grid) -> list[IneqReport]:
    M = cfg["sgrid"]
    tol = cfg["tol"]
    eq = bool(cfg["equality"])
    reports: list[IneqReport] = []
    for token in cfg["check_tokens"]:
        if token == "uno":
            reports.append(check_reformulated(field, grid, M=M, tol=tol, equality=eq))
        elif token == "dos":
            reports.append(check_polya_szego(field, grid, M=M, tol=tol, equality=eq))
        elif token == "norm":
            reports.extend(check_norm_inequality(field, grid, cfg["norm_list"], M=M, tol=tol))
        elif token == "mt":
            reports.append(check_mazya_talenti(field, grid, M=M, tol=tol))
        elif token == "interval":
            reports.append(check_interval_bound(field, grid, cfg["interval_list"], M=M, tol=tol))
        elif token == "orlicz":
            reports.append(check_orlicz_equality(field, grid, M=M, tol=tol))
        elif token == "converge":
            reports.extend(_converge_rows(cfg, field, M, tol))
    return reports


def _atomic_write(path: str, payload: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gausym-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _safe_name(text: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "._-" else "_" for ch in text)


def write_report(reports: list[IneqReport], out: Optional[str], curves_dir: Optional[str]):
    entries = []
    for report in reports:
        entry = report.entry()
        if curves_dir:
            os.makedirs(curves_dir, exist_ok=True)
            fname = f"{_safe_name(report.check_name)}__{_safe_name(report.field_label)}.csv"
            fpath = os.path.join(curves_dir, fname)
            rows = ["s,lhs,rhs"]
            for s, lhs, rhs in zip(report.s_grid, report.lhs_curve, report.rhs_curve):
                rows.append(f"{s:.17g},{lhs:.17g},{rhs:.17g}")
            _atomic_write(fpath, "\n".join(rows) + "\n")
            entry["curves_file"] = fpath
        entries.append(entry)
    payload = {"version": 1, "checks": entries}
    text = json.dumps(payload, indent=2)
    if out:
        _atomic_write(out, text + "\n")
    else:
        print(text)


def _corpus_main(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(prog="gausym corpus")
    sub = parser.add_subparsers(dest="action", required=True)
    sub.add_parser("list")
    describe = sub.add_parser("describe")
    describe.add_argument("name")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.action == "list":
        for name in corpus_names():
            summary = describe_field(name).splitlines()[2].strip()
            print(f"{name}  -  {summary}")
        return 0
    try:
        print(describe_field(args.name))
    except GausymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "corpus":
        return _corpus_main(argv[1:])
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _validate(_merge_config(args))
        field = _build_field(cfg)
        grid = equal_measure_grid(cfg["dim"], cfg["grid"])
    except (ConfigError, GausymError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        reports = _run_checks(cfg, field, grid)
        write_report(reports, cfg["out"], cfg["curves"])
    except (GausymError, ArithmeticError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    failed = [r for r in reports if not r.passed]
    for report in reports:
        status = "pass" if report.passed else "FAIL"
        print(
            f"[{status}] {report.check_name} field={report.field_label} "
            f"N={report.N} M={report.M} violation={report.max_violation:.3e} "
            f"tol={report.tolerance:.3e}"
        )
    return 1 if failed else 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
