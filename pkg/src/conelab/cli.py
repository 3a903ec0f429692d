"""Command-line front end.

Subcommands: analyze (one cone), table (family table, optionally compared
against the embedded reference), verify (invariant batteries), scan
(conjecture-evidence scan).  JSON output is always the top-level object
{"schema_version": 1, "rows": [...], "flags": [...]}; CSV uses a fixed
header, %.6f numeric cells, LF newlines, UTF-8 without BOM.

Exit codes: 0 success, 1 check or comparison failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from conelab import reference
from conelab.checks import SUITES, run_suites
from conelab.cone import ConeParams, Verdict, find_root, verdict
from conelab.errors import ConelabError
from conelab.riccati import check_4_minus_n
from conelab.spectrum import (
    Mode,
    ShootingConfig,
    _thread_count,
    family_scan,
    find_eigenvalue,
)
from conelab.specfun import SeriesControl

_SERIES_KEYS = {"series.rel_tol": ("rel_tol", float),
                "series.abs_tol": ("abs_tol", float),
                "series.max_terms": ("max_terms", int),
                "series.switch_point": ("switch_point", float)}
_SHOOT_KEYS = {"shooting.t_launch": ("t_launch", float),
               "shooting.ode_tol": ("ode_tol", float),
               "shooting.max_bisections": ("max_bisections", int)}


def _parse_kv(text: str) -> Tuple[str, str]:
    if "=" not in text:
        raise ValueError(f"expected KEY=VAL, got {text!r}")
    key, val = text.split("=", 1)
    return key.strip(), val.strip()


def _load_overrides(config_path: Optional[str],
                    cli_overrides: Sequence[str]) -> Dict[str, str]:
    """key=value pairs; command-line overrides beat the file."""
    merged: Dict[str, str] = {}
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, val = _parse_kv(line)
                merged[key] = val
    for item in cli_overrides or ():
        key, val = _parse_kv(item)
        merged[key] = val
    return merged


def _build_controls(overrides: Dict[str, str]) -> Tuple[SeriesControl, ShootingConfig]:
    series_kw, shoot_kw = {}, {}
    for key, raw in overrides.items():
        if key in _SERIES_KEYS:
            field, cast = _SERIES_KEYS[key]
            series_kw[field] = cast(raw)
        elif key in _SHOOT_KEYS:
            field, cast = _SHOOT_KEYS[key]
            shoot_kw[field] = cast(raw)
        else:
            raise ValueError(f"unknown configuration key {key!r}")
    return SeriesControl(**series_kw), ShootingConfig(**shoot_kw)


def _fmt_cell(x) -> str:
    if x is None:
        return "nan"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return "nan" if math.isnan(x) else f"{x:.6f}"
    return str(x)


def _emit_csv(header: Sequence[str], rows: Sequence[Sequence]) -> None:
    sys.stdout.write(",".join(header) + "\n")
    for row in rows:
        sys.stdout.write(",".join(_fmt_cell(c) for c in row) + "\n")


def _emit_json(rows: List[dict], flags: List[str]) -> None:
    payload = {"schema_version": 1, "rows": rows, "flags": flags}
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _cone_record(n: int, k: int, series: SeriesControl,
                 shooting: ShootingConfig) -> dict:
    pars = ConeParams(n, k)
    rep = verdict(pars, series)
    root = find_root(pars, series)
    eig = find_eigenvalue(pars, Mode(), 0, shooting, root, series)
    _, margin4 = check_4_minus_n(pars, series)
    flags: List[str] = []
    if eig.gamma_plus is None:
        flags.append("complex_indicial_roots")
    if rep.verdict is Verdict.BORDERLINE_STABLE:
        flags.append("borderline_margin")
    for col in ("t", "neg_lambda1", "neg_gamma_plus"):
        if (col, n, k) in reference.FLAGGED_ENTRIES:
            flags.append(f"reference_flagged:{col}")
    return {
        "n": n,
        "k": k,
        "t_nk": root.t_nk,
        "lambda1": eig.lam,
        "gamma_plus": eig.gamma_plus,
        "gamma_minus": eig.gamma_minus,
        "verdict": rep.verdict.value,
        "margin_4_minus_n": margin4,
        "flags": flags,
    }


def cmd_analyze(args) -> int:
    if not (args.n >= 3 and 1 <= args.k <= args.n - 2):
        print(f"error: k must lie in [1, n-2] and n >= 3; got n={args.n}, k={args.k}",
              file=sys.stderr)
        return 2
    series, shooting = _build_controls(
        _load_overrides(args.config, args.tol_override))
    rec = _cone_record(args.n, args.k, series, shooting)
    if args.format == "json":
        _emit_json([rec], rec["flags"])
    else:
        print(f"cone (n, k) = ({rec['n']}, {rec['k']})")
        print(f"  free-boundary root t = {rec['t_nk']:.10f}")
        print(f"  first eigenvalue lambda1 = {rec['lambda1']:.6f}")
        gp = rec["gamma_plus"]
        gm = rec["gamma_minus"]
        if gp is None:
            print("  indicial roots: complex pair (below the stability threshold)")
        else:
            print(f"  decay rates gamma- = {gm:.6f}, gamma+ = {gp:.6f}")
        print(f"  verdict: {rec['verdict']}")
        print(f"  subsolution margin at degree 4-n: {rec['margin_4_minus_n']:.6f}")
        if rec["flags"]:
            print("  flags: " + ", ".join(rec["flags"]))
    return 0


_TABLE_HEADER = ("n", "k", "t_nk", "neg_lambda1", "neg_gamma_plus", "verdict")


def _compare_rows(records: List[dict]) -> Tuple[List[str], List[str], bool]:
    """Diff computed records against the embedded reference.

    Returns (mismatch lines, informational flag lines, pass/fail)."""
    ref = {(n, k): (t, nl, ng) for (n, k, t, nl, ng) in reference.reference_rows()}
    mismatches: List[str] = []
    info: List[str] = []
    ok = True
    for rec in records:
        key = (rec["n"], rec["k"])
        if key not in ref:
            continue
        t_ref, nl_ref, ng_ref = ref[key]
        comp = {
            "t": (rec["t_nk"], t_ref, reference.TOL_T),
            "neg_lambda1": (-rec["lambda1"], nl_ref, reference.TOL_LAMBDA),
            "neg_gamma_plus": (None if rec["gamma_plus"] is None
                               else -rec["gamma_plus"], ng_ref, reference.TOL_GAMMA),
        }
        for col, (got, want, tol) in comp.items():
            dev = math.inf if got is None else abs(got - want)
            line = (f"(n={key[0]}, k={key[1]}) {col}: computed "
                    f"{'nan' if got is None else f'{got:.6f}'} vs reference {want} "
                    f"(|dev| = {dev:.4f}, tol {tol})")
            if (col, key[0], key[1]) in reference.FLAGGED_ENTRIES:
                info.append("flagged " + line)
            elif dev > tol:
                mismatches.append(line)
                ok = False
    return mismatches, info, ok


def cmd_table(args) -> int:
    n_min, n_max = args.n
    if not (3 <= n_min <= n_max <= 40):
        print(f"error: table range must satisfy 3 <= n_min <= n_max <= 40, "
              f"got {n_min}..{n_max}", file=sys.stderr)
        return 2
    series, shooting = _build_controls(
        _load_overrides(args.config, args.tol_override))
    cells = [(n, k) for n in range(n_min, n_max + 1) for k in range(1, n - 1)]
    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(
                lambda nk: _cone_record(nk[0], nk[1], series, shooting), cells))
    else:
        records = [_cone_record(n, k, series, shooting) for (n, k) in cells]
    flags: List[str] = []
    exit_code = 0
    if args.compare:
        mismatches, info, ok = _compare_rows(records)
        flags = info + mismatches
        if not ok:
            exit_code = 1
        for line in info:
            print(line, file=sys.stderr)
        for line in mismatches:
            print("MISMATCH " + line, file=sys.stderr)
    if args.format == "json":
        _emit_json(records, flags)
    else:
        rows = [(r["n"], r["k"], r["t_nk"],
                 -r["lambda1"],
                 None if r["gamma_plus"] is None else -r["gamma_plus"],
                 r["verdict"]) for r in records]
        _emit_csv(_TABLE_HEADER, rows)
    return exit_code


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    records = run_suites(names)
    failed = [r.name for r in records if not r.passed]
    rows = [dataclasses.asdict(r) for r in records]
    _emit_json(rows, failed)
    for name in failed:
        print(f"FAILED: {name}", file=sys.stderr)
    return 1 if failed else 0


_SCAN_HEADER = ("n", "k", "t_nk", "lambda1", "gamma_plus", "gamma_minus")


def cmd_scan(args) -> int:
    if not 3 <= args.n_max <= 40:
        print(f"error: --n-max must lie in [3, 40], got {args.n_max}",
              file=sys.stderr)
        return 2
    series, shooting = _build_controls(
        _load_overrides(args.config, args.tol_override))
    rep = family_scan((3, args.n_max), shooting)
    failed = sorted(name for name, ok in rep.flags.items() if not ok)
    if args.format == "json":
        rows = [dataclasses.asdict(r) for r in rep.rows]
        _emit_json(rows, failed)
    else:
        rows = [(r.n, r.k, r.t_nk, r.lambda1, r.gamma_plus, r.gamma_minus)
                for r in rep.rows]
        _emit_csv(_SCAN_HEADER, rows)
    for name in failed:
        print(f"FLAG FAILED: {name}", file=sys.stderr)
    for note in rep.notes:
        print(f"note: {note}", file=sys.stderr)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conelab",
        description="Stability analysis of the invariant one-phase cone family.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=None,
                        help="key=value file overriding evaluation controls")
    common.add_argument("--tol-override", metavar="KEY=VAL", action="append",
                        default=[], help="single control override (repeatable)")

    p = sub.add_parser("analyze", parents=[common],
                       help="stability report for one cone")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table", parents=[common],
                       help="regenerate the family table, optionally compared "
                            "against the embedded reference")
    p.add_argument("--n", type=int, nargs=2, metavar=("N_MIN", "N_MAX"),
                   required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--compare", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[common],
                       help="run the invariant batteries")
    p.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", parents=[common],
                       help="conjecture-evidence scan over the family")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConelabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
