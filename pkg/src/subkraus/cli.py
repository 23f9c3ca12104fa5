"""Command-line interface.

Commands:

* ``reduce``      run the subsystem-extraction algorithm on a map file
* ``case-study``  sweep the two-qubit model and write a CSV of diagnostics
* ``verify``      run the self-verification suites
* ``choi``        dump the Choi matrix and its minimum eigenvalue

Exit codes are a stable contract: 0 success, 1 verification failure,
2 input validation, 3 model diagnostic (broken completeness or a negative
mixing-matrix eigenvalue).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import casestudy, channels, reduction, verify
from .channels import _fmt17, _matrix_json

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_VALIDATION = 2
EXIT_DIAGNOSTIC = 3

SWEEP_HEADER = "t,b0,b1,b2,b3,trace_defect,choi_min_eig,offdiag_B_max"


def _read_text(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise ValueError(f"no such file: {path}")
    return p.read_text()


def _load_checked_map(path: str) -> channels.KrausMap:
    raw = channels.load_map_json(_read_text(path))
    defect = channels.completeness_defect(raw)
    if defect > channels.MODEL_TOL:
        raise _Diagnostic(
            f"map file {path} violates the completeness condition: "
            f"defect {defect:.6e} exceeds {channels.MODEL_TOL:.1e}"
        )
    return channels.KrausMap(raw.dim, raw.operators, trace_preserving=True)


class _Diagnostic(RuntimeError):
    """Model-level failure; mapped to exit code 3."""


def cmd_reduce(args: argparse.Namespace) -> int:
    kmap = _load_checked_map(args.map)
    split = reduction.Bipartition(args.d1, args.d2)
    rho = channels.load_density_json(_read_text(args.rho))
    try:
        result = reduction.reduce_subsystem(
            kmap, split, rho, keep=args.keep, truncation=args.truncation
        )
    except reduction.NonPositiveBMatrixError as exc:
        raise _Diagnostic(str(exc)) from exc
    out_map = channels.dump_map_json(result.subsystem_map, label=f"reduced keep={args.keep}")
    Path(args.out).write_text(out_map)
    report = {
        "b_eigenvalues": [float(x) for x in result.eigenvalues],
        "kept": len(result.subsystem_map.operators),
        "truncated": result.truncated_count,
        "completeness_defect": channels.completeness_defect(result.subsystem_map),
        "out": args.out,
    }
    print(json.dumps(report))
    return EXIT_OK


def cmd_case_study(args: argparse.Namespace) -> int:
    if args.steps < 2:
        raise ValueError(f"--steps must be at least 2, got {args.steps}")
    if args.t_max <= 0:
        raise ValueError(f"--t-max must be positive, got {args.t_max}")
    rates = casestudy.DampingRates(args.gamma1, args.gamma2)
    rho2 = casestudy.qubit_state(args.a)
    split = reduction.Bipartition(2, 2)
    lines = [SWEEP_HEADER]
    for step in range(args.steps):
        t = args.t_max * step / (args.steps - 1)
        kmap = casestudy.composite_kraus(t, rates)
        try:
            result = reduction.reduce_subsystem(
                kmap, split, rho2, keep=1, truncation=args.truncation
            )
        except reduction.NonPositiveBMatrixError as exc:
            raise _Diagnostic(f"at t={t}: {exc}") from exc
        b = result.b.values
        b_diag = [float(b[i, i].real) for i in range(4)]
        trace_defect = abs(sum(b_diag) / 2.0 - 1.0)
        off = b - np.diag(np.diag(b))
        offdiag_max = float(np.abs(off).max())
        verdict = channels.cp_verdict(channels.choi_matrix(result.subsystem_map))
        row = [t, *b_diag, trace_defect, verdict.min_eigenvalue, offdiag_max]
        lines.append(",".join(_fmt17(x) for x in row))
    Path(args.out).write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = verify.run_checks(args.scope)
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        if not r.passed:
            failed += 1
        note = f"  {r.note}" if r.note else ""
        print(
            f"{status}  [{r.scope:<10}] {r.name:<{width}}  "
            f"measured={r.measured:.3e} bound={r.bound:.1e}{note}"
        )
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def cmd_choi(args: argparse.Namespace) -> int:
    raw = channels.load_map_json(_read_text(args.map))
    choi = channels.choi_of_any(raw)
    verdict = channels.cp_verdict(
        channels.ChoiMatrix(choi, raw.dim), tol=args.tol
    )
    doc = (
        "{"
        + f'"dim":{raw.dim},"min_eigenvalue":{_fmt17(verdict.min_eigenvalue)},'
        + f'"is_cp":{"true" if verdict.is_cp else "false"},'
        + f'"choi":{_matrix_json(choi)}'
        + "}\n"
    )
    if args.out:
        Path(args.out).write_text(doc)
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subkraus",
        description="Subsystem Kraus extraction and complete-positivity diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_reduce = sub.add_parser("reduce", help="extract a subsystem Kraus map from a map file")
    p_reduce.add_argument("--map", required=True, help="composite map JSON file")
    p_reduce.add_argument("--d1", type=int, required=True, help="dimension of subsystem 1")
    p_reduce.add_argument("--d2", type=int, required=True, help="dimension of subsystem 2")
    p_reduce.add_argument("--rho", required=True, help="traced-out factor's state JSON file")
    p_reduce.add_argument("--keep", type=int, choices=(1, 2), default=1,
                          help="which subsystem to keep (default 1)")
    p_reduce.add_argument("--truncation", type=float, default=reduction.DEFAULT_TRUNCATION,
                          help="relative eigenvalue cutoff for dropped operators")
    p_reduce.add_argument("--out", required=True, help="output map JSON file")
    p_reduce.set_defaults(func=cmd_reduce)

    p_case = sub.add_parser("case-study", help="sweep the damped two-qubit model")
    p_case.add_argument("--gamma1", type=float, required=True)
    p_case.add_argument("--gamma2", type=float, required=True)
    p_case.add_argument("--a", type=float, required=True,
                        help="initial population parameter of qubit 2, in [0, 1]")
    p_case.add_argument("--t-max", type=float, required=True, dest="t_max")
    p_case.add_argument("--steps", type=int, required=True)
    p_case.add_argument("--truncation", type=float, default=reduction.DEFAULT_TRUNCATION)
    p_case.add_argument("--out", required=True, help="output CSV file")
    p_case.set_defaults(func=cmd_case_study)

    p_verify = sub.add_parser("verify", help="run the self-verification suites")
    p_verify.add_argument("--scope", choices=("structural", "model", "all"), default="all")
    p_verify.set_defaults(func=cmd_verify)

    p_choi = sub.add_parser("choi", help="dump the Choi matrix of a map file")
    p_choi.add_argument("--map", required=True)
    p_choi.add_argument("--tol", type=float, default=channels.CP_EIG_TOL)
    p_choi.add_argument("--out", default=None)
    p_choi.set_defaults(func=cmd_choi)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Diagnostic as exc:
        print(f"diagnostic: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    except (casestudy.ModelInconsistencyError, reduction.NonPositiveBMatrixError) as exc:
        print(f"diagnostic: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
