"""Command line entry point: ``diagsynth synth | bench | golden``."""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import bench, golden
from .circuit import to_qasm
from .importance import DEFAULT_GAMMA
from .spectral import SpectralInputError


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diagsynth", description="Approximate diagonal-unitary synthesis under a CNOT budget.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize one diagonal unitary")
    p.add_argument("-k", "--qubits", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--lambda", dest="lambda_file", type=Path, help="phases as CSV (one per line) or JSON array")
    src.add_argument("--seed", type=int, help="draw phases uniformly in [0, 2pi)")
    budget = p.add_mutually_exclusive_group(required=True)
    budget.add_argument("--cnots", type=int, help="CNOT budget C")
    budget.add_argument("--reduce", type=float, help="reduction ratio r; C = round((1-r) * 2^k)")
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    p.add_argument("--eps-step", type=float, default=0.01)
    p.add_argument("--eps-max", type=float, default=0.5)
    p.add_argument("--emit", choices=["qasm", "none"], default="none")
    p.add_argument("--qasm-out", type=Path, help="QASM destination (default: stdout, report then goes to stderr unless --out)")
    p.add_argument("--uncompute", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out", type=Path, help="report destination (default: stdout)")
    p.add_argument("--report", choices=["json", "csv"], default="json")
    p.add_argument("--no-timing", action="store_true", help="write runtime_ms as null for byte-stable reports")

    b = sub.add_parser("bench", help="seeded random-instance sweep, CSV output")
    b.add_argument("--qubits", type=_int_list, required=True, help="comma-separated qubit counts")
    b.add_argument("--ratios", type=_float_list, default=list(bench.DEFAULT_RATIOS))
    b.add_argument("--trials", type=int, default=20)
    b.add_argument("--seed-base", type=int, default=0)
    b.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--timing", action="store_true", help="add runtime_ms columns")
    b.add_argument("--out", type=Path, help="CSV destination (default: stdout)")

    g = sub.add_parser("golden", help="recompute the embedded k=5 reference tables")
    g.add_argument("table", choices=["table1", "table2"])
    g.add_argument("--fixture", type=Path, help="override the fixture file")
    return parser


def cmd_synth(args) -> int:
    k = args.qubits
    if k < 1:
        raise UsageError("--qubits must be >= 1")
    if args.lambda_file is not None:
        try:
            lam = bench.read_phases(args.lambda_file)
        except OSError as exc:
            raise UsageError(f"cannot read {args.lambda_file}: {exc}")
        except (ValueError, SpectralInputError) as exc:
            raise UsageError(f"bad phase file {args.lambda_file}: {exc}")
        if lam.k != k:
            raise UsageError(f"phase file has {len(lam)} entries, expected {1 << k}")
    else:
        lam = bench.random_phases(k, args.seed, k)

    if args.cnots is not None:
        cnots = args.cnots
    else:
        try:
            cnots = bench.budget_for_ratio(k, args.reduce)
        except ValueError as exc:
            raise UsageError(str(exc))
    if cnots < 0:
        raise UsageError("--cnots must be >= 0")
    if cnots + 2 > 2 * (1 << k):
        raise UsageError(f"C + 2 = {cnots + 2} exceeds twice the {1 << k} phases")
    if cnots + 2 > (1 << k):
        warnings.warn(f"C + 2 = {cnots + 2} exceeds the {1 << k} distinct phases; the path will revisit nodes")

    try:
        result = bench.synthesize(lam, cnots, args.gamma, args.eps_step, args.eps_max, args.uncompute, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    report = result.report
    if args.no_timing:
        report.runtime_ms = None

    text = report.to_json() if args.report == "json" else report.to_csv()
    report_stream = sys.stdout
    if args.emit == "qasm":
        qasm = to_qasm(result.circuit)
        if args.qasm_out is not None:
            args.qasm_out.write_text(qasm)
        else:
            sys.stdout.write(qasm)
            report_stream = sys.stderr
    if args.out is not None:
        args.out.write_text(text)
    else:
        report_stream.write(text)
    return 0


def cmd_bench(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    for r in args.ratios:
        if not 0.0 <= r <= 1.0:
            raise UsageError(f"ratio {r} outside [0, 1]")
    per_trial, aggregates = bench.run_bench(args.qubits, args.ratios, args.trials, args.seed_base, args.gamma, args.jobs)
    text = bench.bench_csv(per_trial, aggregates, timing=args.timing)
    if args.out is None:
        sys.stdout.write(text)
        return 0
    try:
        args.out.write_text(text)
    except OSError as exc:
        print(f"diagsynth: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_golden(args) -> int:
    try:
        if args.table == "table1":
            result = golden.run_table1(args.fixture)
        else:
            result = golden.run_table2(args.fixture)
    except (OSError, ValueError, KeyError) as exc:
        print(f"diagsynth: bad fixture: {exc}", file=sys.stderr)
        return 1
    print(golden.format_result(result))
    return 0 if result.ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"synth": cmd_synth, "bench": cmd_bench, "golden": cmd_golden}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"diagsynth: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
