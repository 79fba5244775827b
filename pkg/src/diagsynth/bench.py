"""End-to-end synthesis runs, reports, and the seeded benchmark sweep.

Random instances draw every phase i.i.d. from Uniform[0, 2*pi) using
numpy's Philox generator, a counter-based bit generator. The key for a
benchmark trial is derived with ``SeedSequence([seed_base, k, ratio_ppm,
trial])`` (``ratio_ppm`` = the reduction ratio in parts per million), so
each ``(seed_base, k, ratio, trial)`` has its own stream independent of run
order. A single ``synth --seed S`` uses ``SeedSequence([S, k])``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit, emit_circuit, synthesize_coeffs
from .importance import DEFAULT_GAMMA
from .pathsearch import PathState, SearchConfig, path_search
from .spectral import PhaseVector, error, forward_wht, inverse_wht, utility


@dataclass
class SynthesisReport:
    k: int
    cnot_budget: int
    reduction_ratio: float
    error: float
    utility: Optional[float]
    cnot_emitted: int
    rz_count: int
    distinct_phases: int
    dead_ends: int
    extensions: int
    final_epsilon: float
    runtime_ms: float
    seed: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        writer.writerow(["" if v is None else v for v in asdict(self).values()])
        return buf.getvalue()


REPORT_COLUMNS = [f.name for f in fields(SynthesisReport)]


@dataclass
class SynthesisResult:
    report: SynthesisReport
    path: PathState
    circuit: Circuit
    lambda_c: PhaseVector


def budget_for_ratio(k: int, ratio: float) -> int:
    """CNOT budget keeping ``1 - ratio`` of the ``2^k`` exact-synthesis CNOTs (half rounds up)."""
    if not 0.0 <= ratio <= 1.0:
        raise ValueError("reduction ratio must be in [0, 1]")
    return int(math.floor((1.0 - ratio) * (1 << k) + 0.5))


def random_phases(k: int, *key: int) -> PhaseVector:
    """Phases i.i.d. Uniform[0, 2*pi) from a Philox stream keyed by ``key``."""
    seq = np.random.SeedSequence([int(v) for v in key])
    rng = np.random.Generator(np.random.Philox(seq))
    return PhaseVector(rng.random(1 << k) * (2.0 * np.pi))


def synthesize(
    lam: PhaseVector,
    cnot_budget: int,
    gamma: float = DEFAULT_GAMMA,
    eps_step: float = 0.01,
    eps_max: float = 0.5,
    uncompute: bool = True,
    seed: Optional[int] = None,
    eps_start: float = 0.01,
) -> SynthesisResult:
    if not isinstance(lam, PhaseVector):
        lam = PhaseVector(lam)
    k = lam.k
    config = SearchConfig(k, cnot_budget, gamma, eps_start, eps_step, eps_max)

    t0 = time.perf_counter()
    alpha = forward_wht(lam)
    path = path_search(lam, config)
    lam_c = inverse_wht(synthesize_coeffs(path, alpha))
    runtime_ms = (time.perf_counter() - t0) * 1e3

    circ = emit_circuit(path, alpha, uncompute, cnot_budget)
    err = error(lam, lam_c)
    ratio = 1.0 - cnot_budget / (1 << k)
    report = SynthesisReport(
        k=k,
        cnot_budget=cnot_budget,
        reduction_ratio=ratio,
        error=err,
        utility=utility(ratio, err) if err > 1e-12 else None,
        cnot_emitted=circ.cnot_emitted,
        rz_count=circ.rz_count,
        distinct_phases=len(path.visited) - 1,
        dead_ends=path.stats.dead_ends,
        extensions=path.stats.extensions,
        final_epsilon=path.stats.final_epsilon,
        runtime_ms=runtime_ms,
        seed=seed,
    )
    return SynthesisResult(report, path, circ, lam_c)


def read_phases(path: Path) -> PhaseVector:
    """Phases from a JSON array or a CSV with one value per line (row = x)."""
    text = Path(path).read_text()
    if text.lstrip().startswith("["):
        values = json.loads(text)
    else:
        values = [float(line.split(",")[0]) for line in text.splitlines() if line.strip()]
    return PhaseVector(values)


def format_phases(lam: PhaseVector, fmt: str = "csv") -> str:
    vals = [float(v) for v in np.asarray(lam)]
    if fmt == "json":
        return "[" + ", ".join(f"{v:.17g}" for v in vals) + "]\n"
    return "".join(f"{v:.17g}\n" for v in vals)


DEFAULT_RATIOS = tuple(round(0.05 * i, 2) for i in range(1, 11))
BENCH_COLUMNS = [
    "row", "k", "ratio", "trial", "cnot_budget", "error", "error_min", "error_max",
    "utility", "distinct_phases", "dead_ends", "extensions", "final_epsilon",
]


@dataclass
class BenchRow:
    k: int
    ratio: float
    trials: int
    cnot_budget: int
    error_mean: float
    error_min: float
    error_max: float
    utility_mean: Optional[float]
    runtime_ms_mean: float


def _trial(args):
    k, ratio, trial, seed_base, gamma = args
    lam = random_phases(k, seed_base, k, round(ratio * 1e6), trial)
    return synthesize(lam, budget_for_ratio(k, ratio), gamma).report


def run_bench(
    qubits: Sequence[int],
    ratios: Sequence[float] = DEFAULT_RATIOS,
    trials: int = 20,
    seed_base: int = 0,
    gamma: float = DEFAULT_GAMMA,
    jobs: int = 1,
) -> tuple[list[tuple], list[BenchRow]]:
    """All ``(k, ratio, trial)`` reports plus one aggregate per ``(k, ratio)``.

    Results come back in ``(k, ratio, trial)`` order however they are scheduled.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    work = [(k, r, t, seed_base, gamma) for k in qubits for r in ratios for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            reports = list(pool.map(_trial, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        reports = [_trial(w) for w in work]

    per_trial = [(w[0], w[1], w[2], rep) for w, rep in zip(work, reports)]
    aggregates = []
    for i in range(0, len(per_trial), trials):
        group = per_trial[i : i + trials]
        k, r = group[0][0], group[0][1]
        errs = np.array([g[3].error for g in group])
        utils = [g[3].utility for g in group if g[3].utility is not None]
        aggregates.append(
            BenchRow(
                k=k,
                ratio=r,
                trials=trials,
                cnot_budget=group[0][3].cnot_budget,
                error_mean=float(errs.mean()),
                error_min=float(errs.min()),
                error_max=float(errs.max()),
                utility_mean=float(np.mean(utils)) if utils else None,
                runtime_ms_mean=float(np.mean([g[3].runtime_ms for g in group])),
            )
        )
    return per_trial, aggregates


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def bench_csv(per_trial, aggregates, timing: bool = False) -> str:
    """CSV with one ``trial`` row per run followed by one ``mean`` row per (k, ratio).

    Runtime columns appear only with ``timing``; without them the output is
    byte-identical for a fixed seed base.
    """
    cols = BENCH_COLUMNS + (["runtime_ms"] if timing else [])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for k, r, t, rep in per_trial:
        row = ["trial", k, r, t, rep.cnot_budget, rep.error, None, None, rep.utility,
               rep.distinct_phases, rep.dead_ends, rep.extensions, rep.final_epsilon]
        if timing:
            row.append(rep.runtime_ms)
        writer.writerow([_fmt(v) for v in row])
    for agg in aggregates:
        row = ["mean", agg.k, agg.ratio, None, agg.cnot_budget, agg.error_mean, agg.error_min,
               agg.error_max, agg.utility_mean, None, None, None, None]
        if timing:
            row.append(agg.runtime_ms_mean)
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()
