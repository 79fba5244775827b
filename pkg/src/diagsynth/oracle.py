"""Independent checks for the synthesis path.

Nothing in here is used to synthesize; tests and the golden-table runner
use it to verify what the synthesis produced.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import comb

import numpy as np

from .circuit import Circuit, Gate
from .spectral import CoeffVector, PhaseVector

MAX_SIM_WIRES = 21
MAX_SUBSETS = 5_000_000
_CHUNK = 1 << 15


class NonDiagonalCircuitError(RuntimeError):
    """The circuit does not return some basis state to itself."""


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class BasisOutcome:
    out_index: int
    phase: float


def _track(circuit: Circuit, data_wires: int):
    labels = np.arange(1 << data_wires, dtype=np.int64)
    phase = np.zeros(labels.size)
    for g in circuit.gates:
        if g.kind == "cx":
            c, t = g.wires
            labels ^= ((labels >> c) & 1) << t
        elif g.kind == "x":
            labels ^= 1 << g.wires[0]
        else:
            bit = (labels >> g.wires[0]) & 1
            phase += np.where(bit == 1, g.theta / 2.0, -g.theta / 2.0)
    return labels, phase


def run_basis(circuit: Circuit, data_wires: int | None = None) -> list[BasisOutcome]:
    """Follow every input ``|x>|0...0>`` through a CNOT/RZ/X circuit."""
    if data_wires is None:
        data_wires = circuit.wire_count - 1
    labels, phase = _track(circuit, data_wires)
    return [BasisOutcome(int(o), float(p)) for o, p in zip(labels, phase)]


def simulate_diagonal(circuit: Circuit, data_wires: int | None = None) -> PhaseVector:
    """Phases the circuit puts on each ``|x>|0>``, ancilla wires starting clean.

    By default the last wire is the ancilla. Raises
    :class:`NonDiagonalCircuitError` if any basis state is not mapped back
    onto itself.
    """
    if circuit.wire_count > MAX_SIM_WIRES:
        raise ValueError(f"refusing to simulate {circuit.wire_count} wires")
    if data_wires is None:
        data_wires = circuit.wire_count - 1
    labels, phase = _track(circuit, data_wires)
    moved = np.flatnonzero(labels != np.arange(labels.size))
    if moved.size:
        x = int(moved[0])
        raise NonDiagonalCircuitError(f"basis state {x} ends as {int(labels[x])}")
    return PhaseVector(phase)


def _walsh_matrix(k: int) -> np.ndarray:
    idx = np.arange(1 << k)
    par = np.zeros((idx.size, idx.size), dtype=np.int64)
    sx = idx[:, None] & idx[None, :]
    while sx.any():
        par ^= sx & 1
        sx = sx >> 1
    return 1.0 - 2.0 * par


def discard_error(alpha: CoeffVector, discarded) -> float:
    """Error left after zeroing the coefficients in ``discarded`` (direct sum)."""
    a = np.asarray(alpha, dtype=np.float64)
    k = a.size.bit_length() - 1
    chi = _walsh_matrix(k)
    diff = np.zeros(a.size)
    for s in discarded:
        diff += a[s] * chi[s]
    return float(np.sqrt(np.mean(np.sin(diff / 2.0) ** 2)))


def _check_bound(k: int, discard_count: int) -> None:
    n = (1 << k) - 1
    if discard_count < 0 or discard_count > n:
        raise ValueError(f"discard_count must be in [0, {n}]")
    total = comb(n, discard_count)
    if (k > 5 and discard_count > 4) or total > MAX_SUBSETS:
        raise EnumerationTooLarge(f"{total} subsets of size {discard_count} at k={k}")


def rank_discard_subsets(alpha: CoeffVector, discard_count: int, top_n: int = 1) -> list[tuple[frozenset, float]]:
    """The ``top_n`` discard sets of the given size with the lowest error.

    Enumerates every subset of ``1..2^k-1`` exhaustively. Equal errors keep
    lexicographic order of the sorted index tuples.
    """
    a = np.asarray(alpha, dtype=np.float64)
    k = a.size.bit_length() - 1
    _check_bound(k, discard_count)
    if discard_count == 0:
        return [(frozenset(), 0.0)]
    chi = _walsh_matrix(k)
    weighted = a[:, None] * chi
    it = itertools.combinations(range(1, a.size), discard_count)

    best_sets = np.empty((0, discard_count), dtype=np.int64)
    best_err = np.empty(0)
    while True:
        chunk = list(itertools.islice(it, _CHUNK))
        if not chunk:
            break
        sets = np.array(chunk, dtype=np.int64)
        diff = weighted[sets].sum(axis=1)
        err = np.sqrt(np.mean(np.sin(diff / 2.0) ** 2, axis=1))
        sets = np.concatenate([best_sets, sets])
        err = np.concatenate([best_err, err])
        keep = np.argsort(err, kind="stable")[:top_n]
        best_sets, best_err = sets[keep], err[keep]
    return [(frozenset(s.tolist()), float(e)) for s, e in zip(best_sets, best_err)]


def best_discard_subset(alpha: CoeffVector, discard_count: int) -> tuple[frozenset, float]:
    return rank_discard_subsets(alpha, discard_count, 1)[0]


_QREG = re.compile(r"qreg\s+q\[(\d+)\];")
_CX = re.compile(r"cx\s+q\[(\d+)\],\s*q\[(\d+)\];")
_RZ = re.compile(r"rz\(([^)]+)\)\s+q\[(\d+)\];")
_X = re.compile(r"x\s+q\[(\d+)\];")


def read_qasm(text: str) -> Circuit:
    """Parse the OpenQASM subset written by :func:`diagsynth.circuit.to_qasm`."""
    wires = None
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        if m := _QREG.fullmatch(line):
            wires = int(m.group(1))
        elif m := _CX.fullmatch(line):
            gates.append(Gate.cnot(int(m.group(1)), int(m.group(2))))
        elif m := _RZ.fullmatch(line):
            gates.append(Gate.rz(float(m.group(1)), int(m.group(2))))
        elif m := _X.fullmatch(line):
            gates.append(Gate.x(int(m.group(1))))
        else:
            raise ValueError(f"unsupported QASM line: {raw!r}")
    if wires is None:
        raise ValueError("missing qreg declaration")
    return Circuit(tuple(gates), wires)
