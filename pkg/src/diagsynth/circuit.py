"""Gate lists for a searched path, and their OpenQASM 2.0 serialization.

The circuit uses ``k`` data wires plus one accumulator wire (index ``k``)
that holds the parity ``popcount(s & x) mod 2`` of the current path node
``s``. Moving along an edge that flips bit ``j`` is one ``CNOT(j -> k)``;
a node's gadget angle is one ``RZ`` on the accumulator.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .pathsearch import PathState
from .spectral import CoeffVector, PhaseVector, inverse_wht


class CircuitError(RuntimeError):
    pass


@dataclass(frozen=True)
class Gate:
    """One of ``CNOT(control, target)``, ``RZ(theta, wire)`` or ``X(wire)``.

    ``RZ(theta)`` is ``diag(exp(-i theta/2), exp(+i theta/2))``.
    """

    kind: str
    wires: tuple
    theta: Optional[float] = None

    def __post_init__(self):
        if self.kind == "cx":
            if len(self.wires) != 2 or self.wires[0] == self.wires[1]:
                raise ValueError(f"bad CNOT wires {self.wires}")
        elif self.kind == "rz":
            if len(self.wires) != 1 or self.theta is None or not np.isfinite(self.theta):
                raise ValueError("RZ needs one wire and a finite angle")
        elif self.kind == "x":
            if len(self.wires) != 1:
                raise ValueError("X acts on one wire")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls("cx", (control, target))

    @classmethod
    def rz(cls, theta: float, wire: int) -> "Gate":
        return cls("rz", (wire,), float(theta))

    @classmethod
    def x(cls, wire: int) -> "Gate":
        return cls("x", (wire,))


@dataclass(frozen=True)
class Circuit:
    gates: tuple
    wire_count: int
    cnot_budget: int = 0
    uncompute: bool = True

    @property
    def cnot_emitted(self) -> int:
        return sum(1 for g in self.gates if g.kind == "cx")

    @property
    def rz_count(self) -> int:
        return sum(1 for g in self.gates if g.kind == "rz")


def synthesize_coeffs(path, alpha_t: CoeffVector) -> CoeffVector:
    """Keep ``alpha_t[s]`` for every visited mask ``s`` (0 included), zero the rest."""
    a = np.asarray(alpha_t, dtype=np.float64)
    nodes = np.fromiter(path.visited if isinstance(path, PathState) else set(path), dtype=np.int64)
    out = np.zeros_like(a)
    out[nodes] = a[nodes]
    return CoeffVector(out)


def synthesized_phases(path, alpha_t: CoeffVector) -> PhaseVector:
    return inverse_wht(synthesize_coeffs(path, alpha_t))


def emit_circuit(path, alpha_t: CoeffVector, uncompute: bool = True, cnot_budget: Optional[int] = None) -> Circuit:
    """Gate list realizing the gadgets along ``path`` on an accumulator wire.

    Each first visit to a mask ``s`` emits ``RZ(-2 * alpha_t[s])``, which
    multiplies ``|x>`` by ``exp(i * alpha_t[s] * (-1)^popcount(s & x))``.
    Revisits cost their CNOT but emit no rotation. The start node carries
    only the global phase and emits nothing. With ``uncompute`` the
    accumulator is returned to ``|0>`` at the end.
    """
    nodes = path.nodes if isinstance(path, PathState) else [int(v) for v in path]
    if len(nodes) < 2 or nodes[0] != 0:
        raise CircuitError("path must start at 0 and have at least two nodes")
    a = np.asarray(alpha_t, dtype=np.float64)
    k = a.size.bit_length() - 1
    acc = k
    gates = []
    seen = {0}
    for prev, node in zip(nodes, nodes[1:]):
        diff = prev ^ node
        if diff == 0 or diff & (diff - 1):
            raise CircuitError(f"{prev} -> {node} is not a hypercube edge")
        gates.append(Gate.cnot(diff.bit_length() - 1, acc))
        if node not in seen:
            seen.add(node)
            gates.append(Gate.rz(-2.0 * a[node], acc))
    if uncompute:
        last = nodes[-1]
        gates.extend(Gate.cnot(j, acc) for j in range(k) if (last >> j) & 1)
    if cnot_budget is None:
        cnot_budget = len(nodes) - 2
    return Circuit(tuple(gates), k + 1, cnot_budget, uncompute)


QASM_HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def to_qasm(circuit: Circuit) -> str:
    lines = [QASM_HEADER + f"qreg q[{circuit.wire_count}];"]
    for g in circuit.gates:
        if g.kind == "cx":
            lines.append(f"cx q[{g.wires[0]}],q[{g.wires[1]}];")
        elif g.kind == "rz":
            lines.append(f"rz({g.theta:.17g}) q[{g.wires[0]}];")
        else:
            lines.append(f"x q[{g.wires[0]}];")
    return "\n".join(lines) + "\n"
