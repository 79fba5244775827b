"""Phase-gadget ordering as a node-weighted path search on the k-cube.

Every parity mask ``s`` is a node; two masks are adjacent when they differ
in one bit, since moving between their gadgets then costs one CNOT. The
search starts at ``0^k`` and walks ``C + 2`` nodes, preferring important
ones:

* greedy selection appends the most important active neighbor of the tail,
* rotation extension reverses a suffix of the path to expose a new tail
  that still has an active neighbor,
* dead-end handling steps to the neighbor closest to the remaining
  important nodes when both of the above stall,

all driven by a sweep over the relaxation value ``epsilon``.

The functions below mutate the given :class:`PathState` in place and
return it, so a search never copies the path.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .importance import DEFAULT_GAMMA, ImportanceVector, phase_importance
from .spectral import PhaseVector, forward_wht


@dataclass(frozen=True)
class SearchConfig:
    k: int
    cnot_budget: int
    gamma: float = DEFAULT_GAMMA
    eps_start: float = 0.01
    eps_step: float = 0.01
    eps_max: float = 0.5

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.cnot_budget < 0:
            raise ValueError("cnot_budget must be >= 0")
        if self.cnot_budget + 2 > 2 * (1 << self.k):
            raise ValueError(f"cnot_budget {self.cnot_budget} too large for k={self.k}")
        if not 0 < self.eps_step <= self.eps_max <= 0.5:
            raise ValueError("need 0 < eps_step <= eps_max <= 0.5")
        if not self.gamma > 0:
            raise ValueError("gamma must be > 0")

    @property
    def budget_nodes(self) -> int:
        return self.cnot_budget + 2

    def epsilons(self) -> list[float]:
        """The relaxation sweep ``eps_start, eps_start + eps_step, ..., <= eps_max``."""
        out = []
        i = 0
        while True:
            eps = round(self.eps_start + i * self.eps_step, 12)
            if eps > self.eps_max + 1e-12:
                return out
            out.append(eps)
            i += 1


@dataclass
class SearchStats:
    dead_ends: int = 0
    extensions: int = 0
    final_epsilon: float = 0.0


class PathState:
    """A walk on the k-cube starting at ``0^k``.

    Nodes may repeat (a dead-end step is allowed to revisit). The path is
    kept in a fixed-capacity array so that suffix reversal is a single
    vectorized copy; ``_count`` and ``_pos`` make membership and position
    lookups O(1). ``_pos`` is only reliable for nodes with count 1.
    """

    def __init__(self, k: int, budget_nodes: int):
        if budget_nodes < 1:
            raise ValueError("budget_nodes must be >= 1")
        self.k = k
        self.budget_nodes = budget_nodes
        self.stats = SearchStats()
        self._buf = np.zeros(budget_nodes, dtype=np.int64)
        self._len = 1
        size = 1 << k
        self._count = np.zeros(size, dtype=np.int64)
        self._count[0] = 1
        self._pos = np.full(size, -1, dtype=np.int64)
        self._pos[0] = 0

    @classmethod
    def from_nodes(cls, nodes, k: int, budget_nodes: Optional[int] = None) -> "PathState":
        nodes = [int(v) for v in nodes]
        if not nodes or nodes[0] != 0:
            raise ValueError("a path must start at node 0")
        path = cls(k, budget_nodes if budget_nodes is not None else len(nodes))
        for v in nodes[1:]:
            if bin(v ^ path.tail).count("1") != 1:
                raise ValueError(f"{path.tail} -> {v} is not a hypercube edge")
            path.append(v)
        return path

    def __len__(self) -> int:
        return self._len

    def __contains__(self, node) -> bool:
        return bool(self._count[node])

    def __iter__(self):
        return iter(self.nodes)

    def __repr__(self) -> str:
        return f"PathState(k={self.k}, nodes={self.nodes})"

    @property
    def nodes(self) -> list[int]:
        return self._buf[: self._len].tolist()

    @property
    def visited(self) -> frozenset:
        return frozenset(np.flatnonzero(self._count).tolist())

    @property
    def tail(self) -> int:
        return int(self._buf[self._len - 1])

    @property
    def is_full(self) -> bool:
        return self._len >= self.budget_nodes

    def count(self, node: int) -> int:
        return int(self._count[node])

    def append(self, node: int) -> None:
        if self._len >= self.budget_nodes:
            raise IndexError("path budget exhausted")
        self._buf[self._len] = node
        self._pos[node] = self._len
        self._count[node] += 1
        self._len += 1

    def positions(self, node: int) -> list[int]:
        c = self._count[node]
        if c == 0:
            return []
        if c == 1:
            return [int(self._pos[node])]
        return np.flatnonzero(self._buf[: self._len] == node).tolist()

    def rotate(self, pivot: int) -> None:
        """Reverse everything after position ``pivot``."""
        n = self._len
        seg = self._buf[pivot + 1 : n][::-1].copy()
        self._buf[pivot + 1 : n] = seg
        self._pos[seg] = np.arange(pivot + 1, n)

    def copy(self) -> "PathState":
        other = PathState.__new__(PathState)
        other.k = self.k
        other.budget_nodes = self.budget_nodes
        other.stats = SearchStats(**vars(self.stats))
        other._buf = self._buf.copy()
        other._len = self._len
        other._count = self._count.copy()
        other._pos = self._pos.copy()
        return other


def neighbors(node: int, k: int) -> list[int]:
    """Masks adjacent to ``node``, flipping bit 0 first."""
    return [node ^ (1 << i) for i in range(k)]


def _best_active_neighbor(path: PathState, imp: np.ndarray, threshold: float) -> int:
    best, best_imp = -1, -1.0
    tail = path.tail
    count = path._count
    for i in range(path.k):
        v = tail ^ (1 << i)
        if count[v]:
            continue
        w = imp[v]
        if w > threshold and (w > best_imp or (w == best_imp and v < best)):
            best, best_imp = v, w
    return best


def path_selection(path: PathState, imp: ImportanceVector, config: SearchConfig, epsilon: float) -> PathState:
    """Greedily append the most important active neighbor of the tail.

    Stops when the tail has no active neighbor or the budget is reached.
    Ties go to the smaller mask.
    """
    values = imp.values
    threshold = 0.5 - epsilon
    budget = min(path.budget_nodes, config.budget_nodes)
    while len(path) < budget:
        nxt = _best_active_neighbor(path, values, threshold)
        if nxt < 0:
            break
        path.append(nxt)
    return path


def path_extension(path: PathState, imp: ImportanceVector, epsilon: float) -> tuple[PathState, bool]:
    """Try one rotation-extension step.

    For every position ``i <= len - 3`` whose node is adjacent to the tail,
    reversing ``path[i+1:]`` makes ``path[i+1]`` the new tail. Among all
    unvisited neighbors of such a ``path[i+1]`` the most important one wins
    (ties: smaller mask, then smaller ``i``). The rotation and the append
    happen only if that node is active under ``epsilon``.
    """
    n = len(path)
    if n < 3 or path.is_full:
        return path, False
    values = imp.values
    count = path._count
    buf = path._buf
    k = path.k
    tail = path.tail

    best_v, best_imp, best_pivot = -1, -np.inf, -1
    for b in range(k):
        u = tail ^ (1 << b)
        for i in path.positions(u):
            if i > n - 3:
                continue
            head = int(buf[i + 1])
            for bb in range(k):
                v = head ^ (1 << bb)
                if count[v]:
                    continue
                w = values[v]
                if (
                    w > best_imp
                    or (w == best_imp and v < best_v)
                    or (w == best_imp and v == best_v and i < best_pivot)
                ):
                    best_v, best_imp, best_pivot = v, w, i

    if best_v < 0 or not best_imp > 0.5 - epsilon:
        return path, False
    path.rotate(best_pivot)
    path.append(best_v)
    path.stats.extensions += 1
    return path, True


def dead_end_score(candidate: int, path: PathState, imp: ImportanceVector, omega: float, k: int) -> float:
    """Importance of ``candidate`` plus its proximity to unvisited important nodes.

    ``Imp[c]`` (0 if ``c`` is on the path) plus
    ``omega * sum_{j not on path, j != c} (k - hamming(c, j)) * Imp[j]``.
    Direct O(2^k) evaluation; :func:`dead_end_step` uses an equivalent
    O(k)-per-candidate form.
    """
    values = imp.values
    score = 0.0 if candidate in path else float(values[candidate])
    total = 0.0
    for j in range(1 << k):
        if j == candidate or j in path:
            continue
        total += (k - bin(candidate ^ j).count("1")) * values[j]
    return score + omega * total


def _bit_matrix(k: int) -> np.ndarray:
    idx = np.arange(1 << k, dtype=np.int64)
    return ((idx[None, :] >> np.arange(k)[:, None]) & 1).astype(np.float64)


def dead_end_scores(path: PathState, imp: ImportanceVector, omega: float, bits: Optional[np.ndarray] = None) -> dict[int, float]:
    """:func:`dead_end_score` for every neighbor of the tail at once.

    With ``w_j = Imp[j]`` on unvisited nodes and 0 elsewhere, the distance
    sum splits per bit: ``sum_j hamming(c, j) w_j`` is the sum over bits
    ``b`` of the weight on the side of bit ``b`` opposite to ``c``.
    """
    k = path.k
    if bits is None:
        bits = _bit_matrix(k)
    values = imp.values
    w = np.where(path._count == 0, values, 0.0)
    total = float(w.sum())
    ones = bits @ w
    zeros = total - ones
    out = {}
    tail = path.tail
    for b in range(k):
        c = tail ^ (1 << b)
        unvisited = path._count[c] == 0
        dist = 0.0
        for bb in range(k):
            dist += zeros[bb] if (c >> bb) & 1 else ones[bb]
        prox = k * total - dist
        if unvisited:
            prox -= k * w[c]
        out[c] = (float(values[c]) if unvisited else 0.0) + omega * prox
    return out


def dead_end_step(path: PathState, imp: ImportanceVector, omega: float, bits: Optional[np.ndarray] = None) -> PathState:
    """Append the tail neighbor with the best dead-end score (ties: smaller mask).

    The chosen neighbor may already be on the path; the step then spends a
    CNOT without adding a phase.
    """
    scores = dead_end_scores(path, imp, omega, bits)
    best = min(scores, key=lambda c: (-scores[c], c))
    path.append(best)
    path.stats.dead_ends += 1
    return path


Observer = Callable[[PathState, str], None]


def path_search(
    lam: PhaseVector,
    config: SearchConfig,
    observer: Optional[Observer] = None,
    imp: Optional[ImportanceVector] = None,
) -> PathState:
    """Order phase gadgets for ``lam`` within ``config.cnot_budget`` CNOTs.

    Returns a path of exactly ``C + 2`` nodes. ``observer(path, event)``
    is called after every mutation, with ``event`` one of ``"selection"``,
    ``"extension"`` or ``"dead_end"``.
    """
    if not isinstance(lam, PhaseVector):
        lam = PhaseVector(lam)
    if lam.k != config.k:
        raise ValueError(f"phase vector has k={lam.k}, config has k={config.k}")
    if imp is None:
        imp = phase_importance(forward_wht(lam), config.cnot_budget, config.gamma)

    target = config.budget_nodes
    path = PathState(config.k, target)
    bits = _bit_matrix(config.k)

    def notify(event):
        if observer is not None:
            observer(path, event)

    def select(eps):
        before = len(path)
        path_selection(path, imp, config, eps)
        if len(path) != before:
            notify("selection")

    select(0.0)
    eps = 0.0
    for eps in config.epsilons():
        if len(path) >= target:
            break
        path.stats.final_epsilon = eps
        while True:
            _, ok = path_extension(path, imp, eps)
            if ok:
                notify("extension")
                select(eps)
            if len(path) >= target or not ok:
                break
        if len(path) < target:
            dead_end_step(path, imp, eps, bits)
            notify("dead_end")
            select(eps)

    eps_max = config.eps_max
    while len(path) < target:
        path.stats.final_epsilon = eps_max
        dead_end_step(path, imp, eps_max, bits)
        notify("dead_end")
        select(eps_max)
    return path
