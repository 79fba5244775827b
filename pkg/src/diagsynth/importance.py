"""Phase importance: how much each gadget matters to the synthesis error."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .spectral import CoeffVector

DEFAULT_GAMMA = 50.0


@dataclass(frozen=True, eq=False)
class ImportanceVector:
    """Logistic-squashed node weights in ``[0, 1]``.

    ``threshold_raw`` is the normalized value that maps to exactly 0.5
    (the K-th largest normalized importance); ``gamma`` is the logistic
    steepness. Entry 0 (the start node) is always 1.
    """

    values: np.ndarray
    threshold_raw: float
    gamma: float

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, node: int) -> float:
        return float(self.values[node])


def _logistic(z: np.ndarray) -> np.ndarray:
    # exp overflow at large |z| is harmless; the limits are 0 and 1.
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def phase_importance(alpha: CoeffVector, cnot_budget: int, gamma: float = DEFAULT_GAMMA) -> ImportanceVector:
    """Importance of every parity mask for a budget of ``cnot_budget`` CNOTs.

    ``|alpha_s|`` for ``s >= 1`` is min-max normalized to ``[0, 1]``,
    the start node gets 1, and each ``s >= 1`` is pushed through
    ``logistic(gamma * (imp - temp))`` where ``temp`` is the K-th largest
    normalized value (index 0 included) with ``K = min(C + 2, 2^k)``.
    Roughly the top ``C + 1`` gadgets therefore sit at or above 0.5.
    """
    if cnot_budget < 0:
        raise ValueError("cnot_budget must be >= 0")
    if not gamma > 0:
        raise ValueError("gamma must be > 0")
    a = np.asarray(alpha, dtype=np.float64).reshape(-1)
    n = a.size

    raw = np.abs(a[1:])
    lo, hi = raw.min(), raw.max()
    norm = np.empty(n)
    if hi > lo:
        norm[1:] = (raw - lo) / (hi - lo)
    else:
        if raw.size > 1:
            warnings.warn("all |alpha_s| equal for s >= 1; importance set to 0.5", RuntimeWarning, stacklevel=2)
        norm[1:] = 0.5
    norm[0] = 1.0

    kth = min(cnot_budget + 2, n)
    temp = float(np.sort(norm)[::-1][kth - 1])

    imp = norm.copy()
    imp[1:] = _logistic(gamma * (norm[1:] - temp))
    imp[0] = 1.0
    return ImportanceVector(imp, temp, float(gamma))


def is_active(imp: ImportanceVector, node: int, path, epsilon: float) -> bool:
    """A node is active if it is not on ``path`` and its importance exceeds ``0.5 - epsilon``."""
    return node not in path and imp.values[node] > 0.5 - epsilon
