"""Walsh-Hadamard transforms between phases and phase-gadget angles.

A diagonal unitary ``diag(exp(i*lam_x))`` on ``k`` qubits is stored as its
real phase vector ``lam``. Index ``x`` is read as a bitstring with bit ``i``
belonging to qubit ``i`` (bit 0 least significant). Its Walsh-Hadamard
coefficients ``alpha_s`` are the angles of the phase gadgets with parity
mask ``s``::

    lam_x = sum_s alpha_s * (-1)**popcount(s & x)

No unitary matrix is ever materialized.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SpectralInputError(ValueError):
    """Raised for vectors that are not a valid length-2^k real array."""


class UndefinedUtilityError(ZeroDivisionError):
    """Raised when a utility ratio is requested for a zero error."""


def _qubits_for_length(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise SpectralInputError(f"length must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    _qubits_for_length(arr.size)
    if not np.all(np.isfinite(arr)):
        raise SpectralInputError("entries must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PhaseVector:
    """Phases ``lam_x`` (radians) of a diagonal unitary on ``k`` qubits."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))

    @property
    def k(self) -> int:
        return self.values.size.bit_length() - 1

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True, eq=False)
class CoeffVector:
    """Walsh-Hadamard coefficients ``alpha_s`` indexed by parity mask ``s``."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))

    @property
    def k(self) -> int:
        return self.values.size.bit_length() - 1

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def fwht(arr: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform, in place on ``arr``.

    Butterfly stages of width ``h = 1, 2, 4, ...``; each stage is one
    vectorized pass, so the cost is O(k * 2^k).
    """
    n = arr.shape[0]
    h = 1
    while h < n:
        view = arr.reshape(-1, 2, h)
        u = view[:, 0, :].copy()
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] = u - view[:, 1, :]
        h *= 2
    return arr


def forward_wht(lam: PhaseVector) -> CoeffVector:
    """Coefficients ``alpha_s = 2^-k * sum_x lam_x * (-1)^popcount(s & x)``."""
    if not isinstance(lam, PhaseVector):
        lam = PhaseVector(lam)
    buf = np.array(lam.values, dtype=np.float64)
    fwht(buf)
    buf /= buf.size
    return CoeffVector(buf)


def inverse_wht(alpha: CoeffVector) -> PhaseVector:
    """Phases ``lam_x = sum_s alpha_s * (-1)^popcount(s & x)``."""
    if not isinstance(alpha, CoeffVector):
        alpha = CoeffVector(alpha)
    buf = np.array(alpha.values, dtype=np.float64)
    fwht(buf)
    return PhaseVector(buf)


def error(lambda_t: PhaseVector, lambda_c: PhaseVector) -> float:
    """Distance between two diagonal unitaries given by their phases.

    ``D = sqrt(mean_x sin^2((lam_x - lam'_x) / 2))``, i.e. the RMS of
    ``|e^{i lam} - e^{i lam'}| / 2`` over the diagonal. ``D`` lies in
    ``[0, 1]`` and is zero iff every difference is a multiple of 2*pi.
    """
    a = np.asarray(lambda_t, dtype=np.float64).reshape(-1)
    b = np.asarray(lambda_c, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise SpectralInputError(f"length mismatch: {a.size} vs {b.size}")
    _qubits_for_length(a.size)
    s = np.sin((a - b) / 2.0)
    return float(np.sqrt(np.mean(s * s)))


def utility(saved_ratio: float, err: float) -> float:
    """Fraction of CNOTs saved per unit of synthesis error."""
    if err == 0:
        raise UndefinedUtilityError("utility is undefined for zero error")
    if saved_ratio == 0:
        return 0.0
    return saved_ratio / err
