"""Truncated Floquet-space operators.

A time-periodic Hamiltonian with harmonics H^(n) maps onto a time-independent
operator on the (level x Fourier-index) product space: the level block at
(block row m, block column n) is H^(m-n), plus m*omega on the block diagonal
from the Fourier-index number operator. Indices are truncated to [-N, N];
harmonics that would couple outside the window are dropped.

Block ordering: the Fourier index is the slow index, levels are fast, so the
full dimension is d*(2N+1) and block n occupies rows/cols [(n+N)*d, (n+N+1)*d).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import HarmonicSeries, dh_model
from .params import ModelParams


@dataclass(frozen=True)
class FloquetOperator:
    """Complex square matrix on the truncated level x Fourier-index space."""

    dim_level: int
    n_floquet: int
    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=complex)
        dim = self.dim_level * (2 * self.n_floquet + 1)
        if data.shape != (dim, dim):
            raise ValueError(f"data has shape {data.shape}, expected {(dim, dim)}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.dim_level * (2 * self.n_floquet + 1)

    def block(self, m: int, n: int) -> np.ndarray:
        """Level block at Fourier indices (row m, column n), m, n in [-N, N]."""
        N, d = self.n_floquet, self.dim_level
        if not (-N <= m <= N and -N <= n <= N):
            raise IndexError(f"block ({m}, {n}) outside [-{N}, {N}]")
        r, c = (m + N) * d, (n + N) * d
        return self.data[r : r + d, c : c + d]

    def hermiticity_defect(self) -> float:
        """Max-norm of data - data^dagger."""
        return float(np.max(np.abs(self.data - self.data.conj().T)))


def build_floquet_operator(h: HarmonicSeries, params: ModelParams) -> FloquetOperator:
    """Assemble the Floquet-space Hamiltonian from a harmonic series.

    The result is Hermitian whenever the series satisfies its own
    H^(-n) = H^(n)^dagger invariant.
    """
    N = params.n_floquet
    d = h.dim
    omega = params.drive_freq
    dim = d * (2 * N + 1)
    out = np.zeros((dim, dim), dtype=complex)
    for m in range(-N, N + 1):
        r = (m + N) * d
        for n, mat in h.harmonics.items():
            mp = m - n
            if -N <= mp <= N:
                c = (mp + N) * d
                out[r : r + d, c : c + d] += mat
        out[r : r + d, r : r + d] += m * omega * np.eye(d)
    return FloquetOperator(dim_level=d, n_floquet=N, data=out)


def replicate_block(block: np.ndarray, n_floquet: int) -> np.ndarray:
    """Block-diagonal replication of a d x d matrix over all Fourier blocks."""
    block = np.asarray(block, dtype=complex)
    d = block.shape[0]
    reps = 2 * n_floquet + 1
    out = np.zeros((d * reps, d * reps), dtype=complex)
    for k in range(reps):
        out[k * d : (k + 1) * d, k * d : (k + 1) * d] = block
    return out


def dh_floquet(
    direction: str, position: tuple[float, float], params: ModelParams
) -> FloquetOperator:
    """Floquet-space derivative of the Hamiltonian w.r.t. a nuclear coordinate.

    Only H^(0) depends on position in the built-in model, so the derivative is
    the block-diagonal replication of dH^(0)/dR over all Fourier blocks; the
    drive harmonics and the number-operator diagonal drop out.
    """
    del position  # derivative is position-independent for this model
    block = dh_model(direction, params)
    data = replicate_block(block, params.n_floquet)
    return FloquetOperator(dim_level=2, n_floquet=params.n_floquet, data=data)


def ladder_matrix(n: int, dim_level: int, n_floquet: int) -> np.ndarray:
    """Matrix realization of the Fourier-index shift operator L_n.

    Places the level-space identity on the n-th block superdiagonal:
    (L_n)[m, m'] = delta_{m, m'+n} on the truncated index range.
    """
    N, d = n_floquet, dim_level
    dim = d * (2 * N + 1)
    out = np.zeros((dim, dim), dtype=complex)
    for mp in range(-N, N + 1):
        m = mp + n
        if -N <= m <= N:
            r, c = (m + N) * d, (mp + N) * d
            out[r : r + d, c : c + d] = np.eye(d)
    return out


def number_matrix(dim_level: int, n_floquet: int) -> np.ndarray:
    """Matrix realization of the Fourier-index number operator N."""
    N, d = n_floquet, dim_level
    diag = np.repeat(np.arange(-N, N + 1, dtype=float), d)
    return np.diag(diag).astype(complex)
