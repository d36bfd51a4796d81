"""Per-point precomputation shared by the integrand kernels.

The effective (non-Hermitian) Hamiltonian H_F + Sigma^R is diagonalized once
per nuclear position. In the eigenbasis the retarded Green's function is a
diagonal Cauchy kernel, so each energy node costs three small matrix products
instead of a fresh inversion. With equal lead broadenings the effective
Hamiltonian is normal and the Hermitian eigensolver applies; otherwise the
general solver plus an explicit inverse is used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PointContext:
    """Eigen-factorized integrand data at one nuclear position.

    lam         eigenvalues of H_F - i/2*diag(g), all in the lower half-plane
    vinv        V^{-1} (rows of left eigenvectors)
    vinv_h      (V^{-1})^H, cached for the lesser-self-energy sandwich
    p_x, p_y    V^H  D_alpha V for the two derivative operators
    q_x, q_y    V^{-1} D_alpha V
    g, s        broadening and Fermi shift of each diagonal entry
    """

    lam: np.ndarray
    vinv: np.ndarray
    vinv_h: np.ndarray
    p_x: np.ndarray
    p_y: np.ndarray
    q_x: np.ndarray
    q_y: np.ndarray
    g: np.ndarray
    s: np.ndarray
    beta: float
    dim_level: int
    n_floquet: int

    @property
    def dim(self) -> int:
        return self.lam.shape[0]


def _c(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=complex)


def build_point_context(
    hf: np.ndarray,
    dx: np.ndarray,
    dy: np.ndarray,
    gamma_diag: np.ndarray,
    shift_diag: np.ndarray,
    beta: float,
    dim_level: int,
    n_floquet: int,
) -> PointContext:
    """Diagonalize the effective Hamiltonian and rotate the derivative operators."""
    hf = np.asarray(hf, dtype=complex)
    g = np.ascontiguousarray(gamma_diag, dtype=float)
    s = np.ascontiguousarray(shift_diag, dtype=float)
    if np.ptp(g) <= 1e-13 * max(1.0, float(np.max(np.abs(g)))):
        # uniform broadening: H_F - i*g/2 is normal, eigenvectors unitary
        evals, v = np.linalg.eigh(hf)
        lam = evals - 0.5j * g[0]
        vinv = v.conj().T
    else:
        lam, v = np.linalg.eig(hf - 0.5j * np.diag(g))
        vinv = np.linalg.inv(v)
    vh = v.conj().T
    return PointContext(
        lam=_c(lam),
        vinv=_c(vinv),
        vinv_h=_c(vinv.conj().T),
        p_x=_c(vh @ dx @ v),
        p_y=_c(vh @ dy @ v),
        q_x=_c(vinv @ dx @ v),
        q_y=_c(vinv @ dy @ v),
        g=g,
        s=s,
        beta=float(beta),
        dim_level=dim_level,
        n_floquet=n_floquet,
    )
