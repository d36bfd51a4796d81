"""Pure-numpy reference implementation of the friction integrand kernel.

Mathematically identical to the compiled kernel; kept as the import-time
fallback and as the comparison target for the backend-parity tests.
"""

from __future__ import annotations

import numpy as np

from .context import PointContext

NAME = "numpy"

_TWO_PI = 2.0 * np.pi


def _fermi(x: np.ndarray, beta: float) -> np.ndarray:
    bx = beta * x
    out = np.empty_like(bx)
    pos = bx > 0
    e = np.exp(-bx[pos])
    out[pos] = e / (1.0 + e)
    out[~pos] = 1.0 / (1.0 + np.exp(bx[~pos]))
    return out


def friction_integrand(eps: np.ndarray, ctx: PointContext) -> np.ndarray:
    """Vector integrand at the given energies.

    Returns an (n, 6) complex array with columns

        T_xx, T_xy, T_yx, T_yy, J_x, J_y

    where T_ab = Tr[D_a dG^R/deps D_b G^<] / (2 pi) (the friction trace before
    adding the Hermitian conjugate and the Fourier-trace normalization) and
    J_a = -i Tr[D_a G^<] / (2 pi) (the steady-state density trace).
    """
    eps = np.asarray(eps, dtype=float)
    d = 1.0 / (eps[:, None] - ctx.lam[None, :])  # diagonal of G^R in eigenbasis
    f = _fermi(eps[:, None] - ctx.s[None, :], ctx.beta)
    w = (1j * ctx.g)[None, :] * f
    # K = V^{-1} Sigma^<(eps) (V^{-1})^H, with Sigma^< diagonal
    k = (ctx.vinv[None, :, :] * w[:, None, :]) @ ctx.vinv_h
    # X = diag(d) K diag(d*); the "G^< core" in the eigenbasis
    x = d[:, :, None] * k * d.conj()[:, None, :]
    zx = ctx.q_x @ x
    zy = ctx.q_y @ x
    d2 = d * d
    out = np.empty((eps.shape[0], 6), dtype=complex)
    # Tr[D_a dG D_b G^<] = -sum_{jk} P_a[j,k] d_k^2 (Q_b X)[k,j]
    out[:, 0] = -np.einsum("jk,ek,ekj->e", ctx.p_x, d2, zx, optimize=True)
    out[:, 1] = -np.einsum("jk,ek,ekj->e", ctx.p_x, d2, zy, optimize=True)
    out[:, 2] = -np.einsum("jk,ek,ekj->e", ctx.p_y, d2, zx, optimize=True)
    out[:, 3] = -np.einsum("jk,ek,ekj->e", ctx.p_y, d2, zy, optimize=True)
    out[:, :4] /= _TWO_PI
    # Tr[D_a G^<] = sum_{jk} P_a[j,k] X[k,j]
    out[:, 4] = np.einsum("jk,ekj->e", ctx.p_x, x, optimize=True) * (-1j / _TWO_PI)
    out[:, 5] = np.einsum("jk,ekj->e", ctx.p_y, x, optimize=True) * (-1j / _TWO_PI)
    return out
