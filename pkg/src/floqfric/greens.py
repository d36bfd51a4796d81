"""Wide-band Floquet self-energies and Green's functions of the dot-lead model.

Within the wide-band approximation the retarded self-energy is the constant
-i/2 * diag(Gamma) replicated over Fourier blocks, and the lesser self-energy
is block-diagonal with the Fermi function shifted by n*omega in block n and by
the chemical potential of the lead each level couples to. The retarded Green's
function is then a plain resolvent, its energy derivative is analytic, and the
lesser Green's function follows from the Keldysh product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .floquet import FloquetOperator
from .params import ModelParams


def fermi(e, beta: float):
    """Fermi function 1/(1 + exp(beta*e)), overflow-safe for large |beta*e|.

    Accepts scalars or arrays.
    """
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    x = np.asarray(beta * np.asarray(e, dtype=float))
    out = np.empty_like(x)
    pos = x > 0
    ex = np.exp(-x[pos])
    out[pos] = ex / (1.0 + ex)
    out[~pos] = 1.0 / (1.0 + np.exp(x[~pos]))
    if np.isscalar(e) or np.ndim(e) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class SelfEnergy:
    """Wide-band lead self-energies on the truncated Floquet space.

    ``level_gammas[i]`` is the broadening of level i from its lead and
    ``level_mus[i]`` the chemical potential of that lead; the level-to-lead
    assignment is fixed by construction (first level -> left lead, second ->
    right lead for the built-in model, but any map can be supplied).
    """

    dim_level: int
    n_floquet: int
    drive_freq: float
    level_gammas: np.ndarray
    level_mus: np.ndarray
    beta: float

    def __post_init__(self) -> None:
        g = np.asarray(self.level_gammas, dtype=float)
        mu = np.asarray(self.level_mus, dtype=float)
        if g.shape != (self.dim_level,) or mu.shape != (self.dim_level,):
            raise ValueError("level_gammas/level_mus must have one entry per level")
        if np.any(g < 0):
            raise ValueError("level broadenings must be >= 0")
        g.setflags(write=False)
        mu.setflags(write=False)
        object.__setattr__(self, "level_gammas", g)
        object.__setattr__(self, "level_mus", mu)

    @classmethod
    def wide_band(
        cls,
        params: ModelParams,
        dim_level: int = 2,
        leads: tuple[int, ...] = (0, 1),
    ) -> "SelfEnergy":
        """Self-energy for ``dim_level`` levels with a level-to-lead map.

        ``leads[i]`` is 0 for the left lead, 1 for the right one. Both leads
        carry the same wide-band broadening Gamma.
        """
        if len(leads) != dim_level:
            raise ValueError("leads must assign one lead per level")
        mus = np.array([(params.mu_left, params.mu_right)[l] for l in leads])
        gammas = np.full(dim_level, params.gamma)
        return cls(
            dim_level=dim_level,
            n_floquet=params.n_floquet,
            drive_freq=params.drive_freq,
            level_gammas=gammas,
            level_mus=mus,
            beta=params.beta,
        )

    @property
    def dim(self) -> int:
        return self.dim_level * (2 * self.n_floquet + 1)

    def gamma_diagonal(self) -> np.ndarray:
        """Broadening of every (Fourier block, level) diagonal entry."""
        return np.tile(self.level_gammas, 2 * self.n_floquet + 1)

    def shift_diagonal(self) -> np.ndarray:
        """Fermi-argument shift n*omega + mu per diagonal entry."""
        n = np.repeat(np.arange(-self.n_floquet, self.n_floquet + 1), self.dim_level)
        return n * self.drive_freq + np.tile(self.level_mus, 2 * self.n_floquet + 1)

    @property
    def min_gamma(self) -> float:
        return float(np.min(self.level_gammas))

    def retarded(self) -> FloquetOperator:
        """Energy-independent retarded self-energy -i/2 * diag(Gamma)."""
        data = np.diag(-0.5j * self.gamma_diagonal().astype(complex))
        return FloquetOperator(self.dim_level, self.n_floquet, data)

    def lesser_diagonal(self, eps: float) -> np.ndarray:
        """Diagonal of the lesser self-energy at energy eps."""
        f = fermi(eps - self.shift_diagonal(), self.beta)
        return 1j * self.gamma_diagonal() * f

    def lesser_at(self, eps: float) -> FloquetOperator:
        """Lesser self-energy i * Gamma * f(eps - n*omega - mu), block-diagonal."""
        return FloquetOperator(
            self.dim_level, self.n_floquet, np.diag(self.lesser_diagonal(eps))
        )


class SingularResolventError(np.linalg.LinAlgError):
    """Raised when (eps - Sigma^R - H_F) is singular; supply eta > 0."""


def g_retarded(
    eps: float,
    hf: FloquetOperator,
    se: SelfEnergy,
    eta: float | None = None,
) -> np.ndarray:
    """Retarded Green's function (eps*I - Sigma^R - H_F)^(-1).

    With any lead broadening the resolvent exists for all real eps and eta
    defaults to 0; for closed-system diagnostics (all Gammas zero) a small
    positive eta (default 1e-8) regularizes the inverse.
    """
    if eta is None:
        eta = 0.0 if se.min_gamma > 0 else 1e-8
    dim = hf.dim
    a = (eps + 1j * eta) * np.eye(dim) - se.retarded().data - hf.data
    try:
        return np.linalg.solve(a, np.eye(dim, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise SingularResolventError(
            f"resolvent singular at eps={eps}; pass eta > 0 for a closed system"
        ) from exc


def dgr_deps(gr: np.ndarray) -> np.ndarray:
    """Analytic energy derivative of the retarded Green's function, -G^R G^R.

    Valid because the wide-band self-energy is energy-independent.
    """
    return -(gr @ gr)


def g_lesser(eps: float, gr: np.ndarray, ga: np.ndarray, se: SelfEnergy) -> np.ndarray:
    """Lesser Green's function G^R Sigma^<(eps) G^A."""
    return (gr * se.lesser_diagonal(eps)[np.newaxis, :]) @ ga


def spectral_function(gr: np.ndarray, ga: np.ndarray) -> np.ndarray:
    """Spectral function i(G^R - G^A); positive semidefinite."""
    return 1j * (gr - ga)


@dataclass(frozen=True)
class GreensBundle:
    """G^R, G^A, dG^R/deps and G^< evaluated at one energy."""

    energy: float
    gr: np.ndarray
    ga: np.ndarray
    dgr_deps: np.ndarray
    glesser: np.ndarray


def greens_bundle(
    eps: float, hf: FloquetOperator, se: SelfEnergy, eta: float | None = None
) -> GreensBundle:
    gr = g_retarded(eps, hf, se, eta=eta)
    ga = gr.conj().T
    return GreensBundle(
        energy=eps, gr=gr, ga=ga, dgr_deps=dgr_deps(gr), glesser=g_lesser(eps, gr, ga, se)
    )
