"""Physical and numerical parameters of the driven dot-lead model.

Units: hbar = 1, k_B = 1, and all energies are dimensionless multiples of the
lead broadening scale. Lengths and times follow from those choices.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for the adaptive energy quadrature.

    ``half_width`` overrides the automatic integration window half-width; when
    None it is derived from the model parameters (see :func:`energy_window`).
    ``max_panels`` bounds the number of accepted subintervals before the
    quadrature reports non-convergence.
    """

    rel_tol: float = 1e-7
    max_panels: int = 4000
    half_width: float | None = None

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise ValueError(f"quad.rel_tol must be > 0, got {self.rel_tol}")
        if self.max_panels < 1:
            raise ValueError(f"quad.max_panels must be >= 1, got {self.max_panels}")
        if self.half_width is not None and not self.half_width > 0:
            raise ValueError(f"quad.half_width must be > 0, got {self.half_width}")


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the periodically driven two-level dot-lead model.

    Attributes
    ----------
    gamma : float
        Lead broadening (wide band), equal for both leads.
    mu_left, mu_right : float
        Chemical potentials of the left and right leads.
    beta : float
        Inverse temperature.
    drive_amp : float
        Amplitude of the cosine drive on the off-diagonal coupling.
    drive_freq : float
        Angular frequency of the drive.
    coupling_slope : float
        Linear dependence of the off-diagonal coupling on the y coordinate.
    level_shift : float
        Static splitting of the diagonal levels (avoided crossing sits at
        x = -level_shift).
    n_floquet : int
        Truncation of the Fourier-index space; indices run over [-N, N].
    pot_kx, pot_ky : float
        Harmonic nuclear potential constants. The source model leaves these
        unspecified; they default to 1.
    mass : float
        Nuclear mass, equal for both coordinates.
    quad : QuadratureConfig
        Energy-quadrature controls.
    """

    gamma: float
    mu_left: float
    mu_right: float
    beta: float
    drive_amp: float
    drive_freq: float
    coupling_slope: float
    level_shift: float
    n_floquet: int
    pot_kx: float = 1.0
    pot_ky: float = 1.0
    mass: float = 1.0
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.drive_amp < 0:
            raise ValueError(f"drive_amp must be >= 0, got {self.drive_amp}")
        if not self.drive_freq > 0:
            raise ValueError(f"drive_freq must be > 0, got {self.drive_freq}")
        if not isinstance(self.n_floquet, int) or self.n_floquet < 0:
            raise ValueError(f"n_floquet must be an integer >= 0, got {self.n_floquet}")
        if not self.pot_kx > 0:
            raise ValueError(f"pot_kx must be > 0, got {self.pot_kx}")
        if not self.pot_ky > 0:
            raise ValueError(f"pot_ky must be > 0, got {self.pot_ky}")
        if not self.mass > 0:
            raise ValueError(f"mass must be > 0, got {self.mass}")

    @property
    def period(self) -> float:
        """Drive period T = 2 pi / omega."""
        import math

        return 2.0 * math.pi / self.drive_freq


def energy_window(params: ModelParams, x_extent: float) -> tuple[float, float]:
    """Integration window for energy integrals of the Floquet Green's functions.

    The window covers all Fermi edges shifted by up to N*omega plus a half-width
    W = max(10/beta, 10*Gamma, 2*(|level_shift| + x_extent) + 2), wide enough
    that the integrand has decayed into its algebraic tail outside it. The tails
    themselves are handled separately by the quadrature (see
    :func:`floqfric.quadrature.quad_with_tails`).
    """
    if params.quad.half_width is not None:
        width = params.quad.half_width
    else:
        width = max(
            10.0 / params.beta,
            10.0 * params.gamma,
            2.0 * (abs(params.level_shift) + abs(x_extent)) + 2.0,
        )
    shift = params.n_floquet * params.drive_freq
    lo = min(params.mu_left, params.mu_right) - shift - width
    hi = max(params.mu_left, params.mu_right) + shift + width
    return lo, hi
