"""Fourier harmonics of the driven two-level electronic Hamiltonian.

The built-in model is a two-level system coupled to two nuclear coordinates:

    h(x, y, t) = [[ x + Delta,              A*y + B*cos(w*t) ],
                  [ A*y + B*cos(w*t),      -x - Delta        ]]

with a harmonic nuclear potential U = kx*x^2/2 + ky*y^2/2. The cosine drive
contributes half-amplitude harmonics at Fourier index +-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .params import ModelParams

_HERM_TOL = 1e-12


@dataclass(frozen=True)
class HarmonicSeries:
    """Finite set of Fourier harmonics H^(n) of a time-periodic Hamiltonian.

    ``harmonics`` maps the integer Fourier index n to a complex dim x dim
    matrix; indices that are absent are implicitly zero. Hermiticity of the
    underlying H(t) requires H^(-n) = H^(n)^dagger, which is checked on
    construction.
    """

    dim: int
    harmonics: Mapping[int, np.ndarray]
    position: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        frozen: dict[int, np.ndarray] = {}
        for n, mat in self.harmonics.items():
            mat = np.asarray(mat, dtype=complex)
            if mat.shape != (self.dim, self.dim):
                raise ValueError(
                    f"harmonic {n} has shape {mat.shape}, expected {(self.dim, self.dim)}"
                )
            mat.setflags(write=False)
            frozen[int(n)] = mat
        for n, mat in frozen.items():
            partner = frozen.get(-n)
            if partner is None:
                if np.max(np.abs(mat)) > _HERM_TOL:
                    raise ValueError(f"harmonic {-n} missing but harmonic {n} is nonzero")
                continue
            if np.max(np.abs(partner - mat.conj().T)) > _HERM_TOL:
                raise ValueError(f"harmonics {n}/{-n} violate H^(-n) = H^(n)^dagger")
        object.__setattr__(self, "harmonics", frozen)

    def harmonic(self, n: int) -> np.ndarray:
        """H^(n), a zero matrix for indices outside the stored set."""
        mat = self.harmonics.get(n)
        if mat is None:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return mat

    @property
    def order(self) -> int:
        """Largest |n| with a stored harmonic."""
        return max((abs(n) for n in self.harmonics), default=0)

    def at_time(self, t: float, omega: float) -> np.ndarray:
        """Reassemble H(t) = sum_n H^(n) exp(i n omega t)."""
        h = np.zeros((self.dim, self.dim), dtype=complex)
        for n, mat in self.harmonics.items():
            h += mat * np.exp(1j * n * omega * t)
        return h


def model_harmonics(position: tuple[float, float], params: ModelParams) -> HarmonicSeries:
    """Fourier harmonics of the built-in two-level model at a nuclear position.

    Returns a dim=2 series with

        H^(0)  = [[x + Delta, A*y], [A*y, -(x + Delta)]]
        H^(+1) = H^(-1) = [[0, B/2], [B/2, 0]]

    since cos(w t) = exp(i w t)/2 + exp(-i w t)/2. The drive harmonics are
    omitted when the drive amplitude vanishes.
    """
    x, y = float(position[0]), float(position[1])
    diag = x + params.level_shift
    coup = params.coupling_slope * y
    h0 = np.array([[diag, coup], [coup, -diag]], dtype=complex)
    harmonics: dict[int, np.ndarray] = {0: h0}
    if params.drive_amp != 0.0:
        h1 = np.array(
            [[0.0, params.drive_amp / 2.0], [params.drive_amp / 2.0, 0.0]], dtype=complex
        )
        harmonics[1] = h1
        harmonics[-1] = h1.copy()
    return HarmonicSeries(dim=2, harmonics=harmonics, position=(x, y))


def dh_model(direction: str, params: ModelParams) -> np.ndarray:
    """Derivative of H^(0) with respect to a nuclear coordinate.

    Position-independent for this model: d/dx gives the diagonal sigma_z-like
    block, d/dy the off-diagonal coupling block scaled by the coupling slope.
    """
    if direction == "x":
        return np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    if direction == "y":
        a = params.coupling_slope
        return np.array([[0.0, a], [a, 0.0]], dtype=complex)
    raise ValueError(f"direction must be 'x' or 'y', got {direction!r}")


def nuclear_potential(position: tuple[float, float], params: ModelParams) -> float:
    """Harmonic nuclear potential U(x, y) = kx*x^2/2 + ky*y^2/2."""
    x, y = position
    return 0.5 * params.pot_kx * x * x + 0.5 * params.pot_ky * y * y


def potential_gradient(position: tuple[float, float], params: ModelParams) -> np.ndarray:
    """Gradient of the nuclear potential, (kx*x, ky*y)."""
    x, y = position
    return np.array([params.pot_kx * x, params.pot_ky * y])
