"""Closed-system propagators used to cross-validate the Floquet construction.

Two independent routes for the same dynamics:

* direct fixed-step RK4 integration of d rho/dt = -i [H(t), rho], and
* time-independent evolution under the Floquet-space Hamiltonian with the
  physical density reconstructed from the central block row.

Agreement between the two validates the Floquet assembly, its truncation, and
the harmonic bookkeeping. Open-system evolution is intentionally out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .floquet import build_floquet_operator
from .model import HarmonicSeries
from .params import ModelParams

_RHO_TOL = 1e-10


@dataclass(frozen=True)
class DensityTrajectory:
    """Sampled density-matrix trajectory rho(t)."""

    times: np.ndarray
    states: np.ndarray  # (n_times, d, d) complex

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=complex)
        if states.ndim != 3 or states.shape[0] != times.shape[0]:
            raise ValueError("states must be (n_times, d, d) matching times")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.states - self.states.conj().transpose(0, 2, 1))))

    def trace_drift(self) -> float:
        traces = np.einsum("tii->t", self.states).real
        return float(np.max(np.abs(traces - traces[0])))


def _check_rho0(rho0: np.ndarray) -> np.ndarray:
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.ndim != 2 or rho0.shape[0] != rho0.shape[1]:
        raise ValueError(f"rho0 must be square, got shape {rho0.shape}")
    if np.max(np.abs(rho0 - rho0.conj().T)) > _RHO_TOL:
        raise ValueError("rho0 must be Hermitian")
    if abs(np.trace(rho0).real - 1.0) > _RHO_TOL or abs(np.trace(rho0).imag) > _RHO_TOL:
        raise ValueError("rho0 must have unit trace")
    return rho0


def propagate_direct(
    h: Callable[[float], np.ndarray],
    rho0: np.ndarray,
    t_end: float,
    dt: float,
) -> DensityTrajectory:
    """Fixed-step RK4 integration of the Liouville-von Neumann equation.

    ``h`` maps time to the (possibly time-dependent) Hamiltonian matrix. Every
    step is recorded. Trace is preserved to O(dt^4) per step by construction.
    """
    rho0 = _check_rho0(rho0)
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    n_steps = max(1, int(np.ceil(t_end / dt - 1e-12)))
    dt = t_end / n_steps

    def rhs(t: float, rho: np.ndarray) -> np.ndarray:
        ht = h(t)
        return -1j * (ht @ rho - rho @ ht)

    times = np.empty(n_steps + 1)
    states = np.empty((n_steps + 1,) + rho0.shape, dtype=complex)
    times[0] = 0.0
    states[0] = rho0
    rho = rho0.copy()
    for k in range(n_steps):
        t = k * dt
        k1 = rhs(t, rho)
        k2 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k2)
        k4 = rhs(t + dt, rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        times[k + 1] = t + dt
        states[k + 1] = rho
    return DensityTrajectory(times=times, states=states)


class FloquetPropagator:
    """Evolution under the time-independent Floquet Hamiltonian (cached eig).

    The initial density is lifted to the block diagonal (rho0 on every Fourier
    block, i.e. rho0 tensor identity since L_0 is the identity), evolved by
    conjugation with exp(-i H_F t), and the physical density reconstructed by
    summing the central block row with its Fourier phases. Under truncation the
    block rows are inequivalent; the central row suffers the least clipping.
    """

    def __init__(self, h: HarmonicSeries, params: ModelParams):
        self.dim = h.dim
        self.n_floquet = params.n_floquet
        self.omega = params.drive_freq
        hf = build_floquet_operator(h, params)
        defect = hf.hermiticity_defect()
        if defect > 1e-9:
            raise np.linalg.LinAlgError(
                f"Floquet operator not Hermitian (defect {defect:.2e})"
            )
        self._evals, self._evecs = np.linalg.eigh(hf.data)

    def density(self, rho0: np.ndarray, t: float) -> np.ndarray:
        rho0 = _check_rho0(rho0)
        d, N = self.dim, self.n_floquet
        if rho0.shape != (d, d):
            raise ValueError(f"rho0 has shape {rho0.shape}, expected {(d, d)}")
        v = self._evecs
        phases = np.exp(-1j * self._evals * t)
        # exp(-i H_F t) rho_F(0) exp(+i H_F t) with rho_F(0) = 1 (x) rho0
        rho_f0 = np.kron(np.eye(2 * N + 1), rho0)
        u = (v * phases) @ v.conj().T
        rho_f = u @ rho_f0 @ u.conj().T
        # central block row: block (0, c) holds the harmonic rho^(-c)(t)
        out = np.zeros((d, d), dtype=complex)
        r = N * d
        for c in range(-N, N + 1):
            col = (c + N) * d
            out += rho_f[r : r + d, col : col + d] * np.exp(-1j * c * self.omega * t)
        return out


def propagate_floquet(
    h: HarmonicSeries, rho0: np.ndarray, params: ModelParams, t: float
) -> np.ndarray:
    """Physical density at time t via the Floquet-space route."""
    return FloquetPropagator(h, params).density(rho0, t)


def time_dependent_hamiltonian(
    h: HarmonicSeries, omega: float
) -> Callable[[float], np.ndarray]:
    """Callable H(t) reassembled from a harmonic series."""
    return lambda t: h.at_time(t, omega)


def reference_time_step(h: HarmonicSeries, params: ModelParams) -> float:
    """Step for the direct integrator: dt = min(0.01/max|H|, T/200).

    max|H| is the largest matrix-element magnitude over one sampled period.
    """
    period = params.period
    ts = np.linspace(0.0, period, 128, endpoint=False)
    hmax = max(float(np.max(np.abs(h.at_time(t, params.drive_freq)))) for t in ts)
    hmax = max(hmax, 1e-12)
    return min(0.01 / hmax, period / 200.0)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Trace distance between two Hermitian matrices, 0.5 * ||a - b||_1."""
    diff = np.asarray(a) - np.asarray(b)
    evals = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return 0.5 * float(np.sum(np.abs(evals)))


def compare_propagators(
    h: HarmonicSeries,
    rho0: np.ndarray,
    params: ModelParams,
    n_periods: float,
    n_samples: int = 200,
    dt: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Max trace distance between the two propagation routes on sampled times.

    Returns (sample_times, trace_distances). Sample times are spread uniformly
    over ``n_periods`` drive periods and are deliberately not restricted to
    stroboscopic multiples of the period.
    """
    if dt is None:
        dt = reference_time_step(h, params)
    t_end = n_periods * params.period
    direct = propagate_direct(
        time_dependent_hamiltonian(h, params.drive_freq), rho0, t_end, dt
    )
    prop = FloquetPropagator(h, params)
    sample_idx = np.unique(
        np.round(np.linspace(0, len(direct.times) - 1, n_samples)).astype(int)
    )
    times = direct.times[sample_idx]
    dists = np.array(
        [
            trace_distance(direct.states[i], prop.density(rho0, direct.times[i]))
            for i in sample_idx
        ]
    )
    return times, dists


def sequence_to_trajectory(times: Sequence[float], states: Sequence[np.ndarray]) -> DensityTrajectory:
    return DensityTrajectory(times=np.asarray(times, float), states=np.asarray(states, complex))
