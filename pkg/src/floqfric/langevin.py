"""Langevin dynamics of the classical nuclei under the electronic friction.

Equation of motion: m d2R/dt2 = F(R) - gamma(R) dR/dt + dF, integrated with an
Euler-Maruyama step (momentum first, then position with the fresh momentum).
The random force obeys the equilibrium fluctuation-dissipation closure: its
covariance over a step is 2 * T * gamma_sym(R) * dt, realized through the
symmetric matrix square root of gamma_sym. The antisymmetric part of the
friction enters only the deterministic Lorentz-like force and never the noise;
it does no work on the nuclei.

Position-dependent multiplicative noise keeps the scheme at weak order one, so
quantitative runs should confirm convergence by halving dt.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .friction import GridResult, friction_tensor
from .model import potential_gradient
from .params import ModelParams

FrictionField = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

_CLIP_FLOOR = -1e-10


class StabilityError(RuntimeError):
    """The step size violates dt * ||gamma|| / m < 0.5 at the current position."""


class NonPositiveFrictionError(ValueError):
    """gamma_sym has negative eigenvalues beyond tolerance; no valid noise exists."""


@dataclass(frozen=True)
class TrajectoryState:
    """Phase-space point of one trajectory plus its private noise stream."""

    t: float
    position: np.ndarray
    momentum: np.ndarray
    rng: np.random.Generator

    def __post_init__(self) -> None:
        pos = np.asarray(self.position, dtype=float)
        mom = np.asarray(self.momentum, dtype=float)
        if pos.shape != (2,) or mom.shape != (2,):
            raise ValueError("position and momentum must be 2-vectors")
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(mom))):
            raise ValueError("non-finite trajectory state")
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "momentum", mom)

    @classmethod
    def initial(
        cls, position, momentum=(0.0, 0.0), seed: int | None = 0
    ) -> "TrajectoryState":
        return cls(
            t=0.0,
            position=np.asarray(position, dtype=float),
            momentum=np.asarray(momentum, dtype=float),
            rng=np.random.default_rng(seed),
        )


@dataclass(frozen=True)
class IntegratorConfig:
    """Step size, length, temperature and friction-refresh policy.

    ``temperature`` of None means 1/beta from the model parameters; zero
    disables the noise (deterministic damped dynamics). ``friction_refresh``
    is ``"every-step"`` (recompute the tensor at each position) or
    ``"cached-grid"`` (bilinear interpolation on a precomputed grid supplied
    via a provider built with :func:`cached_grid_provider`).
    """

    dt: float
    n_steps: int
    temperature: float | None = None
    friction_refresh: str = "every-step"
    sample_stride: int = 1

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.n_steps < 0:
            raise ValueError(f"n_steps must be >= 0, got {self.n_steps}")
        if self.temperature is not None and self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.friction_refresh not in ("every-step", "cached-grid"):
            raise ValueError(
                f"friction_refresh must be 'every-step' or 'cached-grid', "
                f"got {self.friction_refresh!r}"
            )
        if self.sample_stride < 1:
            raise ValueError(f"sample_stride must be >= 1, got {self.sample_stride}")


def _symmetric_sqrt(mat: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root with clipping of numerical negative fuzz."""
    evals, evecs = np.linalg.eigh(mat)
    scale = max(1.0, float(np.max(np.abs(evals))))
    if np.min(evals) < _CLIP_FLOOR * scale:
        raise NonPositiveFrictionError(
            f"symmetric friction part has eigenvalue {np.min(evals):.3e} < 0"
        )
    if np.min(evals) < 0:
        warnings.warn("clipping slightly negative friction eigenvalue to zero",
                      RuntimeWarning, stacklevel=3)
        evals = np.clip(evals, 0.0, None)
    return (evecs * np.sqrt(evals)) @ evecs.T


@lru_cache(maxsize=256)
def _noise_transform_cached(key: bytes, dt: float, temperature: float) -> np.ndarray:
    cov_half = _symmetric_sqrt(np.frombuffer(key, dtype=float).reshape(2, 2))
    out = np.sqrt(2.0 * temperature * dt) * cov_half
    out.setflags(write=False)
    return out


def noise_transform(gamma_sym: np.ndarray, dt: float, temperature: float) -> np.ndarray:
    """Matrix L with L L^T = 2 * T * gamma_sym * dt (noise covariance)."""
    key = np.ascontiguousarray(gamma_sym, dtype=float).tobytes()
    return _noise_transform_cached(key, float(dt), float(temperature))


def every_step_provider(params: ModelParams, backend: str | None = None) -> FrictionField:
    """Friction field that recomputes the tensor at every request."""

    def provider(position: np.ndarray):
        res = friction_tensor((position[0], position[1]), params, backend=backend)
        return res.gamma, res.mean_force

    return provider


def cached_grid_provider(grid: GridResult) -> FrictionField:
    """Bilinear interpolation of friction and force on a precomputed grid."""
    xs, ys = grid.x_axis, grid.y_axis
    fields = np.stack(
        [grid.entry_grid(name) for name in ("gxx", "gxy", "gyx", "gyy", "fx", "fy")]
    )  # (6, nx, ny)

    def provider(position: np.ndarray):
        x, y = float(position[0]), float(position[1])
        if not (xs[0] <= x <= xs[-1] and ys[0] <= y <= ys[-1]):
            raise ValueError(
                f"position ({x:g}, {y:g}) outside the cached friction grid"
            )
        ix = min(int(np.searchsorted(xs, x, side="right")) - 1, len(xs) - 2)
        iy = min(int(np.searchsorted(ys, y, side="right")) - 1, len(ys) - 2)
        ix, iy = max(ix, 0), max(iy, 0)
        tx = (x - xs[ix]) / (xs[ix + 1] - xs[ix])
        ty = (y - ys[iy]) / (ys[iy + 1] - ys[iy])
        vals = (
            fields[:, ix, iy] * (1 - tx) * (1 - ty)
            + fields[:, ix + 1, iy] * tx * (1 - ty)
            + fields[:, ix, iy + 1] * (1 - tx) * ty
            + fields[:, ix + 1, iy + 1] * tx * ty
        )
        return vals[:4].reshape(2, 2), vals[4:]

    return provider


def constant_provider(gamma: np.ndarray, params: ModelParams) -> FrictionField:
    """Fixed friction tensor plus the bare harmonic force (test fixture)."""
    gamma = np.asarray(gamma, dtype=float)

    def provider(position: np.ndarray):
        return gamma, -potential_gradient(position, params)

    return provider


def langevin_step(
    state: TrajectoryState,
    cfg: IntegratorConfig,
    params: ModelParams,
    provider: FrictionField,
) -> TrajectoryState:
    """One Euler-Maruyama step.

    P <- P + dt*(F(R) - gamma(R) P / m) + dW,   R <- R + dt * P_new / m,

    with dW Gaussian of covariance 2*T*gamma_sym(R)*dt.
    """
    gamma, force = provider(state.position)
    gamma = np.asarray(gamma, dtype=float)
    m = params.mass
    dt = cfg.dt
    gnorm = float(np.linalg.norm(gamma, 2))
    if dt * gnorm / m >= 0.5:
        raise StabilityError(
            f"dt*||gamma||/m = {dt * gnorm / m:.3g} >= 0.5 at position "
            f"({state.position[0]:g}, {state.position[1]:g})"
        )
    temperature = cfg.temperature if cfg.temperature is not None else 1.0 / params.beta
    gamma_sym = 0.5 * (gamma + gamma.T)
    p = state.momentum + dt * (force - gamma @ state.momentum / m)
    if temperature > 0:
        p = p + noise_transform(gamma_sym, dt, temperature) @ state.rng.standard_normal(2)
    r = state.position + dt * p / m
    return TrajectoryState(t=state.t + dt, position=r, momentum=p, rng=state.rng)


def simulate(
    initial: TrajectoryState,
    cfg: IntegratorConfig,
    params: ModelParams,
    provider: FrictionField | None = None,
) -> list[TrajectoryState]:
    """Integrate a trajectory; returns states sampled every ``sample_stride``.

    The initial state is always included, the final state always closes the
    list. Identical seeds give bitwise-identical trajectories.
    """
    if provider is None:
        if cfg.friction_refresh == "cached-grid":
            raise ValueError(
                "cached-grid refresh needs a provider from cached_grid_provider()"
            )
        provider = every_step_provider(params)
    out = [initial]
    state = initial
    for step in range(1, cfg.n_steps + 1):
        state = langevin_step(state, cfg, params, provider)
        if step % cfg.sample_stride == 0 or step == cfg.n_steps:
            out.append(state)
    return out


def kinetic_temperature(states: Sequence[TrajectoryState], params: ModelParams) -> np.ndarray:
    """Time-averaged <P_i^2>/m per coordinate over the sampled states."""
    p = np.stack([s.momentum for s in states])
    return np.mean(p * p, axis=0) / params.mass
