"""Floquet electronic friction tensor, steady-state density, and grid sweeps.

The friction tensor at a nuclear position is the energy integral

    gamma_ab = (1/(2N+1)) * 2 Re  int deps/(2 pi)
               Tr[ dH_F/dR_a  dG^R/deps  dH_F/dR_b  G^<(eps) ]

(hbar = 1; adding the Hermitian conjugate of the scalar trace doubles its real
part). The trace over the truncated Floquet space is normalized by the number
of Fourier blocks, which makes it the one-period time average and renders the
result convergent in the truncation N. The same quadrature pass accumulates
the steady-state density traces that enter the mean force.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .floquet import build_floquet_operator, dh_floquet
from .greens import SelfEnergy, greens_bundle
from .model import model_harmonics, potential_gradient
from .params import ModelParams, energy_window
from .quadrature import QuadratureError, quad_with_tails

GRID_CSV_COLUMNS = (
    "x",
    "y",
    "gxx",
    "gxy",
    "gyx",
    "gyy",
    "gsym_xy",
    "gasym_xy",
    "fx",
    "fy",
    "imag_residual",
)


@dataclass(frozen=True)
class FrictionResult:
    """Friction tensor and mean force at one nuclear position.

    ``gamma`` is the real 2x2 tensor (rows/cols ordered x, y), ``gamma_sym``
    and ``gamma_asym`` its symmetric and antisymmetric parts. ``imag_residual``
    is the largest imaginary part discarded when reporting real outputs; the
    friction entries are exactly real by construction (trace plus conjugate),
    so the residual tracks the density-trace leakage. ``quad_error`` and
    ``n_evals`` are quadrature diagnostics.
    """

    position: tuple[float, float]
    gamma: np.ndarray
    gamma_sym: np.ndarray
    gamma_asym: np.ndarray
    mean_force: np.ndarray
    imag_residual: float
    quad_error: float = 0.0
    n_evals: int = 0

    def entry(self, name: str) -> float:
        getter = {
            "x": lambda: self.position[0],
            "y": lambda: self.position[1],
            "gxx": lambda: self.gamma[0, 0],
            "gxy": lambda: self.gamma[0, 1],
            "gyx": lambda: self.gamma[1, 0],
            "gyy": lambda: self.gamma[1, 1],
            "gsym_xy": lambda: self.gamma_sym[0, 1],
            "gasym_xy": lambda: self.gamma_asym[0, 1],
            "fx": lambda: self.mean_force[0],
            "fy": lambda: self.mean_force[1],
            "imag_residual": lambda: self.imag_residual,
        }
        return float(getter[name]())


class GridComputationError(RuntimeError):
    """One or more grid points failed; carries (x, y, message) triples."""

    def __init__(self, failures: list[tuple[float, float, str]]):
        self.failures = failures
        lines = "; ".join(f"({x:g}, {y:g}): {msg}" for x, y, msg in failures[:5])
        extra = "" if len(failures) <= 5 else f" (+{len(failures) - 5} more)"
        super().__init__(f"{len(failures)} grid point(s) failed: {lines}{extra}")


@dataclass(frozen=True)
class GridResult:
    """Friction results over a rectangular coordinate grid.

    Records are stored row-major with x as the outer loop, matching the CSV
    ordering of the command-line tool.
    """

    x_axis: np.ndarray
    y_axis: np.ndarray
    records: tuple[FrictionResult, ...]
    params: ModelParams

    def __post_init__(self) -> None:
        if len(self.records) != len(self.x_axis) * len(self.y_axis):
            raise ValueError("record count must equal len(x_axis) * len(y_axis)")

    def entry_grid(self, name: str) -> np.ndarray:
        """One named entry as an (nx, ny) array."""
        nx, ny = len(self.x_axis), len(self.y_axis)
        vals = np.array([r.entry(name) for r in self.records])
        return vals.reshape(nx, ny)

    def max_abs(self, name: str) -> float:
        return float(np.max(np.abs(self.entry_grid(name))))

    def record_at(self, ix: int, iy: int) -> FrictionResult:
        return self.records[ix * len(self.y_axis) + iy]


def _point_context(position: tuple[float, float], params: ModelParams):
    h = model_harmonics(position, params)
    hf = build_floquet_operator(h, params)
    se = SelfEnergy.wide_band(params)
    dx = dh_floquet("x", position, params)
    dy = dh_floquet("y", position, params)
    return kernels.build_point_context(
        hf.data,
        dx.data,
        dy.data,
        se.gamma_diagonal(),
        se.shift_diagonal(),
        params.beta,
        dim_level=2,
        n_floquet=params.n_floquet,
    )


def friction_tensor(
    position: tuple[float, float],
    params: ModelParams,
    x_extent: float | None = None,
    backend: str | None = None,
) -> FrictionResult:
    """Friction tensor, its symmetric/antisymmetric split, and the mean force.

    ``x_extent`` widens the energy window to cover a whole grid sweep so every
    point of a sweep integrates over the same window; it defaults to the
    position's own extent. Raises :class:`QuadratureError` when the energy
    integral cannot reach its tolerance.
    """
    position = (float(position[0]), float(position[1]))
    ctx = _point_context(position, params)
    kern = kernels.get_backend(backend)

    def integrand(eps: np.ndarray) -> np.ndarray:
        return kern.friction_integrand(np.ascontiguousarray(eps, dtype=float), ctx)

    if x_extent is None:
        x_extent = max(abs(position[0]), abs(position[1]))
    lo, hi = energy_window(params, x_extent)
    res = quad_with_tails(
        integrand, lo, hi, rel_tol=params.quad.rel_tol, max_panels=params.quad.max_panels
    )
    norm = 1.0 / (2 * params.n_floquet + 1)
    gamma = 2.0 * norm * res.value[:4].real.reshape(2, 2)
    dens_trace = norm * res.value[4:6]
    force = -potential_gradient(position, params) - dens_trace.real
    return FrictionResult(
        position=position,
        gamma=gamma,
        gamma_sym=0.5 * (gamma + gamma.T),
        gamma_asym=0.5 * (gamma - gamma.T),
        mean_force=force,
        imag_residual=float(np.max(np.abs(dens_trace.imag))),
        quad_error=float(np.max(res.error)),
        n_evals=res.n_evals,
    )


def steady_state_density(
    position: tuple[float, float],
    params: ModelParams,
    x_extent: float | None = None,
) -> np.ndarray:
    """Steady-state single-particle density on the full Floquet space.

    sigma = -i int deps/(2 pi) G^<(eps), computed through the plain
    resolvent route (matrix inversion per energy) rather than the friction
    kernels, so it doubles as an independent cross-check of those kernels.
    """
    position = (float(position[0]), float(position[1]))
    h = model_harmonics(position, params)
    hf = build_floquet_operator(h, params)
    se = SelfEnergy.wide_band(params)
    dim = hf.dim

    def integrand(eps: np.ndarray) -> np.ndarray:
        out = np.empty((eps.shape[0], dim * dim), dtype=complex)
        for i, e in enumerate(eps):
            b = greens_bundle(float(e), hf, se)
            out[i] = (-1j / (2.0 * np.pi)) * b.glesser.ravel()
        return out

    if x_extent is None:
        x_extent = max(abs(position[0]), abs(position[1]))
    lo, hi = energy_window(params, x_extent)
    res = quad_with_tails(
        integrand, lo, hi, rel_tol=params.quad.rel_tol, max_panels=params.quad.max_panels
    )
    return res.value.reshape(dim, dim)


def period_average_density(sigma: np.ndarray, dim_level: int, n_floquet: int) -> np.ndarray:
    """Physical (period-averaged) density: mean of the Fourier diagonal blocks."""
    d = dim_level
    reps = 2 * n_floquet + 1
    out = np.zeros((d, d), dtype=complex)
    for k in range(reps):
        out += sigma[k * d : (k + 1) * d, k * d : (k + 1) * d]
    return out / reps


def mean_force(
    position: tuple[float, float],
    params: ModelParams,
    x_extent: float | None = None,
) -> np.ndarray:
    """Mean nuclear force -grad U - Tr[dH_F/dR sigma_ss] / (2N+1).

    The sign convention makes the electronic back-action drive the nuclei
    downhill in the level energies. Computed through
    :func:`steady_state_density`; :func:`friction_tensor` returns the same
    force from its own quadrature pass.
    """
    position = (float(position[0]), float(position[1]))
    sigma = steady_state_density(position, params, x_extent=x_extent)
    norm = 1.0 / (2 * params.n_floquet + 1)
    dx = dh_floquet("x", position, params).data
    dy = dh_floquet("y", position, params).data
    electronic = norm * np.array(
        [np.trace(dx @ sigma).real, np.trace(dy @ sigma).real]
    )
    return -potential_gradient(position, params) - electronic


def _grid_point(args) -> tuple[int, FrictionResult | None, str | None]:
    idx, position, params, x_extent, backend = args
    try:
        return idx, friction_tensor(position, params, x_extent=x_extent, backend=backend), None
    except QuadratureError as exc:
        return idx, None, str(exc)


def friction_grid(
    x_axis,
    y_axis,
    params: ModelParams,
    workers: int | None = None,
    backend: str | None = None,
) -> GridResult:
    """Friction tensor and mean force over a rectangular grid.

    Points are independent and are distributed over a process pool; assembly
    order is canonical (row-major, x outer) regardless of worker count.
    Per-point quadrature failures are collected and raised together as
    :class:`GridComputationError` with the offending coordinates.
    """
    x_axis = np.asarray(x_axis, dtype=float)
    y_axis = np.asarray(y_axis, dtype=float)
    for name, ax in (("x_axis", x_axis), ("y_axis", y_axis)):
        if ax.ndim != 1 or ax.size < 1:
            raise ValueError(f"{name} must be a nonempty 1-D sequence")
        if ax.size > 1 and not np.all(np.diff(ax) > 0):
            raise ValueError(f"{name} must be strictly increasing")
    x_extent = float(max(np.max(np.abs(x_axis)), np.max(np.abs(y_axis))))
    tasks = [
        (ix * y_axis.size + iy, (float(x), float(y)), params, x_extent, backend)
        for ix, x in enumerate(x_axis)
        for iy, y in enumerate(y_axis)
    ]
    if workers is None:
        workers = os.cpu_count() or 1
    workers = max(1, min(workers, len(tasks)))

    results: list[FrictionResult | None] = [None] * len(tasks)
    failures: list[tuple[float, float, str]] = []
    if workers == 1:
        outcomes = map(_grid_point, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        outcomes = pool.map(_grid_point, tasks, chunksize=max(1, len(tasks) // (8 * workers)))
    try:
        for idx, rec, err in outcomes:
            if err is not None:
                pos = tasks[idx][1]
                failures.append((pos[0], pos[1], err))
            else:
                results[idx] = rec
    finally:
        if workers > 1:
            pool.shutdown()
    if failures:
        raise GridComputationError(failures)
    return GridResult(
        x_axis=x_axis, y_axis=y_axis, records=tuple(results), params=params
    )
