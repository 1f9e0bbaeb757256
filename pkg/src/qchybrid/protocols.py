"""Energy bookkeeping, the hybrid-cooling experiment, and ensemble averaging.

The ensemble protocol draws classical initial conditions from independent
Gaussians, integrates every trajectory with the same quantum initial state,
and averages the trajectory-wise density matrices on the shared time grid.
Each trajectory's random draws come from a sub-seed derived from
(seed, trajectory index), so results are bit-identical regardless of worker
count, and an ensemble of M trajectories reuses the first M draws of any
larger ensemble with the same seed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _rk4
from .dynamics import (ConstantCoupling, CouplingSchedule, GaussianPulseCoupling,
                       Trajectory, integrate)
from .entanglement import (TwoQubitDensity, concurrence_mixed, linear_entropy,
                           purity)
from .errors import IntegrationError, ValidationError
from .model import DX, SZ, HybridState, ModelParams, QuantumAmplitudes
from .perturbations import PerturbationMatrix

#: half-width, in units of sigma, of the pulse window used to split a cooling
#: run into before / during / after segments
PULSE_WINDOW_SIGMAS = 5.0


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy components of the hybrid; e_total is always their exact sum."""

    e_cl: float
    e_qm: float
    e_hyb: float
    e_pert: float

    @property
    def e_total(self):
        return self.e_cl + self.e_qm + self.e_hyb + self.e_pert


def energy_breakdown(s: HybridState, params: ModelParams,
                     schedule: CouplingSchedule = ConstantCoupling(),
                     pert: Optional[PerturbationMatrix] = None) -> EnergyBreakdown:
    """Classical, quantum, hybrid and perturbation energies at one state."""
    c = s.q.c
    om = float(schedule.omega_at(s.t, params))
    e_cl = s.p ** 2 / (2.0 * params.m) + 0.5 * params.m * params.omega ** 2 * s.x ** 2
    e_qm = params.omega0 * float(np.real(c.conj() @ (SZ @ c)))
    e_hyb = params.beta * om * s.x * float(np.real(c.conj() @ (DX @ c)))
    e_pert = 0.0
    if pert is not None:
        e_pert = float(np.real(c.conj() @ (pert.matrix @ c)))
    return EnergyBreakdown(e_cl, e_qm, e_hyb, e_pert)


def energy_series(traj: Trajectory) -> EnergyBreakdown:
    """Vectorized energy components along a trajectory (array-valued fields)."""
    params = traj.params
    c = traj.c
    om = traj.omega_series()
    e_cl = traj.p ** 2 / (2.0 * params.m) + 0.5 * params.m * params.omega ** 2 * traj.x ** 2
    e_qm = params.omega0 * np.real(np.einsum("ti,ij,tj->t", c.conj(), SZ, c))
    e_hyb = params.beta * om * traj.x * (np.abs(c[:, 0]) ** 2 - np.abs(c[:, 1]) ** 2)
    if traj.pert is not None:
        e_pert = np.real(np.einsum("ti,ij,tj->t", c.conj(), traj.pert.matrix, c))
    else:
        e_pert = np.zeros(len(traj))
    return EnergyBreakdown(e_cl, e_qm, e_hyb, e_pert)


@dataclass(frozen=True)
class CoolingResult:
    """Trajectory of a pulsed-coupling run with its energy and concurrence series."""

    trajectory: Trajectory
    energies: EnergyBreakdown
    concurrence: np.ndarray
    window: tuple

    def _window_masks(self):
        t = self.trajectory.t
        lo, hi = self.window
        return t < lo, (t >= lo) & (t <= hi), t > hi

    @property
    def delta_e_qm(self) -> float:
        """Mean quantum energy after the pulse window minus before it."""
        before, _, after = self._window_masks()
        if not before.any() or not after.any():
            raise ValidationError(
                "cooling run too short: no samples outside the pulse window "
                f"{self.window}"
            )
        return float(self.energies.e_qm[after].mean() - self.energies.e_qm[before].mean())


def run_cooling(init: HybridState, params: ModelParams,
                pulse: GaussianPulseCoupling, *,
                t_max: float, dt: float, stride: int = 1,
                pert: Optional[PerturbationMatrix] = None) -> CoolingResult:
    """Integrate with a Gaussian coupling window and record energy components."""
    if not isinstance(pulse, GaussianPulseCoupling):
        raise ValidationError("run_cooling requires a gaussian-pulse schedule")
    traj = integrate(init, params, pulse, pert, t_max=t_max, dt=dt, stride=stride)
    window = (pulse.t0 - PULSE_WINDOW_SIGMAS * pulse.sigma,
              pulse.t0 + PULSE_WINDOW_SIGMAS * pulse.sigma)
    return CoolingResult(traj, energy_series(traj), traj.concurrence_series(), window)


@dataclass(frozen=True)
class EnsembleSpec:
    """All parameters of one Monte-Carlo ensemble run."""

    params: ModelParams
    q0: QuantumAmplitudes
    n_traj: int
    x_mean: float
    p_mean: float
    sigma: float
    seed: int
    t_max: float
    dt: float
    stride: int = 1
    sigma_x: Optional[float] = None
    sigma_p: Optional[float] = None
    schedule: CouplingSchedule = ConstantCoupling()
    pert: Optional[PerturbationMatrix] = None

    def __post_init__(self):
        if self.n_traj < 1 or int(self.n_traj) != self.n_traj:
            raise ValidationError(f"ensemble size must be a positive integer, got {self.n_traj}")
        for name in ("sigma", "sigma_x", "sigma_p"):
            v = getattr(self, name)
            if v is not None and not (np.isfinite(v) and v > 0):
                raise ValidationError(f"ensemble {name} must be positive, got {v}")
        if not (np.isfinite(self.x_mean) and np.isfinite(self.p_mean)):
            raise ValidationError("ensemble means must be finite")

    @property
    def widths(self):
        sx = self.sigma if self.sigma_x is None else self.sigma_x
        sp = self.sigma if self.sigma_p is None else self.sigma_p
        return sx, sp


def sample_initial_conditions(spec: EnsembleSpec) -> np.ndarray:
    """(M, 2) array of independent Gaussian draws (x0_i, p0_i).

    Draw i comes from a generator seeded by SeedSequence(seed, spawn_key=(i,)),
    so the sequence is deterministic and prefix-stable in M.
    """
    sx, sp = spec.widths
    out = np.empty((spec.n_traj, 2))
    for i in range(spec.n_traj):
        rng = np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(i,)))
        out[i, 0] = rng.normal(spec.x_mean, sx)
        out[i, 1] = rng.normal(spec.p_mean, sp)
    return out


@dataclass(frozen=True)
class EnsembleResult:
    """Averaged density matrices and derived mixedness measures on a time grid."""

    spec: EnsembleSpec
    t: np.ndarray
    rho_bar: np.ndarray
    concurrence: np.ndarray
    linear_entropy: np.ndarray
    purity: np.ndarray
    initial_conditions: np.ndarray

    def density(self, i: int) -> TwoQubitDensity:
        return TwoQubitDensity(self.rho_bar[i])


def _ensemble_worker(spec, x0, p0, out_c, idx):
    pulsed = isinstance(spec.schedule, GaussianPulseCoupling)
    amp = spec.schedule.amplitude if pulsed else 0.0
    p_t0 = spec.schedule.t0 if pulsed else 0.0
    p_sig = spec.schedule.sigma if pulsed else 1.0
    w = spec.pert.matrix if spec.pert is not None else np.zeros((4, 4), dtype=np.complex128)
    n_out = out_c.shape[1]
    n_steps = (n_out - 1) * spec.stride
    tmp_t = np.empty(n_out)
    tmp_x = np.empty(n_out)
    tmp_p = np.empty(n_out)
    status, t_fail = _rk4.rk4_trajectory(
        x0, p0, np.ascontiguousarray(spec.q0.c), 0.0, spec.dt, n_steps, spec.stride,
        spec.params.m, spec.params.omega, spec.params.omega0, spec.params.beta,
        pulsed, float(amp), float(p_t0), float(p_sig),
        np.ascontiguousarray(w), tmp_t, tmp_x, tmp_p, out_c[idx],
    )
    return status, t_fail


def run_ensemble(spec: EnsembleSpec, threads: Optional[int] = None) -> EnsembleResult:
    """Integrate M trajectories, average their density matrices in index order.

    Trajectories run in parallel worker threads (the integration kernel
    releases the GIL); the reduction is a fixed-order sum over trajectory
    index, so the result does not depend on the worker count.
    """
    from .dynamics import _resolve_steps

    n_steps, stride = _resolve_steps(spec.t_max, spec.dt, spec.stride)
    n_out = n_steps // stride + 1
    samples = sample_initial_conditions(spec)
    cs = np.empty((spec.n_traj, n_out, 4), dtype=np.complex128)

    def work(i):
        return i, *_ensemble_worker(spec, samples[i, 0], samples[i, 1], cs, i)

    if threads is not None and threads < 1:
        threads = None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for i, status, t_fail in pool.map(work, range(spec.n_traj)):
            if status == _rk4.NON_FINITE:
                raise IntegrationError(
                    f"trajectory {i} (seed {spec.seed}, spawn_key ({i},), "
                    f"x0 = {samples[i, 0]!r}, p0 = {samples[i, 1]!r}) "
                    f"hit a non-finite state at t = {t_fail!r}", t_fail
                )

    t = np.arange(n_out) * (stride * spec.dt)
    # fixed index-order reduction for bit-level reproducibility
    rho_bar = np.zeros((n_out, 4, 4), dtype=np.complex128)
    for i in range(spec.n_traj):
        rho_bar += np.einsum("ta,tb->tab", cs[i], cs[i].conj())
    rho_bar /= spec.n_traj

    conc = np.empty(n_out)
    lin = np.empty(n_out)
    pur = np.empty(n_out)
    for j in range(n_out):
        rho = TwoQubitDensity(0.5 * (rho_bar[j] + rho_bar[j].conj().T))
        conc[j] = concurrence_mixed(rho)
        pur[j] = purity(rho)
        lin[j] = linear_entropy(rho)
    return EnsembleResult(spec, t, rho_bar, conc, lin, pur, samples)
