"""Equations of motion of the hybrid model and the fixed-step RK4 integrator.

Sign convention: the amplitudes obey dc/dt = -i H(x, t) c with
H(x, t) = omega0*SZ + beta*Omega(t)*x*DX (+ optional perturbation), and the
oscillator feels the back reaction dp/dt = -m*omega^2*x -
beta*Omega(t)*(|c1|^2 - |c2|^2).  This pair is the Hamiltonian flow of the
total energy function, so the total energy is conserved for any constant
coupling, which the test suite monitors.  No renormalization is applied to
the amplitudes during integration; norm drift is a free error monitor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from . import _rk4
from .errors import IntegrationError, ValidationError
from .model import DX, SZ, HybridState, ModelParams, QuantumAmplitudes
from .perturbations import PerturbationMatrix

_ZERO_PERT = np.zeros((4, 4), dtype=np.complex128)
_ZERO_PERT.setflags(write=False)


@dataclass(frozen=True)
class ConstantCoupling:
    """Time-independent hybrid coupling Omega(t) = Omega = omega*sqrt(m*omega)."""

    kind = "constant"

    def omega_at(self, t, params: ModelParams):
        return params.Omega * np.ones_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class GaussianPulseCoupling:
    """Gaussian coupling window Omega(t) = A*Omega*exp(-(t-t0)^2/(2*sigma^2)).

    ``amplitude`` is the peak value in units of the constant coupling Omega;
    t0 is the instant of maximal coupling and sigma its temporal width.
    """

    amplitude: float
    t0: float
    sigma: float

    kind = "gaussian_pulse"

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValidationError(f"pulse sigma must be positive, got {self.sigma}")
        if not (np.isfinite(self.amplitude) and np.isfinite(self.t0)):
            raise ValidationError("pulse amplitude and t0 must be finite")

    def omega_at(self, t, params: ModelParams):
        t = np.asarray(t, dtype=float)
        arg = (t - self.t0) ** 2 / (2.0 * self.sigma ** 2)
        return self.amplitude * params.Omega * np.exp(-arg)


CouplingSchedule = Union[ConstantCoupling, GaussianPulseCoupling]


class StateDerivative(NamedTuple):
    dx: float
    dp: float
    dc: np.ndarray


def effective_hamiltonian(x: float, params: ModelParams,
                          pert: Optional[PerturbationMatrix] = None,
                          omega_t: Optional[float] = None) -> np.ndarray:
    """Quantum-sector generator H(x) = omega0*SZ + beta*Omega(t)*x*DX (+ pert)."""
    om = params.Omega if omega_t is None else omega_t
    h = params.omega0 * SZ + params.beta * om * x * DX
    h = h.astype(np.complex128)
    if pert is not None:
        h += pert.matrix
    return h


def back_reaction_force(q: QuantumAmplitudes, params: ModelParams,
                        omega_t: Optional[float] = None) -> float:
    """Force beta*Omega(t)*(|c1|^2 - |c2|^2) the q-bits exert on the oscillator."""
    om = params.Omega if omega_t is None else omega_t
    c = q.c
    return params.beta * om * float(abs(c[0]) ** 2 - abs(c[1]) ** 2)


def rhs(s: HybridState, params: ModelParams,
        schedule: CouplingSchedule = ConstantCoupling(),
        pert: Optional[PerturbationMatrix] = None) -> StateDerivative:
    """Time derivative of a hybrid state under the coupled equations of motion."""
    om = float(schedule.omega_at(s.t, params))
    h = effective_hamiltonian(s.x, params, pert, om)
    dc = -1j * (h @ s.q.c)
    dx = s.p / params.m
    dp = -params.m * params.omega ** 2 * s.x - back_reaction_force(s.q, params, om)
    return StateDerivative(dx, dp, dc)


@dataclass(frozen=True)
class Trajectory:
    """Stride-decimated time series of one integration run.

    Holds the raw state samples; derived series (concurrence, constraint,
    energies) are computed on demand from them.
    """

    params: ModelParams
    schedule: CouplingSchedule
    pert: Optional[PerturbationMatrix]
    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    c: np.ndarray

    def __len__(self):
        return len(self.t)

    def state(self, i: int) -> HybridState:
        c = self.c[i]
        n = np.linalg.norm(c)
        return HybridState(float(self.t[i]), float(self.x[i]), float(self.p[i]),
                           QuantumAmplitudes(c / n))

    @property
    def final_state(self) -> HybridState:
        return self.state(len(self) - 1)

    def omega_series(self) -> np.ndarray:
        return np.asarray(self.schedule.omega_at(self.t, self.params))

    def concurrence_series(self) -> np.ndarray:
        c = self.c
        return np.abs(-2.0 * c[:, 0] * c[:, 1] + c[:, 2] ** 2 - c[:, 3] ** 2)

    def constraint_series(self) -> np.ndarray:
        return 2.0 * np.sum(np.abs(self.c) ** 2, axis=1)


def _resolve_steps(t_max: float, dt: float, stride: int):
    if not np.isfinite(dt) or dt == 0.0:
        raise ValidationError(f"dt must be nonzero and finite, got {dt}")
    if not np.isfinite(t_max) or t_max <= 0:
        raise ValidationError(f"t_max must be positive and finite, got {t_max}")
    if stride < 1 or int(stride) != stride:
        raise ValidationError(f"stride must be a positive integer, got {stride}")
    n_steps = max(1, int(round(t_max / abs(dt))))
    # round up so the sampled grid always covers t_max
    rem = n_steps % stride
    if rem:
        n_steps += stride - rem
    return n_steps, int(stride)


def integrate(init: HybridState, params: ModelParams,
              schedule: CouplingSchedule = ConstantCoupling(),
              pert: Optional[PerturbationMatrix] = None, *,
              t_max: float, dt: float, stride: int = 1) -> Trajectory:
    """Classical RK4 over the coupled 10-real-dimensional system.

    Deterministic fixed-step integration from ``init.t``; samples are stored
    every ``stride`` steps (the step count is rounded up to a multiple of
    stride, so the final sample lands within one stride of t_max).  Negative
    dt integrates backward in time.  A non-finite state aborts with
    IntegrationError carrying the offending time.
    """
    n_steps, stride = _resolve_steps(t_max, dt, stride)
    n_out = n_steps // stride + 1
    out_t = np.empty(n_out)
    out_x = np.empty(n_out)
    out_p = np.empty(n_out)
    out_c = np.empty((n_out, 4), dtype=np.complex128)

    pulsed = isinstance(schedule, GaussianPulseCoupling)
    amp = schedule.amplitude if pulsed else 0.0
    p_t0 = schedule.t0 if pulsed else 0.0
    p_sig = schedule.sigma if pulsed else 1.0
    w = pert.matrix if pert is not None else _ZERO_PERT

    status, t_fail = _rk4.rk4_trajectory(
        float(init.x), float(init.p), np.ascontiguousarray(init.q.c),
        float(init.t), float(dt), n_steps, stride,
        params.m, params.omega, params.omega0, params.beta,
        pulsed, float(amp), float(p_t0), float(p_sig),
        np.ascontiguousarray(w),
        out_t, out_x, out_p, out_c,
    )
    if status == _rk4.NON_FINITE:
        raise IntegrationError(
            f"non-finite state encountered at t = {t_fail!r}; "
            "reduce dt or check parameters", t_fail
        )
    return Trajectory(params, schedule, pert, out_t, out_x, out_p, out_c)
