"""Domain types and fixed basis matrices of the two-q-bit/oscillator hybrid.

Basis convention
----------------
The quantum sector lives in the four-dimensional space spanned by

    phi_1 = |++>,  phi_2 = |-->,  phi_3 = (|+-> + |-+>)/sqrt(2),
    phi_4 = (|+-> - |-+>)/sqrt(2),

where |+->, ... are products of sigma_x eigenstates (sigma_x|+/-> = +/-|+/->).
Internally the state is stored as four normalized complex amplitudes c with
sum |c_a|^2 = 1.  The canonical oscillator-expansion variables are
z_a = X_a + i P_a = sqrt(2) * c_a, so the phase-space constraint
sum (X_a^2 + P_a^2) = 2 is equivalent to unit norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

SQRT2 = math.sqrt(2.0)
INV_SQRT2 = 1.0 / SQRT2

#: relative tolerance for accepting externally supplied amplitudes as normalized
NORM_RTOL = 1e-9


def _frozen(a):
    a = np.asarray(a)
    a.setflags(write=False)
    return a


# Collective spin operators of the two q-bits in the phi basis:
# SZ is (sigma_z^A + sigma_z^B)/2, DX is (sigma_x^A + sigma_x^B)/2 (diagonal
# here since the basis is built from sigma_x eigenstates), and SYSY is the
# spin-flip kernel sigma_y (x) sigma_y.
SZ = _frozen(np.array([
    [0.0, 0.0, INV_SQRT2, 0.0],
    [0.0, 0.0, INV_SQRT2, 0.0],
    [INV_SQRT2, INV_SQRT2, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
]))

DX = _frozen(np.diag([1.0, -1.0, 0.0, 0.0]))

SYSY = _frozen(np.array([
    [0.0, -1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
]))


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the hybrid model.

    ``m`` is the oscillator mass, ``omega`` its angular frequency, ``omega0``
    the q-bit level splitting and ``beta`` the dimensionless hybrid coupling.
    The derived quantities ``Omega = omega*sqrt(m*omega)`` and the effective
    coupling ``lambda_eff = beta*omega`` are recomputed on access, never
    stored.
    """

    omega: float
    omega0: float = 0.0
    beta: float = 0.0
    m: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.m) and self.m > 0):
            raise ValidationError(f"m must be positive and finite, got {self.m}")
        if not (np.isfinite(self.omega) and self.omega > 0):
            raise ValidationError(f"omega must be positive and finite, got {self.omega}")
        if not (np.isfinite(self.omega0) and self.omega0 >= 0):
            raise ValidationError(f"omega0 must be >= 0 and finite, got {self.omega0}")
        if not np.isfinite(self.beta):
            raise ValidationError(f"beta must be finite, got {self.beta}")

    @property
    def Omega(self) -> float:
        return self.omega * math.sqrt(self.m * self.omega)

    @property
    def lambda_eff(self) -> float:
        return self.beta * self.omega


@dataclass(frozen=True)
class QuantumAmplitudes:
    """Normalized amplitudes of the two-q-bit state in the phi basis."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.complex128)
        if c.shape != (4,):
            raise ValidationError(f"amplitudes must have shape (4,), got {c.shape}")
        if not np.all(np.isfinite(c.view(np.float64))):
            raise ValidationError("amplitudes must be finite")
        n = float(np.sum(np.abs(c) ** 2))
        if abs(n - 1.0) > NORM_RTOL:
            raise ValidationError(
                f"amplitudes not normalized: sum|c|^2 = {n!r} deviates from 1 "
                f"by more than {NORM_RTOL}"
            )
        object.__setattr__(self, "c", _frozen(c))

    @property
    def z(self) -> np.ndarray:
        """Canonical oscillator-expansion variables z = sqrt(2)*c."""
        return SQRT2 * self.c


@dataclass(frozen=True)
class HybridState:
    """One point of the joint phase space: classical (x, p) plus amplitudes."""

    t: float
    x: float
    p: float
    q: QuantumAmplitudes

    def __post_init__(self):
        if not (np.isfinite(self.t) and np.isfinite(self.x) and np.isfinite(self.p)):
            raise ValidationError(
                f"t, x, p must be finite, got t={self.t}, x={self.x}, p={self.p}"
            )


def _cat(*coeffs):
    c = np.array(coeffs, dtype=np.complex128)
    return c / np.linalg.norm(c)


# Catalog of convenience initial states, all expressed in the phi basis.
# The product-basis strings they correspond to are spelled out in the values'
# comments; |+-> = (phi_3 + phi_4)/sqrt(2) etc.
STATE_CATALOG = {
    # (|++> + |-->)/sqrt(2)
    "bell_plus": _cat(1, 1, 0, 0),
    # (|++> + i|-->)/sqrt(2)
    "bell_i": _cat(1, 1j, 0, 0),
    # |+->
    "prod_pm": _cat(0, 0, 1, 1),
    # (|+-> + |-+>)/sqrt(2) = phi_3
    "triplet0": _cat(0, 0, 1, 0),
    # (|+-> + |-+>)/sqrt(6) + (|--> + |++>)/sqrt(3)
    "fig5_state": _cat(1, 1, 1, 0),
    # (-|++> - |--> + |+-> + |-+>)/2
    "fig6_state": _cat(-0.5, -0.5, INV_SQRT2, 0),
}


def named_state(name) -> QuantumAmplitudes:
    """Build amplitudes from a catalog name or a raw 4-coefficient sequence.

    Raw input is normalized; a zero vector is rejected.  Unknown names raise
    a ValidationError listing the valid catalog entries.
    """
    if isinstance(name, str):
        try:
            return QuantumAmplitudes(STATE_CATALOG[name].copy())
        except KeyError:
            valid = ", ".join(sorted(STATE_CATALOG))
            raise ValidationError(
                f"unknown state name {name!r}; valid names: {valid} "
                "(or pass four raw coefficients)"
            ) from None
    c = np.asarray(name, dtype=np.complex128)
    if c.shape != (4,):
        raise ValidationError(f"raw state input must have 4 coefficients, got shape {c.shape}")
    n = np.linalg.norm(c)
    if not np.isfinite(n) or n == 0:
        raise ValidationError("raw state input must be finite and nonzero")
    return QuantumAmplitudes(c / n)


def constraint_value(q: QuantumAmplitudes | np.ndarray) -> float:
    """Phase-space normalization constraint sum(X_a^2 + P_a^2) = 2*sum|c_a|^2.

    Equals 2 exactly for a normalized state.  Accepts a raw amplitude array
    so that drift along (possibly unnormalized) integrator output can be
    monitored.
    """
    c = q.c if isinstance(q, QuantumAmplitudes) else np.asarray(q, dtype=np.complex128)
    return 2.0 * float(np.sum(np.abs(c) ** 2))
