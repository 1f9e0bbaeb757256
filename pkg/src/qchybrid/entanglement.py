"""Density matrices and entanglement measures for the two-q-bit subsystem.

Two independent routes to the concurrence are provided: the pure-state
bilinear form ``|c^T (sigma_y x sigma_y) c|`` and the mixed-state spectral
formula built on the spin-flip transform.  They agree on pure states and the
test suite holds them against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SpectrumError, ValidationError
from .model import SYSY, QuantumAmplitudes

HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-10
PSD_ATOL = 1e-10

#: tolerances of the rho*rho_tilde eigenvalue cleanup (imaginary-part cutoff
#: and negativity clamp)
EIG_IMAG_TOL = 1e-9
EIG_NEG_TOL = 1e-9

#: linear entropy is scaled so the maximally mixed two-qubit state gives 1
LINEAR_ENTROPY_NORM = 4.0 / 3.0


@dataclass(frozen=True)
class TwoQubitDensity:
    """4x4 Hermitian, unit-trace, positive-semidefinite matrix in the phi basis."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=np.complex128)
        if rho.shape != (4, 4):
            raise ValidationError(f"density matrix must be 4x4, got {rho.shape}")
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > HERMITICITY_ATOL:
            raise ValidationError(f"density matrix not Hermitian: max|rho - rho^dag| = {herm:.3e}")
        tr = rho.trace()
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValidationError(f"density matrix trace {tr!r} deviates from 1 beyond {TRACE_ATOL}")
        evmin = float(np.linalg.eigvalsh(rho).min())
        if evmin < -PSD_ATOL:
            raise ValidationError(f"density matrix not PSD: min eigenvalue {evmin:.3e}")
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)


def density_from_amplitudes(q: QuantumAmplitudes) -> TwoQubitDensity:
    """Rank-one projector rho[b, a] = c_b * conj(c_a) of a pure state."""
    c = q.c
    return TwoQubitDensity(np.outer(c, c.conj()))


def spin_flip(rho: TwoQubitDensity | np.ndarray) -> np.ndarray:
    """Two-q-bit time-reversal (sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    r = rho.rho if isinstance(rho, TwoQubitDensity) else np.asarray(rho, dtype=np.complex128)
    return SYSY @ r.conj() @ SYSY


def concurrence_pure(q: QuantumAmplitudes) -> float:
    """Concurrence |<psi|psi_tilde>| of a pure state.

    In the phi basis this is the bilinear form |c^T (sigma_y x sigma_y) c| =
    |-2 c1 c2 + c3^2 - c4^2|, guaranteed to lie in [0, 1] for normalized
    amplitudes.
    """
    if not isinstance(q, QuantumAmplitudes):
        q = QuantumAmplitudes(np.asarray(q, dtype=np.complex128))
    c = q.c
    return abs(-2.0 * c[0] * c[1] + c[2] ** 2 - c[3] ** 2)


def _flip_spectrum(rho: np.ndarray) -> np.ndarray:
    """Cleaned, descending eigenvalues of rho * rho_tilde."""
    lam = np.linalg.eigvals(rho @ spin_flip(rho))
    bad_im = float(np.max(np.abs(lam.imag)))
    if bad_im > EIG_IMAG_TOL:
        raise SpectrumError(
            f"eigenvalues of rho*rho_tilde have imaginary parts up to {bad_im:.3e} "
            f"(> {EIG_IMAG_TOL}); spectrum: {lam!r}"
        )
    lam = lam.real
    if float(lam.min()) < -EIG_NEG_TOL:
        raise SpectrumError(
            f"eigenvalues of rho*rho_tilde negative beyond {EIG_NEG_TOL}; spectrum: {lam!r}"
        )
    return np.sort(np.clip(lam, 0.0, None))[::-1]


def concurrence_mixed(rho: TwoQubitDensity) -> float:
    """Spectral concurrence max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)).

    The l_i are the descending eigenvalues of the (generally non-Hermitian)
    matrix rho * rho_tilde, obtained from a dense complex eigensolve.
    """
    lam = _flip_spectrum(rho.rho)
    s = np.sqrt(lam)
    return max(0.0, float(s[0] - s[1] - s[2] - s[3]))


def entanglement_of_formation(concurrence: float) -> float:
    """Entanglement of formation E(C) = h((1 + sqrt(1 - C^2))/2).

    h is the binary entropy; the endpoints C = 0, 1 are evaluated by
    continuity (h(1) = 0, h(1/2) = 1).
    """
    c = float(concurrence)
    if c < -1e-9 or c > 1.0 + 1e-9:
        raise ValidationError(f"concurrence {c!r} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    x = 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c)))
    return _binary_entropy(x)


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def purity(rho: TwoQubitDensity | np.ndarray) -> float:
    """trace(rho^2); 1 for pure states, 1/4 for the maximally mixed state."""
    r = rho.rho if isinstance(rho, TwoQubitDensity) else np.asarray(rho)
    return float(np.einsum("ij,ji->", r, r).real)


def linear_entropy(rho: TwoQubitDensity | np.ndarray) -> float:
    """(4/3) * (1 - trace(rho^2)); 0 for pure states, 1 for maximally mixed."""
    return LINEAR_ENTROPY_NORM * (1.0 - purity(rho))
