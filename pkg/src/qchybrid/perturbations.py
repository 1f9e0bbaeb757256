"""External q-bit perturbations and the Poisson-bracket evaluator.

Perturbation matrices are expressed in the phi basis.  The single-q-bit
generators I(x)sigma_y and I(x)sigma_z carry a factor 1/sqrt(2) relative to
their published displays; the factor is required for the Pauli algebra
((I(x)sigma)^2 = I) and is fixed here after an explicit audit (the displays
square to 2*I as printed).

Brackets are evaluated in the canonical oscillator-expansion variables
(X_a, P_a, x, p) with z = X + iP = sqrt(2)*c, so every registered observable
is a true phase-space function and its expectation value coincides with the
quantum expectation of the corresponding operator.  With this convention the
two-q-bit-perturbation/back-reaction-force bracket evaluates to

    {H2(w1, w2, w3), F} = 2*beta*Omega*(w3 - w2)*(X2*P1 - X1*P2),

vanishing exactly when w2 == w3 (in particular when only w1 is nonzero).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import DX, INV_SQRT2, SQRT2, SZ, SYSY, HybridState, ModelParams

HERMITICITY_ATOL = 1e-12

# Single-q-bit generators (identity on q-bit A, Pauli on q-bit B).
SINGLE_X = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, -1.0, 0.0],
], dtype=np.complex128)

SINGLE_Y = INV_SQRT2 * np.array([
    [0.0, 0.0, 1j, 1j],
    [0.0, 0.0, -1j, 1j],
    [-1j, 1j, 0.0, 0.0],
    [-1j, -1j, 0.0, 0.0],
], dtype=np.complex128)

SINGLE_Z = INV_SQRT2 * np.array([
    [0.0, 0.0, 1.0, 1.0],
    [0.0, 0.0, 1.0, -1.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, -1.0, 0.0, 0.0],
], dtype=np.complex128)

# Two-q-bit generators sigma_i (x) sigma_i.
TWO_XX = np.diag([1.0, 1.0, -1.0, -1.0]).astype(np.complex128)
TWO_YY = SYSY.astype(np.complex128)
TWO_ZZ = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
], dtype=np.complex128)

for _g in (SINGLE_X, SINGLE_Y, SINGLE_Z, TWO_XX, TWO_YY, TWO_ZZ):
    _g.setflags(write=False)


@dataclass(frozen=True)
class PerturbationMatrix:
    """Hermitian perturbation Hamiltonian with its kind and weights."""

    matrix: np.ndarray
    kind: str
    weights: tuple

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValidationError(f"perturbation matrix must be 4x4, got {m.shape}")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITICITY_ATOL:
            raise ValidationError(f"perturbation matrix not Hermitian: max dev {herm:.3e}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))


def _check_weights(w1, w2, w3):
    if not all(np.isfinite(w) for w in (w1, w2, w3)):
        raise ValidationError(f"perturbation weights must be finite, got {(w1, w2, w3)}")


def single_qubit_perturbation(w1: float, w2: float, w3: float) -> PerturbationMatrix:
    """I (x) (w1*sigma_x + w2*sigma_y + w3*sigma_z) acting on q-bit B."""
    _check_weights(w1, w2, w3)
    return PerturbationMatrix(
        w1 * SINGLE_X + w2 * SINGLE_Y + w3 * SINGLE_Z, "single_qubit", (w1, w2, w3)
    )


def two_qubit_perturbation(w1: float, w2: float, w3: float) -> PerturbationMatrix:
    """w1*sigma_x(x)sigma_x + w2*sigma_y(x)sigma_y + w3*sigma_z(x)sigma_z."""
    _check_weights(w1, w2, w3)
    return PerturbationMatrix(
        w1 * TWO_XX + w2 * TWO_YY + w3 * TWO_ZZ, "two_qubit", (w1, w2, w3)
    )


# ---------------------------------------------------------------------------
# Registered observables and their analytic gradients.
# ---------------------------------------------------------------------------

def _phase_vars(state: HybridState):
    z = SQRT2 * state.q.c
    return z.real.copy(), z.imag.copy(), state.x, state.p


class Observable:
    """Phase-space function with closed-form canonical gradients.

    ``value`` returns f(X, P, x, p); ``gradient`` returns the tuple
    (df/dX (4,), df/dP (4,), df/dx, df/dp).  Observables may be summed.
    """

    name = "observable"

    def value(self, state: HybridState) -> float:
        raise NotImplementedError

    def gradient(self, state: HybridState):
        raise NotImplementedError

    def __add__(self, other):
        if not isinstance(other, Observable):
            return NotImplemented
        return _SumObservable(self, other)


class _SumObservable(Observable):
    def __init__(self, *terms):
        flat = []
        for t in terms:
            flat.extend(t._terms if isinstance(t, _SumObservable) else [t])
        self._terms = flat
        self.name = " + ".join(t.name for t in flat)

    def value(self, state):
        return sum(t.value(state) for t in self._terms)

    def gradient(self, state):
        gX = np.zeros(4)
        gP = np.zeros(4)
        gx = 0.0
        gp = 0.0
        for t in self._terms:
            tX, tP, tx, tp = t.gradient(state)
            gX += tX
            gP += tP
            gx += tx
            gp += tp
        return gX, gP, gx, gp


class ExpectationObservable(Observable):
    """Expectation <W> of a Hermitian matrix, as the function Re(z^dag W z)/2.

    Gradients follow from d<W>/dX = Re(Wz), d<W>/dP = Im(Wz).
    """

    def __init__(self, matrix, name="expectation"):
        w = np.asarray(matrix, dtype=np.complex128)
        herm = np.max(np.abs(w - w.conj().T))
        if herm > HERMITICITY_ATOL:
            raise ValidationError(f"observable matrix not Hermitian: max dev {herm:.3e}")
        self.W = w
        self.name = name

    def value(self, state):
        X, P, _, _ = _phase_vars(state)
        z = X + 1j * P
        return 0.5 * float(np.real(z.conj() @ (self.W @ z)))

    def gradient(self, state):
        X, P, _, _ = _phase_vars(state)
        wz = self.W @ (X + 1j * P)
        return wz.real, wz.imag, 0.0, 0.0


class QuantumEnergy(ExpectationObservable):
    """omega0 * <S_z>."""

    def __init__(self, params: ModelParams):
        super().__init__(params.omega0 * SZ, "H_qm")


class HybridInteraction(Observable):
    """beta * Omega * x * <S_x>; carries the x-gradient of the hybrid term."""

    name = "I_hyb"

    def __init__(self, params: ModelParams, omega_value: float | None = None):
        self._g = params.beta * (params.Omega if omega_value is None else omega_value)

    def value(self, state):
        X, P, x, _ = _phase_vars(state)
        z = X + 1j * P
        return 0.5 * x * self._g * float(np.real(z.conj() @ (DX @ z)))

    def gradient(self, state):
        X, P, x, _ = _phase_vars(state)
        z = X + 1j * P
        wz = (self._g * x) * (DX @ z)
        dx = 0.5 * self._g * float(np.real(z.conj() @ (DX @ z)))
        return wz.real, wz.imag, dx, 0.0


class PerturbationEnergy(ExpectationObservable):
    """Expectation of a perturbation Hamiltonian."""

    def __init__(self, pert: PerturbationMatrix):
        super().__init__(pert.matrix, f"H_pert[{pert.kind}]")


class ReactionForce(ExpectationObservable):
    """Back-reaction force (beta*Omega/2)*(X1^2+P1^2-X2^2-P2^2) on the oscillator."""

    def __init__(self, params: ModelParams, omega_value: float | None = None):
        g = params.beta * (params.Omega if omega_value is None else omega_value)
        super().__init__(g * DX, "F")


class NormConstraint(ExpectationObservable):
    """The conserved normalization constraint sum(X_a^2 + P_a^2)."""

    def __init__(self):
        super().__init__(2.0 * np.eye(4), "C")


class ConcurrenceSquared(Observable):
    """lambda = C^2 = |2 z1 z2 - z3^2 + z4^2|^2 / 4, the conserved flip invariant."""

    name = "lambda"

    @staticmethod
    def _k(z):
        return 2.0 * z[0] * z[1] - z[2] ** 2 + z[3] ** 2

    def value(self, state):
        X, P, _, _ = _phase_vars(state)
        return 0.25 * abs(self._k(X + 1j * P)) ** 2

    def gradient(self, state):
        X, P, _, _ = _phase_vars(state)
        z = X + 1j * P
        k = self._k(z)
        dk = np.array([2.0 * z[1], 2.0 * z[0], -2.0 * z[2], 2.0 * z[3]])
        prod = np.conj(k) * dk
        return 0.5 * prod.real, -0.5 * prod.imag, 0.0, 0.0


def poisson_bracket(f: Observable, g: Observable, state: HybridState) -> float:
    """Canonical bracket sum_a(df/dX_a dg/dP_a - df/dP_a dg/dX_a) + classical pair."""
    for obs in (f, g):
        if not isinstance(obs, Observable):
            raise ValidationError(
                f"poisson_bracket requires registered Observable instances, got {type(obs)!r}"
            )
    fX, fP, fx, fp = f.gradient(state)
    gX, gP, gx, gp = g.gradient(state)
    return float(np.dot(fX, gP) - np.dot(fP, gX) + fx * gp - fp * gx)
