"""Hybrid dynamics of two q-bits coupled to a classical harmonic oscillator."""

from .model import (DX, SQRT2, STATE_CATALOG, SYSY, SZ, HybridState, ModelParams,
                    QuantumAmplitudes, constraint_value, named_state)
from .dynamics import (ConstantCoupling, GaussianPulseCoupling, Trajectory,
                       back_reaction_force, effective_hamiltonian, integrate, rhs)
from .entanglement import (TwoQubitDensity, concurrence_mixed, concurrence_pure,
                           density_from_amplitudes, entanglement_of_formation,
                           linear_entropy, purity, spin_flip)
from .perturbations import (PerturbationMatrix, poisson_bracket,
                            single_qubit_perturbation, two_qubit_perturbation)
from .protocols import (CoolingResult, EnergyBreakdown, EnsembleResult, EnsembleSpec,
                        energy_breakdown, energy_series, run_cooling, run_ensemble,
                        sample_initial_conditions)
from .errors import (IntegrationError, NumericsError, QCHybridError, SpectrumError,
                     ValidationError)

__version__ = "0.1.0"

__all__ = [
    "DX", "SQRT2", "STATE_CATALOG", "SYSY", "SZ",
    "HybridState", "ModelParams", "QuantumAmplitudes",
    "constraint_value", "named_state",
    "ConstantCoupling", "GaussianPulseCoupling", "Trajectory",
    "back_reaction_force", "effective_hamiltonian", "integrate", "rhs",
    "TwoQubitDensity", "concurrence_mixed", "concurrence_pure",
    "density_from_amplitudes", "entanglement_of_formation",
    "linear_entropy", "purity", "spin_flip",
    "PerturbationMatrix", "poisson_bracket",
    "single_qubit_perturbation", "two_qubit_perturbation",
    "CoolingResult", "EnergyBreakdown", "EnsembleResult", "EnsembleSpec",
    "energy_breakdown", "energy_series", "run_cooling", "run_ensemble",
    "sample_initial_conditions",
    "IntegrationError", "NumericsError", "QCHybridError", "SpectrumError",
    "ValidationError",
    "__version__",
]
