"""Simulation and resource analysis of the deformation-based surface code."""
from .pauli import DimensionError, PauliString, commutes, pauli_mul
from .tableau import (
    ContradictionError,
    MeasurementRecord,
    StabilizerTableau,
    canonicalize,
    new_state,
    states_equal,
)

__version__ = "0.1.0"
