"""Entropic uncertainty relations with quantum memory for a quantum dot - Majorana - quantum dot system."""

from .fock import ModelParams, analytic_eigensystem, build_hamiltonian, ground_state
from .qinfo import (
    DensityMatrix,
    EurQuantities,
    EurReport,
    analytic_quantities,
    eur_report,
    tripartite_eur,
)
from .witness import analytic_witness, quantum_witness

__all__ = [
    "DensityMatrix",
    "EurQuantities",
    "EurReport",
    "ModelParams",
    "analytic_eigensystem",
    "analytic_quantities",
    "analytic_witness",
    "build_hamiltonian",
    "eur_report",
    "ground_state",
    "quantum_witness",
    "tripartite_eur",
]
