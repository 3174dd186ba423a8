"""Thermal collective dissipation in fiber-coupled polaritonic qubit chains.

Evolve an N-qubit chain under fiber-mediated collective damping and measure
pairwise concurrence and discord and the spin-squeezing parameter along the
trajectory.
"""
__version__ = "0.1.0"

from .dynamics import BathSpec, EvolutionConfig, evolve, liouvillian_apply, rk4_step, steady_state
from .hilbert import apply_ladder, basis_state, density_from_pure, expectation, partial_trace
from .measures import concurrence, discord, mutual_information, von_neumann_entropy
from .squeezing import collective_moments, spin_squeezing

__all__ = [
    "BathSpec",
    "EvolutionConfig",
    "apply_ladder",
    "basis_state",
    "collective_moments",
    "concurrence",
    "density_from_pure",
    "discord",
    "evolve",
    "expectation",
    "liouvillian_apply",
    "mutual_information",
    "partial_trace",
    "rk4_step",
    "spin_squeezing",
    "steady_state",
    "von_neumann_entropy",
]
