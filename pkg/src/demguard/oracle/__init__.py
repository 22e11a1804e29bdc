"""Independent checks: Monte Carlo attack simulation, brute-force state
discrimination and truncated Fock-space operations."""

from .discrimination import discriminate_brute_force, helstrom_bound, helstrom_states
from .fock import FockOpSpec, FockSpace, build_operation, verify_vacuum_commutation
from .montecarlo import SimStats, simulate_faked_states, simulate_time_shift
from .rng import CounterRNG

__all__ = [
    "CounterRNG",
    "FockOpSpec",
    "FockSpace",
    "SimStats",
    "build_operation",
    "discriminate_brute_force",
    "helstrom_bound",
    "helstrom_states",
    "simulate_faked_states",
    "simulate_time_shift",
    "verify_vacuum_commutation",
]
