"""
Guided ejection search kernel
"""

from .ejection import EjectionCandidate, apply_ejection, ejection_search
from .insertion import InsertionCandidate, feasible_insertions
from .kernel import (RouteMinimizer, SolveResult, build_initial_solution, build_packed_solution,
                     check_attempt_invariants, derive_rng, minimize_routes_once,
                     select_route_for_removal, solve)
from .perturb import perturb
from .pool import EjectionPool, PenaltyCounters
from .squeeze import squeeze

__all__ = [
    'EjectionCandidate', 'apply_ejection', 'ejection_search',
    'InsertionCandidate', 'feasible_insertions',
    'RouteMinimizer', 'SolveResult', 'build_initial_solution', 'build_packed_solution',
    'check_attempt_invariants', 'derive_rng',
    'minimize_routes_once', 'select_route_for_removal', 'solve',
    'perturb', 'EjectionPool', 'PenaltyCounters', 'squeeze',
]
