"""
PDPTW data model: instances, routes with slack caches, solutions and the oracle
"""

from .instance import (DEPOT_ID, TIME_EPS, Instance, Request, TravelPoint,
                       build_instance, travel_time)
from .oracle import RouteSimulation, brute_force_feasible, simulate_route
from .route import Route, insertion_feasible, make_route, recompute_caches
from .solution import Solution

__all__ = [
    "DEPOT_ID", "TIME_EPS", "Instance", "Request", "TravelPoint", "build_instance",
    "travel_time", "RouteSimulation", "brute_force_feasible", "simulate_route",
    "Route", "insertion_feasible", "make_route", "recompute_caches", "Solution",
]
