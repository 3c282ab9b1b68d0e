"""
Brute-force route simulation
Independent of the route caches; used by the validator and as the test oracle
"""

from dataclasses import dataclass, field
from typing import List, Sequence

from .instance import Instance, DEPOT_ID, TIME_EPS


@dataclass
class RouteSimulation:
    """Outcome of simulating one visit sequence from the depot and back"""
    feasible: bool
    violations: List[str] = field(default_factory=list)
    service_starts: List[float] = field(default_factory=list)
    loads: List[int] = field(default_factory=list)
    return_time: float = 0.0


def simulate_route(visits: Sequence[int], inst: Instance) -> RouteSimulation:
    """Walk the route point by point, waiting for windows to open"""
    pts = inst.points
    travel = inst.travel
    depot = pts[DEPOT_ID]
    violations = []
    starts = []
    loads = []

    time = depot.tw_earliest
    load = 0
    prev = DEPOT_ID
    seen = set()

    for node in visits:
        if node == DEPOT_ID or not 0 <= node < len(pts):
            violations.append(f"point {node}: not a customer of this instance")
            prev = node if 0 <= node < len(pts) else prev
            continue
        point = pts[node]
        if node in seen:
            violations.append(f"point {node}: visited twice")
        seen.add(node)

        arrival = time + pts[prev].service_time + travel[prev][node]
        time = max(point.tw_earliest, arrival)
        if time > point.tw_latest + TIME_EPS:
            violations.append(
                f"point {node}: service begins at {time:.3f} after window closes at {point.tw_latest:.3f}")

        load += point.demand
        if load > inst.capacity:
            violations.append(f"point {node}: load {load} exceeds capacity {inst.capacity}")
        elif load < 0:
            violations.append(f"point {node}: load {load} is negative")

        if point.is_delivery and point.partner_id not in seen:
            violations.append(f"point {node}: delivered before pickup {point.partner_id}")

        starts.append(time)
        loads.append(load)
        prev = node

    return_time = time + pts[prev].service_time + travel[prev][DEPOT_ID]
    if return_time > depot.tw_latest + TIME_EPS:
        violations.append(
            f"depot: return at {return_time:.3f} after depot closes at {depot.tw_latest:.3f}")

    return RouteSimulation(not violations, violations, starts, loads, return_time)


def brute_force_feasible(visits: Sequence[int], inst: Instance) -> bool:
    return simulate_route(visits, inst).feasible
