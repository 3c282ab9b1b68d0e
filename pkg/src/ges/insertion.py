"""
Feasible insertion set for one unserved request
"""

from dataclasses import dataclass
from typing import List, Optional

from ..model.instance import Instance, Request
from ..model.route import Route, insertion_feasible
from ..model.solution import Solution
from ..profiler.counters import OpCounters, INSERTION


@dataclass(frozen=True)
class InsertionCandidate:
    route_index: int
    pickup_pos: int
    delivery_pos: int


def route_insertions(route: Route, req: Request, inst: Instance) -> List[tuple]:
    """All (pickup_pos, delivery_pos) slot pairs that keep `route` feasible"""
    m = len(route.visits)
    if not route.feasible:
        return []
    return [(a, b) for a in range(m + 1) for b in range(a, m + 1)
            if insertion_feasible(route, req, a, b, inst)]


def feasible_insertions(h_in: Request, sol: Solution, inst: Instance,
                        counters: Optional[OpCounters] = None) -> List[InsertionCandidate]:
    """Scan every route and every slot pair; one cached test per pair"""
    candidates = []
    tests = 0
    for idx, route in enumerate(sol.routes):
        m = len(route.visits)
        if not route.visits or not route.feasible:
            continue
        tests += (m + 1) * (m + 2) // 2
        for a, b in route_insertions(route, h_in, inst):
            candidates.append(InsertionCandidate(idx, a, b))
    if counters is not None:
        with counters.track(INSERTION):
            counters.add(INSERTION, tests)
    return candidates
