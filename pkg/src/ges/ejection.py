"""
Lexicographic ejection search

For every route, k-subsets of its requests (ordered by pickup position) are
enumerated in lexicographic order. A branch is cut as soon as its penalty sum
plus the cheapest possible completion exceeds the incumbent, or when the part
of the route already fixed by the branch is infeasible on its own.

With an rng the result is drawn uniformly from every (route, subset, slot pair)
reaching the minimum penalty sum. Without one the first minimum found wins.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..model.instance import Instance, Request, DEPOT_ID, TIME_EPS
from ..model.route import insertion_feasible, make_route
from ..model.solution import Solution
from ..profiler.counters import OpCounters, ejection_phase
from .pool import PenaltyCounters


@dataclass(frozen=True)
class EjectionCandidate:
    route_index: int
    pickup_pos: int
    delivery_pos: int
    ejected: Tuple[int, ...]
    p_sum: int


class _Incumbent:
    """Minimum penalty sum so far plus a reservoir sample over its ties"""

    def __init__(self, rng: Optional[np.random.Generator]):
        self.rng = rng
        self.p_sum: Optional[int] = None
        self.candidate: Optional[EjectionCandidate] = None
        self.weight = 0

    def admits(self, lower: int) -> bool:
        if self.p_sum is None:
            return True
        return lower < self.p_sum or (self.rng is not None and lower == self.p_sum)

    def offer(self, route_index: int, ejected: Tuple[int, ...], total: int,
              pairs: List[Tuple[int, int]]) -> None:
        if self.p_sum is None or total < self.p_sum:
            self.p_sum = total
            self.weight = 0
        elif total > self.p_sum or self.rng is None:
            return
        self.weight += len(pairs)
        if self.rng is None:
            pair = pairs[0]
        elif self.rng.random() * self.weight < len(pairs):
            pair = pairs[int(self.rng.integers(len(pairs)))]
        else:
            return
        self.candidate = EjectionCandidate(route_index, pair[0], pair[1], ejected, total)


def _prefix_feasible(visits: Sequence[int], skip: set, end: int, inst: Instance) -> bool:
    """Windows and capacity over visits[:end] minus `skip`; no depot return"""
    pts = inst.points
    travel = inst.travel
    time = pts[DEPOT_ID].tw_earliest
    load = 0
    prev = DEPOT_ID
    for node in visits[:end]:
        if node in skip:
            continue
        time = max(pts[node].tw_earliest, time + pts[prev].service_time + travel[prev][node])
        if time > pts[node].tw_latest + TIME_EPS:
            return False
        load += pts[node].demand
        if load > inst.capacity or load < 0:
            return False
        prev = node
    return True


class _RouteSearch:
    def __init__(self, route_index: int, visits: List[int], h_in: Request, k: int,
                 p: PenaltyCounters, inst: Instance):
        self.route_index = route_index
        self.visits = visits
        self.h_in = h_in
        self.k = k
        self.p = p
        self.inst = inst
        position = {v: i for i, v in enumerate(visits)}
        owner = inst.request_of_point
        self.requests = [owner[v] for v in visits if inst.points[v].is_pickup]
        self.pickup_position = [position[inst.request(rid).pickup] for rid in self.requests]
        self.steps = 0

    def _skip(self, chosen: List[int]) -> set:
        skip = set()
        for i in chosen:
            req = self.inst.request(self.requests[i])
            skip.add(req.pickup)
            skip.add(req.delivery)
        return skip

    def leaf(self, chosen: List[int]) -> List[Tuple[int, int]]:
        """Slot pairs for h_in once the chosen requests are gone"""
        inst = self.inst
        skip = self._skip(chosen)
        route = make_route([v for v in self.visits if v not in skip], inst)
        if not route.feasible:
            return []
        m = len(route.visits)
        pairs = []
        for a in range(m + 1):
            for b in range(a, m + 1):
                self.steps += 1
                if insertion_feasible(route, self.h_in, a, b, inst):
                    pairs.append((a, b))
        return pairs

    def search(self, incumbent: _Incumbent) -> None:
        count = len(self.requests)
        k = self.k

        def visit(start: int, chosen: List[int], partial: int) -> None:
            depth = len(chosen)
            for i in range(start, count - (k - depth) + 1):
                self.steps += 1
                total = partial + self.p[self.requests[i]]
                if not incumbent.admits(total + (k - depth - 1)):
                    continue
                chosen.append(i)
                if depth + 1 == k:
                    pairs = self.leaf(chosen)
                    if pairs:
                        incumbent.offer(self.route_index, tuple(self.requests[j] for j in chosen),
                                        total, pairs)
                else:
                    end = self.pickup_position[i + 1] if i + 1 < count else len(self.visits)
                    if not _prefix_feasible(self.visits, self._skip(chosen), end, self.inst):
                        chosen.pop()
                        # a longer fixed prefix keeps the infeasible part
                        break
                    visit(i + 1, chosen, total)
                chosen.pop()

        if count >= k:
            visit(0, [], 0)


def ejection_search(h_in: Request, sol: Solution, p: PenaltyCounters, k: int, inst: Instance,
                    rng: Optional[np.random.Generator] = None,
                    counters: Optional[OpCounters] = None) -> Optional[EjectionCandidate]:
    """
    Minimum penalty-sum way to eject exactly k requests from one route so that
    h_in fits into it. Ties are broken uniformly at random when an rng is given.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    incumbent = _Incumbent(rng)
    steps = 0
    for idx, route in enumerate(sol.routes):
        if not route.feasible or len(route.visits) < 2 * k:
            continue
        if rng is None and incumbent.p_sum is not None and incumbent.p_sum <= k:
            break
        searcher = _RouteSearch(idx, route.visits, h_in, k, p, inst)
        searcher.search(incumbent)
        steps += searcher.steps
    if counters is not None:
        with counters.track(ejection_phase(k)):
            counters.add_ejection(k, steps)
    return incumbent.candidate


def apply_ejection(sol: Solution, candidate: EjectionCandidate, h_in: Request,
                   inst: Instance) -> List[int]:
    """Eject the candidate's requests, insert h_in; returns the ejected ids"""
    idx = candidate.route_index
    skip = set()
    for rid in candidate.ejected:
        req = inst.request(rid)
        skip.add(req.pickup)
        skip.add(req.delivery)
    visits = [v for v in sol.routes[idx].visits if v not in skip]
    a, b = candidate.pickup_pos, candidate.delivery_pos
    visits = visits[:a] + [h_in.pickup] + visits[a:b] + [h_in.delivery] + visits[b:]
    sol.set_route(idx, visits, inst)
    return list(candidate.ejected)
