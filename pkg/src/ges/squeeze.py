"""
Squeeze: insert at the least-violating position, then repair

Repair moves are out-relocate (move one request off a violated route) and,
only when no relocate improves, out-exchange (swap a request of a violated
route with one of another route). The first move that lowers the total
violation is taken each round.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from ..model.instance import Instance, Request
from ..model.route import insertion_feasible, inserted_visits, make_route
from ..model.solution import Solution
from ..profiler.counters import OpCounters, SQUEEZE

logger = logging.getLogger(__name__)

IMPROVEMENT_EPS = 1e-9


def _without(visits: List[int], req: Request) -> List[int]:
    return [v for v in visits if v != req.pickup and v != req.delivery]


class Squeezer:
    """One squeeze call; counts every candidate evaluation"""

    def __init__(self, inst: Instance, rng: np.random.Generator,
                 counters: Optional[OpCounters] = None, round_cap: int = 200):
        self.inst = inst
        self.rng = rng
        self.counters = counters
        self.round_cap = round_cap
        self.evals = 0

    def best_placement(self, visits: List[int], req: Request,
                       feasible_only: bool = False) -> Optional[Tuple[float, List[int]]]:
        """
        Least-violation placement of req into visits. A feasible base route is
        scanned with the cached test first; a violated one is recomputed per slot.
        """
        base = make_route(visits, self.inst)
        m = len(visits)
        if base.feasible:
            for a in range(m + 1):
                for b in range(a, m + 1):
                    self.evals += 1
                    if insertion_feasible(base, req, a, b, self.inst):
                        return 0.0, inserted_visits(base, req, a, b)
            if feasible_only:
                return None
        elif feasible_only:
            return None
        best = None
        for a in range(m + 1):
            for b in range(a, m + 1):
                self.evals += 1
                candidate = inserted_visits(base, req, a, b)
                violation = make_route(candidate, self.inst).violation
                if best is None or violation < best[0]:
                    best = (violation, candidate)
        return best

    def initial_insertion(self, h_in: Request, sol: Solution) -> Optional[Solution]:
        options = []
        best_value = None
        for idx, route in enumerate(sol.routes):
            if not route.visits:
                continue
            placed = self.best_placement(route.visits, h_in)
            delta = placed[0] - route.violation
            if best_value is None or delta < best_value - IMPROVEMENT_EPS:
                best_value = delta
                options = [(idx, placed[1])]
            elif abs(delta - best_value) <= IMPROVEMENT_EPS:
                options.append((idx, placed[1]))
        if not options:
            return None
        idx, visits = options[int(self.rng.integers(len(options)))]
        work = sol.copy()
        work.set_route(idx, visits, self.inst)
        return work

    def out_relocate(self, work: Solution) -> bool:
        inst = self.inst
        for r_idx, route in enumerate(work.routes):
            if route.feasible:
                continue
            for rid in route.requests(inst):
                req = inst.request(rid)
                reduced = _without(route.visits, req)
                self.evals += 1
                reduced_violation = make_route(reduced, inst).violation
                for t_idx, target in enumerate(work.routes):
                    if t_idx == r_idx:
                        continue
                    # feasible targets must stay feasible
                    placed = self.best_placement(target.visits, req, feasible_only=target.feasible)
                    if placed is None:
                        continue
                    delta = reduced_violation + placed[0] - route.violation - target.violation
                    if delta < -IMPROVEMENT_EPS:
                        work.set_route(r_idx, reduced, inst)
                        work.set_route(t_idx, placed[1], inst)
                        return True
        return False

    def out_exchange(self, work: Solution) -> bool:
        inst = self.inst
        for r_idx, route in enumerate(work.routes):
            if route.feasible:
                continue
            for rid in route.requests(inst):
                req = inst.request(rid)
                reduced = _without(route.visits, req)
                for t_idx, target in enumerate(work.routes):
                    if t_idx == r_idx:
                        continue
                    for uid in target.requests(inst):
                        other = inst.request(uid)
                        target_side = self.best_placement(_without(target.visits, other), req,
                                                          feasible_only=target.feasible)
                        if target_side is None:
                            continue
                        route_side = self.best_placement(reduced, other)
                        delta = (route_side[0] + target_side[0]
                                 - route.violation - target.violation)
                        if delta < -IMPROVEMENT_EPS:
                            work.set_route(r_idx, route_side[1], inst)
                            work.set_route(t_idx, target_side[1], inst)
                            return True
        return False

    def run(self, h_in: Request, sol: Solution) -> Solution:
        work = self.initial_insertion(h_in, sol)
        if work is None:
            return sol
        rounds = 0
        while not work.feasible:
            if rounds >= self.round_cap:
                logger.debug(f"Squeeze of request {h_in.id} hit the round cap")
                return sol
            rounds += 1
            if not (self.out_relocate(work) or self.out_exchange(work)):
                return sol
        work.drop_empty_routes(self.inst)
        return work


def squeeze(h_in: Request, sol: Solution, inst: Instance, rng: np.random.Generator,
            counters: Optional[OpCounters] = None, round_cap: int = 200) -> Solution:
    """
    Serve h_in by accepting a violating insertion and repairing it. Returns a
    feasible solution serving h_in, or `sol` itself when repair fails.
    """
    squeezer = Squeezer(inst, rng, counters, round_cap)
    try:
        return squeezer.run(h_in, sol)
    finally:
        if counters is not None:
            with counters.track(SQUEEZE):
                counters.add(SQUEEZE, squeezer.evals)
