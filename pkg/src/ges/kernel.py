"""
Guided Ejection Search Kernel
Single-worker route minimization: initial solution, one route-elimination
attempt and the outer loop around it
"""

import time
from dataclasses import dataclass, asdict
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from ..config.configuration_manager import GesConfig
from ..core.base_classes import BaseComponent
from ..core.exceptions import ContractViolationError, UnsolvableInstanceError
from ..core.interfaces import CoopHook, IRouteMinimizer
from ..model.instance import Instance, Request
from ..model.oracle import simulate_route
from ..model.route import make_route
from ..model.solution import Solution
from ..profiler.counters import OpCounters
from .ejection import apply_ejection, ejection_search
from .insertion import feasible_insertions, route_insertions
from .perturb import perturb
from .pool import EjectionPool, PenaltyCounters
from .squeeze import squeeze

# Called at outer-iteration boundaries with the current best; may hand back a better solution
BoundaryHook = Callable[[Solution], Optional[Solution]]


def derive_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Per-worker generator; worker 0 is also the sequential solver's stream"""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def build_initial_solution(inst: Instance) -> Solution:
    """One route [pickup, delivery] per request"""
    routes = []
    for req in inst.requests:
        route = make_route([req.pickup, req.delivery], inst)
        if not route.feasible:
            reasons = simulate_route(route.visits, inst).violations
            raise UnsolvableInstanceError(req.id, "; ".join(reasons) or "dedicated route infeasible")
        routes.append(route)
    sol = Solution(routes, {req.id: i for i, req in enumerate(inst.requests)})
    return sol


def _first_fit(sol: Solution, req: Request, inst: Instance) -> bool:
    for idx, route in enumerate(sol.routes):
        pairs = route_insertions(route, req, inst)
        if pairs:
            sol.insert_request(idx, req, pairs[0][0], pairs[0][1], inst)
            return True
    return False


def build_packed_solution(inst: Instance) -> Solution:
    """
    First-fit packing in request id order, then one pass (shortest routes
    first) dissolving every route whose requests all first-fit elsewhere.
    """
    build_initial_solution(inst)
    sol = Solution()
    for req in inst.requests:
        if not _first_fit(sol, req, inst):
            sol.add_route([req.pickup, req.delivery], inst)

    for visits in sorted((list(r.visits) for r in sol.routes), key=len):
        idx = next((i for i, r in enumerate(sol.routes) if r.visits == visits), None)
        if idx is None:
            continue
        trial = sol.copy()
        removed = trial.remove_route(idx, inst)
        if all(_first_fit(trial, inst.request(rid), inst) for rid in removed):
            sol = trial
    return sol


def check_attempt_invariants(sigma: Solution, pool: EjectionPool, penalties: PenaltyCounters,
                             failures: Dict[int, int], inst: Instance) -> None:
    """
    Raise ContractViolationError unless every request is either served or
    pooled (never both), p[h] == 1 + failures[h], and every route is feasible.
    """
    pooled = pool.as_list()
    pooled_set = set(pooled)
    if len(pooled) != len(pooled_set):
        raise ContractViolationError(f"Ejection pool holds duplicates: {pooled}")
    both = pooled_set & set(sigma.assignment)
    if both:
        raise ContractViolationError(f"Requests {sorted(both)} are served and pooled at once")
    missing = {r.id for r in inst.requests} - pooled_set - set(sigma.assignment)
    if missing:
        raise ContractViolationError(f"Requests {sorted(missing)} are neither served nor pooled")
    for rid, p in penalties.as_dict().items():
        if p != 1 + failures.get(rid, 0):
            raise ContractViolationError(
                f"Penalty of request {rid} is {p} after {failures.get(rid, 0)} failed insertions")
    for idx, route in enumerate(sigma.routes):
        if route.visits and not simulate_route(route.visits, inst).feasible:
            raise ContractViolationError(f"Route {idx} is infeasible: {route.visits}")


def select_route_for_removal(sol: Solution, rng: np.random.Generator) -> int:
    candidates = [i for i, r in enumerate(sol.routes) if r.visits]
    if not candidates:
        raise ContractViolationError("Cannot remove a route from an empty solution")
    return candidates[int(rng.integers(len(candidates)))]


def minimize_routes_once(sol: Solution, counters: OpCounters, config: GesConfig, inst: Instance,
                         rng: np.random.Generator, coop_hook: Optional[CoopHook] = None,
                         initial: Optional[Solution] = None,
                         deadline: Optional[float] = None) -> Tuple[Solution, bool]:
    """
    Try to remove one route. Returns (solution, True) with one route fewer on
    success; on failure returns the input solution (or `initial` when
    restore_initial_on_failure is set) and False.
    """
    fallback = initial if (config.restore_initial_on_failure and initial is not None) else sol
    if config.z2_cap == 0 or sol.route_count == 0:
        return fallback, False

    sigma = sol.copy()
    removed = sigma.remove_route(select_route_for_removal(sigma, rng), inst)
    pool = EjectionPool(removed)
    penalties = PenaltyCounters(r.id for r in inst.requests)
    failures: Dict[int, int] = {}
    inner = 0
    finished = False

    while pool and not finished:
        if config.z2_cap is not None and inner >= config.z2_cap:
            break
        if deadline is not None and time.monotonic() >= deadline:
            break
        inner += 1
        counters.z2_observed += 1

        h_in = inst.request(pool.pop())
        candidates = feasible_insertions(h_in, sigma, inst, counters)
        if candidates:
            choice = candidates[int(rng.integers(len(candidates)))]
            sigma.insert_request(choice.route_index, h_in, choice.pickup_pos, choice.delivery_pos, inst)
        else:
            sigma = squeeze(h_in, sigma, inst, rng, counters, config.squeeze_round_cap)

        if not sigma.is_served(h_in.id):
            penalties.increment(h_in.id)
            failures[h_in.id] = failures.get(h_in.id, 0) + 1
            for k in range(1, config.k_max + 1):
                candidate = ejection_search(h_in, sigma, penalties, k, inst, rng, counters)
                if candidate is not None:
                    for rid in apply_ejection(sigma, candidate, h_in, inst):
                        pool.push(rid)
                    break
            if not sigma.is_served(h_in.id):
                pool.push_bottom(h_in.id)
            sigma = perturb(sigma, config.perturb_steps, inst, rng, counters)

        if config.check_invariants:
            check_attempt_invariants(sigma, pool, penalties, failures, inst)
        if coop_hook is not None:
            finished = bool(coop_hook(sigma))

    if pool:
        return fallback, False
    sigma.drop_empty_routes(inst)
    return sigma, True


@dataclass
class SolveResult:
    best: Solution
    initial_route_count: int
    outer_iterations: int
    inner_iterations: int
    wall_seconds: float
    stop_reason: str

    @property
    def route_count(self) -> int:
        return self.best.route_count


class RouteMinimizer(BaseComponent, IRouteMinimizer):
    """
    Sequential route minimizer for one instance. The parallel ring runs one of
    these per worker and plugs into it through the two hooks of `solve`.
    """

    def __init__(self, inst: Instance, config: Optional[GesConfig] = None,
                 counters: Optional[OpCounters] = None, name: str = "RouteMinimizer"):
        self.ges_config = config or GesConfig()
        super().__init__(name, asdict(self.ges_config))
        self.inst = inst
        self.counters = counters if counters is not None else OpCounters()
        self.deadline: Optional[float] = None

    def _setup(self) -> None:
        self.logger.debug(f"{self.name}: n={self.inst.n}, k_max={self.get_config('k_max')}, "
                          f"I={self.get_config('perturb_steps')}")

    def initial_solution(self) -> Solution:
        if self.ges_config.warm_start:
            return build_packed_solution(self.inst)
        return build_initial_solution(self.inst)

    def get_counters(self) -> OpCounters:
        return self.counters

    def minimize_routes_once(self, solution: Solution, rng: np.random.Generator,
                             coop_hook: Optional[CoopHook] = None,
                             initial: Optional[Solution] = None) -> Tuple[Solution, bool]:
        return minimize_routes_once(solution, self.counters, self.ges_config, self.inst, rng,
                                    coop_hook, initial, self.deadline)

    def _stop_reason(self, best: Solution, outer: int, lower_bound: int) -> Optional[str]:
        cfg = self.ges_config
        if best.route_count <= lower_bound:
            return "lower_bound"
        if cfg.target_route_count is not None and best.route_count <= cfg.target_route_count:
            return "target"
        if cfg.z1_cap is not None and outer >= cfg.z1_cap:
            return "z1_cap"
        if self.deadline is not None and time.monotonic() >= self.deadline:
            return "time_limit"
        return None

    def solve(self, rng: Optional[np.random.Generator] = None, coop_hook: Optional[CoopHook] = None,
              boundary_hook: Optional[BoundaryHook] = None) -> SolveResult:
        """Outer loop: repeat route-elimination attempts until a stop condition holds"""
        self.initialize()
        cfg = self.ges_config
        rng = rng if rng is not None else derive_rng(cfg.rng_seed)
        started = time.monotonic()
        self.deadline = started + cfg.time_limit
        inner_before = self.counters.z2_observed

        sigma = self.initial_solution()
        initial = sigma
        best_ever = sigma
        lower_bound = self.inst.route_count_lower_bound()
        outer = 0
        finished = False
        reason = "finished"

        while True:
            if boundary_hook is not None:
                received = boundary_hook(best_ever)
                if received is not None and received.route_count < best_ever.route_count:
                    best_ever = received
                    sigma = received.copy()
            stop = self._stop_reason(best_ever, outer, lower_bound)
            if stop:
                reason = stop
                break
            if finished or (coop_hook is not None and coop_hook(sigma)):
                break

            local_finished = [False]

            def inner_hook(current: Solution) -> bool:
                if coop_hook is not None and coop_hook(current):
                    local_finished[0] = True
                return local_finished[0]

            outer += 1
            self.counters.z1_observed += 1
            sigma, success = self.minimize_routes_once(sigma, rng, inner_hook, initial)
            finished = local_finished[0]
            if success:
                if sigma.route_count < best_ever.route_count:
                    best_ever = sigma
                self.logger.info(f"{self.name}: routes {sigma.route_count} after {outer} outer iterations")
            elif cfg.restore_initial_on_failure:
                best_ever = initial
                self.logger.debug(f"{self.name}: attempt {outer} failed, best reset to the initial solution")

        elapsed = time.monotonic() - started
        return SolveResult(best_ever, initial.route_count, outer,
                           self.counters.z2_observed - inner_before, elapsed, reason)


def solve(inst: Instance, config: Optional[GesConfig] = None,
          counters: Optional[OpCounters] = None) -> SolveResult:
    """Convenience wrapper for a single sequential run"""
    return RouteMinimizer(inst, config, counters).solve()
