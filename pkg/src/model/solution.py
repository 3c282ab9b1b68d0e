"""
Solution representation: a list of routes plus the request assignment
"""

from typing import Dict, Iterable, List, Optional, Sequence

from .instance import Instance, Request
from .route import Route, make_route, inserted_visits, recompute_caches
from ..core.exceptions import ContractViolationError


class Solution:
    """
    Set of vehicle routes. Served requests map to the index of their route;
    unserved requests are simply absent from the assignment.
    """

    def __init__(self, routes: Optional[List[Route]] = None,
                 assignment: Optional[Dict[int, int]] = None):
        self.routes: List[Route] = routes or []
        self.assignment: Dict[int, int] = assignment if assignment is not None else {}

    def __repr__(self) -> str:
        return f"Solution(routes={self.route_count}, served={len(self.assignment)})"

    @property
    def route_count(self) -> int:
        return sum(1 for r in self.routes if r.visits)

    @property
    def feasible(self) -> bool:
        return all(r.feasible for r in self.routes)

    @property
    def violation(self) -> float:
        return sum(r.violation for r in self.routes)

    @classmethod
    def from_routes(cls, id_lists: Iterable[Sequence[int]], inst: Instance) -> "Solution":
        """Build a solution from per-route point id sequences"""
        sol = cls([make_route(ids, inst) for ids in id_lists])
        sol.rebuild_assignment(inst)
        return sol

    def to_id_lists(self) -> List[List[int]]:
        return [list(r.visits) for r in self.routes if r.visits]

    def copy(self) -> "Solution":
        return Solution([r.copy() for r in self.routes], dict(self.assignment))

    def rebuild_assignment(self, inst: Instance) -> None:
        owner = inst.request_of_point
        assignment = {}
        for idx, route in enumerate(self.routes):
            for v in route.visits:
                if inst.points[v].is_pickup:
                    assignment[owner[v]] = idx
        self.assignment = assignment

    def is_served(self, request_id: int) -> bool:
        return request_id in self.assignment

    def served_requests(self) -> List[int]:
        return sorted(self.assignment)

    def unserved_requests(self, inst: Instance) -> List[int]:
        return [r.id for r in inst.requests if r.id not in self.assignment]

    def insert_request(self, route_idx: int, req: Request, pickup_pos: int, delivery_pos: int,
                       inst: Instance) -> None:
        """Insert an unserved request and refresh that route's caches"""
        if req.id in self.assignment:
            raise ContractViolationError(f"Request {req.id} is already served")
        if not 0 <= route_idx < len(self.routes):
            raise ContractViolationError(f"Route index {route_idx} out of range")
        route = self.routes[route_idx]
        if not 0 <= pickup_pos <= delivery_pos <= len(route.visits):
            raise ContractViolationError(
                f"Insertion slots ({pickup_pos}, {delivery_pos}) out of range for route {route_idx}")
        self.routes[route_idx] = make_route(inserted_visits(route, req, pickup_pos, delivery_pos), inst)
        self.assignment[req.id] = route_idx

    def remove_request(self, request_id: int, inst: Instance) -> int:
        """Take a served request off its route; returns the route index"""
        if request_id not in self.assignment:
            raise ContractViolationError(f"Request {request_id} is not served")
        route_idx = self.assignment.pop(request_id)
        req = inst.request(request_id)
        route = self.routes[route_idx]
        route.visits = [v for v in route.visits if v != req.pickup and v != req.delivery]
        recompute_caches(route, inst)
        return route_idx

    def remove_route(self, route_idx: int, inst: Instance) -> List[int]:
        """Unassign every request of a route and delete it; returns the request ids"""
        if not 0 <= route_idx < len(self.routes):
            raise ContractViolationError(f"Route index {route_idx} out of range")
        removed = self.routes[route_idx].requests(inst)
        del self.routes[route_idx]
        self.rebuild_assignment(inst)
        return removed

    def set_route(self, route_idx: int, visits: List[int], inst: Instance) -> None:
        """Replace a route's visit list; assignment entries follow the new contents"""
        for rid in self.routes[route_idx].requests(inst):
            if self.assignment.get(rid) == route_idx:
                del self.assignment[rid]
        route = make_route(visits, inst)
        self.routes[route_idx] = route
        for rid in route.requests(inst):
            self.assignment[rid] = route_idx

    def add_route(self, visits: List[int], inst: Instance) -> int:
        self.routes.append(make_route([], inst))
        idx = len(self.routes) - 1
        self.set_route(idx, visits, inst)
        return idx

    def drop_empty_routes(self, inst: Instance) -> None:
        if any(not r.visits for r in self.routes):
            self.routes = [r for r in self.routes if r.visits]
            self.rebuild_assignment(inst)
