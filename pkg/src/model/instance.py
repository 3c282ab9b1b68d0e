"""
PDPTW instance representation
Travel points, paired requests and the Euclidean travel-time matrix
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.exceptions import ContractViolationError

DEPOT_ID = 0
NO_PARTNER = -1

# Shared by the cached insertion test and the brute-force oracle
TIME_EPS = 1e-9


@dataclass(frozen=True)
class TravelPoint:
    """One stop: depot, pickup or delivery"""
    id: int
    x: float
    y: float
    demand: int
    tw_earliest: float
    tw_latest: float
    service_time: float
    partner_id: int = NO_PARTNER
    role: str = "depot"  # depot, pickup or delivery

    @property
    def is_depot(self) -> bool:
        return self.role == "depot"

    @property
    def is_pickup(self) -> bool:
        return self.role == "pickup"

    @property
    def is_delivery(self) -> bool:
        return self.role == "delivery"


@dataclass(frozen=True)
class Request:
    """A pickup/delivery pair; ids run from 1 to n"""
    id: int
    pickup: int
    delivery: int


@dataclass(frozen=True)
class Instance:
    """
    Immutable PDPTW problem. Index 0 of points is the depot and every other
    point belongs to exactly one request.
    """
    points: Tuple[TravelPoint, ...]
    requests: Tuple[Request, ...]
    capacity: int
    name: str = "unnamed"
    vehicle_count: Optional[int] = None  # parsed metadata, never a constraint
    speed: Optional[float] = None
    travel: List[List[float]] = field(default=None, repr=False, compare=False)
    request_of_point: Dict[int, int] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        coords = np.array([[p.x, p.y] for p in self.points], dtype=float)
        diff = coords[:, None, :] - coords[None, :, :]
        matrix = np.hypot(diff[..., 0], diff[..., 1])
        # plain floats, not numpy scalars, in the search loops
        object.__setattr__(self, "travel", matrix.tolist())
        owner = {}
        for req in self.requests:
            owner[req.pickup] = req.id
            owner[req.delivery] = req.id
        object.__setattr__(self, "request_of_point", owner)
        self._check_invariants()

    def _check_invariants(self) -> None:
        if not self.points or self.points[0].id != DEPOT_ID:
            raise ContractViolationError("Instance must start with the depot at index 0")
        if len(self.points) != 2 * len(self.requests) + 1:
            raise ContractViolationError(
                f"Instance has {len(self.points)} points for {len(self.requests)} requests")
        for idx, point in enumerate(self.points):
            if point.id != idx:
                raise ContractViolationError(f"Point at index {idx} has id {point.id}")
            if point.tw_earliest > point.tw_latest:
                raise ContractViolationError(f"Point {idx} has an empty time window")
        for req in self.requests:
            pickup, delivery = self.points[req.pickup], self.points[req.delivery]
            if req.pickup == req.delivery:
                raise ContractViolationError(f"Request {req.id} picks up and delivers at one point")
            if pickup.partner_id != req.delivery or delivery.partner_id != req.pickup:
                raise ContractViolationError(f"Request {req.id} partner links are not mutual")
            if pickup.demand != -delivery.demand:
                raise ContractViolationError(f"Request {req.id} demands do not cancel")
        if len(self.request_of_point) != 2 * len(self.requests):
            raise ContractViolationError("A point belongs to more than one request")

    @property
    def n(self) -> int:
        return len(self.requests)

    @property
    def depot(self) -> TravelPoint:
        return self.points[DEPOT_ID]

    def request(self, request_id: int) -> Request:
        """Get request by 1-based id"""
        return self.requests[request_id - 1]

    def total_demand(self) -> int:
        return sum(self.points[r.pickup].demand for r in self.requests)

    def route_count_lower_bound(self) -> int:
        """No solution serving every request can use fewer routes"""
        if self.n == 0:
            return 0
        if self.capacity <= 0:
            return 1
        return max(1, -(-self.total_demand() // self.capacity))


def travel_time(a: int, b: int, inst: Instance) -> float:
    """Euclidean distance between two points at unit speed"""
    return inst.travel[a][b]


def build_instance(rows: List[Tuple[int, float, float, int, float, float, float, int, int]],
                   capacity: int, name: str = "unnamed",
                   vehicle_count: Optional[int] = None, speed: Optional[float] = None) -> Instance:
    """
    Build an Instance from benchmark-style rows
    (id, x, y, demand, tw_earliest, tw_latest, service_time, pickup_sibling, delivery_sibling).
    Requests are numbered in order of their pickup point id.
    """
    rows = sorted(rows, key=lambda r: r[0])
    points = []
    requests = []
    for row in rows:
        pid, x, y, demand, early, late, service, pickup_sibling, delivery_sibling = row
        if pid == DEPOT_ID:
            partner, role = NO_PARTNER, "depot"
        elif delivery_sibling:
            partner, role = delivery_sibling, "pickup"
        else:
            partner, role = pickup_sibling, "delivery"
        points.append(TravelPoint(pid, float(x), float(y), int(demand), float(early),
                                  float(late), float(service), partner, role))
    for row in rows:
        if row[0] != DEPOT_ID and row[8]:
            requests.append(Request(len(requests) + 1, row[0], row[8]))
    return Instance(tuple(points), tuple(requests), int(capacity), name, vehicle_count, speed)
