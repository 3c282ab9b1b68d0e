"""
Route representation with forward/backward time-window slack caches

Positions are indexed over the extended sequence [depot] + visits + [depot], so
visit i of the route sits at extended position i + 1. An insertion slot s means
"between extended positions s and s + 1"; slots run from 0 to len(visits).
"""

from typing import Iterable, List, Optional

from .instance import Instance, Request, TIME_EPS, DEPOT_ID
from ..core.exceptions import ContractViolationError


def _sparse_table(values: List[float], pick) -> List[List[float]]:
    table = [values]
    width = 1
    while 2 * width <= len(values):
        prev = table[-1]
        table.append([pick(prev[i], prev[i + width]) for i in range(len(prev) - width)])
        width *= 2
    return table


def _range_query(table: List[List[float]], lo: int, hi: int, pick) -> float:
    level = (hi - lo + 1).bit_length() - 1
    row = table[level]
    return pick(row[lo], row[hi - (1 << level) + 1])


class Route:
    """Ordered visits of one vehicle plus cached schedule data"""

    __slots__ = ("visits", "_nodes", "_e", "_l", "_load", "_wait_prefix",
                 "_slack_table", "_load_table", "feasible", "tw_violation",
                 "cap_violation", "precedence_ok")

    def __init__(self, visits: Optional[Iterable[int]] = None):
        self.visits: List[int] = list(visits or [])
        self._nodes: List[int] = []
        self._e: List[float] = []
        self._l: List[float] = []
        self._load: List[int] = []
        self._wait_prefix: List[float] = []
        self._slack_table: List[List[float]] = []
        self._load_table: List[List[float]] = []
        self.feasible = True
        self.tw_violation = 0.0
        self.cap_violation = 0.0
        self.precedence_ok = True

    def __len__(self) -> int:
        return len(self.visits)

    def __repr__(self) -> str:
        state = "feasible" if self.feasible else f"F={self.violation:.3f}"
        return f"Route({self.visits}, {state})"

    @property
    def earliest_start(self) -> List[float]:
        return self._e[1:-1]

    @property
    def latest_start(self) -> List[float]:
        return self._l[1:-1]

    @property
    def load_prefix(self) -> List[int]:
        return self._load[1:-1]

    @property
    def violation(self) -> float:
        """Total violation F used by squeeze"""
        return self.tw_violation + self.cap_violation

    def copy(self) -> "Route":
        # caches are replaced, never mutated
        clone = Route.__new__(Route)
        clone.visits = list(self.visits)
        for name in Route.__slots__[1:]:
            setattr(clone, name, getattr(self, name))
        return clone

    def requests(self, inst: Instance) -> List[int]:
        """Request ids on this route in order of their pickup"""
        owner = inst.request_of_point
        return [owner[v] for v in self.visits if inst.points[v].is_pickup]

    def range_min_slack(self, lo: int, hi: int) -> float:
        return _range_query(self._slack_table, lo, hi, min)

    def range_max_load(self, lo: int, hi: int) -> float:
        return _range_query(self._load_table, lo, hi, max)


def recompute_caches(route: Route, inst: Instance) -> Route:
    """
    Rebuild earliest/latest service starts, waiting prefix sums, loads and the
    range tables for the O(1) insertion test. Infeasibility is recorded on the
    route, never raised.
    """
    pts = inst.points
    travel = inst.travel
    nodes = [DEPOT_ID] + route.visits + [DEPOT_ID]
    size = len(nodes)
    depot = pts[DEPOT_ID]

    e = [0.0] * size
    wait_prefix = [0.0] * size
    load = [0] * size
    e[0] = depot.tw_earliest
    warp_time = depot.tw_earliest
    tw_violation = 0.0
    cap_violation = 0.0
    feasible = True
    precedence_ok = True
    seen = set()
    capacity = inst.capacity

    for k in range(1, size):
        prev, node = nodes[k - 1], nodes[k]
        point = pts[node]
        arrival = e[k - 1] + pts[prev].service_time + travel[prev][node]
        e[k] = max(point.tw_earliest, arrival)
        wait_prefix[k] = wait_prefix[k - 1] + (e[k] - arrival)
        if e[k] > point.tw_latest + TIME_EPS:
            feasible = False

        # time-warp schedule for the violation measure
        warp_arrival = warp_time + pts[prev].service_time + travel[prev][node]
        if warp_arrival > point.tw_latest + TIME_EPS:
            tw_violation += warp_arrival - point.tw_latest
        warp_time = min(max(warp_arrival, point.tw_earliest), point.tw_latest)

        load[k] = load[k - 1] + point.demand
        if load[k] > capacity:
            cap_violation += load[k] - capacity
        elif load[k] < 0:
            cap_violation += -load[k]

        if point.is_delivery and point.partner_id not in seen:
            precedence_ok = False
        seen.add(node)

    latest = [0.0] * size
    latest[-1] = depot.tw_latest
    for k in range(size - 2, -1, -1):
        node, nxt = nodes[k], nodes[k + 1]
        latest[k] = min(pts[node].tw_latest,
                        latest[k + 1] - travel[node][nxt] - pts[node].service_time)

    slack = [pts[nodes[k]].tw_latest - e[k] + wait_prefix[k] for k in range(size)]

    route._nodes = nodes
    route._e = e
    route._l = latest
    route._load = load
    route._wait_prefix = wait_prefix
    route._slack_table = _sparse_table(slack, min)
    route._load_table = _sparse_table(load, max)
    route.tw_violation = tw_violation
    route.cap_violation = cap_violation
    route.precedence_ok = precedence_ok
    route.feasible = feasible and cap_violation == 0 and precedence_ok
    return route


def make_route(visits: Iterable[int], inst: Instance) -> Route:
    return recompute_caches(Route(visits), inst)


def insertion_feasible(route: Route, req: Request, pickup_pos: int, delivery_pos: int,
                       inst: Instance) -> bool:
    """
    Constant-time test: does inserting req's pickup at slot pickup_pos and its
    delivery at slot delivery_pos keep the route feasible? Only cached values
    and a fixed number of arithmetic operations are used.
    """
    m = len(route.visits)
    if not 0 <= pickup_pos <= delivery_pos <= m:
        raise ContractViolationError(
            f"Insertion slots ({pickup_pos}, {delivery_pos}) out of range for a route of {m} visits")
    if not route.feasible:
        return False

    pts = inst.points
    travel = inst.travel
    nodes = route._nodes
    e = route._e
    latest = route._l
    load = route._load
    a, b = pickup_pos, delivery_pos
    p, d = req.pickup, req.delivery
    pickup, delivery = pts[p], pts[d]

    demand = pickup.demand
    if load[a] + demand > inst.capacity:
        return False
    if b > a and route.range_max_load(a + 1, b) + demand > inst.capacity:
        return False

    prev = nodes[a]
    start_p = max(pickup.tw_earliest, e[a] + pts[prev].service_time + travel[prev][p])
    if start_p > pickup.tw_latest + TIME_EPS:
        return False

    if a == b:
        start_d = max(delivery.tw_earliest, start_p + pickup.service_time + travel[p][d])
        if start_d > delivery.tw_latest + TIME_EPS:
            return False
        nxt = nodes[a + 1]
        start_next = max(pts[nxt].tw_earliest, start_d + delivery.service_time + travel[d][nxt])
        return start_next <= latest[a + 1] + TIME_EPS

    nxt = nodes[a + 1]
    start_next = max(pts[nxt].tw_earliest, start_p + pickup.service_time + travel[p][nxt])
    push = start_next - e[a + 1]
    push_at_b = 0.0
    if push > 0.0:
        # a delay shrinks by the waiting time it meets downstream
        wait_prefix = route._wait_prefix
        if push + wait_prefix[a + 1] > route.range_min_slack(a + 1, b) + TIME_EPS:
            return False
        push_at_b = max(0.0, push - (wait_prefix[b] - wait_prefix[a + 1]))

    before = nodes[b]
    start_d = max(delivery.tw_earliest,
                  e[b] + push_at_b + pts[before].service_time + travel[before][d])
    if start_d > delivery.tw_latest + TIME_EPS:
        return False
    after = nodes[b + 1]
    start_after = max(pts[after].tw_earliest, start_d + delivery.service_time + travel[d][after])
    return start_after <= latest[b + 1] + TIME_EPS


def inserted_visits(route: Route, req: Request, pickup_pos: int, delivery_pos: int) -> List[int]:
    """Visit list after inserting req at the given slots"""
    v = route.visits
    return v[:pickup_pos] + [req.pickup] + v[pickup_pos:delivery_pos] + [req.delivery] + v[delivery_pos:]
