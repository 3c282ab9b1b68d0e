"""
Synthetic instances for profiling sweeps

Every generated instance is named `synthetic-...` or `<base>-tiled-...` so it
can never be mistaken for a published benchmark.
"""

import math
from typing import List, Tuple

import numpy as np

from ..model.instance import Instance, build_instance, DEPOT_ID
from ..model.route import make_route

Row = Tuple[int, int, int, int, int, int, int, int, int]


def generate_synthetic_instance(n: int, seed: int = 0, capacity: int = 200, grid: int = 100,
                                horizon: int = 1000, tw_width: int = 60, service: int = 10,
                                max_demand: int = 40) -> Instance:
    """
    n random requests on a grid around a central depot. Windows are drawn so
    that every request is servable by its own vehicle.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
    depot = (grid // 2, grid // 2)
    rows: List[Row] = [(DEPOT_ID, depot[0], depot[1], 0, 0, horizon, 0, 0, 0)]
    pickups, deliveries = [], []
    for i in range(1, n + 1):
        px, py, dx, dy = (int(v) for v in rng.integers(0, grid + 1, size=4))
        to_pickup = math.hypot(px - depot[0], py - depot[1])
        between = math.hypot(dx - px, dy - py)
        open_p = int(rng.integers(math.ceil(to_pickup), math.ceil(to_pickup) + int(0.4 * horizon) + 1))
        open_d = open_p + service + math.ceil(between) + int(rng.integers(0, int(0.2 * horizon) + 1))
        demand = int(rng.integers(1, max_demand + 1))
        pickups.append((i, px, py, demand, open_p, open_p + tw_width, service, 0, n + i))
        deliveries.append((n + i, dx, dy, -demand, open_d, open_d + tw_width, service, i, 0))
    return build_instance(rows + pickups + deliveries, capacity, name=f"synthetic-n{n}-s{seed}")


def tile_instance(base: Instance, n: int, seed: int = 0, jitter: int = 5) -> Instance:
    """
    Clone base requests (cycling through them) until there are n, moving each
    clone's coordinates by up to `jitter`. A clone whose own route would be
    infeasible after the move is copied exactly instead.
    """
    if base.n == 0:
        raise ValueError("Cannot tile an instance without requests")
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, base.n]))
    depot = base.depot
    rows: List[Row] = [(DEPOT_ID, int(depot.x), int(depot.y), 0, int(depot.tw_earliest),
                        int(depot.tw_latest), int(depot.service_time), 0, 0)]
    pickups, deliveries = [], []
    for i in range(1, n + 1):
        src = base.request((i - 1) % base.n + 1)
        p, d = base.points[src.pickup], base.points[src.delivery]
        shift = rng.integers(-jitter, jitter + 1, size=4) if i > base.n else np.zeros(4, dtype=int)
        coords = [max(0, int(round(v + s))) for v, s in zip((p.x, p.y, d.x, d.y), shift)]
        pickup = (i, coords[0], coords[1], p.demand, int(p.tw_earliest), int(p.tw_latest),
                  int(p.service_time), 0, n + i)
        delivery = (n + i, coords[2], coords[3], d.demand, int(d.tw_earliest), int(d.tw_latest),
                    int(d.service_time), i, 0)
        single = build_instance([rows[0], (1,) + pickup[1:8] + (2,), (2,) + delivery[1:7] + (1, 0)],
                               base.capacity)
        if not make_route([1, 2], single).feasible:
            pickup = (i, int(p.x), int(p.y)) + pickup[3:]
            delivery = (n + i, int(d.x), int(d.y)) + delivery[3:]
        pickups.append(pickup)
        deliveries.append(delivery)
    return build_instance(rows + pickups + deliveries, base.capacity,
                          name=f"{base.name}-tiled-n{n}-s{seed}")
