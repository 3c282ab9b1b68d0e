"""
Perturb: random feasibility-preserving pair-relocate and pair-exchange moves
"""

from typing import Optional

import numpy as np

from ..model.instance import Instance
from ..model.route import make_route
from ..model.solution import Solution
from ..profiler.counters import OpCounters, PERTURB
from .insertion import route_insertions


def _removed(visits, req):
    return [v for v in visits if v != req.pickup and v != req.delivery]


def _pick(rng: np.random.Generator, options):
    return options[int(rng.integers(len(options)))]


def perturb(sol: Solution, steps: int, inst: Instance, rng: np.random.Generator,
            counters: Optional[OpCounters] = None) -> Solution:
    """
    Apply `steps` iterations to a copy of sol. Each iteration picks relocate or
    exchange with equal probability, draws a served request and another route,
    and applies the move only if the scan finds a feasible placement.
    """
    work = sol.copy()
    evals = 0
    for _ in range(steps):
        served = work.served_requests()
        if not served or work.route_count < 2:
            # a single route has no partner route to move requests into
            continue
        rid = served[int(rng.integers(len(served)))]
        req = inst.request(rid)
        src = work.assignment[rid]
        others = [i for i, r in enumerate(work.routes) if i != src and r.visits]
        dst = _pick(rng, others)
        src_visits = _removed(work.routes[src].visits, req)

        if rng.random() < 0.5:
            target = work.routes[dst]
            pairs = route_insertions(target, req, inst)
            m = len(target.visits)
            evals += (m + 1) * (m + 2) // 2
            if pairs:
                a, b = _pick(rng, pairs)
                v = target.visits
                work.set_route(dst, v[:a] + [req.pickup] + v[a:b] + [req.delivery] + v[b:], inst)
                work.set_route(src, src_visits, inst)
        else:
            candidates = work.routes[dst].requests(inst)
            other = inst.request(_pick(rng, candidates))
            dst_reduced = make_route(_removed(work.routes[dst].visits, other), inst)
            src_reduced = make_route(src_visits, inst)
            into_dst = route_insertions(dst_reduced, req, inst)
            into_src = route_insertions(src_reduced, other, inst)
            evals += ((len(dst_reduced.visits) + 1) * (len(dst_reduced.visits) + 2)
                      + (len(src_reduced.visits) + 1) * (len(src_reduced.visits) + 2)) // 2
            if into_dst and into_src:
                a, b = _pick(rng, into_dst)
                v = dst_reduced.visits
                new_dst = v[:a] + [req.pickup] + v[a:b] + [req.delivery] + v[b:]
                a, b = _pick(rng, into_src)
                v = src_reduced.visits
                new_src = v[:a] + [other.pickup] + v[a:b] + [other.delivery] + v[b:]
                work.set_route(dst, new_dst, inst)
                work.set_route(src, new_src, inst)
        work.drop_empty_routes(inst)

    if counters is not None:
        with counters.track(PERTURB):
            counters.add(PERTURB, evals)
    return work
