"""
Tests for the PDPTW data model: travel times, route caches, the constant-time
insertion test and the brute-force oracle
"""

import unittest
import sys
import os
import itertools

import numpy as np

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.core.exceptions import ContractViolationError
from src.model import (Solution, brute_force_feasible, build_instance, insertion_feasible,
                       make_route, recompute_caches, simulate_route, travel_time)
from src.model.route import inserted_visits
from tests.instance_factory import make_instance, random_instance, random_visits

SLOW = bool(os.getenv("GES_RUN_SLOW"))
ORACLE_CASES = 100_000 if SLOW else 4_000


def line_instance(delivery_latest: int = 100):
    """Depot at the origin, pickup at distance 1, delivery at distance 2"""
    return make_instance([{'p': (1, 0), 'd': (2, 0), 'p_tw': (0, 100), 'd_tw': (0, delivery_latest)}])


class TestTravelTime(unittest.TestCase):

    def setUp(self):
        self.inst = make_instance([{'p': (3, 4), 'd': (1, 0)}])

    def test_euclidean(self):
        self.assertEqual(travel_time(0, 1, self.inst), 5.0)
        self.assertEqual(travel_time(2, 2, self.inst), 0.0)
        self.assertEqual(travel_time(0, 2, self.inst), 1.0)

    def test_symmetry_and_triangle_inequality(self):
        inst = random_instance(np.random.default_rng(3), 6)
        ids = range(len(inst.points))
        for a, b in itertools.product(ids, ids):
            self.assertEqual(travel_time(a, b, inst), travel_time(b, a, inst))
        for a, b, c in itertools.product(ids, ids, ids):
            self.assertLessEqual(travel_time(a, c, inst),
                                 travel_time(a, b, inst) + travel_time(b, c, inst) + 1e-12)


class TestInstance(unittest.TestCase):

    def test_requests_and_roles(self):
        inst = make_instance([{'p': (1, 1), 'd': (2, 2)}, {'p': (3, 3), 'd': (4, 4)}])
        self.assertEqual(inst.n, 2)
        self.assertEqual(len(inst.points), 5)
        req = inst.request(2)
        self.assertEqual((req.pickup, req.delivery), (2, 4))
        self.assertTrue(inst.points[2].is_pickup)
        self.assertTrue(inst.points[4].is_delivery)
        self.assertTrue(inst.depot.is_depot)
        self.assertEqual(inst.request_of_point[4], 2)

    def test_invariants_enforced(self):
        rows = [(0, 0, 0, 0, 0, 100, 0, 0, 0),
                (1, 1, 0, 5, 0, 100, 0, 0, 2),
                (2, 2, 0, -4, 0, 100, 0, 1, 0)]
        with self.assertRaises(ContractViolationError):
            build_instance(rows, 10)

    def test_route_count_lower_bound(self):
        inst = make_instance([{'p': (1, 0), 'd': (2, 0), 'demand': 6}] * 3, capacity=10)
        self.assertEqual(inst.route_count_lower_bound(), 2)
        self.assertEqual(make_instance([], capacity=10).route_count_lower_bound(), 0)


class TestRecomputeCaches(unittest.TestCase):

    def test_empty_route(self):
        route = make_route([], line_instance())
        self.assertTrue(route.feasible)
        self.assertEqual(route.earliest_start, [])
        self.assertEqual(route.load_prefix, [])

    def test_single_request(self):
        inst = line_instance()
        route = make_route([1, 2], inst)
        self.assertEqual(route.earliest_start, [1.0, 2.0])
        self.assertEqual(route.load_prefix, [1, 0])
        self.assertTrue(route.feasible)
        self.assertTrue(brute_force_feasible([1, 2], inst))
        for e, l in zip(route.earliest_start, route.latest_start):
            self.assertLessEqual(e, l)

    def test_closed_delivery_window(self):
        inst = line_instance(delivery_latest=1)
        route = make_route([1, 2], inst)
        self.assertFalse(route.feasible)
        self.assertAlmostEqual(route.tw_violation, 1.0)
        self.assertFalse(brute_force_feasible([1, 2], inst))

    def test_capacity_violation_measured(self):
        inst = make_instance([{'p': (1, 0), 'd': (2, 0), 'demand': 4},
                              {'p': (1, 1), 'd': (2, 1), 'demand': 5}], capacity=6)
        route = make_route([1, 2, 3, 4], inst)
        self.assertFalse(route.feasible)
        self.assertEqual(route.cap_violation, 3)
        self.assertEqual(route.violation, route.tw_violation + 3)

    def test_precedence(self):
        inst = line_instance()
        route = make_route([2, 1], inst)
        self.assertFalse(route.precedence_ok)
        self.assertFalse(route.feasible)
        self.assertFalse(brute_force_feasible([2, 1], inst))

    def test_idempotent(self):
        rng = np.random.default_rng(11)
        inst = random_instance(rng, 5, capacity=50)
        route = make_route(random_visits(rng, inst, [1, 2, 3, 4, 5]), inst)
        snapshot = (route.earliest_start, route.latest_start, route.load_prefix, route.feasible,
                    route.tw_violation, route.cap_violation)
        recompute_caches(route, inst)
        self.assertEqual(snapshot, (route.earliest_start, route.latest_start, route.load_prefix,
                                    route.feasible, route.tw_violation, route.cap_violation))

    def test_earliest_start_nondecreasing(self):
        rng = np.random.default_rng(5)
        checked = 0
        for _ in range(400):
            inst = random_instance(rng, 3, capacity=50)
            route = make_route(random_visits(rng, inst, [1, 2, 3]), inst)
            if route.feasible:
                checked += 1
                starts = route.earliest_start
                self.assertTrue(all(a <= b for a, b in zip(starts, starts[1:])))
        self.assertGreater(checked, 0)

    def test_feasibility_matches_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(500):
            inst = random_instance(rng, 4)
            visits = random_visits(rng, inst, [int(r) for r in rng.permutation(4)[:3] + 1])
            self.assertEqual(make_route(visits, inst).feasible, brute_force_feasible(visits, inst))


class TestInsertionFeasible(unittest.TestCase):

    def test_empty_route(self):
        inst = line_instance()
        self.assertTrue(insertion_feasible(make_route([], inst), inst.request(1), 0, 0, inst))

    def test_capacity_saturation(self):
        inst = make_instance([{'p': (1, 0), 'd': (2, 0), 'demand': 10},
                              {'p': (1, 1), 'd': (2, 1), 'demand': 5}], capacity=10)
        route = make_route([1, 3], inst)
        req = inst.request(2)
        # load is at capacity between pickup 1 and delivery 3
        self.assertFalse(insertion_feasible(route, req, 1, 1, inst))
        self.assertFalse(insertion_feasible(route, req, 0, 1, inst))
        self.assertTrue(insertion_feasible(route, req, 2, 2, inst))
        self.assertTrue(insertion_feasible(route, req, 0, 0, inst))

    def test_out_of_range(self):
        inst = line_instance()
        route = make_route([], inst)
        with self.assertRaises(ContractViolationError):
            insertion_feasible(route, inst.request(1), 0, 1, inst)
        with self.assertRaises(ContractViolationError):
            insertion_feasible(route, inst.request(1), 1, 0, inst)

    def test_matches_oracle_on_random_cases(self):
        rng = np.random.default_rng(2024)
        cases = 0
        agreed_feasible = 0
        while cases < ORACLE_CASES:
            n = int(rng.integers(2, 7))
            inst = random_instance(rng, n, max_width=int(rng.choice([40, 200])))
            on_route = [int(r) + 1 for r in rng.permutation(n)]
            k = int(rng.integers(0, n))
            route = make_route(random_visits(rng, inst, on_route[:k]), inst)
            req = inst.request(on_route[k])
            m = len(route.visits)
            for _ in range(5):
                a = int(rng.integers(0, m + 1))
                b = int(rng.integers(a, m + 1))
                expected = brute_force_feasible(inserted_visits(route, req, a, b), inst)
                got = insertion_feasible(route, req, a, b, inst)
                self.assertEqual(got, expected, f"visits={route.visits} req={req} slots=({a}, {b})")
                agreed_feasible += expected
                cases += 1
        # the generator must exercise both verdicts
        self.assertGreater(agreed_feasible, ORACLE_CASES // 50)
        self.assertLess(agreed_feasible, ORACLE_CASES)

    def test_matches_oracle_on_grown_routes(self):
        rng = np.random.default_rng(77)
        cases = 0
        agreed_feasible = 0
        longest = 0
        while cases < ORACLE_CASES:
            n = int(rng.integers(8, 17))
            inst = random_instance(rng, n, horizon=1000, capacity=int(rng.integers(8, 41)),
                                   max_width=int(rng.choice([100, 1000])))
            order = [int(r) + 1 for r in rng.permutation(n)]
            target = min(12, n - 1) if rng.random() < 0.5 else int(rng.integers(1, min(12, n - 1) + 1))
            visits = []
            served = 0
            # grow a feasible route one oracle-checked insertion at a time
            for rid in order[:-1]:
                if served == target:
                    break
                req = inst.request(rid)
                for _ in range(30):
                    a = int(rng.integers(0, len(visits) + 1))
                    b = int(rng.integers(a, len(visits) + 1))
                    grown = visits[:a] + [req.pickup] + visits[a:b] + [req.delivery] + visits[b:]
                    if brute_force_feasible(grown, inst):
                        visits = grown
                        served += 1
                        break
            route = make_route(visits, inst)
            self.assertTrue(route.feasible)
            longest = max(longest, served)

            req = inst.request(order[-1])
            m = len(route.visits)
            for _ in range(10):
                a = int(rng.integers(0, m + 1))
                b = int(rng.integers(a, m + 1))
                expected = brute_force_feasible(inserted_visits(route, req, a, b), inst)
                got = insertion_feasible(route, req, a, b, inst)
                self.assertEqual(got, expected, f"visits={route.visits} req={req} slots=({a}, {b})")
                agreed_feasible += expected
                cases += 1
        self.assertEqual(longest, 12)
        self.assertGreater(agreed_feasible, cases // 50)
        self.assertLess(agreed_feasible, cases)



class TestOracle(unittest.TestCase):

    def test_empty_sequence(self):
        self.assertTrue(brute_force_feasible([], line_instance()))

    def test_violation_names_point(self):
        inst = line_instance(delivery_latest=1)
        sim = simulate_route([1, 2], inst)
        self.assertFalse(sim.feasible)
        self.assertEqual(sim.service_starts, [1.0, 2.0])
        self.assertTrue(any(v.startswith("point 2:") for v in sim.violations))

    def test_depot_return(self):
        inst = make_instance([{'p': (30, 0), 'd': (40, 0)}], horizon=60)
        sim = simulate_route([1, 2], inst)
        self.assertFalse(sim.feasible)
        self.assertAlmostEqual(sim.return_time, 80.0)
        self.assertTrue(any(v.startswith("depot") for v in sim.violations))


class TestSolution(unittest.TestCase):

    def setUp(self):
        self.inst = make_instance([{'p': (1, 0), 'd': (2, 0)}, {'p': (3, 0), 'd': (4, 0)},
                                   {'p': (5, 0), 'd': (6, 0)}])

    def test_from_routes(self):
        sol = Solution.from_routes([[1, 4], [2, 5, 3, 6]], self.inst)
        self.assertEqual(sol.route_count, 2)
        self.assertEqual(sol.assignment, {1: 0, 2: 1, 3: 1})
        self.assertTrue(sol.feasible)
        self.assertEqual(sol.to_id_lists(), [[1, 4], [2, 5, 3, 6]])

    def test_insert_and_remove(self):
        sol = Solution.from_routes([[1, 4]], self.inst)
        self.assertEqual(sol.unserved_requests(self.inst), [2, 3])
        sol.insert_request(0, self.inst.request(2), 2, 2, self.inst)
        self.assertEqual(sol.routes[0].visits, [1, 4, 2, 5])
        self.assertTrue(sol.is_served(2))
        with self.assertRaises(ContractViolationError):
            sol.insert_request(0, self.inst.request(2), 0, 0, self.inst)

        self.assertEqual(sol.remove_request(1, self.inst), 0)
        self.assertEqual(sol.routes[0].visits, [2, 5])
        with self.assertRaises(ContractViolationError):
            sol.remove_request(1, self.inst)

    def test_remove_route_and_drop_empty(self):
        sol = Solution.from_routes([[1, 4], [2, 5], [3, 6]], self.inst)
        self.assertEqual(sol.remove_route(1, self.inst), [2])
        self.assertEqual(sol.assignment, {1: 0, 3: 1})

        sol.set_route(0, [], self.inst)
        self.assertEqual(sol.route_count, 1)
        sol.drop_empty_routes(self.inst)
        self.assertEqual(len(sol.routes), 1)
        self.assertEqual(sol.assignment, {3: 0})

    def test_set_route_keeps_moved_assignment(self):
        sol = Solution.from_routes([[1, 4], [2, 5]], self.inst)
        sol.set_route(1, [2, 5, 1, 4], self.inst)
        sol.set_route(0, [], self.inst)
        self.assertEqual(sol.assignment, {1: 1, 2: 1})

    def test_copy_is_independent(self):
        sol = Solution.from_routes([[1, 4], [2, 5]], self.inst)
        clone = sol.copy()
        clone.remove_request(1, self.inst)
        self.assertEqual(sol.routes[0].visits, [1, 4])
        self.assertTrue(sol.is_served(1))


if __name__ == '__main__':
    unittest.main()
