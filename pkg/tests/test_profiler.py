"""
Tests for the operation counters, the pessimistic cost model and the scaling
report
"""

import unittest
import sys
import os
import tempfile

import numpy as np
import pandas as pd

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.profiler import (CostModelParams, OpCounters, ScalingReport, check_pessimistic_bounds,
                          compute_speedup, dominant_term, ejection_phase, eval_T_in_pes, eval_T_pes,
                          fit_exponent)
from src.profiler.counters import COOP, EJECTION, INSERTION


def bound_rows(phase, tallies, p=1):
    return [{"phase": phase, "n": n, "p": p, "repetition": 0, "tally": t, "wall_seconds": 0.0}
            for n, t in tallies.items()]


class TestCostModel(unittest.TestCase):

    def test_inner_iteration_hand_value(self):
        params = CostModelParams(p=2, n=10, k_max=3)
        self.assertEqual(eval_T_in_pes(params), 210020)

    def test_total_hand_value(self):
        params = CostModelParams(z1=1, z2=1, p=2, n=10, k_max=3)
        self.assertEqual(eval_T_pes(params), 210070)

    def test_no_outer_iterations(self):
        params = CostModelParams(z1=0, z2=5, p=2, n=10, k_max=3)
        # only the setup and final collection terms remain
        self.assertEqual(eval_T_pes(params), 10 + 20)

    def test_zero_costs(self):
        zero = {f"s{i}": 0.0 for i in range(1, 8)}
        self.assertEqual(eval_T_pes(CostModelParams(**zero, z1=3, z2=3, p=4, n=50)), 0)

    def test_invalid_params(self):
        with self.assertRaises(ValueError):
            CostModelParams(s3=-1.0)
        with self.assertRaises(ValueError):
            CostModelParams(s1=float("nan"))
        with self.assertRaises(ValueError):
            CostModelParams(p=0)
        with self.assertRaises(ValueError):
            CostModelParams(n=-1)

    def test_dominant_term_ratio_bounded(self):
        ratios = []
        for j in range(9):
            params = CostModelParams(z1=1, z2=1, p=2, n=10 * 2 ** j, k_max=3)
            ratios.append(eval_T_pes(params) / dominant_term(params))
        self.assertTrue(all(1.0 <= r <= 3.0 for r in ratios), ratios)
        self.assertTrue(all(a >= b for a, b in zip(ratios, ratios[1:])), ratios)
        self.assertAlmostEqual(ratios[-1], 2.0, places=2)


class TestFitExponent(unittest.TestCase):

    def test_exact_power_laws(self):
        for exponent in (1.0, 2.0, 4.0, 2.5):
            points = [(n, 3.0 * n ** exponent) for n in (10, 20, 40, 80)]
            slope, residual = fit_exponent(points)
            self.assertAlmostEqual(slope, exponent, places=9)
            self.assertLess(residual, 1e-9)

    def test_noisy_residual(self):
        rng = np.random.default_rng(1)
        points = [(n, n ** 2 * float(np.exp(rng.normal(0, 0.2)))) for n in (10, 20, 40, 80, 160)]
        slope, residual = fit_exponent(points)
        self.assertAlmostEqual(slope, 2.0, delta=0.5)
        self.assertGreater(residual, 0)

    def test_rejects_bad_input(self):
        with self.assertRaises(ValueError):
            fit_exponent([(10, 100), (20, 400)])
        with self.assertRaises(ValueError):
            fit_exponent([(10, 100), (20, 0), (40, 1600)])
        with self.assertRaises(ValueError):
            fit_exponent([(0, 1), (20, 400), (40, 1600)])
        with self.assertRaises(ValueError):
            fit_exponent([(10, 100), (10, 110), (10, 90)])


class TestBoundChecks(unittest.TestCase):
    PHASE = INSERTION + ".per_call_max"

    def test_quadratic_sweep_passes(self):
        rows = pd.DataFrame(bound_rows(self.PHASE, {n: 3 * n ** 2 for n in (10, 20, 40, 80)}))
        verdict = check_pessimistic_bounds(rows)[self.PHASE]
        self.assertTrue(verdict.passed)
        self.assertEqual(verdict.bound, "n^2")
        self.assertAlmostEqual(verdict.constant, 3.0)
        self.assertEqual(verdict.sizes, [10, 20, 40, 80])

    def test_planted_cubic_fails(self):
        rows = pd.DataFrame(bound_rows(self.PHASE, {n: n ** 3 for n in (10, 20, 40)}))
        verdict = check_pessimistic_bounds(rows)[self.PHASE]
        self.assertFalse(verdict.passed)
        self.assertAlmostEqual(verdict.worst_ratio, 4.0)

    def test_ejection_and_coop_bounds(self):
        eject = ejection_phase(2) + ".per_call_max"
        coop = COOP + ".per_call_max"
        rows = pd.DataFrame(bound_rows(eject, {n: n ** 4 for n in (10, 20, 40)})
                            + bound_rows(coop, {n: 4 * n for n in (10, 20, 40)}, p=4))
        verdicts = check_pessimistic_bounds(rows)
        self.assertEqual(verdicts[eject].bound, "n^4")
        self.assertEqual(verdicts[coop].bound, "p*n")
        self.assertTrue(verdicts[eject].passed and verdicts[coop].passed)

    def test_totals_and_single_size_skipped(self):
        rows = pd.DataFrame(bound_rows(INSERTION, {10: 5, 20: 500})
                            + bound_rows(self.PHASE, {10: 100}))
        self.assertEqual(check_pessimistic_bounds(rows), {})


class TestSpeedup(unittest.TestCase):

    def test_speedup_and_cost(self):
        result = compute_speedup(10.0, 4.0, 2)
        self.assertAlmostEqual(result.speedup, 2.5)
        self.assertAlmostEqual(result.cost, 8.0)
        self.assertTrue(result.superlinear)

        ordinary = compute_speedup(10.0, 5.0, 4)
        self.assertAlmostEqual(ordinary.speedup, 2.0)
        self.assertFalse(ordinary.superlinear)

    def test_rejects_bad_input(self):
        with self.assertRaises(ValueError):
            compute_speedup(0.0, 1.0, 2)
        with self.assertRaises(ValueError):
            compute_speedup(1.0, -1.0, 2)
        with self.assertRaises(ValueError):
            compute_speedup(1.0, 1.0, 0)


class TestOpCounters(unittest.TestCase):

    def test_track_records_per_call_maximum(self):
        counters = OpCounters()
        for amount in (3, 7, 5):
            with counters.track(INSERTION):
                counters.add(INSERTION, amount)
        self.assertEqual(counters.insertion_tests, 15)
        self.assertEqual(counters.calls[INSERTION], 3)
        self.assertEqual(counters.per_call_max[INSERTION], 7)

    def test_zero_call_recorded(self):
        counters = OpCounters()
        with counters.track(COOP):
            pass
        self.assertEqual(counters.per_call_max[COOP], 0)

    def test_ejection_degrees(self):
        counters = OpCounters()
        with counters.track(ejection_phase(2)):
            counters.add_ejection(2, 4)
        counters.add_ejection(1, 2)
        self.assertEqual(counters.tally(EJECTION), 6)
        self.assertEqual(counters.tally(ejection_phase(2)), 4)
        with self.assertRaises(ValueError):
            counters.add(EJECTION, 1)
        with self.assertRaises(ValueError):
            counters.add(INSERTION, -1)

    def test_merge_and_snapshot(self):
        a, b = OpCounters(), OpCounters()
        with a.track(INSERTION):
            a.add(INSERTION, 4)
        with b.track(INSERTION):
            b.add(INSERTION, 9)
        b.add_ejection(3, 2)
        b.z1_observed = 2
        a.merge(b)
        snap = a.snapshot()
        self.assertEqual(snap[INSERTION], 13)
        self.assertEqual(snap[INSERTION + ".per_call_max"], 9)
        self.assertEqual(snap[ejection_phase(3)], 2)
        self.assertEqual(snap["z1_observed"], 2)
        self.assertEqual(a.calls[INSERTION], 2)

        a.reset()
        self.assertEqual(a.snapshot()[INSERTION], 0)
        self.assertEqual(a.per_call_max, {})


class TestScalingReport(unittest.TestCase):

    def rows(self, sizes):
        rows = []
        for n in sizes:
            for rep in range(2):
                rows.append({"phase": INSERTION, "n": n, "p": 1, "repetition": rep,
                             "tally": 2 * n ** 2, "wall_seconds": 0.01 * n})
                rows.append({"phase": INSERTION + ".per_call_max", "n": n, "p": 1,
                             "repetition": rep, "tally": n ** 2, "wall_seconds": 0.01 * n})
        return rows

    def test_full_report(self):
        report = ScalingReport.from_measurements(self.rows([10, 20, 40]))
        exponent, residual = report.exponents[INSERTION]
        self.assertAlmostEqual(exponent, 2.0, places=9)
        self.assertTrue(report.verdicts[INSERTION + ".per_call_max"].passed)
        self.assertEqual(report.notes, [])

        report.add_speedups(10, 1.0, {1: 1.0, 2: 0.6, 4: 0.2})
        self.assertEqual(list(report.speedups["p"]), [1, 2, 4])
        self.assertTrue(report.speedups["superlinear"].iloc[-1])
        self.assertTrue(any(line.startswith("speedup n=10 p=4") for line in report.summary_lines()))

        with tempfile.TemporaryDirectory() as tmp:
            path = report.to_csv(os.path.join(tmp, "report.csv"))
            with open(path) as f:
                text = f.read()
            self.assertTrue(text.startswith("phase,n,p,repetition,tally,wall_seconds"))
            self.assertIn("# exponent phase=insertion_tests value=2.000", text)
            self.assertIn("verdict=pass", text)
            self.assertIn("# model ejection_term=p*n^(k_max+2)", text)
            back = pd.read_csv(path, comment="#")
            self.assertEqual(len(back), 12)

            png = report.plot(os.path.join(tmp, "report.png"))
            self.assertGreater(os.path.getsize(png), 0)

    def test_too_few_sizes(self):
        report = ScalingReport.from_measurements(self.rows([10, 20]))
        self.assertEqual(report.exponents, {})
        self.assertTrue(any("exponents not fitted" in note for note in report.notes))
        self.assertIn(INSERTION + ".per_call_max", report.verdicts)

        single = ScalingReport.from_measurements(self.rows([10]))
        self.assertEqual(single.verdicts, {})
        self.assertIn("bound checks skipped: fewer than 2 sizes", single.notes)


if __name__ == '__main__':
    unittest.main()
