# coding: utf-8
from __future__ import print_function, division, unicode_literals, absolute_import

from sparseia.core.testing import SparseiaTest
from sparseia.aggregation.aggregates import Algorithm, AlgorithmParams
from sparseia.fl.training import RoundMetrics
from sparseia.experiments.report import seconds_to_hms, RunReport


class TestRunReport(SparseiaTest):

    def test_seconds_to_hms(self):
        self.assertEqual(seconds_to_hms(None), "")
        self.assertEqual(seconds_to_hms(0), "0:00:00")
        self.assertEqual(seconds_to_hms(3725), "1:02:05")

    def test_report(self):
        metrics = [RoundMetrics(0, 0.5, 1.2, 100, [2]), RoundMetrics(1, 0.75, 1.0, 300, [3])]
        report = RunReport(title="Test runs")
        report.add_run(AlgorithmParams(Algorithm.SIA, q=6), metrics, run_time=61)
        report.add_run(AlgorithmParams(Algorithm.TC_SIA, q_g=4, q_l=2), metrics)
        report.add_run(AlgorithmParams(Algorithm.DENSE), [])

        first, second, third = report.entries
        self.assertEqual(first["budget"], "q=6")
        self.assertEqual((first["rounds"], first["final_accuracy"], first["total_bits"]), (2, 0.75, 400))
        self.assertEqual(first["mean_bits_per_round"], 200)
        self.assertEqual(second["budget"], "q_g=4 q_l=2")
        self.assertEqual(third["budget"], "dense")
        self.assertIsNone(third["final_accuracy"])
        self.assertEqual(third["mean_bits_per_round"], 0.0)

        s = str(report)
        self.assertTrue(s.startswith("Test runs"))
        self.assertIn("0:01:01", s)
        self.assertIn("0.7500", s)

        new_report = self.assertMSONable(report)
        self.assertEqual(new_report.entries, report.entries)
