# coding: utf-8
from __future__ import print_function, division, unicode_literals, absolute_import

import json
import os

from monty.json import MontyDecoder
from monty.tempfile import ScratchDir

from sparseia.core.testing import SparseiaTest
from sparseia.core.errors import DataFileError
from sparseia.aggregation.aggregates import Algorithm, AlgorithmParams
from sparseia.fl.training import RoundMetrics
from sparseia.experiments.outputs import (METRICS_HEADER, prepare_output_dir, atomic_write, format_value, csv_string,
                                          write_csv, read_csv, write_metrics_csv, write_json)


class TestOutputs(SparseiaTest):

    def test_prepare_output_dir(self):
        with ScratchDir("."):
            self.assertEqual(prepare_output_dir(os.path.join("a", "b")), os.path.join("a", "b"))
            self.assertTrue(os.path.isdir(os.path.join("a", "b")))
            # existing directories are fine
            prepare_output_dir("a")
            with open("file", "w") as f:
                f.write("x")
            with self.assertRaises(DataFileError):
                prepare_output_dir(os.path.join("file", "sub"))

    def test_atomic_write(self):
        with ScratchDir("."):
            atomic_write("out.txt", "first\n")
            atomic_write("out.txt", "second\n")
            with open("out.txt") as f:
                self.assertEqual(f.read(), "second\n")
            # no temporary file is left behind
            self.assertEqual(os.listdir("."), ["out.txt"])
            with self.assertRaises(DataFileError):
                atomic_write(os.path.join("missing_dir", "out.txt"), "x")

    def test_csv(self):
        self.assertEqual(format_value(0.1), "0.1")
        self.assertEqual(format_value(1 / 3), repr(1 / 3))
        self.assertEqual(format_value(7), "7")
        self.assertEqual(csv_string(["a", "b"], [[1, 0.5], ["x", ""]]), "a,b\n1,0.5\nx,\n")

        with ScratchDir("."):
            write_csv("t.csv", ["a", "b"], [[1, 2.0 / 3], [2, 1e-20]])
            rows = read_csv("t.csv")
            self.assertEqual([r["a"] for r in rows], ["1", "2"])
            # floats round-trip exactly
            self.assertEqual(float(rows[0]["b"]), 2.0 / 3)
            self.assertEqual(float(rows[1]["b"]), 1e-20)

    def test_metrics_csv(self):
        metrics = [RoundMetrics(0, 0.25, 2.1, 900, [3, 5]), RoundMetrics(1, 0.5, 1.7, 1000, [4, 7])]
        with ScratchDir("."):
            write_metrics_csv("metrics.csv", metrics)
            with open("metrics.csv") as f:
                self.assertEqual(f.readline().strip(), ",".join(METRICS_HEADER))
            rows = read_csv("metrics.csv")
            self.assertEqual(rows[1], dict(round="1", accuracy="0.5", loss="1.7", total_bits="1000",
                                           max_hop_nnz="7"))

            write_metrics_csv("empty.csv", [])
            self.assertEqual(read_csv("empty.csv"), [])

    def test_write_json(self):
        params = AlgorithmParams(Algorithm.CL_TC_SIA, q_g=4, q_l=2)
        with ScratchDir("."):
            write_json("params.json", params)
            with open("params.json") as f:
                self.assertEqual(json.load(f, cls=MontyDecoder), params)
