# coding: utf-8
from __future__ import print_function, division, unicode_literals, absolute_import

import os
import pickle

from monty.tempfile import ScratchDir

from sparseia.core.testing import SparseiaTest
from sparseia.core.errors import ExitCode
from sparseia.experiments.cli import main
from sparseia.aggregation.aggregates import Algorithm
from sparseia.cost.model import split_budget
from sparseia.fl.data import synthetic_split
from sparseia.fl.training import TrainConfig
from sparseia.experiments import commands
from sparseia.experiments.commands import run_sweep_points
from sparseia.experiments.outputs import METRICS_HEADER, read_csv


SMALL_CONFIG = """\
# tiny synthetic runs
synthetic = true
synthetic_train = 60
synthetic_test = 30
k = 3
rounds = 2
batch = 10
"""


def write_small_config(path="small.cfg"):
    with open(path, "w") as f:
        f.write(SMALL_CONFIG)
    return path


class TestCli(SparseiaTest):

    def test_usage_errors(self):
        with ScratchDir("."):
            write_small_config()
            self.assertEqual(main([]), ExitCode.CONFIG)
            self.assertEqual(main(["train", "--not-a-flag"]), ExitCode.CONFIG)
            self.assertEqual(main(["train", "--alg", "fedavg"]), ExitCode.CONFIG)
            self.assertEqual(main(["train", "--config", "small.cfg", "--loglevel", "chatty"]), ExitCode.CONFIG)
            self.assertEqual(main(["train", "--config", "missing.cfg"]), ExitCode.CONFIG)
            self.assertEqual(main(["train", "--config", "small.cfg", "--k", "0"]), ExitCode.CONFIG)
            self.assertEqual(main(["version"]), ExitCode.SUCCESS)

    def test_missing_mnist(self):
        with ScratchDir("."):
            with open("mnist.cfg", "w") as f:
                f.write("rounds = 1\n")
            self.assertEqual(main(["train", "--config", "mnist.cfg", "--mnist-dir", "missing_dir"]), ExitCode.IO)

    def test_train(self):
        with ScratchDir("."):
            write_small_config()
            args = ["train", "--config", "small.cfg", "--alg", "cl-sia", "--q", "50"]
            self.assertEqual(main(args + ["--out", "results"]), ExitCode.SUCCESS)
            for name in ("metrics_cl_sia.csv", "hops_cl_sia.csv", "config.resolved", "report.json"):
                self.assertTrue(os.path.isfile(os.path.join("results", name)), msg=name)

            rows = read_csv(os.path.join("results", "metrics_cl_sia.csv"))
            self.assertEqual(len(rows), 2)
            self.assertEqual(list(rows[0].keys()), METRICS_HEADER)
            for row in rows:
                self.assertTrue(0 <= float(row["accuracy"]) <= 1)
                self.assertLessEqual(int(row["max_hop_nnz"]), 50)
                # 3 hops with at most 50 pairs of 45 bits
                self.assertLessEqual(int(row["total_bits"]), 3 * 50 * 45)

            hops = read_csv(os.path.join("results", "hops_cl_sia.csv"))
            self.assertEqual(len(hops), 6)
            self.assertEqual(sum(int(h["bits"]) for h in hops),
                             sum(int(r["total_bits"]) for r in rows))

            # same configuration, same files
            self.assertEqual(main(args + ["--out", "results2"]), ExitCode.SUCCESS)
            for name in ("metrics_cl_sia.csv", "hops_cl_sia.csv", "config.resolved"):
                with open(os.path.join("results", name)) as f1, open(os.path.join("results2", name)) as f2:
                    if name == "config.resolved":
                        self.assertEqual(f1.read().replace("results", "results2"), f2.read())
                    else:
                        self.assertEqual(f1.read(), f2.read())

    def test_compare(self):
        with ScratchDir("."):
            write_small_config()
            args = ["compare", "--config", "small.cfg", "--q", "20", "--qg", "16", "--ql", "4", "--out", "cmp"]
            self.assertEqual(main(args), ExitCode.SUCCESS)
            summary = read_csv(os.path.join("cmp", "summary.csv"))
            self.assertEqual(sorted(r["algorithm"] for r in summary),
                             sorted(["ia", "sia", "re-sia", "cl-sia", "tc-sia", "cl-tc-sia"]))
            for name in ("ia", "sia", "re_sia", "cl_sia", "tc_sia", "cl_tc_sia"):
                self.assertTrue(os.path.isfile(os.path.join("cmp", "metrics_{}.csv".format(name))))

    def test_cost_sweep_analytical(self):
        with ScratchDir("."):
            write_small_config()
            self.assertEqual(main(["cost-sweep", "--config", "small.cfg", "--analytical", "--out", "sweep"]),
                             ExitCode.SUCCESS)
            rows = read_csv(os.path.join("sweep", "cost_sweep.csv"))
            self.assertEqual([int(r["k"]) for r in rows], [4, 8, 12, 16, 20, 24, 28])
            last = rows[-1]
            self.assertEqual(int(last["q"]), 78)
            self.assertEqual(float(last["cl_sia_bits"]), 98280.0)
            self.assertEqual(float(last["cl_sia_normalized"]), 28.0)
            self.assertEqual(float(last["unicast_bits"]), 1425060.0)
            self.assertEqual(float(last["unicast_normalized"]), 406.0)
            self.assertEqual(float(last["ia_bits"]), 7033600.0)
            self.assertEqual(float(last["ia_normalized"]), 28.0)
            self.assertEqual(float(last["sia_bits"]), float(last["sia_bound_bits"]))

    def test_cost_sweep_measured(self):
        with ScratchDir("."):
            write_small_config()
            args = ["cost-sweep", "--config", "small.cfg", "--k-list", "2,3", "--q-list", "10", "--out", "sweep"]
            self.assertEqual(main(args), ExitCode.SUCCESS)
            rows = read_csv(os.path.join("sweep", "cost_sweep.csv"))
            self.assertEqual(len(rows), 2)
            for row in rows:
                k = int(row["k"])
                # at most 10 pairs of 45 bits per hop
                self.assertLessEqual(float(row["cl_sia_bits"]), k * 10 * 45)
                self.assertLessEqual(float(row["sia_bits"]), k * (k + 1) / 2 * 10 * 45)

    def test_calibrate(self):
        with ScratchDir("."):
            write_small_config()
            args = ["calibrate", "--config", "small.cfg", "--k", "28", "--q", "78", "--out", "calib"]
            self.assertEqual(main(args), ExitCode.SUCCESS)
            rows = {r["algorithm"]: r for r in read_csv(os.path.join("calib", "calibration.csv"))}
            self.assertEqual(len(rows), 5)
            self.assertEqual(int(rows["cl-sia"]["q"]), 78)
            self.assertEqual(float(rows["cl-sia"]["expected_bits"]), 98280.0)
            for row in rows.values():
                self.assertEqual(float(row["target_bits"]), 98280.0)

    def test_verify(self):
        with ScratchDir("."):
            write_small_config()
            args = ["verify", "--config", "small.cfg", "--trials", "2000", "--d", "12", "--ql", "2"]
            self.assertEqual(main(args + ["--out", "ok"]), ExitCode.SUCCESS)
            self.assertTrue(os.path.isfile(os.path.join("ok", "verification.json")))
            self.assertEqual(main(args + ["--out", "bug", "--inject-bug"]), ExitCode.VERIFICATION)


class TestSweepPoints(SparseiaTest):

    def setUp(self):
        self.train, self.test = synthetic_split(60, 20, features=6, classes=3, seed=2)
        self.configs = [TrainConfig(k=k, params=split_budget(alg, 6), rounds=2, batch_size=10)
                        for k in (2, 3) for alg in (Algorithm.SIA, Algorithm.CL_TC_SIA)]

    def test_pool_matches_sequential(self):
        sequential = run_sweep_points(self.configs, self.train, self.test)
        self.assertEqual(len(sequential), 4)
        self.assertEqual(commands._SWEEP_DATA, {})
        self.assertEqual(run_sweep_points(self.configs, self.train, self.test, workers=2), sequential)

    def test_jobs_do_not_carry_data(self):
        big_train, _ = synthetic_split(2000, 10, features=784, classes=10)
        data_size = len(pickle.dumps(big_train))
        for cfg in self.configs:
            self.assertLess(len(pickle.dumps(cfg)), data_size / 1000)

    def test_cost_sweep_workers(self):
        with ScratchDir("."):
            write_small_config()
            args = ["cost-sweep", "--config", "small.cfg", "--k-list", "2,3", "--q-list", "10"]
            self.assertEqual(main(args + ["--out", "seq"]), ExitCode.SUCCESS)
            self.assertEqual(main(args + ["--out", "pool", "--workers", "2"]), ExitCode.SUCCESS)
            with open(os.path.join("seq", "cost_sweep.csv")) as f1, open(os.path.join("pool", "cost_sweep.csv")) as f2:
                self.assertEqual(f1.read(), f2.read())
