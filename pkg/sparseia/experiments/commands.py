# coding: utf-8
"""
Operations behind the command line subcommands. Each cmd_* function receives an ExperimentSpec, writes its
output files in the configured output directory and returns the computed results.
"""
import logging
import multiprocessing
import os
import time

import prettytable as pt

from sparseia.core.errors import DataFileError
from sparseia.aggregation.aggregates import Algorithm, AlgorithmParams
from sparseia.cost.model import (WireParams, cl_sia_cost, unicast_routing_cost, dense_ia_cost, expected_round_cost,
                                 single_transmission_bits, normalized_cost, split_budget, calibrate_budget)
from sparseia.fl.data import load_mnist_dir, synthetic_split
from sparseia.fl.model import LogisticRegression
from sparseia.fl.training import FederatedTraining
from sparseia.experiments.outputs import prepare_output_dir, atomic_write, write_csv, write_metrics_csv, write_json
from sparseia.experiments.report import RunReport
from sparseia.experiments.verification import default_checks, run_checks, DEFAULT_LAMBDA_CASES


logger = logging.getLogger(__name__)

N_FEATURES = 784
N_CLASSES = 10


def load_datasets(spec):
    """Train and test sets: MNIST from the configured directory or the synthetic replacement."""
    o = spec.options
    if o.synthetic:
        logger.info("Using synthetic data: {} train and {} test samples".format(o.synthetic_train, o.synthetic_test))
        return synthetic_split(o.synthetic_train, o.synthetic_test, features=N_FEATURES, classes=N_CLASSES,
                               seed=o.seed)
    if not o.mnist_dir:
        raise DataFileError("No MNIST directory given. Use --mnist-dir, set {} or use --synthetic".format(
            spec.MNIST_ENV))
    return load_mnist_dir(o.mnist_dir)


def write_resolved_config(spec):
    out = prepare_output_dir(spec.options.out)
    return atomic_write(os.path.join(out, spec.RESOLVED_FILE), spec.to_config_string())


def _file_alg(alg):
    return alg.replace('-', '_')


def _write_ledger_csv(path, ledger):
    rows = [[r.round_index, r.k, r.nnz, r.gamma_length, r.nnz_lambda, r.bits] for r in ledger]
    return write_csv(path, ["round", "k", "nnz", "gamma_length", "nnz_lambda", "bits"], rows)


def _train_and_save(spec, params, train, test, out, report):
    cfg = spec.train_config(params=params)
    start = time.time()
    fed = FederatedTraining(cfg, train, test)
    metrics = fed.run()
    run_time = time.time() - start
    name = _file_alg(params.algorithm)
    write_metrics_csv(os.path.join(out, "metrics_{}.csv".format(name)), metrics)
    _write_ledger_csv(os.path.join(out, "hops_{}.csv".format(name)), fed.ledger)
    report.add_run(params, metrics, run_time=run_time)
    return metrics


def cmd_train(spec):
    """
    Trains with the configured algorithm and writes the per round metrics.

    Returns:
        list of RoundMetrics
    """
    o = spec.options
    out = prepare_output_dir(o.out)
    write_resolved_config(spec)
    train, test = load_datasets(spec)
    report = RunReport(title="Training with {} clients".format(o.k))
    metrics = _train_and_save(spec, spec.algorithm_params(), train, test, out, report)

    total_bits = sum(m.total_bits for m in metrics)
    if metrics:
        print("Final accuracy: {:.4f}".format(metrics[-1].accuracy))
    print("Total transmitted bits: {}".format(total_bits))
    print(report)
    write_json(os.path.join(out, "report.json"), report)
    return metrics


def cmd_compare(spec):
    """
    Trains every sparse algorithm and the dense baseline with the same configuration.
    summary.csv reports, for each algorithm, the accuracy at the first round where the dense baseline
    exceeds the accuracy threshold.

    Returns:
        dict mapping each algorithm to its list of RoundMetrics
    """
    o = spec.options
    out = prepare_output_dir(o.out)
    write_resolved_config(spec)
    train, test = load_datasets(spec)
    report = RunReport(title="Comparison with {} clients".format(o.k))

    results = {}
    params = {}
    for alg in [Algorithm.DENSE] + Algorithm.SPARSE:
        params[alg] = spec.algorithm_params(alg)
        results[alg] = _train_and_save(spec, params[alg], train, test, out, report)

    threshold_round = next((m.round_index for m in results[Algorithm.DENSE] if m.accuracy > o.threshold), None)
    if threshold_round is None:
        logger.warning("The dense baseline never exceeds the accuracy {}".format(o.threshold))

    rows = []
    for alg, metrics in results.items():
        p = params[alg]
        total_bits = sum(m.total_bits for m in metrics)
        acc_at = metrics[threshold_round].accuracy if threshold_round is not None else ''
        rows.append([alg, p.q, p.q_g, p.q_l, metrics[-1].accuracy if metrics else '',
                     total_bits / len(metrics) if metrics else 0.0,
                     '' if threshold_round is None else threshold_round, acc_at])
    write_csv(os.path.join(out, "summary.csv"),
              ["algorithm", "q", "q_g", "q_l", "final_accuracy", "mean_bits_per_round", "threshold_round",
               "accuracy_at_threshold_round"], rows)
    print(report)
    write_json(os.path.join(out, "report.json"), report)
    return results


# datasets of the sweep, set once per worker process by _init_sweep_worker
_SWEEP_DATA = {}


def _init_sweep_worker(train, test):
    _SWEEP_DATA['train'] = train
    _SWEEP_DATA['test'] = test


def _sweep_point(cfg):
    """Mean bits per round of a training run on the datasets set by _init_sweep_worker."""
    fed = FederatedTraining(cfg, _SWEEP_DATA['train'], _SWEEP_DATA['test'])
    fed.run()
    return fed.ledger.mean_bits_per_round()


def run_sweep_points(configs, train, test, workers=1):
    """
    Mean bits per round of the training runs of configs. With workers > 1 the runs are distributed over a
    process pool: the datasets are sent once to each worker, the jobs only carry their TrainConfig.
    """
    if workers > 1:
        logger.info("Running {} sweep points on {} workers".format(len(configs), workers))
        with multiprocessing.Pool(processes=workers, initializer=_init_sweep_worker,
                                  initargs=(train, test)) as pool:
            return pool.map(_sweep_point, configs)
    _init_sweep_worker(train, test)
    try:
        return [_sweep_point(cfg) for cfg in configs]
    finally:
        _SWEEP_DATA.clear()


def sweep_params(alg, q, local_fraction):
    """Budgets used in the cost sweep for a total budget q."""
    return split_budget(alg, q, local_fraction)


def cmd_cost_sweep(spec):
    """
    Per iteration cost of every algorithm as a function of the number of clients, absolute and normalized by
    the size of a single transmission of the algorithm. The sparse algorithms are measured on training runs,
    or computed from their expected costs with the analytical option. The time-correlated algorithms split the
    budget q as q_l = floor(local_fraction * q), q_g = q - q_l.

    Returns:
        list of rows written to cost_sweep.csv
    """
    o = spec.options
    out = prepare_output_dir(o.out)
    write_resolved_config(spec)
    wire = WireParams(LogisticRegression(N_FEATURES, N_CLASSES).dim, omega=o.omega)

    points = [(q, k, alg) for q in o.q_list for k in o.k_list for alg in Algorithm.SPARSE]
    if o.analytical:
        costs = [expected_round_cost(sweep_params(alg, q, o.local_fraction), k, wire) for q, k, alg in points]
    else:
        train, test = load_datasets(spec)
        configs = [spec.train_config(params=sweep_params(alg, q, o.local_fraction), k=k) for q, k, alg in points]
        costs = run_sweep_points(configs, train, test, workers=o.workers)
    measured = dict(zip(points, costs))

    header = ["q", "k"]
    for alg in Algorithm.SPARSE:
        header += ["{}_bits".format(_file_alg(alg)), "{}_normalized".format(_file_alg(alg))]
    header += ["sia_bound_bits", "tc_sia_bound_bits", "unicast_bits", "unicast_normalized", "ia_bits",
               "ia_normalized"]

    rows = []
    for q in o.q_list:
        plain_unit = single_transmission_bits(AlgorithmParams(Algorithm.SIA, q=q), wire)
        for k in o.k_list:
            row = [q, k]
            for alg in Algorithm.SPARSE:
                bits = float(measured[(q, k, alg)])
                unit = single_transmission_bits(sweep_params(alg, q, o.local_fraction), wire)
                row += [bits, normalized_cost(bits, unit) if unit else 0.0]
            row.append(float(expected_round_cost(sweep_params(Algorithm.SIA, q, o.local_fraction), k, wire)))
            row.append(float(expected_round_cost(sweep_params(Algorithm.TC_SIA, q, o.local_fraction), k, wire)))
            unicast = unicast_routing_cost(k, plain_unit)
            dense = dense_ia_cost(k, wire)
            row += [unicast, normalized_cost(unicast, plain_unit) if plain_unit else 0.0,
                    dense, normalized_cost(dense, wire.d * wire.omega)]
            rows.append(row)

    write_csv(os.path.join(out, "cost_sweep.csv"), header, rows)
    t = pt.PrettyTable(["q", "k"] + Algorithm.SPARSE + ["unicast", "ia"])
    for row in rows:
        t.add_row(row[:2] + ["{:.0f}".format(v) for v in row[2:12:2]] + [row[14], row[16]])
    print(t)
    return rows


def cmd_calibrate(spec):
    """
    Budgets of each sparse algorithm whose expected per iteration cost is the closest to the target, by default
    the cost of CL-SIA with the configured q.

    Returns:
        dict mapping each algorithm to (AlgorithmParams, expected cost)
    """
    o = spec.options
    out = prepare_output_dir(o.out)
    write_resolved_config(spec)
    wire = WireParams(LogisticRegression(N_FEATURES, N_CLASSES).dim, omega=o.omega)
    target = o.target_bits if o.target_bits is not None else cl_sia_cost(o.k, o.q, wire)

    results = {}
    rows = []
    t = pt.PrettyTable(["algorithm", "q", "q_g", "q_l", "expected bits", "target bits"])
    for alg in Algorithm.SPARSE:
        params, cost = calibrate_budget(alg, o.k, wire, target, local_fraction=o.local_fraction)
        results[alg] = (params, cost)
        rows.append([alg, params.q, params.q_g, params.q_l, float(cost), float(target)])
        t.add_row([alg, params.q, params.q_g, params.q_l, "{:.1f}".format(cost), "{:.1f}".format(target)])
    write_csv(os.path.join(out, "calibration.csv"),
              ["algorithm", "q", "q_g", "q_l", "expected_bits", "target_bits"], rows)
    print(t)
    return results


def cmd_verify(spec, inject_bug=False):
    """
    Runs the property suites and prints a pass/fail line for each property.
    If d is configured, the bound on the local nonzero elements is also checked for (d, q_g, q_l, k),
    with q_g = 0 unless set explicitly.

    Returns:
        VerificationReport
    """
    o = spec.options
    out = prepare_output_dir(o.out)
    write_resolved_config(spec)
    lambda_cases = list(DEFAULT_LAMBDA_CASES)
    if o.d is not None:
        q_g = o.q_g if 'q_g' in spec.explicit_keys else 0
        case = (o.d, q_g, o.q_l, o.k)
        if case not in lambda_cases:
            lambda_cases.append(case)

    report = run_checks(default_checks(trials=o.trials, seed=o.seed, lambda_cases=lambda_cases,
                                       inject_bug=inject_bug))
    print(report)
    write_json(os.path.join(out, "verification.json"), report)
    return report
