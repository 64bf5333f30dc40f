# coding: utf-8
"""
Command line interface of the sparse incremental aggregation simulator.
"""
from __future__ import print_function, division, unicode_literals

import argparse
import logging
import sys

from sparseia.core.release import __version__
from sparseia.core.errors import SparseIAError, ExitCode
from sparseia.aggregation.aggregates import Algorithm
from sparseia.experiments.spec import ExperimentSpec
from sparseia.experiments.commands import cmd_train, cmd_cost_sweep, cmd_verify, cmd_calibrate, cmd_compare


logger = logging.getLogger(__name__)

# command line destination -> configuration key
FLAG_KEYS = dict(alg='alg', k='k', q='q', qg='q_g', ql='q_l', rounds='rounds', batch='batch', lr='lr',
                 local_steps='local_steps', seed='seed', omega='omega', mnist_dir='mnist_dir', synthetic='synthetic',
                 out='out', trials='trials', d='d', k_list='k_list', q_list='q_list', analytical='analytical',
                 workers='workers', iid='iid', threshold='threshold', local_fraction='local_fraction',
                 target_bits='target_bits')


def str_examples():
    examples = """\
Usage example:\n

    sparseiarun.py train --alg cl-sia --k 28 --q 78 --rounds 200 --seed 1 --mnist-dir ~/mnist
                                        => Train with CL-SIA, write metrics_cl_sia.csv in ./results
    sparseiarun.py train --alg tc-sia --qg 42 --ql 4 --synthetic
                                        => Train TC-SIA on synthetic data
    sparseiarun.py compare --q 6 --qg 96 --ql 10 --synthetic
                                        => All the algorithms and the dense baseline, summary.csv
    sparseiarun.py cost-sweep --analytical => Expected cost per iteration as a function of K
    sparseiarun.py cost-sweep --workers 4  => Measured cost per iteration, sweep points in 4 processes
    sparseiarun.py calibrate --k 28 --q 78 => Budgets with the same expected cost as CL-SIA
    sparseiarun.py verify --trials 100000 --d 10 --ql 2 --k 3
                                        => Property suites, exit code 3 on failure
"""
    return examples


def build_parser():
    # Parent parse for common options.
    copts_parser = argparse.ArgumentParser(add_help=False)

    copts_parser.add_argument('-v', '--verbose', default=0, action='count',  # -vv --> verbose=2
                              help='verbose, can be supplied multiple times to increase verbosity')
    copts_parser.add_argument('--loglevel', default="ERROR", type=str,
                              help="set the loglevel. Possible values: CRITICAL, ERROR (default), WARNING, INFO, "
                                   "DEBUG")

    # Parent parser for the experiment options. Defaults are None so that the configuration file applies.
    exp_parser = argparse.ArgumentParser(add_help=False)
    exp_parser.add_argument('--config', default=None, help="Configuration file with key = value lines.")
    exp_parser.add_argument('--alg', default=None, choices=Algorithm.ALL, help="Aggregation algorithm.")
    exp_parser.add_argument('--k', type=int, default=None, help="Number of clients in the chain.")
    exp_parser.add_argument('--q', type=int, default=None, help="Budget of SIA, RE-SIA and CL-SIA.")
    exp_parser.add_argument('--qg', type=int, default=None, help="Global mask budget of the time-correlated "
                                                                 "algorithms.")
    exp_parser.add_argument('--ql', type=int, default=None, help="Local budget of the time-correlated algorithms.")
    exp_parser.add_argument('--rounds', type=int, default=None, help="Number of global rounds.")
    exp_parser.add_argument('--batch', type=int, default=None, help="Mini-batch size.")
    exp_parser.add_argument('--lr', type=float, default=None, help="Learning rate.")
    exp_parser.add_argument('--local-steps', type=int, default=None, help="Local SGD steps per round.")
    exp_parser.add_argument('--seed', type=int, default=None, help="Random seed.")
    exp_parser.add_argument('--omega', type=int, default=None, help="Bits per transmitted value.")
    exp_parser.add_argument('--mnist-dir', default=None, help="Directory with the MNIST IDX files.")
    exp_parser.add_argument('--synthetic', default=None, action='store_const', const=True,
                            help="Use synthetic data instead of MNIST.")
    exp_parser.add_argument('--non-iid', dest='iid', default=None, action='store_const', const=False,
                            help="Split the data among the clients after sorting by label.")
    exp_parser.add_argument('--out', default=None, help="Output directory.")
    exp_parser.add_argument('--trials', type=int, default=None, help="Monte-Carlo trials.")
    exp_parser.add_argument('--d', type=int, default=None, help="Dimension of an additional bound check in verify.")
    exp_parser.add_argument('--k-list', default=None, help="Comma separated numbers of clients of the cost sweep.")
    exp_parser.add_argument('--q-list', default=None, help="Comma separated budgets of the cost sweep.")
    exp_parser.add_argument('--analytical', default=None, action='store_const', const=True,
                            help="Use the expected costs instead of training runs in the cost sweep.")
    exp_parser.add_argument('--workers', type=int, default=None, help="Worker processes of the cost sweep.")
    exp_parser.add_argument('--threshold', type=float, default=None,
                            help="Accuracy threshold of the dense baseline in compare.")
    exp_parser.add_argument('--local-fraction', type=float, default=None,
                            help="Fraction of the budget given to the local mask of the time-correlated algorithms.")
    exp_parser.add_argument('--target-bits', type=float, default=None, help="Target cost of calibrate.")
    exp_parser.add_argument('--inject-bug', default=False, action='store_true', help=argparse.SUPPRESS)

    # Build the main parser.
    parser = argparse.ArgumentParser(epilog=str_examples(), formatter_class=argparse.RawDescriptionHelpFormatter)

    # Create the parsers for the sub-commands
    subparsers = parser.add_subparsers(dest='command', help='sub-command help', description="Valid subcommands")

    subparsers.add_parser('version', parents=[copts_parser], help='Show version number and exit')
    subparsers.add_parser('train', parents=[copts_parser, exp_parser], help="Federated training with one algorithm.")
    subparsers.add_parser('compare', parents=[copts_parser, exp_parser],
                          help="Federated training with all the algorithms and the dense baseline.")
    subparsers.add_parser('cost-sweep', parents=[copts_parser, exp_parser],
                          help="Cost per iteration as a function of the number of clients.")
    subparsers.add_parser('calibrate', parents=[copts_parser, exp_parser],
                          help="Budgets with approximately equal expected cost.")
    subparsers.add_parser('verify', parents=[copts_parser, exp_parser], help="Run the property suites.")

    return parser


def _set_logging(options):
    # Convert to upper case to allow the user to specify --loglevel=DEBUG or --loglevel=debug
    numeric_level = getattr(logging, options.loglevel.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError('Invalid log level: %s' % options.loglevel)
    if options.verbose:
        numeric_level = min(numeric_level, logging.INFO if options.verbose == 1 else logging.DEBUG)
    logging.basicConfig(level=numeric_level)


def spec_from_options(options):
    overrides = {key: getattr(options, dest) for dest, key in FLAG_KEYS.items()}
    return ExperimentSpec.from_user_config(config_path=options.config, **overrides)


def main(argv=None):
    """
    Runs the command line interface and returns the exit code:
    0 success, 1 configuration error, 2 I/O error, 3 failed verification.
    """
    parser = build_parser()

    # Parse command line.
    try:
        options = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which are configuration errors here
        return ExitCode.SUCCESS if exc.code in (0, None) else ExitCode.CONFIG

    if not options.command:
        sys.stderr.write(str_examples())
        return ExitCode.CONFIG

    try:
        _set_logging(options)
    except ValueError as exc:
        sys.stderr.write("Fatal Error\n{}\n".format(exc))
        return ExitCode.CONFIG

    if options.command == "version":
        print(__version__)
        return ExitCode.SUCCESS

    try:
        spec = spec_from_options(options)
        if options.command == "train":
            cmd_train(spec)
        elif options.command == "compare":
            cmd_compare(spec)
        elif options.command == "cost-sweep":
            cmd_cost_sweep(spec)
        elif options.command == "calibrate":
            cmd_calibrate(spec)
        elif options.command == "verify":
            report = cmd_verify(spec, inject_bug=options.inject_bug)
            if not report.passed:
                return ExitCode.VERIFICATION
    except SparseIAError as exc:
        logger.debug("Command {} failed".format(options.command), exc_info=True)
        sys.stderr.write("Fatal Error\n{}\n".format(exc.msg))
        return exc.EXIT_CODE

    return ExitCode.SUCCESS


if __name__ == "__main__":
    sys.exit(main())
