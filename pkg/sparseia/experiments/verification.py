# coding: utf-8
"""
Property suites checking the sparsification and aggregation algorithms and the cost bounds on randomized
and exhaustive instances. Each PropertyCheck produces a CheckNote, collected in a VerificationReport.
"""
import abc
import logging
import math

import numpy as np
import prettytable as pt

from six import add_metaclass
from monty.json import MSONable, MontyDecoder

from sparseia.core.sparse import (SparseVector, Mask, add, subtract, sq_norm, top_q, top_q_mask, support,
                                  mask_subtract)
from sparseia.aggregation.aggregates import Algorithm, AlgorithmParams, NodeState, PlainAggregate, MixedAggregate
from sparseia.aggregation.steps import (sia_step, re_sia_step, cl_sia_step, cl_tc_sia_step, compute_global_mask,
                                        error_feedback)
from sparseia.aggregation.chain import chain_aggregate
from sparseia.cost.model import lambda_nnz_upper_bound, mc_lambda_nnz_stats
from sparseia.fl.data import synthetic_split
from sparseia.fl.training import TrainConfig, FederatedTraining, dense_fedavg_trajectory
from sparseia.utils.enumeration import best_sparse_error, best_sparse_supports, exhaustive_expected_lambda_nnz


logger = logging.getLogger(__name__)

DEFAULT_LAMBDA_CASES = [(10, 0, 2, 3), (100, 10, 5, 8), (7850, 70, 8, 28)]
DEFAULT_EXHAUSTIVE_CASES = [(6, 0, 2, 2)]


class CheckNote(MSONable):
    """
    Outcome of a property check. margin is the smallest measured slack of the property over the tested
    instances, negative values meaning a violation.
    """

    PASSED = 'PASSED'
    FAILED = 'FAILED'

    STATES = [PASSED, FAILED]

    def __init__(self, name, state, instances=0, margin=None, problems=None, details=None):
        self.name = name
        self.state = state
        self.instances = instances
        self.margin = margin
        self.problems = problems if problems is not None else []
        self.details = details

    @property
    def state(self):
        return self._state

    @state.setter
    def state(self, state):
        if state not in self.STATES:
            raise ValueError('"state" in CheckNote should be one of the following : '
                             '{}'.format(', '.join(self.STATES)))
        self._state = state

    @property
    def passed(self):
        return self.state == self.PASSED

    def add_problem(self, problem):
        self.problems.append(problem)
        self.state = self.FAILED

    def as_dict(self):
        return {'@class': self.__class__.__name__,
                '@module': self.__class__.__module__,
                'name': self.name, 'state': self.state, 'instances': self.instances,
                'margin': self.margin, 'problems': self.problems, 'details': self.details}

    @classmethod
    def from_dict(cls, d):
        return cls(name=d['name'], state=d['state'], instances=d['instances'], margin=d['margin'],
                   problems=d['problems'], details=d['details'])


class VerificationReport(MSONable):

    PASSED = 'PASSED'
    FAILED = 'FAILED'
    NONE = 'NONE'

    def __init__(self, notes=None):
        self.notes = []
        if notes is not None:
            self.add_notes(notes)
        self.update_state()

    def add_notes(self, notes):
        self.notes.extend(notes)
        self.update_state()

    def add_note(self, note):
        self.notes.append(note)
        self.update_state()

    def update_state(self):
        if len(self.notes) == 0:
            self.state = self.NONE
        elif all(n.passed for n in self.notes):
            self.state = self.PASSED
        else:
            self.state = self.FAILED

    @property
    def passed(self):
        return self.state == self.PASSED

    @property
    def failed_notes(self):
        return [n for n in self.notes if not n.passed]

    def __str__(self):
        t = pt.PrettyTable(['property', 'result', 'instances', 'margin', 'details'])
        t.align['property'] = 'l'
        t.align['details'] = 'l'
        for n in self.notes:
            margin = '' if n.margin is None else '{:.6g}'.format(n.margin)
            t.add_row([n.name, n.state, n.instances, margin, n.details or ''])
        s = str(t)
        for n in self.failed_notes:
            for p in n.problems[:5]:
                s += '\n{}: {}'.format(n.name, p)
        s += '\nOverall: {}'.format(self.state)
        return s

    def as_dict(self):
        return {'@class': self.__class__.__name__,
                '@module': self.__class__.__module__,
                'notes': [n.as_dict() for n in self.notes]}

    @classmethod
    def from_dict(cls, d):
        dec = MontyDecoder()
        return cls(notes=[dec.process_decoded(n) for n in d['notes']])


@add_metaclass(abc.ABCMeta)
class PropertyCheck(object):
    """
    Abstract class for a randomized or exhaustive check of a property.
    """

    name = None

    def __init__(self, seed=0):
        self.seed = seed

    @abc.abstractmethod
    def check(self):
        """Runs the check and returns a CheckNote."""

    def new_note(self):
        return CheckNote(self.name, CheckNote.PASSED)

    def run(self):
        logger.info("Running property check {}".format(self.name))
        note = self.check()
        logger.info("{}: {} on {} instances".format(self.name, note.state, note.instances))
        return note


def _random_vector(rng, d, zero_fraction=0.3, integer=False):
    if integer:
        v = rng.integers(-3, 4, size=d).astype(float)
    else:
        v = rng.standard_normal(d)
    v[rng.random(d) < zero_fraction] = 0.0
    return v


def _rel_close(a, b, rtol=1e-9, atol=1e-12):
    return bool(np.allclose(a, b, rtol=rtol, atol=atol))


class TopQOptimalityCheck(PropertyCheck):
    """Top-Q reaches the minimal squared error over all the q-sparse approximations."""

    name = 'top-q optimality'

    def __init__(self, instances=300, max_dim=8, seed=0):
        super(TopQOptimalityCheck, self).__init__(seed)
        self.instances = instances
        self.max_dim = max_dim

    def check(self):
        note = self.new_note()
        rng = np.random.default_rng(self.seed)
        margin = math.inf
        for i in range(self.instances):
            d = int(rng.integers(1, self.max_dim + 1))
            q = int(rng.integers(0, d + 1))
            v = _random_vector(rng, d, integer=bool(i % 2))
            sv = SparseVector.from_dense(v)
            err = sq_norm(subtract(sv, top_q(sv, q)))
            best = best_sparse_error(v, q)
            margin = min(margin, best - err)
            if err > best + 1e-12 * max(1.0, best):
                note.add_problem("v={} q={}: top-q error {} > optimum {}".format(v.tolist(), q, err, best))
            if top_q(sv, q).nnz != min(q, sv.nnz):
                note.add_problem("v={} q={}: wrong number of nonzero entries".format(v.tolist(), q))
        note.instances = self.instances
        note.margin = margin
        return note


class ReducedErrorDominanceCheck(PropertyCheck):
    """
    The node error of RE-SIA is never larger than the one of SIA, and strictly smaller whenever an index of
    the incoming support outside the local Top-Q mask carries a nonzero entry.
    """

    name = 're-sia dominance'

    def __init__(self, instances=1000, d=32, q=4, seed=0):
        super(ReducedErrorDominanceCheck, self).__init__(seed)
        self.instances = instances
        self.d = d
        self.q = q

    def check(self):
        note = self.new_note()
        rng = np.random.default_rng(self.seed)
        margin = math.inf
        strict_cases = 0
        for _ in range(self.instances):
            g = SparseVector.from_dense(_random_vector(rng, self.d))
            n_in = int(rng.integers(0, self.d // 2 + 1))
            in_idx = np.sort(rng.choice(self.d, size=n_in, replace=False))
            gamma_in = PlainAggregate(SparseVector(self.d, in_idx, rng.standard_normal(n_in) + 10.0))

            sia_state = NodeState.initial(1, 1, self.d)
            re_state = NodeState.initial(1, 1, self.d)
            sia_step(sia_state, g, gamma_in, self.q)
            re_sia_step(re_state, g, gamma_in, self.q)
            e_sia = sq_norm(sia_state.error)
            e_re = sq_norm(re_state.error)
            margin = min(margin, e_sia - e_re)

            extra = mask_subtract(support(gamma_in.vector), top_q_mask(g, self.q))
            strict = any(i in support(g) for i in extra)
            if e_re > e_sia:
                note.add_problem("RE-SIA error {} > SIA error {}".format(e_re, e_sia))
            if strict:
                strict_cases += 1
                if not e_re < e_sia:
                    note.add_problem("RE-SIA error {} not strictly smaller than SIA error {}".format(e_re, e_sia))
        note.instances = self.instances
        note.margin = margin
        note.details = "{} strict cases".format(strict_cases)
        return note


class ConstantLengthOptimalityCheck(PropertyCheck):
    """The CL-SIA output minimizes ||gamma_tilde - c||^2 over all the q-sparse c and lies on an optimal support."""

    name = 'cl-sia optimality'

    def __init__(self, instances=300, max_dim=8, seed=0):
        super(ConstantLengthOptimalityCheck, self).__init__(seed)
        self.instances = instances
        self.max_dim = max_dim

    def check(self):
        note = self.new_note()
        rng = np.random.default_rng(self.seed)
        margin = math.inf
        for i in range(self.instances):
            d = int(rng.integers(1, self.max_dim + 1))
            q = int(rng.integers(0, d + 1))
            integer = bool(i % 2)
            g = SparseVector.from_dense(_random_vector(rng, d, integer=integer))
            gamma_in = PlainAggregate(top_q(SparseVector.from_dense(_random_vector(rng, d, integer=integer)), q))
            state = NodeState(1, int(rng.integers(1, 4)), SparseVector.from_dense(
                _random_vector(rng, d, zero_fraction=0.6, integer=integer)))
            gamma_tilde = add(error_feedback(state, g), gamma_in.vector)
            out = cl_sia_step(state, g, gamma_in, q)
            err = sq_norm(subtract(gamma_tilde, out.vector))
            best = best_sparse_error(gamma_tilde.to_dense(), q)
            margin = min(margin, best - err)
            if err > best + 1e-12 * max(1.0, best):
                note.add_problem("d={} q={}: CL-SIA error {} > optimum {}".format(d, q, err, best))
            if out.nnz > q:
                note.add_problem("d={} q={}: output with {} nonzero entries".format(d, q, out.nnz))
            chosen = set(support(out.vector).indices.tolist())
            if not any(chosen.issubset(supp) for supp in best_sparse_supports(gamma_tilde.to_dense(), q)):
                note.add_problem("d={} q={}: support {} is not an optimal support".format(d, q, sorted(chosen)))
        note.instances = self.instances
        note.margin = margin
        return note


class LambdaBoundCheck(PropertyCheck):
    """
    The Monte-Carlo mean of the local nonzero elements stays below the closed form bound, with a tolerance of
    three standard errors, and the exact expectation of tiny instances does not exceed it.
    """

    name = 'lambda nnz bound'

    def __init__(self, cases=None, exhaustive_cases=None, trials=100000, seed=0):
        super(LambdaBoundCheck, self).__init__(seed)
        self.cases = DEFAULT_LAMBDA_CASES if cases is None else cases
        self.exhaustive_cases = DEFAULT_EXHAUSTIVE_CASES if exhaustive_cases is None else exhaustive_cases
        self.trials = trials

    def check(self):
        note = self.new_note()
        margin = math.inf
        details = []
        for d, q_g, q_l, k in self.cases:
            bound = lambda_nnz_upper_bound(k, d, q_g, q_l)
            mean, stderr = mc_lambda_nnz_stats(k, d, q_g, q_l, self.trials, self.seed)
            # slack in units of standard errors
            slack = (bound - mean) / stderr if stderr > 0 else (math.inf if bound >= mean else -math.inf)
            margin = min(margin, slack)
            details.append("d={} q_g={} q_l={} k={}: mc {:.4f} +- {:.4f} bound {:.4f}".format(
                d, q_g, q_l, k, mean, stderr, bound))
            if bound - mean < -3 * stderr:
                note.add_problem("d={} q_g={} q_l={} k={}: mean {} above the bound {}".format(
                    d, q_g, q_l, k, mean, bound))
        for d, q_g, q_l, k in self.exhaustive_cases:
            bound = lambda_nnz_upper_bound(k, d, q_g, q_l, exact=True)
            exact = exhaustive_expected_lambda_nnz(k, d, q_g, q_l)
            details.append("d={} q_g={} q_l={} k={}: exact {} bound {}".format(d, q_g, q_l, k, exact, bound))
            if exact > bound:
                note.add_problem("d={} q_g={} q_l={} k={}: exact expectation {} above the bound {}".format(
                    d, q_g, q_l, k, exact, bound))
        for line in details:
            logger.info(line)
        note.instances = len(self.cases) + len(self.exhaustive_cases)
        note.margin = margin if self.cases else None
        note.details = "; ".join(details)
        return note


def _random_round(rng, k, d, density=0.5):
    return [SparseVector.from_dense(_random_vector(rng, d, zero_fraction=1 - density)) for _ in range(k)]


def _params_for(alg, d, q):
    if Algorithm.is_time_correlated(alg):
        q_g = min(q, d)
        return AlgorithmParams(alg, q_g=q_g, q_l=min(max(1, q // 2), d - q_g))
    return AlgorithmParams(alg, q=q)


class ConservationCheck(PropertyCheck):
    """
    With error feedback nothing is lost along the chain: gamma_1 + sum_k e_k^t = sum_k (D_k g_k + e_k^{t-1})
    at every round, for every algorithm.
    """

    name = 'mass conservation'

    def __init__(self, k=5, d=20, q=3, rounds=4, seed=0, inject_bug=False):
        super(ConservationCheck, self).__init__(seed)
        self.k = k
        self.d = d
        self.q = q
        self.rounds = rounds
        self.inject_bug = inject_bug

    def check(self):
        note = self.new_note()
        rng = np.random.default_rng(self.seed)
        worst = 0.0
        for alg in Algorithm.ALL:
            params = _params_for(alg, self.d, self.q)
            nodes = [NodeState.initial(i, int(rng.integers(1, 10)), self.d) for i in range(1, self.k + 1)]
            w_prev, w = np.zeros(self.d), np.zeros(self.d)
            for t in range(self.rounds):
                gradients = _random_round(rng, self.k, self.d)
                mask = compute_global_mask(w, w_prev, params.q_g) if params.is_time_correlated else None
                expected = np.zeros(self.d)
                for node, g in zip(nodes, gradients):
                    expected += error_feedback(node, g).to_dense()
                gamma_1, _ = chain_aggregate(nodes, gradients, params, global_mask=mask)
                actual = gamma_1.to_dense() + sum(n.error.to_dense() for n in nodes)
                if self.inject_bug:
                    actual[0] += 1.0
                worst = max(worst, float(np.max(np.abs(actual - expected), initial=0.0)))
                if not _rel_close(actual, expected):
                    note.add_problem("{} round {}: gamma_1 + errors differs from the sum of the inputs".format(
                        alg, t))
                w_prev, w = w, w + gamma_1.to_dense()
        note.instances = len(Algorithm.ALL) * self.rounds
        note.margin = -worst
        return note


class SandwichBoundCheck(PropertyCheck):
    """
    For SIA and RE-SIA the nnz of every hop transmission lies between max{min(q, nnz(g_tilde)), nnz_in}
    and min(q, nnz(g_tilde)) + nnz_in. CL-SIA never exceeds q entries, CL-TC-SIA never exceeds q_l local entries
    and always transmits q_g mask values.
    """

    name = 'sandwich bound'

    def __init__(self, k=8, d=40, q=4, rounds=5, seed=0):
        super(SandwichBoundCheck, self).__init__(seed)
        self.k = k
        self.d = d
        self.q = q
        self.rounds = rounds

    def check(self):
        note = self.new_note()
        rng = np.random.default_rng(self.seed)
        hops = 0
        margin = math.inf
        steps = {Algorithm.SIA: sia_step, Algorithm.RE_SIA: re_sia_step}
        for alg, step in steps.items():
            nodes = [NodeState.initial(i, 1, self.d) for i in range(1, self.k + 1)]
            for _ in range(self.rounds):
                gamma = PlainAggregate.zeros(self.d)
                for node, g in reversed(list(zip(nodes, _random_round(rng, self.k, self.d)))):
                    local = min(self.q, error_feedback(node, g).nnz)
                    nnz_in = gamma.nnz
                    gamma = step(node, g, gamma, self.q)
                    lower, upper = max(local, nnz_in), local + nnz_in
                    margin = min(margin, gamma.nnz - lower, upper - gamma.nnz)
                    hops += 1
                    if not lower <= gamma.nnz <= upper:
                        note.add_problem("{} node {}: nnz {} outside [{}, {}]".format(
                            alg, node.k, gamma.nnz, lower, upper))

        q_g, q_l = self.q, max(1, self.q // 2)
        for alg in Algorithm.CONSTANT_LENGTH:
            nodes = [NodeState.initial(i, 1, self.d) for i in range(1, self.k + 1)]
            for _ in range(self.rounds):
                mask = Mask.from_indices(self.d, rng.choice(self.d, size=q_g, replace=False))
                gamma = PlainAggregate.zeros(self.d) if alg == Algorithm.CL_SIA else MixedAggregate.zeros(mask)
                for node, g in reversed(list(zip(nodes, _random_round(rng, self.k, self.d)))):
                    hops += 1
                    if alg == Algorithm.CL_SIA:
                        gamma = cl_sia_step(node, g, gamma, self.q)
                        if gamma.nnz > self.q:
                            note.add_problem("CL-SIA node {}: {} nonzero entries".format(node.k, gamma.nnz))
                    else:
                        gamma = cl_tc_sia_step(node, g, gamma, mask, q_l)
                        if gamma.nnz_lambda > q_l or gamma.gamma_length != q_g:
                            note.add_problem("CL-TC-SIA node {}: |Gamma|={} nnz(Lambda)={}".format(
                                node.k, gamma.gamma_length, gamma.nnz_lambda))
                        if not support(node.error).isdisjoint(mask):
                            note.add_problem("CL-TC-SIA node {}: error on the global mask".format(node.k))

        note.instances = hops
        note.margin = margin
        return note


class FullBudgetEquivalenceCheck(PropertyCheck):
    """
    Without sparsification (q = d, or q_g + q_l = d) every algorithm returns sum_k D_k g_k and the federated
    training follows the dense federated averaging trajectory.
    """

    name = 'full budget equivalence'

    def __init__(self, k=4, features=6, classes=3, rounds=3, seed=0):
        super(FullBudgetEquivalenceCheck, self).__init__(seed)
        self.k = k
        self.features = features
        self.classes = classes
        self.rounds = rounds

    def check(self):
        note = self.new_note()
        rng = np.random.default_rng(self.seed)
        d = self.features * self.classes + self.classes
        full = {alg: AlgorithmParams(alg, q=d, q_g=d // 2, q_l=d - d // 2) for alg in Algorithm.ALL}

        nodes_d = [int(rng.integers(1, 10)) for _ in range(self.k)]
        gradients = _random_round(rng, self.k, d)
        expected = sum(n * g.to_dense() for n, g in zip(nodes_d, gradients))
        mask = compute_global_mask(np.zeros(d), np.zeros(d), d // 2)
        for alg, params in full.items():
            nodes = [NodeState.initial(i, n, d) for i, n in enumerate(nodes_d, start=1)]
            gamma_1, _ = chain_aggregate(nodes, gradients, params, global_mask=mask)
            if not _rel_close(gamma_1.to_dense(), expected):
                note.add_problem("{}: gamma_1 differs from sum_k D_k g_k".format(alg))

        train, _ = synthetic_split(40 * self.k, 10, features=self.features, classes=self.classes, seed=self.seed)
        test = train
        base_cfg = TrainConfig(k=self.k, params=full[Algorithm.SIA], batch_size=8, rounds=self.rounds,
                               seed=self.seed)
        reference = dense_fedavg_trajectory(base_cfg, train)
        for alg, params in full.items():
            cfg = TrainConfig(k=self.k, params=params, batch_size=8, rounds=self.rounds, seed=self.seed)
            fed = FederatedTraining(cfg, train, test)
            fed.run()
            for t, (w, w_ref) in enumerate(zip(fed.trajectory, reference)):
                if not _rel_close(w, w_ref):
                    note.add_problem("{}: trajectory differs from dense averaging at round {}".format(alg, t))
                    break
        note.instances = 2 * len(full)
        return note


def default_checks(trials=100000, seed=0, lambda_cases=None, inject_bug=False):
    """The property checks run by the verify command."""
    return [
        TopQOptimalityCheck(seed=seed),
        ReducedErrorDominanceCheck(seed=seed),
        ConstantLengthOptimalityCheck(seed=seed),
        LambdaBoundCheck(cases=lambda_cases, trials=trials, seed=seed),
        ConservationCheck(seed=seed, inject_bug=inject_bug),
        SandwichBoundCheck(seed=seed),
        FullBudgetEquivalenceCheck(seed=seed),
    ]


def run_checks(checks):
    report = VerificationReport()
    for check in checks:
        report.add_note(check.run())
    return report
