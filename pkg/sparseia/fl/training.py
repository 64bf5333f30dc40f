# coding: utf-8
"""
Federated training loop over a chain of clients.

At each round t the parameter server distributes w^t, every client k computes its effective gradient
g_k = w_k - w^t with a few local SGD steps, the gradients are aggregated along the chain with the selected
algorithm and the server applies w^{t+1} = w^t + gamma_1 / D.
"""
import logging

import numpy as np

from monty.json import MSONable, MontyDecoder

from sparseia.core.errors import ContractViolationError
from sparseia.aggregation.aggregates import AlgorithmParams, NodeState
from sparseia.aggregation.steps import compute_global_mask
from sparseia.aggregation.chain import chain_aggregate
from sparseia.cost.model import WireParams, DEFAULT_OMEGA
from sparseia.cost.ledger import CommLedger
from sparseia.fl.data import partition
from sparseia.fl.model import LogisticRegression


logger = logging.getLogger(__name__)


class TrainConfig(MSONable):
    """
    Configuration of a federated training run.

    Args:
        k: number of clients in the chain.
        params: AlgorithmParams of the aggregation algorithm.
        batch_size: size of the local mini-batches.
        learning_rate: learning rate of the local SGD.
        local_steps: number of local SGD steps per round.
        rounds: number of global rounds T.
        seed: seed of the partitioning and of the mini-batch sampling.
        omega: bits per transmitted value.
        iid: if False the training set is split among the clients after sorting by label.
    """

    def __init__(self, k=28, params=None, batch_size=20, learning_rate=0.1, local_steps=1, rounds=200, seed=1,
                 omega=DEFAULT_OMEGA, iid=True):
        self.k = int(k)
        self.params = params if params is not None else AlgorithmParams('cl-sia', q=78)
        self.batch_size = int(batch_size)
        self.learning_rate = float(learning_rate)
        self.local_steps = int(local_steps)
        self.rounds = int(rounds)
        self.seed = int(seed)
        self.omega = int(omega)
        self.iid = bool(iid)
        self.validate()

    def validate(self):
        problems = []
        if self.k < 1:
            problems.append("k should be >= 1")
        if self.batch_size < 1:
            problems.append("batch_size should be >= 1")
        if self.learning_rate < 0 or not np.isfinite(self.learning_rate):
            problems.append("learning_rate should be a finite non negative number")
        if self.local_steps < 1:
            problems.append("local_steps should be >= 1")
        if self.rounds < 0:
            problems.append("rounds should be >= 0")
        if self.seed < 0:
            problems.append("seed should be >= 0")
        if self.omega <= 0:
            problems.append("omega should be > 0")
        if problems:
            raise ContractViolationError("Invalid training configuration: {}".format("; ".join(problems)))

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'k': self.k, 'params': self.params.as_dict(), 'batch_size': self.batch_size,
                'learning_rate': self.learning_rate, 'local_steps': self.local_steps, 'rounds': self.rounds,
                'seed': self.seed, 'omega': self.omega, 'iid': self.iid}

    @classmethod
    def from_dict(cls, d):
        d = d.copy()
        d.pop("@module", None)
        d.pop("@class", None)
        d.pop("@version", None)
        d['params'] = MontyDecoder().process_decoded(d['params'])
        return cls(**d)


class RoundMetrics(MSONable):
    """
    Results of a single round: test accuracy and loss of w^{t+1}, mean loss of the local mini-batches,
    bits transmitted along the chain and nnz of each hop transmission (node K first).
    """

    def __init__(self, round_index, accuracy, loss, total_bits, hop_nnz, train_loss=None):
        self.round_index = round_index
        self.accuracy = accuracy
        self.loss = loss
        self.total_bits = total_bits
        self.hop_nnz = list(hop_nnz)
        self.train_loss = train_loss

    @property
    def max_hop_nnz(self):
        return max(self.hop_nnz) if self.hop_nnz else 0

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'round_index': self.round_index, 'accuracy': self.accuracy, 'loss': self.loss,
                'total_bits': self.total_bits, 'hop_nnz': self.hop_nnz, 'train_loss': self.train_loss}

    @classmethod
    def from_dict(cls, d):
        d = d.copy()
        d.pop("@module", None)
        d.pop("@class", None)
        d.pop("@version", None)
        return cls(**d)


def _local_sgd(w_t, part, cfg, model, k, t):
    if len(part) == 0:
        raise ContractViolationError("Client {} has an empty partition".format(k))
    rng = np.random.default_rng([cfg.seed, k, t])
    n = len(part)
    w_t = np.asarray(w_t, dtype=float)
    w = w_t.copy()
    order = rng.permutation(n)
    pos = 0
    losses = []
    for _ in range(cfg.local_steps):
        if pos >= n:
            order = rng.permutation(n)
            pos = 0
        batch = order[pos:pos + cfg.batch_size]
        pos += cfg.batch_size
        loss, grad = model.loss_and_grad(w, part.x[batch], part.y[batch])
        w -= cfg.learning_rate * grad
        losses.append(loss)
    return w - w_t, float(np.mean(losses))


def local_update(w_t, part, cfg, model=None, k=1, t=0):
    """
    Effective gradient g_k = w_k - w^t of client k at round t, after cfg.local_steps mini-batch SGD steps
    started from w^t. The mini-batches are taken from a shuffle seeded by (cfg.seed, k, t), w_t is not modified.
    """
    model = model or LogisticRegression(n_features=part.n_features, n_classes=part.n_classes)
    return _local_sgd(w_t, part, cfg, model, k, t)[0]


def ps_update(w_t, gamma_1, d_total):
    """Model update of the parameter server, w^{t+1} = w^t + gamma_1 / D."""
    if d_total <= 0:
        raise ContractViolationError("The total number of samples should be > 0, got {}".format(d_total))
    w_t = np.asarray(w_t, dtype=float)
    dense = gamma_1.to_dense()
    if dense.shape != w_t.shape:
        raise ContractViolationError("Dimension mismatch: {} != {}".format(len(dense), len(w_t)))
    return w_t + dense / d_total


def evaluate(w, test, model=None):
    """
    Test accuracy and mean cross-entropy loss of the model w.

    Returns:
        (accuracy, loss)
    """
    if len(test) == 0:
        raise ContractViolationError("Cannot evaluate the model on an empty test set")
    model = model or LogisticRegression(n_features=test.n_features, n_classes=test.n_classes)
    accuracy = float(np.mean(model.predict(w, test.x) == test.y))
    return accuracy, model.loss(w, test.x, test.y)


class FederatedTraining(object):
    """
    State of a federated training run: the client partitions and states, the global model and the
    communication ledger.
    """

    def __init__(self, cfg, train, test, model=None):
        self.cfg = cfg
        self.train = train
        self.test = test
        self.model = model or LogisticRegression(n_features=train.n_features, n_classes=train.n_classes)
        self.partitions = partition(train, cfg.k, cfg.seed, iid=cfg.iid)
        self.d_total = sum(len(p) for p in self.partitions)
        dim = self.model.dim
        cfg.params.validate(dim)
        self.wire = WireParams(dim, omega=cfg.omega)
        # errors start at zero at t=0 and persist across rounds
        self.nodes = [NodeState.initial(k, len(p), dim) for k, p in enumerate(self.partitions, start=1)]
        self.w = self.model.init_weights()
        self.w_prev = np.zeros(dim)
        self.ledger = CommLedger()
        self.trajectory = []
        self.metrics = []

    def client_updates(self, t):
        """Effective gradients and mean local losses of all the clients at round t."""
        results = [_local_sgd(self.w, p, self.cfg, self.model, k, t)
                   for k, p in enumerate(self.partitions, start=1)]
        return [r[0] for r in results], [r[1] for r in results]

    def run_round(self, t):
        params = self.cfg.params
        gradients, losses = self.client_updates(t)
        global_mask = None
        if params.is_time_correlated:
            global_mask = compute_global_mask(self.w, self.w_prev, params.q_g)
        gamma_1, _ = chain_aggregate(self.nodes, gradients, params, global_mask=global_mask, wire=self.wire,
                                     ledger=self.ledger, round_index=t)
        self.w_prev, self.w = self.w, ps_update(self.w, gamma_1, self.d_total)
        self.trajectory.append(self.w.copy())

        accuracy, loss = evaluate(self.w, self.test, self.model)
        train_loss = float(np.average(losses, weights=[n.d_k for n in self.nodes]))
        metrics = RoundMetrics(t, accuracy, loss, self.ledger.round_total_bits(t), self.ledger.hop_nnz(t),
                               train_loss=train_loss)
        self.metrics.append(metrics)
        logger.info("Round {}: accuracy {:.4f} loss {:.4f} bits {}".format(t, accuracy, loss, metrics.total_bits))
        return metrics

    def run(self):
        for t in range(len(self.metrics), self.cfg.rounds):
            self.run_round(t)
        return self.metrics


def run_training(cfg, train, test, model=None):
    """
    Runs cfg.rounds rounds of federated training.

    Returns:
        list of RoundMetrics, one per round.
    """
    return FederatedTraining(cfg, train, test, model=model).run()


def dense_fedavg_trajectory(cfg, train, model=None):
    """
    Reference trajectory w^1, ..., w^T of federated averaging, w^{t+1} = w^t + 1/D sum_k D_k g_k,
    computed directly on dense vectors with the same partitions and local updates as run_training.
    """
    model = model or LogisticRegression(n_features=train.n_features, n_classes=train.n_classes)
    partitions = partition(train, cfg.k, cfg.seed, iid=cfg.iid)
    d_total = sum(len(p) for p in partitions)
    w = model.init_weights()
    trajectory = []
    for t in range(cfg.rounds):
        total = np.zeros_like(w)
        for k, p in enumerate(partitions, start=1):
            total += len(p) * _local_sgd(w, p, cfg, model, k, t)[0]
        w = w + total / d_total
        trajectory.append(w.copy())
    return trajectory
