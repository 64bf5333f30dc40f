# coding: utf-8
"""
Communication cost model of sparse incremental aggregation.

Every value is transmitted with omega bits. A value transmitted together with its position additionally
requires ceil(log2 d) bits for the absolute index. Values on the global mask of the time-correlated algorithms
and the entries of dense vectors are transmitted without indices.
"""
import logging
import math

from fractions import Fraction

import numpy as np

from monty.json import MSONable

from sparseia.core.errors import ContractViolationError
from sparseia.aggregation.aggregates import (Algorithm, AlgorithmParams, PlainAggregate, DenseAggregate,
                                             MixedAggregate)


logger = logging.getLogger(__name__)

DEFAULT_OMEGA = 32


class WireParams(MSONable):
    """
    Word sizes used to encode the transmitted vectors.
    """

    def __init__(self, d, omega=DEFAULT_OMEGA):
        """
        Args:
            d: model dimension.
            omega: number of bits of each transmitted value.
        """
        if d < 1:
            raise ContractViolationError("The model dimension should be >= 1, got {}".format(d))
        if omega <= 0:
            raise ContractViolationError("omega should be > 0, got {}".format(omega))
        self.d = int(d)
        self.omega = int(omega)

    @property
    def index_bits(self):
        """ceil(log2 d), computed exactly on integers."""
        return (self.d - 1).bit_length()

    @property
    def pair_bits(self):
        """Bits of a value transmitted together with its index."""
        return self.omega + self.index_bits

    def __eq__(self, other):
        if not isinstance(other, WireParams):
            return NotImplemented
        return self.d == other.d and self.omega == other.omega

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'd': self.d, 'omega': self.omega}

    @classmethod
    def from_dict(cls, d):
        return cls(d=d['d'], omega=d['omega'])


def transmission_bits(agg, wire):
    """
    Size in bits of the transmission of a partial aggregate.

    Mixed aggregates cost omega bits for each Gamma value, counted even when the value is zero, plus
    omega + ceil(log2 d) bits for each nonzero Lambda entry. Plain aggregates cost omega + ceil(log2 d)
    bits per nonzero entry, dense aggregates d * omega bits.
    """
    if agg.dim != wire.d:
        raise ContractViolationError("Aggregate dimension {} differs from the wire dimension {}".format(
            agg.dim, wire.d))
    if isinstance(agg, MixedAggregate):
        return wire.omega * agg.gamma_length + wire.pair_bits * agg.nnz_lambda
    if isinstance(agg, DenseAggregate):
        return wire.d * wire.omega
    if isinstance(agg, PlainAggregate):
        return wire.pair_bits * agg.nnz
    raise ContractViolationError("Unknown aggregate type {}".format(type(agg).__name__))


##############################################################
### Closed forms #############################################
##############################################################

def cl_sia_cost(k, q, wire):
    """Per iteration cost of CL-SIA with every hop transmitting q pairs."""
    return k * q * wire.pair_bits


def cl_tc_sia_cost(k, q_g, q_l, wire):
    """Per iteration cost of CL-TC-SIA with q_g mask values and q_l pairs per hop."""
    return k * wire.omega * q_g + wire.pair_bits * k * q_l


def unicast_routing_cost(k, per_gradient_bits):
    """Conventional routing: the gradient of node k travels over k hops, (K^2 + K) / 2 transmissions in total."""
    return (k * k + k) // 2 * per_gradient_bits


def dense_ia_cost(k, wire):
    """Incremental aggregation of dense vectors: one transmission of d values per hop, without indices."""
    return k * wire.d * wire.omega


def _check_bound_args(d, q_g, q_l):
    if q_g < 0 or q_l < 0:
        raise ContractViolationError("Budgets should be non negative: q_g={}, q_l={}".format(q_g, q_l))
    if q_g > d:
        raise ContractViolationError("q_g={} larger than d={}".format(q_g, d))
    if q_l > d - q_g:
        raise ContractViolationError("q_l={} larger than d - q_g={}".format(q_l, d - q_g))


def lambda_nnz_upper_bound(k, d, q_g, q_l, exact=False):
    """
    Upper bound on the expected number of local nonzero elements transmitted over k hops,
    sum_k E[||Lambda_k||_0], when the local supports are independent and uniformly distributed over the
    d - q_g positions outside of the global mask.

    Args:
        exact: if True the bound is computed on rationals and returned as a Fraction.
    """
    _check_bound_args(d, q_g, q_l)
    if q_l == 0:
        return Fraction(0) if exact else 0.0
    n = d - q_g
    if exact:
        n, ratio = Fraction(n), Fraction(q_l, n)
    else:
        ratio = q_l / n
    return n * (k + 1 - (1 / ratio) * (1 - (1 - ratio) ** (k + 1)))


def mc_lambda_nnz_stats(k, d, q_g, q_l, trials, seed):
    """
    Monte-Carlo estimate of sum_k |S_k|, where S_k is the union of k supports of q_l indices drawn uniformly
    and independently among the d - q_g positions outside of the global mask.

    The size of the union evolves as a Markov chain: the number of fresh indices drawn at a hop is q_l minus a
    hypergeometric overlap with the current union, which is simulated for all the trials at once.

    Returns:
        (mean, standard error) over the trials.
    """
    _check_bound_args(d, q_g, q_l)
    if trials < 1:
        raise ContractViolationError("trials should be >= 1, got {}".format(trials))
    if q_l == 0 or k == 0:
        return 0.0, 0.0
    n = d - q_g
    rng = np.random.default_rng(seed)
    sizes = np.zeros(trials, dtype=np.int64)
    totals = np.zeros(trials, dtype=np.int64)
    for _ in range(k):
        overlap = rng.hypergeometric(sizes, n - sizes, q_l)
        sizes += q_l - overlap
        totals += sizes
    mean = float(totals.mean())
    stderr = float(totals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return mean, stderr


def mc_expected_lambda_nnz(k, d, q_g, q_l, trials, seed):
    """Mean of mc_lambda_nnz_stats."""
    return mc_lambda_nnz_stats(k, d, q_g, q_l, trials, seed)[0]


def normalized_cost(total_bits, unit_bits):
    """Total cost expressed in number of single transmissions of size unit_bits."""
    if unit_bits <= 0:
        raise ContractViolationError("unit_bits should be > 0, got {}".format(unit_bits))
    return total_bits / unit_bits


def single_transmission_bits(params, wire):
    """
    Size of a single transmission of the algorithm, used as normalization unit:
    q pairs for plain sparse vectors, q_g values and q_l pairs for the mixed format, d values for dense vectors.
    """
    if params.algorithm == Algorithm.DENSE:
        return wire.d * wire.omega
    if params.is_time_correlated:
        return wire.omega * params.q_g + wire.pair_bits * params.q_l
    return min(params.q, wire.d) * wire.pair_bits


##############################################################
### Expected costs and calibration ###########################
##############################################################

def expected_round_cost(params, k, wire):
    """
    Expected per iteration cost of an algorithm over a chain of k clients.
    SIA and RE-SIA use the bound with q_g = 0 and q_l = q (independent supports), TC-SIA combines the
    deterministic Gamma cost with the bound on Lambda. The constant-length and dense costs are exact.
    """
    alg = params.algorithm
    if alg == Algorithm.DENSE:
        return float(dense_ia_cost(k, wire))
    if alg == Algorithm.CL_SIA:
        return float(cl_sia_cost(k, min(params.q, wire.d), wire))
    if alg == Algorithm.CL_TC_SIA:
        return float(cl_tc_sia_cost(k, params.q_g, params.q_l, wire))
    if alg == Algorithm.TC_SIA:
        return (k * wire.omega * params.q_g +
                wire.pair_bits * lambda_nnz_upper_bound(k, wire.d, params.q_g, params.q_l))
    return wire.pair_bits * lambda_nnz_upper_bound(k, wire.d, 0, min(params.q, wire.d))


def split_budget(algorithm, q, local_fraction=0.1):
    """
    Builds the AlgorithmParams for a total budget q. Time-correlated algorithms get
    q_l = floor(local_fraction * q) local entries and q_g = q - q_l mask entries.
    """
    algorithm = Algorithm.normalize(algorithm)
    if Algorithm.is_time_correlated(algorithm):
        q_l = int(math.floor(local_fraction * q))
        return AlgorithmParams(algorithm, q_g=q - q_l, q_l=q_l)
    return AlgorithmParams(algorithm, q=q)


def calibrate_budget(algorithm, k, wire, target_bits, local_fraction=0.1):
    """
    Total budget q whose expected per iteration cost is the closest to target_bits, used to compare the
    algorithms under approximately equal bandwidth. Ties are resolved in favour of the smaller budget.
    The expected costs of SIA, RE-SIA and TC-SIA come from the bound with independent supports: the result is an
    estimate and can differ from a budget calibrated on the costs measured in training runs.

    Returns:
        (AlgorithmParams, expected cost in bits)
    """
    algorithm = Algorithm.normalize(algorithm)
    if algorithm == Algorithm.DENSE:
        raise ContractViolationError("The dense baseline has no budget to calibrate")
    best = None
    for q in range(0, wire.d + 1):
        params = split_budget(algorithm, q, local_fraction)
        cost = expected_round_cost(params, k, wire)
        if best is None or abs(cost - target_bits) < abs(best[1] - target_bits):
            best = (params, cost)
        # the expected cost is non decreasing in q
        if cost > target_bits:
            break
    logger.info("Calibrated {} to {} with expected cost {:.1f} bits (target {})".format(
        algorithm, best[0], best[1], target_bits))
    return best
