# coding: utf-8
"""
Objects exchanged and stored along the aggregation chain: the partial aggregates forwarded hop to hop,
the persistent state of each client and the parameters selecting the aggregation algorithm.
"""
import abc
import logging

import numpy as np

from six import add_metaclass
from monty.json import MSONable, MontyDecoder

from sparseia.core.errors import ContractViolationError
from sparseia.core.sparse import SparseVector, add, support


logger = logging.getLogger(__name__)


class Algorithm(object):
    """
    Names of the node level aggregation algorithms, as used on the command line.
    """

    SIA = 'sia'
    RE_SIA = 're-sia'
    CL_SIA = 'cl-sia'
    TC_SIA = 'tc-sia'
    CL_TC_SIA = 'cl-tc-sia'
    # incremental aggregation without sparsification, used as baseline
    DENSE = 'ia'

    SPARSE = [SIA, RE_SIA, CL_SIA, TC_SIA, CL_TC_SIA]
    ALL = SPARSE + [DENSE]
    TIME_CORRELATED = [TC_SIA, CL_TC_SIA]
    CONSTANT_LENGTH = [CL_SIA, CL_TC_SIA]

    @classmethod
    def normalize(cls, name):
        """Accepts both 'cl-tc-sia' and 'CL_TC_SIA' like spellings."""
        normalized = str(name).strip().lower().replace('_', '-')
        if normalized not in cls.ALL:
            raise ContractViolationError('Unknown algorithm "{}". Should be one of the following: '
                                         '{}'.format(name, ', '.join(cls.ALL)))
        return normalized

    @classmethod
    def is_time_correlated(cls, name):
        return name in cls.TIME_CORRELATED


class AlgorithmParams(MSONable):
    """
    Selected algorithm together with its sparsification budgets.
    q is used by SIA, RE-SIA and CL-SIA, q_g and q_l by TC-SIA and CL-TC-SIA.
    """

    def __init__(self, algorithm, q=0, q_g=0, q_l=0):
        self.algorithm = Algorithm.normalize(algorithm)
        self.q = int(q)
        self.q_g = int(q_g)
        self.q_l = int(q_l)
        if self.q < 0 or self.q_g < 0 or self.q_l < 0:
            raise ContractViolationError("Budgets should be non negative: q={}, q_g={}, q_l={}".format(
                self.q, self.q_g, self.q_l))

    @property
    def is_time_correlated(self):
        return Algorithm.is_time_correlated(self.algorithm)

    def validate(self, d):
        """Checks the budgets against the model dimension d."""
        if self.is_time_correlated and self.q_g + self.q_l > d:
            raise ContractViolationError("q_g + q_l should be <= d: {} + {} > {}".format(self.q_g, self.q_l, d))
        if not self.is_time_correlated and self.q > d:
            logger.warning("Budget q={} larger than the dimension d={}: no sparsification".format(self.q, d))

    def __eq__(self, other):
        if not isinstance(other, AlgorithmParams):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self):
        if self.is_time_correlated:
            return "AlgorithmParams({}, q_g={}, q_l={})".format(self.algorithm, self.q_g, self.q_l)
        return "AlgorithmParams({}, q={})".format(self.algorithm, self.q)

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'algorithm': self.algorithm, 'q': self.q, 'q_g': self.q_g, 'q_l': self.q_l}

    @classmethod
    def from_dict(cls, d):
        return cls(algorithm=d['algorithm'], q=d['q'], q_g=d['q_g'], q_l=d['q_l'])


class NodeState(MSONable):
    """
    Persistent state of client k: its number of samples D_k and its error feedback vector e_k.
    The error is the only mutable part and is updated by each aggregation step.
    """

    def __init__(self, k, d_k, error):
        if d_k < 1:
            raise ContractViolationError("Client {} should have a positive number of samples, got {}".format(k, d_k))
        self.k = int(k)
        self.d_k = int(d_k)
        self.error = error

    @classmethod
    def initial(cls, k, d_k, dim):
        """State at t=0, with zero error."""
        return cls(k, d_k, SparseVector.zeros(dim))

    @property
    def dim(self):
        return self.error.dim

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'k': self.k, 'd_k': self.d_k, 'error': self.error.as_dict()}

    @classmethod
    def from_dict(cls, d):
        dec = MontyDecoder()
        return cls(k=d['k'], d_k=d['d_k'], error=dec.process_decoded(d['error']))


@add_metaclass(abc.ABCMeta)
class PartialAggregate(MSONable):
    """
    Abstract base class for the partial aggregate gamma_k forwarded from node k towards the parameter server.
    """

    @property
    @abc.abstractmethod
    def dim(self):
        pass

    @abc.abstractmethod
    def to_sparse(self):
        """The aggregate as a single SparseVector."""

    def to_dense(self):
        return self.to_sparse().to_dense()

    @property
    def is_mixed(self):
        return False


class PlainAggregate(PartialAggregate):
    """
    Aggregate transmitted as (index, value) pairs. Produced by SIA, RE-SIA and CL-SIA.
    """

    def __init__(self, vector):
        self.vector = vector

    @classmethod
    def zeros(cls, dim):
        return cls(SparseVector.zeros(dim))

    @property
    def dim(self):
        return self.vector.dim

    @property
    def nnz(self):
        return self.vector.nnz

    def to_sparse(self):
        return self.vector

    def __eq__(self, other):
        if not isinstance(other, PlainAggregate):
            return NotImplemented
        return type(self) is type(other) and self.vector == other.vector

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'vector': self.vector.as_dict()}

    @classmethod
    def from_dict(cls, d):
        return cls(MontyDecoder().process_decoded(d['vector']))


class DenseAggregate(PlainAggregate):
    """
    Aggregate of the incremental aggregation baseline without sparsification.
    Transmitted as a full dense vector, without indices.
    """


class MixedAggregate(PartialAggregate):
    """
    Mixed storage format gamma_k = [Gamma_k, Lambda_k] of the time-correlated algorithms.
    Gamma holds the values on the global mask, aligned with the ascending mask indices, and is transmitted
    without indices. Lambda holds the entries outside of the global mask.
    """

    def __init__(self, global_mask, gamma_values, lam):
        gamma_values = np.array(gamma_values, dtype=float).reshape(-1)
        if len(gamma_values) != len(global_mask):
            raise ContractViolationError("Gamma has {} values for a global mask of size {}".format(
                len(gamma_values), len(global_mask)))
        if lam.dim != global_mask.dim:
            raise ContractViolationError("Dimension mismatch: {} != {}".format(lam.dim, global_mask.dim))
        if not support(lam).isdisjoint(global_mask):
            raise ContractViolationError("The support of Lambda should be disjoint from the global mask")
        gamma_values.setflags(write=False)
        self.global_mask = global_mask
        self.gamma_values = gamma_values
        self.lam = lam

    @classmethod
    def zeros(cls, global_mask):
        return cls(global_mask, np.zeros(len(global_mask)), SparseVector.zeros(global_mask.dim))

    @property
    def dim(self):
        return self.global_mask.dim

    @property
    def is_mixed(self):
        return True

    @property
    def gamma_length(self):
        return len(self.gamma_values)

    @property
    def nnz_lambda(self):
        return self.lam.nnz

    @property
    def nnz(self):
        return self.gamma_length + self.nnz_lambda

    def gamma_vector(self):
        """Gamma scattered on the global mask indices."""
        return SparseVector(self.dim, self.global_mask.indices, self.gamma_values)

    def to_sparse(self):
        return add(self.gamma_vector(), self.lam)

    def __eq__(self, other):
        if not isinstance(other, MixedAggregate):
            return NotImplemented
        return (self.global_mask == other.global_mask and np.array_equal(self.gamma_values, other.gamma_values)
                and self.lam == other.lam)

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'global_mask': self.global_mask.as_dict(),
                'gamma_values': self.gamma_values.tolist(),
                'lam': self.lam.as_dict()}

    @classmethod
    def from_dict(cls, d):
        dec = MontyDecoder()
        return cls(global_mask=dec.process_decoded(d['global_mask']), gamma_values=d['gamma_values'],
                   lam=dec.process_decoded(d['lam']))


def zero_aggregate(params, dim, global_mask=None):
    """Incoming aggregate of node K, i.e. gamma_{K+1} = 0, in the format used by the algorithm."""
    if params.algorithm == Algorithm.DENSE:
        return DenseAggregate.zeros(dim)
    if params.is_time_correlated:
        if global_mask is None:
            raise ContractViolationError("Algorithm {} requires a global mask".format(params.algorithm))
        return MixedAggregate.zeros(global_mask)
    return PlainAggregate.zeros(dim)


__all__ = ["Algorithm", "AlgorithmParams", "NodeState", "PartialAggregate", "PlainAggregate", "DenseAggregate",
           "MixedAggregate", "zero_aggregate"]
