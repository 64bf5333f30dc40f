# coding: utf-8
"""
Communication ledger recording the size of every hop transmission of a training run.
"""
import collections
import logging

from monty.json import MontyDecoder, MSONable

from sparseia.cost.model import transmission_bits


logger = logging.getLogger(__name__)


class CommLedger(collections.deque, MSONable):
    """
    Append-only record of the transmissions performed along the chain, one HopRecord per round and hop.
    A ledger belongs to a single experiment run.
    """

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'items': [r.as_dict() for r in self]}

    @classmethod
    def from_dict(cls, d):
        dec = MontyDecoder()
        return cls([dec.process_decoded(i) for i in d['items']])

    def log_hop(self, round_index, k, agg, wire):
        """
        Records the transmission of the partial aggregate agg from node k at the given round.

        Returns:
            the HopRecord appended to the ledger.
        """
        if agg.is_mixed:
            gamma_length, nnz_lambda = agg.gamma_length, agg.nnz_lambda
        else:
            gamma_length, nnz_lambda = 0, agg.nnz
        record = HopRecord(round_index=round_index, k=k, nnz=agg.nnz, gamma_length=gamma_length,
                           nnz_lambda=nnz_lambda, bits=transmission_bits(agg, wire))
        logger.debug("Round {} hop {}: nnz {} bits {}".format(round_index, k, record.nnz, record.bits))
        self.append(record)
        return record

    def get_records_by_round(self, round_index):
        """Records of a single round, in transmission order (node K first)."""
        return [r for r in self if r.round_index == round_index]

    @property
    def rounds(self):
        """Sorted list of the rounds present in the ledger."""
        return sorted(set(r.round_index for r in self))

    def round_total_bits(self, round_index):
        return sum(r.bits for r in self.get_records_by_round(round_index))

    def total_bits(self):
        return sum(r.bits for r in self)

    def mean_bits_per_round(self):
        rounds = self.rounds
        if not rounds:
            return 0.0
        return self.total_bits() / len(rounds)

    def hop_nnz(self, round_index):
        """nnz of the transmitted aggregates of a round, in transmission order."""
        return [r.nnz for r in self.get_records_by_round(round_index)]

    def max_hop_nnz(self, round_index):
        return max(self.hop_nnz(round_index) or [0])


class HopRecord(MSONable):
    """
    Size of the partial aggregate transmitted by node k at a given round.
    For plain aggregates gamma_length is 0 and nnz_lambda equals nnz.
    """

    def __init__(self, round_index, k, nnz, gamma_length, nnz_lambda, bits):
        self.round_index = round_index
        self.k = k
        self.nnz = nnz
        self.gamma_length = gamma_length
        self.nnz_lambda = nnz_lambda
        self.bits = bits

    def __eq__(self, other):
        if not isinstance(other, HopRecord):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self):
        return "HopRecord(round={}, k={}, nnz={}, bits={})".format(self.round_index, self.k, self.nnz, self.bits)

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'round_index': self.round_index, 'k': self.k, 'nnz': self.nnz,
                'gamma_length': self.gamma_length, 'nnz_lambda': self.nnz_lambda, 'bits': self.bits}

    @classmethod
    def from_dict(cls, d):
        return cls(round_index=d['round_index'], k=d['k'], nnz=d['nnz'], gamma_length=d['gamma_length'],
                   nnz_lambda=d['nnz_lambda'], bits=d['bits'])
