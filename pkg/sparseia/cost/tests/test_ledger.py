# coding: utf-8
from __future__ import print_function, division, unicode_literals, absolute_import

import numpy as np

from sparseia.core.testing import SparseiaTest
from sparseia.core.sparse import SparseVector, Mask
from sparseia.aggregation.aggregates import PlainAggregate, MixedAggregate
from sparseia.cost.model import WireParams
from sparseia.cost.ledger import CommLedger, HopRecord


class TestCommLedger(SparseiaTest):

    def setUp(self):
        self.wire = WireParams(16)
        self.ledger = CommLedger()
        # round 0: two plain hops
        self.ledger.log_hop(0, 2, PlainAggregate(SparseVector(16, [1, 5], [1.0, 2.0])), self.wire)
        self.ledger.log_hop(0, 1, PlainAggregate(SparseVector(16, [1, 5, 9], [1.0, 2.0, 3.0])), self.wire)
        # round 1: two mixed hops
        mask = Mask(16, [0, 3, 4])
        self.ledger.log_hop(1, 2, MixedAggregate(mask, np.zeros(3), SparseVector(16, [7], [1.0])), self.wire)
        self.ledger.log_hop(1, 1, MixedAggregate(mask, np.ones(3), SparseVector(16, [7, 8], [1.0, 1.0])), self.wire)

    def test_records(self):
        self.assertEqual(len(self.ledger), 4)
        self.assertEqual(self.ledger.rounds, [0, 1])
        first = self.ledger[0]
        self.assertEqual(first, HopRecord(round_index=0, k=2, nnz=2, gamma_length=0, nnz_lambda=2, bits=72))
        mixed = self.ledger.get_records_by_round(1)[1]
        self.assertEqual((mixed.k, mixed.nnz, mixed.gamma_length, mixed.nnz_lambda), (1, 5, 3, 2))
        self.assertEqual(mixed.bits, 3 * 32 + 2 * 36)

    def test_totals(self):
        self.assertEqual(self.ledger.round_total_bits(0), 5 * 36)
        self.assertEqual(self.ledger.round_total_bits(1), 3 * 32 + 36 + 3 * 32 + 2 * 36)
        self.assertEqual(self.ledger.total_bits(), self.ledger.round_total_bits(0) + self.ledger.round_total_bits(1))
        self.assertEqual(self.ledger.mean_bits_per_round(), self.ledger.total_bits() / 2)
        self.assertEqual(self.ledger.hop_nnz(0), [2, 3])
        self.assertEqual(self.ledger.hop_nnz(1), [4, 5])
        self.assertEqual(self.ledger.max_hop_nnz(1), 5)
        self.assertEqual(self.ledger.max_hop_nnz(7), 0)

        self.assertEqual(CommLedger().mean_bits_per_round(), 0.0)

    def test_serialization(self):
        new_ledger = self.assertMSONable(self.ledger)
        self.assertEqual(list(new_ledger), list(self.ledger))
        self.assertEqual(self.assertMSONable(self.ledger[2]), self.ledger[2])
