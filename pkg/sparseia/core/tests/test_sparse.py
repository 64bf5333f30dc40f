# coding: utf-8
from __future__ import print_function, division, unicode_literals, absolute_import

import numpy as np

from sparseia.core.testing import SparseiaTest
from sparseia.core.errors import ContractViolationError
from sparseia.core.sparse import (SparseVector, Mask, top_q, top_q_mask, support, mask_union, mask_subtract,
                                  apply_mask, complement_mask_apply, add, subtract, scale, sq_norm, nnz, as_sparse)
from sparseia.utils.enumeration import best_sparse_error


class TestSparseVector(SparseiaTest):

    def test_canonical_form(self):
        v = SparseVector(5, [0, 2, 4], [1.0, 0.0, -2.0])
        self.assertArrayEqual(v.indices, [0, 4])
        self.assertArrayEqual(v.values, [1.0, -2.0])
        self.assertEqual(v.nnz, 2)
        self.assertSparseEqual(v, [1, 0, 0, 0, -2])

        # near zero values are kept
        v = SparseVector.from_dense([1e-300, 0, 0])
        self.assertEqual(v.nnz, 1)

    def test_invalid(self):
        with self.assertRaises(ContractViolationError):
            SparseVector(3, [2, 1], [1.0, 1.0])
        with self.assertRaises(ContractViolationError):
            SparseVector(3, [3], [1.0])
        with self.assertRaises(ContractViolationError):
            SparseVector(3, [0, 1], [1.0])
        with self.assertRaises(ContractViolationError):
            SparseVector(0)

    def test_immutable(self):
        v = SparseVector.from_dense([1, 2, 0])
        with self.assertRaises(ValueError):
            v.values[0] = 3.0

    def test_from_pairs_and_gather(self):
        v = SparseVector.from_pairs(6, {4: 2.0, 1: -1.0})
        self.assertSparseEqual(v, [0, -1, 0, 0, 2, 0])
        self.assertArrayEqual(v.gather(Mask(6, [0, 1, 4])), [0.0, -1.0, 2.0])

    def test_operators(self):
        a = SparseVector.from_dense([1, 0, 2])
        b = SparseVector.from_dense([0, 3, 1])
        self.assertSparseEqual(a + b, [1, 3, 3])
        self.assertSparseEqual(a - b, [1, -3, 1])
        self.assertSparseEqual(-a, [-1, 0, -2])
        self.assertSparseEqual(2 * a, [2, 0, 4])
        self.assertEqual(a, SparseVector(3, [0, 2], [1, 2]))
        self.assertNotEqual(a, b)

    def test_serialization(self):
        v = SparseVector.from_dense([0, 1.5, 0, -2])
        new_v = self.assertMSONable(v)
        self.assertEqual(v, new_v)
        m = Mask(10, [1, 5, 7])
        self.assertEqual(self.assertMSONable(m), m)


class TestMask(SparseiaTest):

    def test_mask(self):
        m = Mask.from_indices(6, [4, 1, 4, 2])
        self.assertArrayEqual(m.indices, [1, 2, 4])
        self.assertEqual(len(m), 3)
        self.assertIn(2, m)
        self.assertNotIn(3, m)
        self.assertEqual(list(m), [1, 2, 4])
        self.assertArrayEqual(m.to_bool_array(), [False, True, True, False, True, False])
        self.assertEqual(len(Mask.empty(4)), 0)
        self.assertEqual(len(Mask.full(4)), 4)

        with self.assertRaises(ContractViolationError):
            Mask(4, [1, 1])
        with self.assertRaises(ContractViolationError):
            Mask(4, [-1])

    def test_union_subtract(self):
        self.assertEqual(mask_union(Mask(3, [0, 1]), Mask(3, [1, 2])), Mask(3, [0, 1, 2]))
        self.assertEqual(mask_union(Mask(3), Mask(3, [2])), Mask(3, [2]))
        self.assertEqual(mask_union(Mask(3, [0]), Mask(3, [0])), Mask(3, [0]))

        self.assertEqual(mask_subtract(Mask(3, [0, 1, 2]), Mask(3, [1])), Mask(3, [0, 2]))
        self.assertEqual(mask_subtract(Mask(3, [0, 2]), Mask(3)), Mask(3, [0, 2]))
        self.assertEqual(mask_subtract(Mask(3, [0, 2]), Mask(3, [0, 2])), Mask(3))
        # b is not required to be a subset of a
        self.assertEqual(mask_subtract(Mask(4, [0, 1]), Mask(4, [1, 3])), Mask(4, [0]))

        with self.assertRaises(ContractViolationError):
            mask_union(Mask(3), Mask(4))

    def test_isdisjoint(self):
        self.assertTrue(Mask(5, [0, 2]).isdisjoint(Mask(5, [1, 3])))
        self.assertFalse(Mask(5, [0, 2]).isdisjoint(Mask(5, [2])))


class TestSparsification(SparseiaTest):

    def test_top_q(self):
        self.assertSparseEqual(top_q([3, -5, 1, 0.5], 2), [3, -5, 0, 0])
        self.assertSparseEqual(top_q([3, -5, 1, 0.5], 0), [0, 0, 0, 0])
        # tie between |2| and |-2|: the lowest index wins
        self.assertSparseEqual(top_q([2, -2, 1, 0], 1), [2, 0, 0, 0])
        # fewer nonzeros than the budget
        v = SparseVector.from_dense([0, 0, 7, 0])
        self.assertIs(top_q(v, 3), v)

        with self.assertRaises(ContractViolationError):
            top_q([1, 2], -1)

    def test_tie_is_optimal(self):
        v = np.array([2, -2, 1, 0], dtype=float)
        err = sq_norm(subtract(v, top_q(v, 1)))
        self.assertEqual(err, 5.0)
        self.assertEqual(best_sparse_error(v, 1), 5.0)

    def test_top_q_mask(self):
        self.assertEqual(top_q_mask([3, -5, 1, 0.5], 2), Mask(4, [0, 1]))
        self.assertEqual(top_q_mask(np.zeros(4), 5), Mask(4))
        self.assertEqual(top_q_mask([0, 0, 7, 0], 3), Mask(4, [2]))

    def test_support(self):
        self.assertEqual(support([0, 4, 0]), Mask(3, [1]))
        self.assertEqual(support(np.zeros(3)), Mask(3))
        self.assertEqual(support([1, 1, 1]), Mask(3, [0, 1, 2]))

    def test_nnz_invariant(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            d = int(rng.integers(1, 20))
            v = rng.integers(-3, 4, size=d).astype(float)
            q = int(rng.integers(0, d + 3))
            self.assertEqual(nnz(top_q(v, q)), min(q, nnz(v)))

    def test_optimality_brute_force(self):
        rng = np.random.default_rng(7)
        for i in range(300):
            d = int(rng.integers(1, 9))
            v = rng.integers(-4, 5, size=d).astype(float) if i % 2 else rng.standard_normal(d)
            q = int(rng.integers(0, d + 1))
            err = sq_norm(subtract(v, top_q(v, q)))
            best = best_sparse_error(v, q)
            self.assertLessEqual(err, best + 1e-12 * max(1.0, best))


class TestMaskApplication(SparseiaTest):

    def test_apply_mask(self):
        self.assertSparseEqual(apply_mask(Mask(3, [0, 2]), [5, 6, 7]), [5, 0, 7])
        self.assertSparseEqual(apply_mask(Mask(3), [5, 6, 7]), [0, 0, 0])
        self.assertSparseEqual(apply_mask(Mask.full(3), [5, 6, 7]), [5, 6, 7])

    def test_complement_mask_apply(self):
        self.assertSparseEqual(complement_mask_apply(Mask(2, [0]), [5, 6]), [0, 6])
        self.assertSparseEqual(complement_mask_apply(Mask.full(2), [5, 6]), [0, 0])
        self.assertSparseEqual(complement_mask_apply(Mask(2), [5, 6]), [5, 6])

    def test_partition_of_unity(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            d = int(rng.integers(1, 15))
            v = SparseVector.from_dense(rng.integers(-3, 4, size=d))
            m = Mask.from_indices(d, rng.choice(d, size=int(rng.integers(0, d + 1)), replace=False))
            self.assertEqual(add(apply_mask(m, v), complement_mask_apply(m, v)), v)

    def test_dimension_mismatch(self):
        with self.assertRaises(ContractViolationError):
            apply_mask(Mask(3), [1, 2])


class TestArithmetic(SparseiaTest):

    def test_add(self):
        self.assertSparseEqual(add([1, 0, 2], [0, 3, 1]), [1, 3, 3])
        c = add([1, 0], [-1, 0])
        self.assertEqual(c.nnz, 0)
        self.assertSparseEqual(c, [0, 0])

        with self.assertRaises(ContractViolationError):
            add([1, 2], [1, 2, 3])

    def test_add_algebra(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            d = int(rng.integers(1, 12))
            a, b, c = [as_sparse(rng.integers(-3, 4, size=d)) for _ in range(3)]
            self.assertEqual(add(a, b), add(b, a))
            self.assertEqual(add(add(a, b), c), add(a, add(b, c)))

    def test_scale_norm(self):
        self.assertSparseEqual(scale([1, 0, -2], 3), [3, 0, -6])
        self.assertSparseEqual(scale([1, 0, -2], 0), [0, 0, 0])
        self.assertEqual(sq_norm([3, 4]), 25.0)
        self.assertEqual(nnz([0, 1, 2]), 2)
