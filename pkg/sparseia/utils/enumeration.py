# coding: utf-8
"""
Brute force enumerations used as oracles for the sparsification and cost results.
Only meant for tiny dimensions: the number of enumerated objects grows combinatorially.
"""
import itertools
import math

from fractions import Fraction

import numpy as np


def sparse_supports(dim, q):
    """All the supports with exactly min(q, dim) indices, as tuples."""
    return itertools.combinations(range(dim), min(q, dim))


def best_sparse_error(v, q):
    """
    Minimal squared error ||v - c||^2 over all the vectors c with at most q nonzero entries.
    For a fixed support the best c copies v on the support, hence only the supports of size min(q, dim)
    need to be enumerated.

    Args:
        v: dense vector.
        q: sparsity budget.
    """
    v = np.asarray(v, dtype=float)
    sq = v * v
    total = float(sq.sum())
    best = total
    for supp in sparse_supports(len(v), q):
        err = total - float(sq[list(supp)].sum())
        if err < best:
            best = err
    return best


def best_sparse_supports(v, q, rel_tol=1e-12):
    """All the supports of size min(q, dim) achieving the minimal error of best_sparse_error."""
    v = np.asarray(v, dtype=float)
    sq = v * v
    total = float(sq.sum())
    best = best_sparse_error(v, q)
    return [supp for supp in sparse_supports(len(v), q)
            if math.isclose(total - float(sq[list(supp)].sum()), best, rel_tol=rel_tol, abs_tol=1e-15)]


def exhaustive_expected_lambda_nnz(k, d, q_g, q_l):
    """
    Exact expected value of sum_k |S_k|, with S_k the union of the first k local supports, when each of the
    k hops draws q_l distinct indices uniformly among the d - q_g positions outside the global mask.
    Every sequence of k supports is enumerated, the result is an exact Fraction.
    """
    n = d - q_g
    if q_l == 0 or k == 0:
        return Fraction(0)
    choices = list(itertools.combinations(range(n), q_l))
    total = 0
    count = 0
    for sequence in itertools.product(choices, repeat=k):
        union = set()
        for supp in sequence:
            union.update(supp)
            total += len(union)
        count += 1
    return Fraction(total, count)
