# coding: utf-8
"""
Sparse vectors stored as sorted (index, value) pairs, index masks and the Top-Q sparsification
operators shared by all the aggregation algorithms.

All the objects are immutable: every operation returns a new object and the underlying numpy arrays
are flagged as read-only.
"""
import logging

import numpy as np

from monty.json import MSONable

from sparseia.core.errors import ContractViolationError


logger = logging.getLogger(__name__)

INDEX_DTYPE = np.int64
VALUE_DTYPE = np.float64


def _frozen(array):
    array.setflags(write=False)
    return array


def _check_indices(dim, indices, what):
    if dim < 1:
        raise ContractViolationError("The dimension of a {} should be >= 1, got {}".format(what, dim))
    if len(indices) == 0:
        return
    if indices[0] < 0 or indices[-1] >= dim:
        raise ContractViolationError("Indices of a {} should lie in 0..{}".format(what, dim - 1))
    if np.any(np.diff(indices) <= 0):
        raise ContractViolationError("Indices of a {} should be strictly increasing".format(what))


class Mask(MSONable):
    """
    Sorted set of indices in 0..dim-1.
    Used for the Top-Q sparsification masks, the global mask of the time-correlated algorithms and
    for the supports of sparse vectors.
    """

    def __init__(self, dim, indices=()):
        """
        Args:
            dim: dimension of the vector space the mask refers to.
            indices: strictly increasing sequence of indices.
        """
        self.dim = int(dim)
        indices = np.array(indices, dtype=INDEX_DTYPE).reshape(-1)
        _check_indices(self.dim, indices, "Mask")
        self.indices = _frozen(indices)

    @classmethod
    def from_indices(cls, dim, indices):
        """Builds a mask from any iterable of indices, possibly unsorted and with repetitions."""
        return cls(dim, np.unique(np.asarray(list(indices), dtype=INDEX_DTYPE)))

    @classmethod
    def empty(cls, dim):
        return cls(dim)

    @classmethod
    def full(cls, dim):
        return cls(dim, np.arange(dim, dtype=INDEX_DTYPE))

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(int(i) for i in self.indices)

    def __contains__(self, index):
        pos = np.searchsorted(self.indices, index)
        return pos < len(self.indices) and self.indices[pos] == index

    def __eq__(self, other):
        if not isinstance(other, Mask):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash((self.dim, self.indices.tobytes()))

    def __repr__(self):
        return "Mask(dim={}, indices={})".format(self.dim, self.indices.tolist())

    def to_bool_array(self):
        flags = np.zeros(self.dim, dtype=bool)
        flags[self.indices] = True
        return flags

    def isdisjoint(self, other):
        _check_same_dim(self, other)
        return len(np.intersect1d(self.indices, other.indices, assume_unique=True)) == 0

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'dim': self.dim,
                'indices': self.indices.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(d['dim'], d['indices'])


class SparseVector(MSONable):
    """
    Vector of dimension dim stored as sorted (index, value) pairs.
    The representation is canonical: indices are strictly increasing and no stored value is exactly zero.
    Near-zero values are kept as they are.
    """

    def __init__(self, dim, indices=(), values=()):
        """
        Args:
            dim: dimension of the vector.
            indices: strictly increasing sequence of indices.
            values: values associated with the indices. Exact zeros are dropped.
        """
        self.dim = int(dim)
        indices = np.array(indices, dtype=INDEX_DTYPE).reshape(-1)
        values = np.array(values, dtype=VALUE_DTYPE).reshape(-1)
        if len(indices) != len(values):
            raise ContractViolationError("SparseVector got {} indices and {} values".format(len(indices),
                                                                                        len(values)))
        _check_indices(self.dim, indices, "SparseVector")
        nonzero = values != 0
        if not np.all(nonzero):
            indices, values = indices[nonzero], values[nonzero]
        self.indices = _frozen(indices)
        self.values = _frozen(values)

    @classmethod
    def zeros(cls, dim):
        return cls(dim)

    @classmethod
    def from_dense(cls, array):
        """Converts a dense 1D array. Only exact zeros are dropped."""
        array = np.asarray(array, dtype=VALUE_DTYPE).reshape(-1)
        indices = np.flatnonzero(array)
        return cls(len(array), indices, array[indices])

    @classmethod
    def from_pairs(cls, dim, pairs):
        """Builds the vector from a mapping or an iterable of (index, value) pairs in any order."""
        pairs = sorted(dict(pairs).items())
        return cls(dim, [i for i, _ in pairs], [v for _, v in pairs])

    def to_dense(self):
        dense = np.zeros(self.dim, dtype=VALUE_DTYPE)
        dense[self.indices] = self.values
        return dense

    def gather(self, mask):
        """
        Returns the values at the indices of the mask as a dense array aligned with mask.indices.
        Indices not stored in the vector give 0.
        """
        _check_same_dim(self, mask)
        gathered = np.zeros(len(mask), dtype=VALUE_DTYPE)
        pos = np.searchsorted(self.indices, mask.indices)
        valid = pos < len(self.indices)
        hit = np.zeros(len(mask), dtype=bool)
        hit[valid] = self.indices[pos[valid]] == mask.indices[valid]
        gathered[hit] = self.values[pos[hit]]
        return gathered

    @property
    def nnz(self):
        return len(self.indices)

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (self.dim == other.dim and np.array_equal(self.indices, other.indices) and
                np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.dim, self.indices.tobytes(), self.values.tobytes()))

    def __repr__(self):
        pairs = ", ".join("{}: {!r}".format(i, v) for i, v in zip(self.indices.tolist(), self.values.tolist()))
        return "SparseVector(dim={}, {{{}}})".format(self.dim, pairs)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1.0))

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, c):
        return scale(self, c)

    __rmul__ = __mul__

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'dim': self.dim,
                'indices': self.indices.tolist(),
                'values': self.values.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(d['dim'], d['indices'], d['values'])


def as_sparse(v):
    """Returns v as a SparseVector. Dense arrays and lists are converted dropping exact zeros."""
    if isinstance(v, SparseVector):
        return v
    return SparseVector.from_dense(v)


def _check_same_dim(a, b):
    if a.dim != b.dim:
        raise ContractViolationError("Dimension mismatch: {} != {}".format(a.dim, b.dim))


##############################################################
### Sparsification ###########################################
##############################################################

def _top_q_positions(v, q):
    """Positions in v.indices of the q largest magnitudes, ties broken by the lowest index."""
    if q < 0:
        raise ContractViolationError("The sparsification budget should be >= 0, got {}".format(q))
    if q >= v.nnz:
        return np.arange(v.nnz)
    # lexsort uses the last key as primary: magnitude descending, then index ascending.
    order = np.lexsort((v.indices, -np.abs(v.values)))
    return np.sort(order[:q])


def top_q(v, q):
    """
    Top-Q sparsification: keeps the q largest magnitude entries of v.
    If v has fewer than q nonzero entries, v is returned unchanged.

    Args:
        v: SparseVector or dense array.
        q: non negative budget.

    Returns:
        SparseVector with min(q, nnz(v)) nonzero entries.
    """
    v = as_sparse(v)
    positions = _top_q_positions(v, q)
    if len(positions) == v.nnz:
        return v
    return SparseVector(v.dim, v.indices[positions], v.values[positions])


def top_q_mask(v, q):
    """Support of top_q(v, q)."""
    v = as_sparse(v)
    return Mask(v.dim, v.indices[_top_q_positions(v, q)])


def support(v):
    """Mask of the nonzero entries of v."""
    v = as_sparse(v)
    return Mask(v.dim, v.indices)


##############################################################
### Mask algebra #############################################
##############################################################

def mask_union(a, b):
    _check_same_dim(a, b)
    return Mask(a.dim, np.union1d(a.indices, b.indices))


def mask_subtract(a, b):
    """Set difference a \\ b. b is not required to be a subset of a."""
    _check_same_dim(a, b)
    return Mask(a.dim, np.setdiff1d(a.indices, b.indices, assume_unique=True))


def apply_mask(m, v):
    """Entries of v with index in m."""
    v = as_sparse(v)
    _check_same_dim(m, v)
    keep = np.isin(v.indices, m.indices, assume_unique=True)
    return SparseVector(v.dim, v.indices[keep], v.values[keep])


def complement_mask_apply(m, v):
    """Entries of v with index not in m."""
    v = as_sparse(v)
    _check_same_dim(m, v)
    keep = ~np.isin(v.indices, m.indices, assume_unique=True)
    return SparseVector(v.dim, v.indices[keep], v.values[keep])


##############################################################
### Arithmetic ###############################################
##############################################################

def add(a, b):
    """
    Exact sparse sum. The supports are merged and entries cancelling to exactly 0 are dropped.
    Each index is summed as a single a_i + b_i operation, hence the sum is commutative bit for bit.
    """
    a, b = as_sparse(a), as_sparse(b)
    _check_same_dim(a, b)
    if b.nnz == 0:
        return a
    if a.nnz == 0:
        return b
    indices = np.concatenate([a.indices, b.indices])
    values = np.concatenate([a.values, b.values])
    merged, inverse = np.unique(indices, return_inverse=True)
    sums = np.bincount(inverse, weights=values, minlength=len(merged))
    return SparseVector(a.dim, merged, sums)


def subtract(a, b):
    return add(a, scale(b, -1.0))


def scale(v, c):
    v = as_sparse(v)
    return SparseVector(v.dim, v.indices, v.values * float(c))


def sq_norm(v):
    v = as_sparse(v)
    return float(np.dot(v.values, v.values))


def nnz(v):
    return as_sparse(v).nnz
