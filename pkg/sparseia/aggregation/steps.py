# coding: utf-8
"""
Sparse incremental aggregation steps executed at a single node k of the chain.

Each step receives the persistent state of node k, its effective gradient g_k and the partial aggregate
gamma_{k+1} received from the previous node. It updates the error feedback stored in the state and returns
the outgoing partial aggregate gamma_k.
"""
import logging

import numpy as np

from sparseia.core.errors import ContractViolationError
from sparseia.core.sparse import (Mask, as_sparse, add, scale, top_q, top_q_mask, support,
                                  mask_union, apply_mask, complement_mask_apply)
from sparseia.aggregation.aggregates import PlainAggregate, MixedAggregate, DenseAggregate


logger = logging.getLogger(__name__)


def _check_dims(state, g_k, gamma_in):
    if not (state.dim == g_k.dim == gamma_in.dim):
        raise ContractViolationError("Dimension mismatch at node {}: error {}, gradient {}, incoming "
                                     "aggregate {}".format(state.k, state.dim, g_k.dim, gamma_in.dim))


def _check_plain(gamma_in):
    if not isinstance(gamma_in, PlainAggregate):
        raise ContractViolationError("Expected a plain incoming aggregate, got {}".format(type(gamma_in).__name__))


def _check_mixed(gamma_in, global_mask):
    if not isinstance(gamma_in, MixedAggregate):
        raise ContractViolationError("Expected a mixed incoming aggregate, got {}".format(type(gamma_in).__name__))
    if gamma_in.global_mask != global_mask:
        raise ContractViolationError("The incoming aggregate refers to a different global mask")
    if not support(gamma_in.lam).isdisjoint(global_mask):
        raise ContractViolationError("The support of the incoming Lambda intersects the global mask")


def error_feedback(state, g_k):
    """Error compensated and weighted gradient D_k * g_k + e_k."""
    return add(scale(g_k, state.d_k), state.error)


def sia_step(state, g_k, gamma_in, q):
    """
    Sparse incremental aggregation: Top-Q sparsification of the error compensated gradient,
    then addition to the incoming aggregate.
    """
    g_k = as_sparse(g_k)
    _check_plain(gamma_in)
    _check_dims(state, g_k, gamma_in)
    g_tilde = error_feedback(state, g_k)
    g_bar = top_q(g_tilde, q)
    state.error = complement_mask_apply(support(g_bar), g_tilde)
    return PlainAggregate(add(g_bar, gamma_in.vector))


def re_sia_step(state, g_k, gamma_in, q):
    """
    Reduced-error sparse incremental aggregation: besides its own Top-Q entries, node k transmits its entries
    within the support of the incoming aggregate, at no extra cost.
    """
    g_k = as_sparse(g_k)
    _check_plain(gamma_in)
    _check_dims(state, g_k, gamma_in)
    g_tilde = error_feedback(state, g_k)
    local_mask = top_q_mask(g_tilde, q)
    incoming_mask = support(gamma_in.vector)
    selected = mask_union(local_mask, incoming_mask)
    g_bar = apply_mask(selected, g_tilde)
    state.error = complement_mask_apply(selected, g_tilde)
    return PlainAggregate(add(g_bar, gamma_in.vector))


def cl_sia_step(state, g_k, gamma_in, q):
    """
    Constant-length sparse incremental aggregation: the sum of the incoming aggregate and of the error compensated
    gradient is sparsified, so the outgoing aggregate never has more than q nonzero entries.
    The residual of the incoming aggregate becomes part of the error of node k.
    """
    g_k = as_sparse(g_k)
    _check_plain(gamma_in)
    _check_dims(state, g_k, gamma_in)
    g_tilde = error_feedback(state, g_k)
    gamma_tilde = add(g_tilde, gamma_in.vector)
    gamma_out = top_q(gamma_tilde, q)
    state.error = complement_mask_apply(support(gamma_out), gamma_tilde)
    return PlainAggregate(gamma_out)


def compute_global_mask(w_t, w_prev, q_g):
    """
    Global mask of the time-correlated algorithms: Top-q_g mask of the last global model update w_t - w_prev.
    If the update has fewer than q_g nonzero entries (e.g. at t=0), the mask is filled with the lowest indices
    not yet included, so that it always has exactly q_g indices.
    """
    w_t = np.asarray(w_t, dtype=float).reshape(-1)
    w_prev = np.asarray(w_prev, dtype=float).reshape(-1)
    if w_t.shape != w_prev.shape:
        raise ContractViolationError("Dimension mismatch: {} != {}".format(len(w_t), len(w_prev)))
    d = len(w_t)
    if q_g < 0 or q_g > d:
        raise ContractViolationError("q_g should be in 0..{}, got {}".format(d, q_g))
    mask = top_q_mask(w_t - w_prev, q_g)
    missing = q_g - len(mask)
    if missing > 0:
        logger.debug("Global model update has {} nonzero entries, filling {} mask slots".format(len(mask), missing))
        free = np.flatnonzero(~mask.to_bool_array())[:missing]
        mask = Mask(d, np.union1d(mask.indices, free))
    return mask


def tc_sia_step(state, g_k, gamma_in, global_mask, q_l):
    """
    Time-correlated sparse incremental aggregation. Node k transmits its entries on the global mask, its
    q_l largest entries outside of the global mask and its entries on the local support of the incoming aggregate.
    Values on the global mask are accumulated in Gamma, the others in Lambda.
    """
    g_k = as_sparse(g_k)
    _check_mixed(gamma_in, global_mask)
    _check_dims(state, g_k, gamma_in)
    g_tilde = error_feedback(state, g_k)
    local_mask = top_q_mask(complement_mask_apply(global_mask, g_tilde), q_l)
    # equivalent to support(gamma_in) minus the global mask, by disjointness
    incoming_mask = support(gamma_in.lam)
    selected = mask_union(mask_union(global_mask, local_mask), incoming_mask)
    g_bar = apply_mask(selected, g_tilde)
    state.error = complement_mask_apply(selected, g_tilde)
    gamma_values = gamma_in.gamma_values + g_bar.gather(global_mask)
    lam = add(gamma_in.lam, complement_mask_apply(global_mask, g_bar))
    return MixedAggregate(global_mask, gamma_values, lam)


def cl_tc_sia_step(state, g_k, gamma_in, global_mask, q_l):
    """
    Constant-length time-correlated sparse incremental aggregation. The entries on the global mask are always
    aggregated in Gamma, the entries outside are added to the incoming Lambda which is then sparsified to q_l
    entries. The error of node k lives outside of the global mask.
    """
    g_k = as_sparse(g_k)
    _check_mixed(gamma_in, global_mask)
    _check_dims(state, g_k, gamma_in)
    g_tilde = error_feedback(state, g_k)
    gamma_values = gamma_in.gamma_values + g_tilde.gather(global_mask)
    lam_tilde = add(gamma_in.lam, complement_mask_apply(global_mask, g_tilde))
    lam = top_q(lam_tilde, q_l)
    state.error = complement_mask_apply(support(lam), lam_tilde)
    return MixedAggregate(global_mask, gamma_values, lam)


def dense_step(state, g_k, gamma_in):
    """Incremental aggregation without sparsification nor error feedback."""
    g_k = as_sparse(g_k)
    _check_plain(gamma_in)
    _check_dims(state, g_k, gamma_in)
    return DenseAggregate(add(scale(g_k, state.d_k), gamma_in.vector))


__all__ = ["sia_step", "re_sia_step", "cl_sia_step", "compute_global_mask", "tc_sia_step", "cl_tc_sia_step",
           "dense_step", "error_feedback"]
