# coding: utf-8
"""
Execution of the incremental aggregation along the chain of clients K -> K-1 -> ... -> 1 -> PS.
"""
import logging

from sparseia.core.errors import ContractViolationError
from sparseia.core.sparse import as_sparse
from sparseia.aggregation.aggregates import Algorithm, zero_aggregate
from sparseia.aggregation.steps import (sia_step, re_sia_step, cl_sia_step, tc_sia_step, cl_tc_sia_step,
                                        dense_step)
from sparseia.cost.model import WireParams
from sparseia.cost.ledger import CommLedger


logger = logging.getLogger(__name__)


def _run_step(params, state, g_k, gamma_in, global_mask):
    alg = params.algorithm
    if alg == Algorithm.SIA:
        return sia_step(state, g_k, gamma_in, params.q)
    elif alg == Algorithm.RE_SIA:
        return re_sia_step(state, g_k, gamma_in, params.q)
    elif alg == Algorithm.CL_SIA:
        return cl_sia_step(state, g_k, gamma_in, params.q)
    elif alg == Algorithm.TC_SIA:
        return tc_sia_step(state, g_k, gamma_in, global_mask, params.q_l)
    elif alg == Algorithm.CL_TC_SIA:
        return cl_tc_sia_step(state, g_k, gamma_in, global_mask, params.q_l)
    elif alg == Algorithm.DENSE:
        return dense_step(state, g_k, gamma_in)
    raise ContractViolationError("Unknown algorithm {}".format(alg))


def chain_aggregate(nodes, gradients, params, global_mask=None, wire=None, ledger=None, round_index=0):
    """
    Runs the aggregation step of the selected algorithm at nodes K, K-1, ..., 1.
    nodes[i] and gradients[i] belong to client i+1. Node K starts from the zero aggregate and the same
    global mask is used by every node. The error feedback of each NodeState is updated in place.

    Args:
        nodes: list of NodeState.
        gradients: list of effective gradients, SparseVector or dense arrays.
        params: AlgorithmParams.
        global_mask: Mask, required by the time-correlated algorithms.
        wire: WireParams used for the accounting. Defaults to omega=32 and the dimension of the gradients.
        ledger: CommLedger to which the hop records are appended. A new one is created if None.
        round_index: round stored in the hop records.

    Returns:
        (gamma_1, ledger)
    """
    if len(nodes) != len(gradients):
        raise ContractViolationError("Got {} nodes and {} gradients".format(len(nodes), len(gradients)))
    if len(nodes) < 1:
        raise ContractViolationError("The chain should contain at least one node")
    if params.algorithm not in Algorithm.ALL:
        raise ContractViolationError("Unknown algorithm {}".format(params.algorithm))

    gradients = [as_sparse(g) for g in gradients]
    dim = gradients[0].dim
    if params.is_time_correlated and global_mask is None:
        raise ContractViolationError("Algorithm {} requires a global mask".format(params.algorithm))
    params.validate(dim)
    if wire is None:
        wire = WireParams(dim)
    if ledger is None:
        ledger = CommLedger()

    gamma = zero_aggregate(params, dim, global_mask)
    for state, g_k in reversed(list(zip(nodes, gradients))):
        gamma = _run_step(params, state, g_k, gamma, global_mask)
        ledger.log_hop(round_index, state.k, gamma, wire)

    return gamma, ledger
