# coding: utf-8
"""Sparse incremental aggregation for multi-hop federated learning."""
from sparseia.core.release import __version__
