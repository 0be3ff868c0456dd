"""Punctured LDGM-LDPC compound codes: ensembles, erasure decoding, density evolution and bounds."""

from .channel import ChannelModel, bec, biawgn, bsc, capacity, g_functional, llr_density
from .decoder import decode, peel
from .degree_dist import DegreeDistribution, design_rate, node_perspective
from .density_evolution import (
    DEConfig,
    DEState,
    de_step,
    run_to_fixed_point,
    stability_closed_form,
    stability_jacobian,
    threshold_search,
)
from .ensemble import EnsembleParams, LdgmLdpcGraph, sample_codeword, sample_graph

__version__ = "0.1.0"

__all__ = [
    "ChannelModel", "bec", "biawgn", "bsc", "capacity", "g_functional", "llr_density",
    "decode", "peel",
    "DegreeDistribution", "design_rate", "node_perspective",
    "DEConfig", "DEState", "de_step", "run_to_fixed_point",
    "stability_closed_form", "stability_jacobian", "threshold_search",
    "EnsembleParams", "LdgmLdpcGraph", "sample_codeword", "sample_graph",
]
