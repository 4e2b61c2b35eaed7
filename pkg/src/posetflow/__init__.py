"""Exact flow machinery for Sperner questions on graded posets."""

from .errors import PosetflowError
from .families import (
    Permutation,
    absolute_leq,
    boolean_lattice,
    check_absolute_reverse_refinement,
    decompose_copies,
    partition_lattice,
    stirling_row,
    symmetric_group_refinement,
)
from .flownet import Network, hasse_network, max_flow, min_flow, nmc_bruteforce, normalized_flow
from .morphism import collapse_to_chain, collapse_to_two_chain, pull_back_antichain, verify_flow_morphism
from .poset import GradedPoset, brute_force_k_width, brute_force_width, build_poset, is_antichain, levels, product
from .sperner import check_nfp, erdos_k_width_formula, is_sperner, proof_inequality, width

__version__ = "0.1.0"
