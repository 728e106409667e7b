"""Erdos-Ko-Rado properties of finite group actions.

Groups are enumerated from concrete generators, acted on cosets of a
subgroup, and searched for maximum intersecting sets through an exact clique
solver on the derangement graph.
"""
from __future__ import annotations

from .action import CosetAction, build_coset_action, has_fixed_point, is_intersecting, stabilizer
from .catalog import build_named, load_group
from .ekrgraph import (DerangementGraph, EKRReport, build_graph, check_strong_ekr, check_weak_ekr,
                       clique_coclique_check, enumerate_maximum_cliques_through_identity,
                       max_clique, verify_independent)
from .finfield import FiniteField, make_field
from .groupcore import (CapExceeded, Group, GroupError, Subgroup, conjugate_closure,
                        enumerate_group, find_complement, is_coset_of_conjugate, left_cosets,
                        subgroup_generate)
from .kernels import BACKEND
from .witnesses import WitnessCertificate, build_witness

__all__ = [
    "BACKEND", "CapExceeded", "CosetAction", "DerangementGraph", "EKRReport", "FiniteField",
    "Group", "GroupError", "Subgroup", "WitnessCertificate", "build_coset_action", "build_graph",
    "build_named", "build_witness", "check_strong_ekr", "check_weak_ekr", "clique_coclique_check",
    "conjugate_closure", "enumerate_group", "enumerate_maximum_cliques_through_identity",
    "find_complement", "has_fixed_point", "is_coset_of_conjugate", "is_intersecting",
    "left_cosets", "load_group", "make_field", "max_clique", "stabilizer", "subgroup_generate",
    "verify_independent",
]

__version__ = "0.1.0"
