"""Clusters, multi-steps and critical peaks for left-linear term rewriting."""

from .geometry import (GeometricCluster, Position, components, edge, enumerate_clusters,
                       g_bottom, g_join, g_meet, g_top, internal_positions,
                       tree_positions, vertex)
from .inductive import InductiveCluster, coarsening_le, flatten, validate, witness_check
from .isomorphism import to_geometric, to_inductive
from .limits import CapExceeded, Limits
from .peaks import (Peak, bounded_joinable, classical_critical_peaks, decompose,
                    diamond_check, equivalence_check, is_critical,
                    local_confluence_report, orthogonality)
from .rewriting import (TRS, MultiStep, Rule, load_trs, make_multistep, multistep_at,
                        multisteps_from, print_trs, project)
from .terms import Fun, Meta, Var, parse_term, unify

__all__ = [
    "CapExceeded",
    "Fun",
    "GeometricCluster",
    "InductiveCluster",
    "Limits",
    "Meta",
    "MultiStep",
    "Peak",
    "Position",
    "Rule",
    "TRS",
    "Var",
    "bounded_joinable",
    "classical_critical_peaks",
    "coarsening_le",
    "components",
    "decompose",
    "diamond_check",
    "edge",
    "enumerate_clusters",
    "equivalence_check",
    "flatten",
    "g_bottom",
    "g_join",
    "g_meet",
    "g_top",
    "internal_positions",
    "is_critical",
    "load_trs",
    "local_confluence_report",
    "make_multistep",
    "multistep_at",
    "multisteps_from",
    "orthogonality",
    "parse_term",
    "print_trs",
    "project",
    "to_geometric",
    "to_inductive",
    "tree_positions",
    "unify",
    "validate",
    "vertex",
    "witness_check",
]

__version__ = "0.1.0"
