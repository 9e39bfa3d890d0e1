"""Desk-scale caps shared by the enumeration and search routines."""

from dataclasses import dataclass


class CapExceeded(RuntimeError):
    """An enumeration or search would exceed a configured cap."""


@dataclass(frozen=True)
class Limits:
    max_positions: int = 14      # internal positions per term in enumerate_clusters
    max_occurrences: int = 20    # redex occurrences per term in multisteps_from
    max_depth: int = 8           # bounded_joinable depth ceiling
    max_states: int = 20000      # reachable terms per side in bounded_joinable
    size_bound: int = 6          # term size in equivalence_check
    max_terms: int = 200000      # terms enumerated by terms_up_to


DEFAULT_LIMITS = Limits()
