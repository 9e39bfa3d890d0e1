"""Vertex/edge positions, the Tree algebra, and geometric clusters.

A vertex position names a node; the edge position ``p.i:e`` names the edge
from node ``p`` to its ``i``-th child, so it carries the same path as the
child vertex ``p.i:v``.  Geometric clusters are edge-closed sets of internal
positions of a subject term, ordered by inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import FrozenSet, Iterable, List, NamedTuple, Optional, Tuple

from .limits import CapExceeded
from .terms import Fun, Path, Term, Var, format_path, parse_path

VERTEX = "v"
EDGE = "e"


class Position(NamedTuple):
    path: Path
    kind: str

    def __str__(self):
        return "%s:%s" % (format_path(self.path), self.kind)

    @property
    def is_edge(self):
        return self.kind == EDGE


PositionSet = FrozenSet[Position]

ROOT_VERTEX = Position((), VERTEX)
ROOT_EDGE = Position((), EDGE)


def vertex(*path: int) -> Position:
    return Position(tuple(path), VERTEX)


def edge(*path: int) -> Position:
    return Position(tuple(path), EDGE)


def position_key(p: Position):
    # shallower first, then lexicographic; an edge sorts just before its lower endpoint
    return (len(p.path), p.path, 0 if p.kind == EDGE else 1)


def sorted_positions(ps: Iterable[Position]) -> List[Position]:
    return sorted(ps, key=position_key)


def format_positions(ps: Iterable[Position]) -> str:
    return "{%s}" % ", ".join(map(str, sorted_positions(ps)))


def parse_position(text: str) -> Position:
    path, sep, kind = text.strip().rpartition(":")
    if not sep or kind not in (VERTEX, EDGE):
        raise ValueError("bad position %r (expected e.g. '1.2:v' or 'eps:e')" % text)
    return Position(parse_path(path), kind)


def positions_to_json(ps: Iterable[Position]) -> List[str]:
    return [str(p) for p in sorted_positions(ps)]


def positions_from_json(items: Iterable[str]) -> PositionSet:
    return frozenset(parse_position(s) for s in items)


def shift(i: int, ps: Iterable[Position]) -> PositionSet:
    """``i . P``: prefix every path with ``i``."""
    return frozenset(Position((i,) + p.path, p.kind) for p in ps)


# ---------------------------------------------------------------------------
# the Tree algebra

def tree_op(children: Iterable[PositionSet]) -> PositionSet:
    out = {ROOT_EDGE, ROOT_VERTEX}
    for i, ps in enumerate(children, 1):
        out.update(shift(i, ps))
    return frozenset(out)


def _fold_tree(t: Term, var_value: PositionSet) -> PositionSet:
    if isinstance(t, Var):
        return var_value
    if not isinstance(t, Fun):
        raise TypeError("geometric positions are defined on terms, got gap %s" % t)
    return tree_op(_fold_tree(a, var_value) for a in t.args)


@lru_cache(maxsize=65536)
def tree_positions(t: Term) -> PositionSet:
    """All positions of ``t``: the Tree fold with variables as ``{eps:e, eps:v}``."""
    return _fold_tree(t, frozenset({ROOT_EDGE, ROOT_VERTEX}))


@lru_cache(maxsize=65536)
def internal_positions(t: Term) -> PositionSet:
    """The Tree fold with variables as the empty set, minus the root edge."""
    return _fold_tree(t, frozenset()) - {ROOT_EDGE}


# ---------------------------------------------------------------------------
# clusters

class ClusterError(ValueError):
    pass


def check_cluster(t: Term, ps: Iterable[Position]) -> Tuple[bool, Optional[str]]:
    """``(ok, reason)``; ``reason`` describes the first violation found."""
    ps = frozenset(ps)
    internal = internal_positions(t)
    if ps <= internal and all(Position(p.path, VERTEX) in ps
                              and Position(p.path[:-1], VERTEX) in ps
                              for p in ps if p.kind == EDGE):
        return True, None
    # slow path: report the first violation in canonical order
    for p in sorted_positions(ps):
        if p not in internal:
            return False, "%s is not an internal position of %s" % (p, t)
    for p in sorted_positions(ps):
        if p.kind == EDGE:
            for end in (Position(p.path[:-1], VERTEX), Position(p.path, VERTEX)):
                if end not in ps:
                    return False, "edge %s lacks its endpoint %s" % (p, end)
    return True, None


def is_cluster(t: Term, ps: Iterable[Position]) -> bool:
    return check_cluster(t, ps)[0]


@dataclass(frozen=True)
class GeometricCluster:
    subject: Term
    positions: PositionSet

    def __post_init__(self):
        object.__setattr__(self, "positions", frozenset(self.positions))
        ok, reason = check_cluster(self.subject, self.positions)
        if not ok:
            raise ClusterError(reason)

    def __str__(self):
        return format_positions(self.positions)

    def __le__(self, other):
        _same_subject(self, other)
        return self.positions <= other.positions

    def __lt__(self, other):
        _same_subject(self, other)
        return self.positions < other.positions


def _same_subject(c1: GeometricCluster, c2: GeometricCluster):
    if c1.subject != c2.subject:
        raise ClusterError("clusters are for different terms: %s vs %s"
                           % (c1.subject, c2.subject))


def components(c: GeometricCluster) -> List[PositionSet]:
    """Connected components (patterns), ordered by their root in preorder."""
    return _components(c.positions)


def _components(ps: PositionSet) -> List[PositionSet]:
    vertices = sorted(p.path for p in ps if p.kind == VERTEX)
    parent = {}
    for q in vertices:
        if q and Position(q, EDGE) in ps:
            parent[q] = q[:-1]
    roots = {}
    for q in vertices:  # parents sort before children, so roots are known
        roots[q] = roots[parent[q]] if q in parent else q
    groups = {}
    for p in ps:
        groups.setdefault(roots[p.path], set()).add(p)
    return [frozenset(groups[r]) for r in sorted(groups)]


def g_join(c1: GeometricCluster, c2: GeometricCluster) -> GeometricCluster:
    _same_subject(c1, c2)
    return GeometricCluster(c1.subject, c1.positions | c2.positions)


def g_meet(c1: GeometricCluster, c2: GeometricCluster) -> GeometricCluster:
    _same_subject(c1, c2)
    return GeometricCluster(c1.subject, c1.positions & c2.positions)


def g_top(t: Term) -> GeometricCluster:
    return GeometricCluster(t, internal_positions(t))


def g_bottom(t: Term) -> GeometricCluster:
    return GeometricCluster(t, frozenset())


def cluster_sort_key(c: GeometricCluster):
    return (len(c.positions), [position_key(p) for p in sorted_positions(c.positions)])


def enumerate_clusters(t: Term, cap: int = 14) -> List[GeometricCluster]:
    """Every geometric cluster of ``t``, in canonical order.

    Chooses a vertex set, then any subset of the internal edges whose two
    endpoints are both chosen.
    """
    internal = internal_positions(t)
    if len(internal) > cap:
        raise CapExceeded("%s has %d internal positions (cap %d)" % (t, len(internal), cap))
    vertices = sorted_positions(p for p in internal if p.kind == VERTEX)
    edges = sorted_positions(p for p in internal if p.kind == EDGE)
    out = []
    for k in range(len(vertices) + 1):
        for vs in combinations(vertices, k):
            chosen = {v.path for v in vs}
            usable = [e for e in edges if e.path in chosen and e.path[:-1] in chosen]
            for j in range(len(usable) + 1):
                for es in combinations(usable, j):
                    out.append(GeometricCluster(t, frozenset(vs) | frozenset(es)))
    out.sort(key=cluster_sort_key)
    return out
