"""The order isomorphism between inductive and geometric clusters.

Inductive to geometric evaluates the skeleton with the Shift algebra and each
gap's pattern with the Tree algebra (minus its root edge).  Geometric to
inductive cuts the subject term along the connected components of the
position set.  Lattice operations on inductive clusters are transported
through this pair of maps.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Mapping

from .geometry import (EDGE, ROOT_EDGE, VERTEX, ClusterError, GeometricCluster,
                       Position, PositionSet, check_cluster, g_bottom, g_join,
                       g_meet, g_top, internal_positions, shift, tree_op)
from .inductive import InductiveCluster, canonicalize, flatten, validate
from .terms import Fun, Meta, Path, Term, Var, std_var

EMPTY: PositionSet = frozenset()


def shift_op(children) -> PositionSet:
    out = set()
    for i, ps in enumerate(children, 1):
        out.update(shift(i, ps))
    return frozenset(out)


def _tree_eval(pattern: Term, env: Mapping[Var, PositionSet]) -> PositionSet:
    if isinstance(pattern, Var):
        return env[pattern]
    return tree_op(_tree_eval(a, env) for a in pattern.args)


def _cluster_eval(skeleton: Term, assignment: Mapping[str, Term]) -> PositionSet:
    if isinstance(skeleton, Var):
        return EMPTY
    args = [_cluster_eval(a, assignment) for a in skeleton.args]
    if isinstance(skeleton, Meta):
        env = {std_var(i): ps for i, ps in enumerate(args, 1)}
        return _tree_eval(assignment[skeleton.name], env) - {ROOT_EDGE}
    return shift_op(args)


@lru_cache(maxsize=65536)
def to_geometric(c: InductiveCluster) -> GeometricCluster:
    """Interpret ``c`` in the (Shift, Tree) cluster algebra."""
    return GeometricCluster(flatten(c), _cluster_eval(c.skeleton, c.assignment))


def gap_positions(c: InductiveCluster) -> Dict[str, PositionSet]:
    """Absolute positions (in the flattened term) covered by each gap's pattern."""
    cached = c.__dict__.get("_gap_positions")
    if cached is not None:
        return dict(cached)
    out = {}

    def walk(s, flat):
        if isinstance(s, Var):
            return
        if isinstance(s, Fun):
            for i, a in enumerate(s.args, 1):
                walk(a, flat + (i,))
            return
        pattern = c.assignment[s.name]
        out[s.name] = frozenset(Position(flat + p.path, p.kind)
                                for p in internal_positions(pattern))
        holes = _variable_paths(pattern)
        for i, a in enumerate(s.args, 1):
            walk(a, flat + holes[std_var(i)])
    walk(c.skeleton, ())
    object.__setattr__(c, "_gap_positions", out)
    return dict(out)


def _variable_paths(t: Term) -> Dict[Var, Path]:
    out = {}

    def walk(s, p):
        if isinstance(s, Var):
            out[s] = p
        else:
            for i, a in enumerate(s.args, 1):
                walk(a, p + (i,))
    walk(t, ())
    return out


def _quotient(ps: PositionSet, i: int) -> PositionSet:
    """Left quotient ``i \\ P``: positions below argument ``i``, re-rooted."""
    return frozenset(Position(p.path[1:], p.kind) for p in ps if p.path[:1] == (i,))


def to_inductive(t: Term, g) -> InductiveCluster:
    """The canonical inductive cluster for term ``t`` and geometric cluster ``g``.

    ``g`` may be a ``GeometricCluster`` or a bare position set.
    """
    ps = g.positions if isinstance(g, GeometricCluster) else frozenset(g)
    if isinstance(g, GeometricCluster) and g.subject != t:
        raise ClusterError("cluster is for %s, not %s" % (g.subject, t))
    ok, reason = check_cluster(t, ps)
    if not ok:
        raise ClusterError(reason)
    assignment = {}

    def build(s: Term, rel: PositionSet) -> Term:
        if isinstance(s, Var):
            return s
        if Position((), VERTEX) not in rel:
            return Fun(s.name, tuple(build(a, _quotient(rel, i))
                                     for i, a in enumerate(s.args, 1)))
        fringe: List[Term] = []

        def cut(n: Term, path: Path) -> Term:
            # n lies in the component; children across missing edges are fringe
            kids = []
            for i, a in enumerate(n.args, 1):
                cp = path + (i,)
                if Position(cp, EDGE) in rel:
                    kids.append(cut(a, cp))
                else:
                    sub = frozenset(Position(p.path[len(cp):], p.kind)
                                    for p in rel if p.path[:len(cp)] == cp)
                    fringe.append(build(a, sub))
                    kids.append(std_var(len(fringe)))
            return Fun(n.name, tuple(kids))
        pattern = cut(s, ())
        name = "_G%d" % len(assignment)
        assignment[name] = pattern
        return Meta(name, tuple(fringe))

    return canonicalize(InductiveCluster(build(t, ps), assignment))


# ---------------------------------------------------------------------------
# transported lattice operations

def _subject(c1: InductiveCluster, c2: InductiveCluster) -> Term:
    t1, t2 = flatten(c1), flatten(c2)
    if t1 != t2:
        raise ClusterError("clusters are for different terms: %s vs %s" % (t1, t2))
    return t1


def ind_join(c1: InductiveCluster, c2: InductiveCluster) -> InductiveCluster:
    t = _subject(c1, c2)
    return to_inductive(t, g_join(to_geometric(c1), to_geometric(c2)))


def ind_meet(c1: InductiveCluster, c2: InductiveCluster) -> InductiveCluster:
    t = _subject(c1, c2)
    return to_inductive(t, g_meet(to_geometric(c1), to_geometric(c2)))


def ind_top(t: Term) -> InductiveCluster:
    return to_inductive(t, g_top(t))


def ind_bottom(t: Term) -> InductiveCluster:
    return to_inductive(t, g_bottom(t))


def check_valid(c: InductiveCluster):
    problems = validate(c)
    if problems:
        raise ClusterError("; ".join(problems))
