"""Skeletons with gaps, patterns, and inductive clusters.

An inductive cluster is a pair ``<M, [X1 := l1, ..., Xk := lk]>`` of a skeleton
``M`` in which every gap occurs exactly once, and an assignment of patterns
(non-variable, linear, standard terms) to those gaps.  Two clusters are equal
when their canonical forms (gaps renamed ``X1, X2, ...`` left to right) are.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .terms import (Fun, Meta, Path, Term, Var, apply_subst, has_meta,
                    is_linear, is_standard, parse_term, std_var, variables)

GapSubstitution = Dict[str, Term]


def gap_occurrences(skeleton: Term) -> List[Tuple[Path, Meta]]:
    """Gap applications in preorder with their node paths."""
    out = []

    def walk(s, p):
        if isinstance(s, Var):
            return
        if isinstance(s, Meta):
            out.append((p, s))
        for i, a in enumerate(s.args, 1):
            walk(a, p + (i,))
    walk(skeleton, ())
    return out


def gaps_of(skeleton: Term) -> List[str]:
    return [m.name for _, m in gap_occurrences(skeleton)]


def arity(pattern: Term) -> int:
    return len(variables(pattern))


def so_subst(skeleton: Term, mapping: Mapping[str, Term]) -> Term:
    """Second-order substitution: ``X(N1..Nn)`` becomes ``mapping[X]`` with
    ``xi := Ni`` (arguments substituted first).  Unmapped gaps are kept."""
    if isinstance(skeleton, Var):
        return skeleton
    args = tuple(so_subst(a, mapping) for a in skeleton.args)
    if isinstance(skeleton, Meta) and skeleton.name in mapping:
        body = mapping[skeleton.name]
        return apply_subst({std_var(i): a for i, a in enumerate(args, 1)}, body)
    if not skeleton.args:
        return skeleton
    return type(skeleton)(skeleton.name, args)


def rename_gaps(skeleton: Term, renaming: Mapping[str, str]) -> Term:
    if isinstance(skeleton, Var):
        return skeleton
    args = tuple(rename_gaps(a, renaming) for a in skeleton.args)
    if isinstance(skeleton, Meta):
        return Meta(renaming.get(skeleton.name, skeleton.name), args)
    return Fun(skeleton.name, args) if args else skeleton


def skeleton_size(skeleton: Term) -> int:
    """Number of function-symbol and gap nodes (variables are not counted)."""
    if isinstance(skeleton, Var):
        return 0
    return 1 + sum(skeleton_size(a) for a in skeleton.args)


def pattern_problems(pattern: Term) -> List[str]:
    problems = []
    if isinstance(pattern, Var):
        problems.append("pattern is a variable")
    if has_meta(pattern):
        problems.append("pattern %s contains a gap" % pattern)
    if not is_linear(pattern):
        problems.append("pattern %s is not linear" % pattern)
    elif not is_standard(pattern):
        problems.append("pattern %s is not standard" % pattern)
    return problems


@dataclass(frozen=True, eq=False)
class InductiveCluster:
    skeleton: Term
    assignment: Mapping[str, Term]

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))

    def gaps(self) -> List[str]:
        gs = self.__dict__.get("_gaps")
        if gs is None:
            gs = gaps_of(self.skeleton)
            object.__setattr__(self, "_gaps", gs)
        return list(gs)

    def canonical_key(self):
        key = self.__dict__.get("_key")
        if key is None:
            c = self if is_canonical(self) else canonicalize(self)
            key = (c.skeleton, tuple((g, c.assignment.get(g)) for g in c.gaps()))
            object.__setattr__(self, "_key", key)
        return key

    def __eq__(self, other):
        if not isinstance(other, InductiveCluster):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def __str__(self):
        order = self.gaps() + sorted(set(self.assignment) - set(self.gaps()))
        subst = ", ".join("%s := %s" % (g, self.assignment[g])
                          for g in order if g in self.assignment)
        return "⟨%s, [%s]⟩" % (self.skeleton, subst)

    __repr__ = __str__


def validate(c: InductiveCluster) -> List[str]:
    """All violated side conditions; empty iff ``c`` is a valid cluster."""
    problems = []
    occurrences = gap_occurrences(c.skeleton)
    names = [m.name for _, m in occurrences]
    seen = set()
    for n in names:
        if n in seen:
            problems.append("skeleton not linear in gaps: %s occurs more than once" % n)
        seen.add(n)
    for n in sorted(seen - set(c.assignment)):
        problems.append("gap %s has no pattern assigned" % n)
    for n in sorted(set(c.assignment) - seen):
        problems.append("assigned gap %s does not occur in the skeleton" % n)
    for _, m in occurrences:
        pattern = c.assignment.get(m.name)
        if pattern is None:
            continue
        for msg in pattern_problems(pattern):
            problems.append("%s: %s" % (m.name, msg))
        if not isinstance(pattern, Var) and arity(pattern) != len(m.args):
            problems.append("%s: applied to %d arguments but its pattern has arity %d"
                            % (m.name, len(m.args), arity(pattern)))
    return problems


def flatten(c: InductiveCluster) -> Term:
    """The term ``M[X := l]`` the cluster is for."""
    t = c.__dict__.get("_flat")
    if t is None:
        t = so_subst(c.skeleton, c.assignment)
        object.__setattr__(c, "_flat", t)
    return t


def canonicalize(c: InductiveCluster) -> InductiveCluster:
    order = c.gaps()
    renaming = {g: "X%d" % i for i, g in enumerate(order, 1)}
    return InductiveCluster(rename_gaps(c.skeleton, renaming),
                            {renaming[g]: c.assignment[g] for g in order})


def is_canonical(c: InductiveCluster) -> bool:
    return c.gaps() == ["X%d" % i for i in range(1, len(c.gaps()) + 1)]


# ---------------------------------------------------------------------------
# refinement order

def witness_check(fine: InductiveCluster, coarse: InductiveCluster,
                  gamma: Mapping[str, Term]) -> bool:
    """Do ``gamma(coarse.skeleton) = fine.skeleton`` and
    ``gamma(Z)[fine.assignment] = coarse.assignment(Z)`` for every coarse gap hold?"""
    coarse_gaps = coarse.gaps()
    if set(gamma) != set(coarse_gaps):
        return False
    for z in coarse_gaps:
        body = gamma[z]
        if isinstance(body, Var) or not is_linear(body) or not is_standard(body):
            return False
        if so_subst(body, fine.assignment) != coarse.assignment.get(z):
            return False
    return so_subst(coarse.skeleton, gamma) == fine.skeleton


def coarsening_le(fine: InductiveCluster,
                  coarse: InductiveCluster) -> Optional[GapSubstitution]:
    """Witness ``gamma`` that ``coarse`` is coarser than (or equal to) ``fine``.

    Decided on the geometric side; ``gamma`` is then read off the subject term
    and re-verified with ``witness_check``.  Returns None if no witness exists.
    """
    from .isomorphism import gap_positions

    subject = flatten(fine)
    if flatten(coarse) != subject:
        from .geometry import ClusterError
        raise ClusterError("clusters are for different terms: %s vs %s"
                           % (subject, flatten(coarse)))
    fine_pos = gap_positions(fine)
    coarse_pos = gap_positions(coarse)
    fine_all = frozenset().union(*fine_pos.values())
    coarse_all = frozenset().union(*coarse_pos.values())
    if not fine_all <= coarse_all:
        return None
    gamma = {z: _pattern_skeleton(subject, ps, fine_pos) for z, ps in coarse_pos.items()}
    if not witness_check(fine, coarse, gamma):
        raise AssertionError("constructed witness fails its defining equations: %r" % gamma)
    return gamma


def _pattern_skeleton(subject: Term, component, fine_pos) -> Term:
    """Skeleton over the fine gaps inside one coarse pattern ``component``."""
    from .geometry import EDGE, VERTEX, Position

    fine_roots = {min(p.path for p in ps): (g, ps) for g, ps in fine_pos.items()}
    counter = iter(range(1, 1 << 30))
    root = min(p.path for p in component)

    def arg_for(path, node):
        if Position(path, EDGE) in component:
            return emit(path, node)
        return std_var(next(counter))

    def emit(path, node):
        if path in fine_roots:
            name, own = fine_roots[path]
            args = []

            def walk(p, n):
                for i, child in enumerate(n.args, 1):
                    cp = p + (i,)
                    if Position(cp, EDGE) in own:
                        walk(cp, child)
                    else:
                        args.append(arg_for(cp, child))
            walk(path, node)
            return Meta(name, tuple(args))
        assert Position(path, VERTEX) in component
        return Fun(node.name, tuple(arg_for(path + (i,), child)
                                    for i, child in enumerate(node.args, 1)))

    node = subject
    for i in root:
        node = node.args[i - 1]
    return emit(root, node)


# ---------------------------------------------------------------------------
# JSON

_STD_VAR = re.compile(r"x\d+")


def cluster_to_json(c: InductiveCluster) -> dict:
    return {"skeleton": str(c.skeleton),
            "assignment": {g: str(c.assignment[g]) for g in c.gaps() if g in c.assignment}}


def cluster_from_json(obj: Mapping, vars=()) -> InductiveCluster:
    """Decode ``{"skeleton": ..., "assignment": {...}}``; skeleton variables are ``vars``."""
    assignment = {}
    for g, text in obj["assignment"].items():
        pattern_vars = set(_STD_VAR.findall(text))
        assignment[g] = parse_term(text, pattern_vars)
    gaps = {g: arity(p) for g, p in assignment.items()}
    skeleton = parse_term(obj["skeleton"], vars, gaps=gaps)
    return InductiveCluster(skeleton, assignment)
