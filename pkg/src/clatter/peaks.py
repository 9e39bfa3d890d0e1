"""Peaks, the lattice criticality test, classical critical pairs, peak
decomposition, and bounded confluence analyses.

A peak is critical when the join of the left-hand-side clusters of its two
steps is the top cluster of its (standardized) source.  The classical
unification-based construction is implemented separately so the two can be
checked against each other.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .geometry import (EDGE, Position, PositionSet, internal_positions,
                       positions_to_json)
from .inductive import InductiveCluster
from .isomorphism import to_geometric
from .limits import DEFAULT_LIMITS, CapExceeded, Limits
from .rewriting import (TRS, MultiStep, Rule, canonical_step,
                        make_multistep, multistep_at, multistep_to_json,
                        multisteps_from, one_step_reducts, recompose,
                        redex_occurrences, target)
from .terms import (Path, Substitution, Term, Var, apply_subst, format_path,
                    fresh_var, linearize, match_pattern, node_paths,
                    rename_apart, replace_at, standardize, subterm_at,
                    terms_up_to, unify)

log = logging.getLogger(__name__)


class PeakError(ValueError):
    pass


@dataclass(frozen=True)
class Peak:
    source: Term
    left: MultiStep
    right: MultiStep

    def __post_init__(self):
        if self.left.source != self.source or self.right.source != self.source:
            raise PeakError("both steps of a peak must start from %s" % self.source)

    def swapped(self) -> "Peak":
        return Peak(self.source, self.right, self.left)

    def pattern_count(self) -> int:
        return len(self.left.gaps()) + len(self.right.gaps())

    def targets(self) -> Tuple[Term, Term]:
        return target(self.left), target(self.right)

    def key(self):
        """Source plus the (rule, position) sets of both steps."""
        return (self.source, _occ_key(self.left), _occ_key(self.right))

    def __str__(self):
        s, u = self.targets()
        return "%s <- %s -> %s" % (s, self.source, u)


def _occ_key(m: MultiStep):
    return tuple((r.name, p) for r, p in m.occurrences())


def peak_to_json(p: Peak) -> dict:
    s, u = p.targets()
    return {"source": str(p.source),
            "left": multistep_to_json(p.left)["redexes"],
            "right": multistep_to_json(p.right)["redexes"],
            "targets": [str(s), str(u)]}


# ---------------------------------------------------------------------------
# criticality

def lhs_cluster(m: MultiStep) -> InductiveCluster:
    """The step's cluster with every rule symbol replaced by its left-hand side."""
    return m.lhs_cluster()


def _linearize_step(m: MultiStep) -> MultiStep:
    # source variable occurrences and skeleton variable occurrences agree left to right
    skel, _ = linearize(m.skeleton)
    src, _ = linearize(m.source)
    return MultiStep(src, skel, m.assignment)


def _memo(m: MultiStep, name: str, key, compute):
    # per-step results shared by every peak the step takes part in
    table = m.__dict__.get(name)
    if table is None:
        table = {}
        object.__setattr__(m, name, table)
    if key not in table:
        table[key] = compute()
    return table[key]


def _std_facts(m: MultiStep):
    def compute():
        std = _linearize_step(m)
        return std, to_geometric(lhs_cluster(std)).positions, canonical_step(std)
    return _memo(m, "_std_facts", None, compute)


def standardize_peak(p: Peak) -> Tuple[Peak, Substitution]:
    """Peak over the standardized source, and the substitution giving back ``p``.

    Every variable occurrence gets its own standard variable, so for a
    non-linear source the result is the most general peak ``p`` instantiates.
    """
    src, back = linearize(p.source)
    return Peak(src, _linearize_step(p.left), _linearize_step(p.right)), back


@dataclass(frozen=True)
class CriticalityReport:
    source: Term
    join_positions: PositionSet
    top_positions: PositionSet
    missing: PositionSet
    meet_positions: PositionSet
    is_critical: bool
    is_trivial: bool
    overlap_size: int

    def to_json(self) -> dict:
        return {"verdict": "critical" if self.is_critical else "not critical",
                "source": str(self.source),
                "join": positions_to_json(self.join_positions),
                "top": positions_to_json(self.top_positions),
                "missing": positions_to_json(self.missing),
                "meet": positions_to_json(self.meet_positions),
                "isCritical": self.is_critical,
                "isTrivial": self.is_trivial,
                "overlapSize": self.overlap_size}


def is_critical(p: Peak) -> CriticalityReport:
    std_left, left, canon_left = _std_facts(p.left)
    _, right, canon_right = _std_facts(p.right)
    join = left | right
    meet = left & right
    top = internal_positions(std_left.source)
    missing = top - join
    return CriticalityReport(
        source=std_left.source, join_positions=join, top_positions=top, missing=missing,
        meet_positions=meet, is_critical=not missing,
        is_trivial=canon_left == canon_right,
        overlap_size=len(meet))


def generalize(p: Peak) -> Tuple[Peak, Substitution]:
    """For a critical peak: the critical peak over a standard source it is a
    variable-substitution instance of, with the witnessing substitution."""
    report = is_critical(p)
    if not report.is_critical:
        raise PeakError("peak is not critical")
    general, _ = standardize_peak(p)
    sigma = match_pattern(general.source, p.source)
    assert sigma is not None and apply_subst(sigma, general.source) == p.source
    return general, sigma


# ---------------------------------------------------------------------------
# classical critical pairs

@dataclass(frozen=True)
class CriticalPair:
    peak: Peak
    inner: Rule
    outer: Rule
    position: Path

    @property
    def targets(self) -> Tuple[Term, Term]:
        return self.peak.targets()

    def to_json(self) -> dict:
        s, u = self.targets
        return {"source": str(self.peak.source), "left": str(s), "right": str(u),
                "outer": self.outer.name, "inner": self.inner.name,
                "pos": format_path(self.position)}

    def __str__(self):
        return "%s  (outer %s, inner %s at %s)" % (
            self.peak, self.outer.name, self.inner.name, format_path(self.position))


def classical_critical_peaks(trs: TRS) -> List[CriticalPair]:
    """Overlaps by unification, left step = outer rule at the root, right step =
    inner rule at the overlap position.  The overlap of a rule with itself at the
    root is excluded."""
    out = []
    for outer in trs.rules:
        outer_lhs, _ = rename_apart(outer.lhs, "xL")
        for inner in trs.rules:
            inner_lhs, _ = rename_apart(inner.lhs, "yR")
            for p in node_paths(outer_lhs):
                sub = subterm_at(outer_lhs, p)
                if isinstance(sub, Var) or (not p and inner is outer):
                    continue
                sigma = unify(inner_lhs, sub)
                if sigma is None:
                    continue
                source, _ = standardize(apply_subst(sigma, outer_lhs))
                peak = Peak(source, multistep_at(source, trs, [(outer, ())]),
                            multistep_at(source, trs, [(inner, p)]))
                out.append(CriticalPair(peak, inner, outer, p))
    return out


@dataclass
class Report:
    verdict: str
    status: str = "ok"                # ok | refuted | unknown
    critical_pairs: List[dict] = field(default_factory=list)
    counterexamples: List[dict] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "criticalPairs": self.critical_pairs,
               "counterexamples": self.counterexamples}
        out.update(self.details)
        return out


def equivalence_check(trs: TRS, size_bound: int = 6, limits: Limits = DEFAULT_LIMITS) -> Report:
    """Cross-check classical critical peaks against the lattice definition.

    Direction 1: every classical peak is critical.  Direction 2: every
    non-trivial critical peak of two single steps from a standard term of size
    at most ``size_bound`` is, up to swapping the steps, a classical peak.
    """
    classical = classical_critical_peaks(trs)
    known = set()
    counterexamples = []
    for cp in classical:
        known.add(cp.peak.key())
        known.add(cp.peak.swapped().key())
        if not is_critical(cp.peak).is_critical:
            counterexamples.append({"direction": 1, "peak": peak_to_json(cp.peak)})
    terms = 0
    lattice_peaks = 0
    for t in terms_up_to(trs.signature, size_bound, cap=limits.max_terms):
        terms += 1
        steps = [make_multistep(t, [o]) for o in redex_occurrences(t, trs)]
        for i in range(len(steps)):
            for j in range(i + 1, len(steps)):
                peak = Peak(t, steps[i], steps[j])
                report = is_critical(peak)
                if not report.is_critical or report.is_trivial:
                    continue
                lattice_peaks += 1
                if peak.key() not in known:
                    counterexamples.append({"direction": 2, "peak": peak_to_json(peak)})
    return Report(
        verdict="equivalent" if not counterexamples else "NOT equivalent",
        status="ok" if not counterexamples else "refuted",
        critical_pairs=[cp.to_json() for cp in classical],
        counterexamples=counterexamples,
        details={"sizeBound": size_bound, "termsChecked": terms,
                 "latticeCriticalPeaks": lattice_peaks})


# ---------------------------------------------------------------------------
# decomposition

@dataclass(frozen=True)
class Decomposition:
    outer: Peak
    inner: Peak
    split_edge: Position
    var: Var

    def to_json(self) -> dict:
        return {"splitEdge": str(self.split_edge), "var": self.var.name,
                "outer": peak_to_json(self.outer), "inner": peak_to_json(self.inner)}


def _split_step(m: MultiStep, path: Path, x: Var):
    """(outer, inner, recomposes, shrinks) for cutting ``m`` at ``path``."""
    def compute():
        t0 = replace_at(m.source, path, x)
        t1 = subterm_at(m.source, path)
        above, below = [], []
        for rule, p in m.occurrences():
            if p[:len(path)] == path:
                below.append((rule, p[len(path):]))
            else:
                above.append((rule, p))
        o, i = _step_from(t0, above), _step_from(t1, below)
        return (o, i, recompose(o, x, i) == m,
                o.size() < m.size() and i.size() < m.size())
    return _memo(m, "_splits", (path, x), compute)


def _step_from(t: Term, pairs) -> MultiStep:
    from .rewriting import occurrence
    occs = [occurrence(t, r, p) for r, p in pairs]
    assert all(o is not None for o in occs)
    return make_multistep(t, occs)


def decompose(p: Peak) -> Decomposition:
    """Split a non-critical peak with at least two patterns along an uncovered edge.

    The leftmost-outermost edge not covered by either step is cut; each
    pattern lies wholly above or below it.
    """
    report = is_critical(p)
    if report.is_critical:
        raise PeakError("peak is critical")
    if p.pattern_count() < 2:
        raise PeakError("peak has fewer than 2 patterns: proper instance of a rule "
                        "application, no analysis")
    left = to_geometric(lhs_cluster(p.left)).positions
    right = to_geometric(lhs_cluster(p.right)).positions
    uncovered = [q for q in internal_positions(p.source) - (left | right) if q.kind == EDGE]
    if not uncovered:
        raise AssertionError("no uncovered edge in non-critical peak %s" % p)
    split = min(uncovered, key=lambda q: q.path)
    path = split.path
    x = fresh_var(p.source)
    l0, l1, l_back, l_small = _split_step(p.left, path, x)
    r0, r1, r_back, r_small = _split_step(p.right, path, x)
    if not (l_back and r_back):
        raise AssertionError("decomposition of %s does not recompose" % p)
    if not (l_small and r_small):
        raise AssertionError("decomposition of %s does not shrink skeletons" % p)
    return Decomposition(Peak(l0.source, l0, r0), Peak(l1.source, l1, r1), split, x)


# ---------------------------------------------------------------------------
# bounded joinability

JOINABLE = "joinable"
NOT_JOINABLE = "not joinable"
DEPTH_EXHAUSTED = "not joinable within depth"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class JoinResult:
    verdict: str
    witness: Optional[Term] = None
    left_trace: Tuple = ()
    right_trace: Tuple = ()

    @property
    def joinable(self) -> bool:
        return self.verdict == JOINABLE

    def to_json(self) -> dict:
        return {"verdict": self.verdict,
                "witness": None if self.witness is None else str(self.witness),
                "leftTrace": [_step_json(s) for s in self.left_trace],
                "rightTrace": [_step_json(s) for s in self.right_trace]}


def _step_json(step):
    term, rule, pos = step
    return {"term": str(term), "rule": rule, "pos": format_path(pos)}


class _Closure:
    """Breadth-first reachable set with parent links."""

    def __init__(self, start: Term, trs: TRS, max_states: int):
        self.trs = trs
        self.max_states = max_states
        self.parent = {start: None}
        self.frontier = [start]

    def expand(self):
        nxt = []
        for t in self.frontier:
            for s, rule, pos in one_step_reducts(t, self.trs):
                if s not in self.parent:
                    self.parent[s] = (t, rule.name, pos)
                    nxt.append(s)
                    if len(self.parent) > self.max_states:
                        raise CapExceeded("more than %d reachable terms" % self.max_states)
        self.frontier = nxt

    def trace(self, t: Term):
        steps = []
        while self.parent[t] is not None:
            prev, rule, pos = self.parent[t]
            steps.append((t, rule, pos))
            t = prev
        return tuple(reversed(steps))


def bounded_joinable(t1: Term, t2: Term, trs: TRS, depth: int,
                     limits: Limits = DEFAULT_LIMITS) -> JoinResult:
    """Search for a common reduct reachable in at most ``depth`` steps from each side."""
    if depth > limits.max_depth:
        raise ValueError("depth %d exceeds the configured maximum %d" % (depth, limits.max_depth))
    a = _Closure(t1, trs, limits.max_states)
    b = _Closure(t2, trs, limits.max_states)
    for level in range(depth + 1):
        common = set(a.parent) & set(b.parent)
        if common:
            w = min(common, key=lambda t: (len(a.trace(t)) + len(b.trace(t)), str(t)))
            return JoinResult(JOINABLE, w, a.trace(w), b.trace(w))
        if not a.frontier and not b.frontier:
            return JoinResult(NOT_JOINABLE)
        if level == depth:
            break
        try:
            a.expand()
            b.expand()
        except CapExceeded:
            return JoinResult(UNKNOWN)
    return JoinResult(DEPTH_EXHAUSTED)


# ---------------------------------------------------------------------------
# confluence reports

def local_confluence_report(trs: TRS, depth: int = 5, limits: Limits = DEFAULT_LIMITS) -> Report:
    pairs = []
    counterexamples = []
    undecided = 0
    for cp in classical_critical_peaks(trs):
        s, u = cp.targets
        res = bounded_joinable(s, u, trs, depth, limits)
        entry = cp.to_json()
        entry["joinability"] = res.to_json()
        pairs.append(entry)
        if res.verdict == NOT_JOINABLE:
            counterexamples.append({"left": str(s), "right": str(u),
                                    "source": str(cp.peak.source)})
        elif not res.joinable:
            undecided += 1
    if counterexamples:
        verdict, status = "NOT locally confluent", "refuted"
    elif undecided:
        verdict, status = "unknown", "unknown"
    else:
        verdict, status = "locally confluent", "ok"
    return Report(verdict, status, pairs, counterexamples, {"depth": depth})


def orthogonality(trs: TRS) -> Report:
    """Left-linear (enforced at load) and free of non-trivial critical peaks."""
    peaks = classical_critical_peaks(trs)
    pairs = [cp.to_json() for cp in peaks]
    if peaks:
        return Report("not orthogonal", "refuted", pairs, pairs)
    return Report("orthogonal", "ok", [], [])


def diamond_check(trs: TRS, t: Term, limits: Limits = DEFAULT_LIMITS) -> Report:
    """Every multi-step peak from ``t`` closes with one multi-step on each side."""
    try:
        steps = multisteps_from(t, trs, limits.max_occurrences)
        reach: Dict[Term, FrozenSet[Term]] = {}

        def one_multi(s):
            if s not in reach:
                reach[s] = frozenset(target(m) for m in multisteps_from(s, trs, limits.max_occurrences))
            return reach[s]

        counterexamples = []
        for i in range(len(steps)):
            for j in range(i, len(steps)):
                s, u = target(steps[i]), target(steps[j])
                if not one_multi(s) & one_multi(u):
                    counterexamples.append(peak_to_json(Peak(t, steps[i], steps[j])))
    except CapExceeded as e:
        return Report("unknown", "unknown", details={"reason": str(e)})
    if counterexamples:
        return Report("NOT diamond", "refuted", counterexamples=counterexamples,
                      details={"peaks": len(steps) * (len(steps) + 1) // 2})
    return Report("diamond", "ok", details={"peaks": len(steps) * (len(steps) + 1) // 2})
