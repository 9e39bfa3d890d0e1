"""Rules, COPS ``.trs`` loading, positional rewriting, and multi-steps.

A multi-step is stored as a cluster whose gaps are assigned rules: gap ``X``
applied to ``n`` arguments stands for the rule symbol ``ρ:name(x1..xn)``.
Projecting every rule symbol to its left-hand side gives the source of the
step, projecting to the right-hand side gives its target.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .geometry import ClusterError, PositionSet, internal_positions, shift, sorted_positions
from .inductive import (InductiveCluster, gap_occurrences,
                        rename_gaps, skeleton_size, so_subst)
from .limits import CapExceeded
from .terms import (Fun, Path, Substitution, Term, TermSyntaxError, Var,
                    _Parser, apply_subst, format_path, is_linear, is_standard,
                    match_pattern, node_paths, parse_path, parse_term,
                    replace_at, standardize, std_var, subterm_at, variables)

RULE_PREFIX = "ρ:"


class TRSError(ValueError):
    pass


class OverlapError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    name: str
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise TRSError("rule %s: left-hand side is a variable" % self.name)
        if not is_linear(self.lhs):
            raise TRSError("rule %s: left-hand side %s is not left-linear "
                           "(only left-linear systems are supported)" % (self.name, self.lhs))
        if not is_standard(self.lhs):
            raise TRSError("rule %s: left-hand side %s is not standard" % (self.name, self.lhs))
        extra = set(variables(self.rhs)) - set(variables(self.lhs))
        if extra:
            raise TRSError("rule %s: right-hand side variable(s) %s not in left-hand side"
                           % (self.name, ", ".join(sorted(v.name for v in extra))))

    @property
    def arity(self) -> int:
        return len(variables(self.lhs))

    @property
    def symbol(self) -> Term:
        """The rule symbol as a pattern ``ρ:name(x1,...,xn)``."""
        sym = self.__dict__.get("_symbol")
        if sym is None:
            sym = Fun(RULE_PREFIX + self.name, tuple(std_var(i) for i in range(1, self.arity + 1)))
            object.__setattr__(self, "_symbol", sym)
        return sym

    def __str__(self):
        return "%s: %s -> %s" % (self.name, self.lhs, self.rhs)


@dataclass(frozen=True)
class TRS:
    signature: Mapping[str, int]
    rules: Tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "signature", dict(self.signature))
        object.__setattr__(self, "rules", tuple(self.rules))
        names = [r.name for r in self.rules]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise TRSError("duplicate rule name(s): %s" % ", ".join(dupes))

    def __hash__(self):
        return hash(self.rules)

    def rule(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError("no rule named %r" % name)

    def index(self, rule: Rule) -> int:
        return self.rules.index(rule)


def make_rule(name: str, lhs: Term, rhs: Term) -> Rule:
    """Build a rule, standardizing the left-hand side (and renaming the rhs along)."""
    if isinstance(lhs, Var):
        raise TRSError("rule %s: left-hand side is a variable" % name)
    if not is_linear(lhs):
        raise TRSError("rule %s: left-hand side %s is not left-linear "
                       "(only left-linear systems are supported)" % (name, lhs))
    extra = set(variables(rhs)) - set(variables(lhs))
    if extra:
        raise TRSError("rule %s: right-hand side variable(s) %s not in left-hand side"
                       % (name, ", ".join(sorted(v.name for v in extra))))
    std_lhs, renaming = standardize(lhs)
    return Rule(name, std_lhs, apply_subst(renaming, rhs))


def make_trs(rules: Sequence[Rule]) -> TRS:
    sig: Dict[str, int] = {}
    from .terms import symbols
    for r in rules:
        symbols(r.lhs, sig)
        symbols(r.rhs, sig)
    return TRS(sig, tuple(rules))


# ---------------------------------------------------------------------------
# COPS format

_BLOCK_NAME = re.compile(r"\(\s*([A-Za-z]+)")
_NAME_DIRECTIVE = re.compile(r"@name\s+([A-Za-z0-9_][A-Za-z0-9_']*)")
_STD_VAR = re.compile(r"x\d+")
_UNSUPPORTED = {
    "CONDITIONTYPE": "conditional rewriting",
    "THEORY": "rewriting modulo theories",
    "STRATEGY": "rewriting strategies",
    "SIG": "many-sorted/higher-order signatures",
}


def _skip_ws(text, i):
    while i < len(text) and text[i].isspace():
        i += 1
    return i


def _offset(text, i):
    return len(text[:i].encode("utf-8"))


def _matching_paren(text, i):
    depth = 0
    for j in range(i, len(text)):
        if text[j] == "(":
            depth += 1
        elif text[j] == ")":
            depth -= 1
            if depth == 0:
                return j
    raise TermSyntaxError("unbalanced parenthesis", _offset(text, i))


def load_trs(text: str) -> TRS:
    """Parse the COPS subset ``(VAR ...) (RULES l -> r ...)`` with optional ``(COMMENT ...)``.

    A ``(COMMENT @name foo)`` inside the RULES block names the rule after it;
    other rules are named r1, r2, ... by their index in the file.
    """
    vars: List[str] = []
    raw_rules: List[Tuple[Optional[str], Term, Term, int]] = []
    signature: Dict[str, int] = {}
    rules_blocks = []
    i = _skip_ws(text, 0)
    while i < len(text):
        if text[i] != "(":
            raise TermSyntaxError("expected '(' to open a block", _offset(text, i))
        end = _matching_paren(text, i)
        m = _BLOCK_NAME.match(text, i)
        if not m:
            raise TermSyntaxError("expected block keyword", _offset(text, i + 1))
        keyword = m.group(1)
        if keyword == "VAR":
            vars.extend(text[m.end():end].split())
        elif keyword == "RULES":
            rules_blocks.append((m.end(), end))
        elif keyword == "COMMENT":
            pass
        elif keyword in _UNSUPPORTED:
            raise TRSError("unsupported COPS block (%s ...): %s is outside the supported "
                           "subset (VAR, RULES, COMMENT)" % (keyword, _UNSUPPORTED[keyword]))
        else:
            raise TRSError("unknown COPS block (%s ...); supported blocks are VAR, RULES, "
                           "COMMENT" % keyword)
        i = _skip_ws(text, end + 1)

    bad = [v for v in vars if not re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_']*", v)]
    if bad:
        raise TRSError("bad variable name(s) in VAR block: %s" % ", ".join(bad))
    for start, end in rules_blocks:
        j = start
        pending_name = None
        while True:
            j = _skip_ws(text, j)
            if j >= end:
                break
            if text[j] == "(":
                close = _matching_paren(text, j)
                m = _BLOCK_NAME.match(text, j)
                if not m or m.group(1) != "COMMENT":
                    raise TermSyntaxError("only (COMMENT ...) may be nested in RULES",
                                          _offset(text, j))
                d = _NAME_DIRECTIVE.search(text, m.end(), close)
                if d:
                    pending_name = d.group(1)
                j = close + 1
                continue
            p = _Parser(text[:end], set(vars), signature, None, tight=True)
            p.i = j
            lhs = p.term()
            arrow = _skip_ws(text, p.i)
            if text.startswith("->=", arrow) or text.startswith("==", arrow):
                raise TRSError("relative rules / equations are outside the supported subset "
                               "(at byte offset %d)" % _offset(text, arrow))
            if not text.startswith("->", arrow):
                raise TermSyntaxError("expected '->'", _offset(text, arrow))
            p.i = arrow + 2
            rhs = p.term()
            after = _skip_ws(text, p.i)
            if after < end and text[after] == "|":
                raise TRSError("conditional rules are outside the supported subset "
                               "(at byte offset %d)" % _offset(text, after))
            raw_rules.append((pending_name, lhs, rhs, j))
            pending_name = None
            j = p.i

    lookalikes = sorted(f for f, n in signature.items() if n == 0 and _STD_VAR.fullmatch(f))
    if lookalikes:
        raise TRSError("undeclared variable(s) %s: list them in the VAR block "
                       "(constants may not be named like variables)" % ", ".join(lookalikes))
    rules = []
    for k, (name, lhs, rhs, at) in enumerate(raw_rules, 1):
        if isinstance(lhs, Var):
            raise TRSError("rule %d: left-hand side is a variable (byte offset %d)"
                           % (k, _offset(text, at)))
        rules.append(make_rule(name or "r%d" % k, lhs, rhs))
    return TRS(signature, tuple(rules))


def print_trs(trs: TRS) -> str:
    """COPS text that ``load_trs`` reads back to an equal system."""
    n = max((r.arity for r in trs.rules), default=0)
    lines = ["(VAR %s)" % " ".join(std_var(i).name for i in range(1, n + 1))
             if n else "(VAR)", "(RULES"]
    for k, r in enumerate(trs.rules, 1):
        if r.name != "r%d" % k:
            lines.append("  (COMMENT @name %s)" % r.name)
        lines.append("  %s -> %s" % (r.lhs, r.rhs))
    lines.append(")")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# positional rewriting

def rewrite_step_at(t: Term, p: Path, rule: Rule) -> Optional[Term]:
    sub = subterm_at(t, p)
    sigma = match_pattern(rule.lhs, sub)
    if sigma is None:
        return None
    return replace_at(t, p, apply_subst(sigma, rule.rhs))


def one_step_reducts(t: Term, trs: TRS) -> List[Tuple[Term, Rule, Path]]:
    out = []
    for p in node_paths(t):
        for r in trs.rules:
            s = rewrite_step_at(t, p, r)
            if s is not None:
                out.append((s, r, p))
    return out


@dataclass(frozen=True)
class RedexOccurrence:
    rule: Rule
    position: Path
    pattern_positions: PositionSet
    bindings: Substitution = field(compare=False, hash=False)

    def __str__(self):
        return "%s@%s" % (self.rule.name, format_path(self.position))


def occurrence(t: Term, rule: Rule, p: Path) -> Optional[RedexOccurrence]:
    sigma = match_pattern(rule.lhs, subterm_at(t, p))
    if sigma is None:
        return None
    pattern = internal_positions(rule.lhs)
    for i in reversed(p):
        pattern = shift(i, pattern)
    return RedexOccurrence(rule, p, pattern, sigma)


def redex_occurrences(t: Term, trs: TRS) -> List[RedexOccurrence]:
    """All matching (rule, position) pairs, positions in preorder then rule order."""
    out = []
    for p in node_paths(t):
        if isinstance(subterm_at(t, p), Var):
            continue
        for r in trs.rules:
            occ = occurrence(t, r, p)
            if occ is not None:
                out.append(occ)
    return out


# ---------------------------------------------------------------------------
# multi-steps

@dataclass(frozen=True, eq=False)
class MultiStep:
    source: Term
    skeleton: Term
    assignment: Mapping[str, Rule]

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))

    def _cached(self, name, compute):
        value = self.__dict__.get(name)
        if value is None:
            value = compute()
            object.__setattr__(self, name, value)
        return value

    def gaps(self) -> List[str]:
        return list(self._cached("_gaps", lambda: [m.name for _, m in
                                                   gap_occurrences(self.skeleton)]))

    @property
    def cluster(self) -> InductiveCluster:
        """The cluster with rule symbols as patterns."""
        return self._cached("_cluster", lambda: InductiveCluster(
            self.skeleton, {g: r.symbol for g, r in self.assignment.items()}))

    def lhs_cluster(self) -> InductiveCluster:
        return self._cached("_lhs", lambda: InductiveCluster(
            self.skeleton, {g: r.lhs for g, r in self.assignment.items()}))

    def canonical_key(self):
        return self._cached("_key", lambda: (self.source, self.cluster.canonical_key()))

    def __eq__(self, other):
        if not isinstance(other, MultiStep):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def occurrences(self) -> List[Tuple[Rule, Path]]:
        """(rule, position) for each gap, read back from the cluster geometry."""
        from .isomorphism import gap_positions

        def compute():
            pos = gap_positions(self.lhs_cluster())
            out = [(self.assignment[g], min(p.path for p in ps)) for g, ps in pos.items()]
            return sorted(out, key=lambda rp: (rp[1], rp[0].name))
        return list(self._cached("_occs", compute))

    def size(self) -> int:
        return skeleton_size(self.skeleton)

    def __str__(self):
        parts = ", ".join("%s := %s" % (g, self.assignment[g].symbol) for g in self.gaps())
        return "⟨%s, [%s]⟩" % (self.skeleton, parts)

    __repr__ = __str__


def empty_step(t: Term) -> MultiStep:
    return MultiStep(t, t, {})


def make_multistep(t: Term, occs: Sequence[RedexOccurrence]) -> MultiStep:
    """The multi-step contracting the given pairwise non-overlapping redexes of ``t``."""
    from .isomorphism import gap_positions, to_inductive

    occs = list(occs)
    for a in range(len(occs)):
        for b in range(a + 1, len(occs)):
            shared = occs[a].pattern_positions & occs[b].pattern_positions
            if shared:
                raise OverlapError("redexes %s and %s overlap at %s" % (
                    occs[a], occs[b],
                    ", ".join(str(p) for p in sorted_positions(shared))))
    union = frozenset().union(*(o.pattern_positions for o in occs))
    cluster = to_inductive(t, union)
    by_root = {o.position: o for o in occs}
    assignment = {}
    for g, ps in gap_positions(cluster).items():
        occ = by_root[min(p.path for p in ps)]
        if cluster.assignment[g] != occ.rule.lhs:
            raise AssertionError("gap %s covers %s, expected %s"
                                 % (g, cluster.assignment[g], occ.rule.lhs))
        assignment[g] = occ.rule
    m = MultiStep(t, cluster.skeleton, assignment)
    if project(m, "left") != t:
        raise AssertionError("left projection of %s is not %s" % (m, t))
    return m


def project(m: MultiStep, side: str) -> Term:
    """Flatten with each rule symbol replaced by its lhs (``left``) or rhs (``right``)."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    mapping = {g: (r.lhs if side == "left" else r.rhs) for g, r in m.assignment.items()}
    return so_subst(m.skeleton, mapping)


def target(m: MultiStep) -> Term:
    return project(m, "right")


def multisteps_from(t: Term, trs: TRS, cap: int = 20) -> List[MultiStep]:
    """Every multi-step from ``t`` (including the empty one), by size then occurrence order."""
    occs = redex_occurrences(t, trs)
    if len(occs) > cap:
        raise CapExceeded("%s has %d redex occurrences (cap %d)" % (t, len(occs), cap))
    chosen: List[Tuple[int, ...]] = []

    def extend(start, picked, covered):
        chosen.append(tuple(picked))
        for k in range(start, len(occs)):
            if covered & occs[k].pattern_positions:
                continue
            picked.append(k)
            extend(k + 1, picked, covered | occs[k].pattern_positions)
            picked.pop()
    extend(0, [], frozenset())
    chosen.sort(key=lambda ks: (len(ks), ks))
    return [make_multistep(t, [occs[k] for k in ks]) for ks in chosen]


EMPTY, SINGLE, PARALLEL, MULTI = "empty", "single", "parallel", "multi"


def classify(m: MultiStep) -> str:
    occurrences = gap_occurrences(m.skeleton)
    if not occurrences:
        return EMPTY
    if len(occurrences) == 1:
        return SINGLE
    for _, g in occurrences:
        for a in g.args:
            if gap_occurrences(a):
                return MULTI
    return PARALLEL


def instantiate(m: MultiStep, sigma: Mapping[Var, Term]) -> MultiStep:
    """Apply a first-order substitution to the source (and skeleton) of ``m``."""
    return MultiStep(apply_subst(sigma, m.source), apply_subst(sigma, m.skeleton), m.assignment)


def canonical_step(m: MultiStep) -> MultiStep:
    """Same multi-step with gaps renamed X1, X2, ... left to right."""
    order = m.gaps()
    renaming = {g: "X%d" % k for k, g in enumerate(order, 1)}
    return MultiStep(m.source, rename_gaps(m.skeleton, renaming),
                     {renaming[g]: m.assignment[g] for g in order})


def recompose(outer: MultiStep, x: Var, inner: MultiStep) -> MultiStep:
    """``outer[x := inner]``: plug ``inner`` in at the occurrence of ``x``."""
    renaming = {g: "_I%d" % k for k, g in enumerate(inner.gaps(), 1)}
    skeleton = apply_subst({x: rename_gaps(inner.skeleton, renaming)}, outer.skeleton)
    assignment = dict(outer.assignment)
    assignment.update({renaming[g]: r for g, r in inner.assignment.items()})
    source = apply_subst({x: inner.source}, outer.source)
    return canonical_step(MultiStep(source, skeleton, assignment))


# ---------------------------------------------------------------------------
# JSON

def multistep_to_json(m: MultiStep) -> dict:
    return {"source": str(m.source),
            "redexes": [{"rule": r.name, "pos": format_path(p)} for r, p in m.occurrences()]}


def parse_redexes(spec, trs: TRS) -> List[Tuple[Rule, Path]]:
    """Accept a list of ``{"rule", "pos"}`` objects or the shorthand ``"r1@1.2,r2@eps"``."""
    if isinstance(spec, str):
        spec = spec.strip()
        if spec.startswith("["):
            import json
            spec = json.loads(spec)
        else:
            items = []
            for part in filter(None, (s.strip() for s in spec.split(","))):
                name, _, pos = part.partition("@")
                items.append({"rule": name, "pos": pos})
            spec = items
    return [(trs.rule(d["rule"]), parse_path(str(d.get("pos", "")))) for d in spec]


def multistep_at(t: Term, trs: TRS, redexes) -> MultiStep:
    """Multi-step from ``t`` contracting the listed redexes.

    ``redexes`` is anything ``parse_redexes`` accepts, or (Rule, path) pairs.
    """
    if isinstance(redexes, str) or any(isinstance(d, Mapping) for d in redexes):
        redexes = parse_redexes(redexes, trs)
    occs = []
    for rule, p in redexes:
        try:
            occ = occurrence(t, rule, p)
        except IndexError:
            raise ClusterError("position %s does not exist in %s" % (format_path(p), t)) from None
        if occ is None:
            raise ClusterError("rule %s does not match %s at %s" % (rule.name, t, format_path(p)))
        occs.append(occ)
    return make_multistep(t, occs)


def multistep_from_json(obj: Mapping, trs: TRS, vars=()) -> MultiStep:
    text = obj["source"]
    vs = set(vars) | set(re.findall(r"\bx\d+\b", text))
    t = parse_term(text, vs, dict(trs.signature))
    return multistep_at(t, trs, list(obj["redexes"]))
