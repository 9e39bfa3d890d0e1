"""First-order terms, skeleton nodes, and the structural operations on them.

Terms are built from three immutable node types:

* ``Var`` -- a first-order variable,
* ``Fun`` -- a function symbol applied to a tuple of arguments,
* ``Meta`` -- a gap (second-order variable) applied to a tuple of arguments.

A *term* contains no ``Meta`` nodes; a *skeleton* may.  Node paths are tuples
of 1-based child indices, ``()`` being the root.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from .limits import CapExceeded

Path = Tuple[int, ...]


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Fun:
    name: str
    args: Tuple["Term", ...] = ()

    def __str__(self):
        if not self.args:
            return self.name
        return "%s(%s)" % (self.name, ",".join(map(str, self.args)))


@dataclass(frozen=True, slots=True)
class Meta:
    """Application of a gap to arguments; only legal inside skeletons."""

    name: str
    args: Tuple["Term", ...] = ()

    def __str__(self):
        if not self.args:
            return self.name
        return "%s(%s)" % (self.name, ",".join(map(str, self.args)))


Term = Union[Var, Fun, Meta]
Substitution = Dict[Var, Term]


class TermSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__("%s at byte offset %d" % (message, offset))
        self.offset = offset


class ArityError(ValueError):
    def __init__(self, name: str, expected: int, got: int):
        super().__init__(
            "symbol %r used with arity %d, but its arity is %d" % (name, got, expected))
        self.name = name
        self.expected = expected
        self.got = got


class NonLinearError(ValueError):
    pass


def var_key(v: Var):
    """Sort key: namespace prefix, then numeric index (``xL2`` -> ('xL', 2))."""
    m = re.fullmatch(r"(.*?)(\d*)", v.name)
    prefix, digits = m.group(1), m.group(2)
    return (prefix, int(digits) if digits else -1, v.name)


def std_var(i: int) -> Var:
    return Var("x%d" % i)


# ---------------------------------------------------------------------------
# parsing

IDENT = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*")


class _Parser:
    def __init__(self, text, vars, signature, gaps, tight=False):
        self.text = text
        self.i = 0
        self.vars = vars
        self.signature = signature
        self.gaps = gaps
        # tight: an argument list must follow its symbol without whitespace
        self.tight = tight

    def offset(self, i=None):
        i = self.i if i is None else i
        return len(self.text[:i].encode("utf-8"))

    def error(self, message, i=None):
        raise TermSyntaxError(message, self.offset(i))

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def term(self):
        self.skip_ws()
        start = self.i
        m = IDENT.match(self.text, self.i)
        if not m:
            self.error("expected identifier")
        name = m.group(0)
        self.i = m.end()
        args = []
        if self.tight:
            opens = self.i < len(self.text) and self.text[self.i] == "("
        else:
            opens = self.peek() == "("
        if opens:
            self.i += 1
            if self.peek() == ")":
                self.i += 1
            else:
                args.append(self.term())
                while self.peek() == ",":
                    self.i += 1
                    args.append(self.term())
                if self.peek() != ")":
                    self.error("expected ',' or ')'")
                self.i += 1
        if name in self.vars:
            if args:
                self.error("variable %r applied to arguments" % name, start)
            return Var(name)
        if self.gaps is not None and name in self.gaps:
            expected = self.gaps[name]
            if expected is not None and expected != len(args):
                raise ArityError(name, expected, len(args))
            return Meta(name, tuple(args))
        known = self.signature.get(name)
        if known is None:
            self.signature[name] = len(args)
        elif known != len(args):
            raise ArityError(name, known, len(args))
        return Fun(name, tuple(args))


def parse_term(text: str, vars=(), signature: Optional[Dict[str, int]] = None,
               gaps: Optional[Mapping[str, Optional[int]]] = None) -> Term:
    """Parse ``ident`` | ``ident(t1,...,tn)``.

    Identifiers in ``vars`` become variables, identifiers in ``gaps`` become
    gap applications, everything else is a function symbol.  ``signature`` is
    updated in place: the first use of a symbol fixes its arity.
    """
    if signature is None:
        signature = {}
    p = _Parser(text, set(vars), signature, gaps)
    t = p.term()
    p.skip_ws()
    if p.i != len(text):
        p.error("unexpected trailing input")
    return t


# ---------------------------------------------------------------------------
# structure

def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


def variables(t: Term) -> List[Var]:
    """Variable occurrences, left to right (with repetitions)."""
    out = []

    def walk(s):
        if isinstance(s, Var):
            out.append(s)
        else:
            for a in s.args:
                walk(a)
    walk(t)
    return out


def is_linear(t: Term) -> bool:
    vs = variables(t)
    return len(vs) == len(set(vs))


def is_ground(t: Term) -> bool:
    return not variables(t)


def has_meta(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return isinstance(t, Meta) or any(has_meta(a) for a in t.args)


def symbols(t: Term, signature: Optional[Dict[str, int]] = None) -> Dict[str, int]:
    """Function symbols of ``t`` with their arities."""
    sig = {} if signature is None else signature
    if isinstance(t, Fun):
        known = sig.setdefault(t.name, len(t.args))
        if known != len(t.args):
            raise ArityError(t.name, known, len(t.args))
    if not isinstance(t, Var):
        for a in t.args:
            symbols(a, sig)
    return sig


def node_paths(t: Term) -> List[Path]:
    """All node addresses in preorder (leftmost-outermost first)."""
    out = []

    def walk(s, p):
        out.append(p)
        if not isinstance(s, Var):
            for i, a in enumerate(s.args, 1):
                walk(a, p + (i,))
    walk(t, ())
    return out


def subterm_at(t: Term, p: Path) -> Term:
    for i in p:
        if isinstance(t, Var) or not 1 <= i <= len(t.args):
            raise IndexError("path %s out of range" % format_path(p))
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Path, s: Term) -> Term:
    if not p:
        return s
    i = p[0]
    if isinstance(t, Var) or not 1 <= i <= len(t.args):
        raise IndexError("path %s out of range" % format_path(p))
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], s)
    return type(t)(t.name, tuple(args))


def apply_subst(sigma: Mapping[Var, Term], t: Term) -> Term:
    """Simultaneous first-order substitution (gap nodes are traversed)."""
    if not sigma:
        return t
    if isinstance(t, Var):
        return sigma.get(t, t)
    if not t.args:
        return t
    return type(t)(t.name, tuple(apply_subst(sigma, a) for a in t.args))


def format_path(p: Path) -> str:
    return ".".join(map(str, p)) if p else "eps"


def parse_path(text: str) -> Path:
    text = text.strip()
    if text in ("", "eps", "ε"):
        return ()
    try:
        path = tuple(int(s) for s in text.split("."))
    except ValueError:
        raise ValueError("bad path %r" % text) from None
    if any(i < 1 for i in path):
        raise ValueError("bad path %r: indices are 1-based" % text)
    return path


# ---------------------------------------------------------------------------
# matching and unification

def match_pattern(pattern: Term, subject: Term) -> Optional[Substitution]:
    """Return σ with σ(pattern) = subject, or None.  ``pattern`` must be linear."""
    if not is_linear(pattern):
        raise NonLinearError("pattern %s is not linear" % pattern)
    sigma: Substitution = {}

    def go(p, s):
        if isinstance(p, Var):
            sigma[p] = s
            return True
        if type(s) is not type(p) or s.name != p.name or len(s.args) != len(p.args):
            return False
        return all(go(a, b) for a, b in zip(p.args, s.args))
    return sigma if go(pattern, subject) else None


def _occurs(v: Var, t: Term) -> bool:
    if isinstance(t, Var):
        return t == v
    return any(_occurs(v, a) for a in t.args)


def unify(s: Term, t: Term) -> Optional[Substitution]:
    """Idempotent most general unifier with occurs check, or None.

    Variable-variable bindings map the smaller variable (by ``var_key``) to
    the larger, so every equivalence class is represented by its maximum.
    """
    sigma: Substitution = {}

    def bind(v, u):
        single = {v: u}
        for k in list(sigma):
            sigma[k] = apply_subst(single, sigma[k])
        sigma[v] = u

    todo = [(s, t)]
    while todo:
        a, b = todo.pop()
        a, b = apply_subst(sigma, a), apply_subst(sigma, b)
        if a == b:
            continue
        if isinstance(a, Var) and isinstance(b, Var):
            lo, hi = sorted((a, b), key=var_key)
            bind(lo, hi)
        elif isinstance(a, Var):
            if _occurs(a, b):
                return None
            bind(a, b)
        elif isinstance(b, Var):
            if _occurs(b, a):
                return None
            bind(b, a)
        else:
            if type(a) is not type(b) or a.name != b.name or len(a.args) != len(b.args):
                return None
            todo.extend(reversed(list(zip(a.args, b.args))))
    return sigma


# ---------------------------------------------------------------------------
# standardization

def is_standard(t: Term) -> bool:
    return variables(t) == [std_var(i) for i in range(1, len(variables(t)) + 1)]


def standardize(t: Term) -> Tuple[Term, Dict[Var, Var]]:
    """Rename the variables of a linear term to x1, ..., xn left to right."""
    vs = variables(t)
    if len(vs) != len(set(vs)):
        raise NonLinearError("cannot standardize non-linear term %s" % t)
    renaming = {v: std_var(i) for i, v in enumerate(vs, 1)}
    return apply_subst(renaming, t), renaming


def linearize(t: Term) -> Tuple[Term, Substitution]:
    """Replace every variable occurrence by a fresh standard variable.

    Returns ``(s, sigma)`` with ``s`` standard and ``apply_subst(sigma, s) == t``.
    On linear input this is ``standardize`` with the renaming inverted.
    """
    counter = iter(range(1, 1 << 30))
    back: Substitution = {}

    def walk(s):
        if isinstance(s, Var):
            v = std_var(next(counter))
            back[v] = s
            return v
        return type(s)(s.name, tuple(walk(a) for a in s.args))
    return walk(t), back


def fresh_var(t: Term, prefix: str = "x") -> Var:
    used = {v.name for v in variables(t)}
    i = 1
    while "%s%d" % (prefix, i) in used:
        i += 1
    return Var("%s%d" % (prefix, i))


def rename_apart(t: Term, prefix: str) -> Tuple[Term, Dict[Var, Var]]:
    """Rename variables to ``<prefix>1, <prefix>2, ...`` in order of first occurrence."""
    renaming: Dict[Var, Var] = {}
    for v in variables(t):
        if v not in renaming:
            renaming[v] = Var("%s%d" % (prefix, len(renaming) + 1))
    return apply_subst(renaming, t), renaming


# ---------------------------------------------------------------------------
# enumeration

_HOLE = Var("_")


def terms_up_to(signature: Mapping[str, int], max_size: int, with_vars: bool = True,
                cap: int = 200000) -> Iterator[Term]:
    """All standard linear terms of size 1..max_size over ``signature``.

    Leaves are constants or (if ``with_vars``) fresh variables, numbered
    x1, x2, ... left to right.  Ordered by size, then by symbol name.
    """
    syms = sorted(signature.items())
    by_size: Dict[int, List[Term]] = {}
    produced = 0
    for n in range(1, max_size + 1):
        layer = []
        if n == 1:
            if with_vars:
                layer.append(_HOLE)
            layer.extend(Fun(f) for f, k in syms if k == 0)
        else:
            for f, k in syms:
                if k == 0:
                    continue
                for split in _compositions(n - 1, k):
                    for args in product(*(by_size[m] for m in split)):
                        layer.append(Fun(f, args))
                        if produced + len(layer) > cap:
                            raise CapExceeded("more than %d terms up to size %d" % (cap, max_size))
        by_size[n] = layer
        produced += len(layer)
        for t in layer:
            yield linearize(t)[0] if with_vars else t


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
