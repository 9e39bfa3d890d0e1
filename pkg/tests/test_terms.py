import re

import pytest
from hypothesis import given, strategies as st

from clatter.limits import CapExceeded
from clatter.terms import (ArityError, Fun, Meta, NonLinearError, TermSyntaxError, Var,
                           apply_subst, format_path, is_linear, is_standard, linearize,
                           match_pattern, parse_path, parse_term, rename_apart,
                           replace_at, size, standardize, subterm_at, terms_up_to, unify,
                           variables)

from helpers import RUNNING, T
from oracles import naive_match, naive_subst
from strategies import SIGNATURE, terms

x1, x2, y1, y2 = Var("x1"), Var("x2"), Var("y1"), Var("y2")


class TestParse:
    def test_running_term(self):
        t = parse_term(RUNNING)
        assert t == Fun("a", (Fun("b", (Fun("c", (Fun("e"),)), Fun("0"))),))
        assert str(t) == RUNNING

    def test_single_variable(self):
        assert parse_term("x1", {"x1"}) == x1

    def test_repeated_variable(self):
        t = parse_term("f(x,f(x,y))", {"x", "y"})
        assert t == Fun("f", (Var("x"), Fun("f", (Var("x"), Var("y")))))
        assert not is_linear(t)

    def test_identifier_not_declared_is_constant(self):
        assert parse_term("x1") == Fun("x1")

    @pytest.mark.parametrize("text, offset", [
        ("a(x1", 4),
        ("a(,b)", 2),
        ("", 0),
        ("a(b) c", 5),
        ("ä(b", 0),
        ("f(\u00a0,b)", 4),
    ])
    def test_syntax_error_reports_byte_offset(self, text, offset):
        with pytest.raises(TermSyntaxError) as e:
            parse_term(text)
        assert e.value.offset == offset

    def test_arity_clash_within_term(self):
        with pytest.raises(ArityError):
            parse_term("f(a, f(a, a, a))")

    def test_arity_clash_against_signature(self):
        sig = {"a": 1}
        with pytest.raises(ArityError):
            parse_term("a(b, c)", signature=sig)

    def test_signature_is_extended(self):
        sig = {}
        parse_term("h(c,f(d))", signature=sig)
        assert sig == {"h": 2, "c": 0, "f": 1, "d": 0}

    def test_gaps(self):
        t = parse_term("a(X(e,0))", gaps={"X": 2})
        assert t == Fun("a", (Meta("X", (Fun("e"), Fun("0"))),))

    def test_primes_and_digits(self):
        assert str(parse_term("b'(c'', 0)")) == "b'(c'',0)"

    @given(terms())
    def test_print_parse_roundtrip(self, t):
        assert parse_term(str(t), {"x1", "x2", "x3"}) == t


class TestStructure:
    def test_subterm(self):
        assert subterm_at(T(RUNNING), (1, 1)) == T("c(e)")

    def test_replace(self):
        assert replace_at(T("a(x1)"), (1,), T("0")) == T("a(0)")

    def test_apply_subst(self):
        assert apply_subst({x1: T("0")}, T("b(x1,x1)")) == T("b(0,0)")

    def test_apply_subst_is_simultaneous(self):
        assert apply_subst({x1: x2, x2: x1}, T("f(x1,x2)", ("x1", "x2"))) \
            == parse_term("f(x2,x1)", {"x1", "x2"})

    @pytest.mark.parametrize("path, text", [((), "eps"), ((1,), "1"), ((1, 2, 1), "1.2.1")])
    def test_path_format(self, path, text):
        assert format_path(path) == text
        assert parse_path(text) == path

    @given(terms())
    def test_size_counts_symbols(self, t):
        assert size(t) == len(re.findall(r"[A-Za-z0-9_']+", str(t)))


class TestMatching:
    @pytest.mark.parametrize("pattern, subject, expected", [
        ("a(x1)", "a(0)", {"x1": "0"}),
        ("a(x1)", "b(0,0)", None),
        ("b(c(x1),x2)", "b(c(e),0)", {"x1": "e", "x2": "0"}),
    ])
    def test_examples(self, pattern, subject, expected):
        got = match_pattern(T(pattern), T(subject))
        if expected is None:
            assert got is None
        else:
            assert got == {Var(k): T(v) for k, v in expected.items()}
            assert apply_subst(got, T(pattern)) == T(subject)

    def test_nonlinear_pattern_rejected(self):
        with pytest.raises(NonLinearError):
            match_pattern(T("b(x1,x1)"), T("b(0,0)"))

    @given(terms(), terms())
    def test_agrees_with_naive_matcher(self, p, s):
        if not is_linear(p):
            return
        got = match_pattern(p, s)
        ref = naive_match(p, s)
        assert (got is None) == (ref is None)
        if got is not None:
            assert naive_subst(got, p) == s


class TestUnify:
    def test_variable_variable(self):
        s = unify(T("a(x1)"), T("a(y1)"))
        assert apply_subst(s, T("a(x1)")) == apply_subst(s, T("a(y1)"))
        assert len(s) == 1

    def test_occurs_check(self):
        assert unify(T("a(x1)"), x1) is None

    def test_clash(self):
        assert unify(T("a(x1)"), T("b(x1,x2)")) is None

    def test_frozen_mgu(self):
        s = unify(T("b(x1,c(x2))"), T("b(c(y1),y2)"))
        assert s == {x1: T("c(y1)"), y2: T("c(x2)")}

    @given(terms(variables=("x1", "x2")), terms(variables=("y1", "y2")))
    def test_mgu_unifies_and_is_idempotent(self, s, t):
        sigma = unify(s, t)
        if sigma is None:
            return
        assert apply_subst(sigma, s) == apply_subst(sigma, t)
        for v, u in sigma.items():
            assert apply_subst(sigma, u) == u

    @given(terms(variables=("x1",)), terms(variables=("y1",)))
    def test_instance_means_unifiable(self, s, t):
        # any common instance built by matching must be found by unify
        if naive_match(s, t) is not None and is_linear(s):
            assert unify(s, t) is not None


class TestStandardize:
    def test_renaming(self):
        t, ren = standardize(parse_term("f(y,g(z))", {"y", "z"}))
        assert str(t) == "f(x1,g(x2))"
        assert ren == {Var("y"): x1, Var("z"): x2}

    def test_single_variable(self):
        t, ren = standardize(parse_term("x7", {"x7"}))
        assert t == x1 and ren == {Var("x7"): x1}

    def test_ground_is_fixed(self):
        assert standardize(T(RUNNING)) == (T(RUNNING), {})

    def test_nonlinear_rejected(self):
        with pytest.raises(NonLinearError):
            standardize(T("b(x1,x1)"))

    @given(terms())
    def test_linearize(self, t):
        s, back = linearize(t)
        assert is_standard(s) and is_linear(s)
        assert apply_subst(back, s) == t

    @given(terms())
    def test_rename_apart(self, t):
        s, ren = rename_apart(t, "z")
        assert all(v.name.startswith("z") for v in variables(s))
        assert apply_subst({b: a for a, b in ren.items()}, s) == t


class TestEnumeration:
    @pytest.mark.parametrize("n, count", [(1, 3), (2, 9), (3, 30), (4, 108), (5, 426), (6, 1782)])
    def test_counts(self, n, count):
        assert len(list(terms_up_to(SIGNATURE, n))) == count
        # exact counts: 2 constants + one variable shape per leaf
        exact = {1: 3}
        for k in range(2, n + 1):
            exact[k] = 2 * exact[k - 1] + sum(exact[i] * exact[k - 1 - i] for i in range(1, k - 1))
        assert sum(exact.values()) == count

    def test_ground_only(self):
        got = {str(t) for t in terms_up_to({"a": 1, "e": 0}, 3, with_vars=False)}
        assert got == {"e", "a(e)", "a(a(e))"}

    def test_all_standard_and_distinct(self):
        ts = list(terms_up_to(SIGNATURE, 5))
        assert len(set(ts)) == len(ts)
        assert all(is_standard(t) for t in ts)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            list(terms_up_to(SIGNATURE, 6, cap=100))

    @given(st.integers(min_value=1, max_value=4))
    def test_sizes_bounded(self, n):
        assert all(size(t) <= n for t in terms_up_to(SIGNATURE, n))
