import pytest
from hypothesis import given, strategies as st

from clatter.geometry import parse_position
from clatter.isomorphism import to_geometric
from clatter.limits import Limits
from clatter.peaks import (DEPTH_EXHAUSTED, JOINABLE, NOT_JOINABLE, UNKNOWN, Peak,
                           PeakError, bounded_joinable, classical_critical_peaks,
                           decompose, diamond_check, equivalence_check, generalize,
                           is_critical, lhs_cluster, local_confluence_report,
                           orthogonality)
from clatter.rewriting import (empty_step, load_trs, multistep_at, multisteps_from,
                               project, recompose)
from clatter.terms import apply_subst, terms_up_to

from helpers import T, corpus_trs
from oracles import reachable
from strategies import terms

COLLAPSE = corpus_trs("collapse")
SELF = corpus_trs("self_overlap")
PARALLEL = corpus_trs("parallel")
DEVELOPMENT = corpus_trs("development")
STEP = corpus_trs("step")
ORTHOGONAL = corpus_trs("orthogonal")
JOINABLE_TRS = corpus_trs("joinable")


def P(*items):
    return frozenset(parse_position(s) for s in items)


def peak(trs, source, left, right):
    t = T(source)
    return Peak(t, multistep_at(t, trs, left), multistep_at(t, trs, right))


def multi_multi(n):
    """Peak from a^(2n+1)(x1) with the two maximal interleaved multi-steps."""
    source = "x1"
    for _ in range(2 * n + 1):
        source = "a(%s)" % source
    left = ",".join("r1@%s" % (".".join(["1"] * k) or "eps") for k in range(0, 2 * n, 2))
    right = ",".join("r1@%s" % ".".join(["1"] * k) for k in range(1, 2 * n, 2))
    return peak(SELF, source, left, right)


class TestCriticality:
    @pytest.mark.parametrize("source, left, right, critical, missing", [
        ("a(x1)", "r1@eps", "r2@eps", True, []),
        ("a(b')", "r1@eps", "r2@eps", False, ["1:e", "1:v"]),
        ("a(a(x1))", "r2@eps", "r2@1", False, ["1:e"]),
    ])
    def test_three_single_steps(self, source, left, right, critical, missing):
        r = is_critical(peak(COLLAPSE, source, left, right))
        assert r.is_critical == critical
        assert r.missing == P(*missing)

    def test_targets(self):
        assert peak(COLLAPSE, "a(x1)", "r1@eps", "r2@eps").targets() == (T("x1"), T("0"))
        assert peak(COLLAPSE, "a(a(x1))", "r2@eps", "r2@1").targets() == (T("0"), T("a(0)"))

    def test_step_lhs_cluster(self):
        m = multistep_at(T("a(f(a(0)))"), STEP, "dup@eps")
        assert to_geometric(lhs_cluster(m)).positions == P("eps:v")
        assert to_geometric(lhs_cluster(empty_step(T("a(0)")))).positions == P()

    def test_parallel(self):
        p = peak(PARALLEL, "f(0,0)", "r1@eps", "r2@1,r2@2")
        assert p.targets() == (T("c'"), T("f(b',b')"))
        assert is_critical(p).is_critical

    def test_development(self):
        p = peak(DEVELOPMENT, "b'(a(0))", "r1@1", "r2@eps,r3@1.1")
        assert p.targets() == (T("b'(c')"), T("b''"))
        assert is_critical(p).is_critical

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_multi_multi_family(self, n):
        p = multi_multi(n)
        assert len(p.left.gaps()) == n and len(p.right.gaps()) == n
        assert is_critical(p).is_critical

    def test_trivial_flag(self):
        r = is_critical(peak(COLLAPSE, "a(x1)", "r1@eps", "r1@eps"))
        assert r.is_critical and r.is_trivial

    def test_nonlinear_source_is_generalized(self):
        p = peak(load_trs("(VAR x) (RULES f(x) -> x)"), "h(f(x1),f(x1))", "r1@1", "r1@2")
        r = is_critical(p)
        assert str(r.source) == "h(f(x1),f(x2))"
        assert not r.is_critical

    def test_generalize(self):
        trs = load_trs("(VAR x y) (RULES f(x,y) -> x f(x,y) -> y)")
        p = peak(trs, "f(x1,x1)", "r1@eps", "r2@eps")
        general, sigma = generalize(p)
        assert general.source == T("f(x1,x2)")
        assert apply_subst(sigma, general.source) == p.source

    def test_generalize_needs_critical(self):
        with pytest.raises(PeakError):
            generalize(peak(COLLAPSE, "a(h(x1,c))", "r1@eps", "r2@eps"))

    def test_json(self):
        out = is_critical(peak(COLLAPSE, "a(a(x1))", "r2@eps", "r2@1")).to_json()
        assert out["verdict"] == "not critical"
        assert out["missing"] == ["1:e"]
        assert out["join"] == ["eps:v", "1:v"]

    def test_mismatched_sources(self):
        with pytest.raises(PeakError):
            Peak(T("a(x1)"), empty_step(T("a(x1)")), empty_step(T("a(0)")))


class TestClassical:
    def test_collapse(self):
        cps = classical_critical_peaks(COLLAPSE)
        assert [(str(c.peak.source), tuple(map(str, c.targets))) for c in cps] == \
            [("a(x1)", ("x1", "0")), ("a(x1)", ("0", "x1"))]

    def test_parallel_single_steps(self):
        cps = classical_critical_peaks(PARALLEL)
        assert [(c.outer.name, c.inner.name, c.position) for c in cps] == \
            [("r1", "r2", (1,)), ("r1", "r2", (2,))]
        assert [tuple(map(str, c.targets)) for c in cps] == [("c'", "f(b',0)"), ("c'", "f(0,b')")]

    def test_self_overlap(self):
        cps = classical_critical_peaks(SELF)
        assert len(cps) == 1
        c = cps[0]
        assert str(c.peak.source) == "a(a(a(x1)))" and c.position == (1,)
        assert tuple(map(str, c.targets)) == ("b'(a(x1))", "a(b'(x1))")
        assert is_critical(c.peak).is_critical

    def test_orthogonal(self):
        assert classical_critical_peaks(load_trs("(VAR x) (RULES a(x) -> x)")) == []
        assert orthogonality(ORTHOGONAL).status == "ok"
        assert orthogonality(SELF).status == "refuted"

    def test_mgu_below_root(self):
        trs = load_trs("(VAR x y) (RULES f(g(x),y) -> x g(h(y)) -> y)")
        cps = classical_critical_peaks(trs)
        assert [str(c.peak.source) for c in cps] == ["f(g(h(x1)),x2)"]

    @pytest.mark.parametrize("name", ["collapse", "self_overlap", "parallel", "development",
                                      "assoc", "double_neg", "group_fragment", "joinable"])
    def test_all_classical_are_lattice_critical(self, name):
        for c in classical_critical_peaks(corpus_trs(name)):
            assert is_critical(c.peak).is_critical


class TestEquivalence:
    @pytest.mark.parametrize("trs, bound", [(COLLAPSE, 4), (SELF, 5), (PARALLEL, 5),
                                            (ORTHOGONAL, 4), (DEVELOPMENT, 4)])
    def test_passes(self, trs, bound):
        r = equivalence_check(trs, bound)
        assert r.verdict == "equivalent", r.counterexamples
        assert r.details["sizeBound"] == bound

    def test_counts_lattice_peaks(self):
        assert equivalence_check(SELF, 5).details["latticeCriticalPeaks"] == 1
        assert equivalence_check(ORTHOGONAL, 4).details["latticeCriticalPeaks"] == 0


class TestDecompose:
    def test_split_on_uncovered_edge(self):
        d = decompose(peak(COLLAPSE, "a(a(x1))", "r2@eps", "r2@1"))
        assert str(d.split_edge) == "1:e"
        assert str(d.outer.source) == "a(x2)" and str(d.inner.source) == "a(x1)"
        assert d.outer.pattern_count() == 1 and d.inner.pattern_count() == 1

    def test_disjoint_redexes(self):
        d = decompose(peak(PARALLEL, "f(h(0),h(0))", "r2@1.1", "r2@2.1"))
        sides = [d.outer.left, d.outer.right, d.inner.left, d.inner.right]
        assert sum(1 for m in sides if not m.gaps()) >= 2

    def test_critical_rejected(self):
        with pytest.raises(PeakError, match="peak is critical"):
            decompose(peak(COLLAPSE, "a(x1)", "r1@eps", "r2@eps"))

    def test_single_pattern_rejected(self):
        t = T("a(a(x1))")
        p = Peak(t, multistep_at(t, COLLAPSE, "r1@1"), empty_step(t))
        with pytest.raises(PeakError, match="no analysis"):
            decompose(p)

    def test_recomposes(self):
        p = peak(COLLAPSE, "a(a(x1))", "r2@eps", "r2@1")
        d = decompose(p)
        assert recompose(d.outer.left, d.var, d.inner.left) == p.left
        assert recompose(d.outer.right, d.var, d.inner.right) == p.right


@pytest.mark.parametrize("trs", [COLLAPSE, SELF, PARALLEL, DEVELOPMENT],
                         ids=["collapse", "self", "parallel", "development"])
def test_noncritical_peaks_decompose_small(trs):
    for t in terms_up_to(trs.signature, 4):
        steps = multisteps_from(t, trs)
        for a in steps:
            for b in steps:
                p = Peak(t, a, b)
                if p.pattern_count() < 2:
                    continue
                if is_critical(p).is_critical:
                    general, sigma = generalize(p)
                    assert is_critical(general).is_critical
                    assert apply_subst(sigma, general.source) == t
                else:
                    d = decompose(p)
                    assert d.outer.left.size() < a.size() and d.inner.left.size() < a.size()
                    assert recompose(d.outer.left, d.var, d.inner.left) == a
                    assert recompose(d.outer.right, d.var, d.inner.right) == b


class TestJoinability:
    def test_equal(self):
        r = bounded_joinable(T("x1"), T("x1"), COLLAPSE, 0)
        assert r.verdict == JOINABLE and r.witness == T("x1")

    def test_normal_forms(self):
        assert bounded_joinable(T("x1"), T("0"), COLLAPSE, 5).verdict == NOT_JOINABLE

    def test_join_at_m(self):
        r = bounded_joinable(T("k(x1)"), T("k'(x1)"), JOINABLE_TRS, 1)
        assert r.verdict == JOINABLE and r.witness == T("m")
        assert [s[1] for s in r.left_trace] == ["r3"] and [s[1] for s in r.right_trace] == ["r4"]

    def test_depth_exhausted(self):
        r = bounded_joinable(T("h(x1)"), T("m"), JOINABLE_TRS, 1)
        assert r.verdict == DEPTH_EXHAUSTED
        assert bounded_joinable(T("h(x1)"), T("m"), JOINABLE_TRS, 2).verdict == JOINABLE

    def test_state_cap(self):
        trs = load_trs("(VAR x) (RULES a(x) -> a(a(x)))")
        r = bounded_joinable(T("a(x1)"), T("0"), trs, 8, Limits(max_states=5))
        assert r.verdict == UNKNOWN

    def test_depth_limit(self):
        with pytest.raises(ValueError):
            bounded_joinable(T("x1"), T("x1"), COLLAPSE, 99)

    @given(terms(signature={"h": 1, "k": 1, "k'": 1, "m": 0}, max_leaves=3),
           terms(signature={"h": 1, "k": 1, "k'": 1, "m": 0}, max_leaves=3),
           st.integers(min_value=0, max_value=3))
    def test_against_reachability(self, s, u, d):
        r = bounded_joinable(s, u, JOINABLE_TRS, d)
        common = reachable(s, JOINABLE_TRS.rules, d) & reachable(u, JOINABLE_TRS.rules, d)
        assert r.joinable == bool(common)
        if r.joinable:
            assert r.witness in common


class TestReports:
    def test_not_locally_confluent(self):
        r = local_confluence_report(COLLAPSE, 5)
        assert r.status == "refuted"
        assert {"left": "x1", "right": "0", "source": "a(x1)"} in r.counterexamples

    def test_locally_confluent(self):
        r = local_confluence_report(JOINABLE_TRS, 3)
        assert r.status == "ok" and r.verdict == "locally confluent"

    def test_unknown_under_caps(self):
        trs = load_trs("(VAR x) (RULES a(x) -> a(a(x)) a(x) -> 0)")
        r = local_confluence_report(trs, 3, Limits(max_states=2))
        assert r.status == "unknown"

    def test_self_overlap_not_locally_confluent(self):
        r = local_confluence_report(SELF, 3)
        # b'(a(x1)) and a(b'(x1)) are distinct normal forms
        assert r.status == "refuted"

    def test_diamond_orthogonal(self):
        assert diamond_check(ORTHOGONAL, T("a(a(c''))")).status == "ok"

    def test_diamond_fails_on_collapse(self):
        r = diamond_check(COLLAPSE, T("a(x1)"))
        assert r.status == "refuted"

    def test_diamond_cap(self):
        r = diamond_check(ORTHOGONAL, T("a(a(a(a(a(a(x1))))))"), Limits(max_occurrences=3))
        assert r.status == "unknown"

    def test_projection_of_peak_steps(self):
        p = multi_multi(1)
        assert project(p.left, "right") == T("b'(a(x1))")
        assert project(p.right, "right") == T("a(b'(x1))")
