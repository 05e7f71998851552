import pytest
from hypothesis import given, settings

from lmcalc.lemmas import MENDLER_N, mendler_terms
from lmcalc.reduction import (
    BETA, BETAMU, BETAMU_RT, FULL, FULL_RT, RHO_THETA, RHO_THETA_STATS, Loop, NotStronglyNormalizing,
    Rule, SN, Trace, Unknown, eta, normalize, reach, reduction_graph, redexes, sn_verdict, step,
)
from lmcalc.syntax import parse_term
from lmcalc.terms import App, Inj, Sort, alpha_eq, size
from lmcalc.translate import circle

from strategies import raw_terms, typed_items

p = parse_term


def test_redexes_examples():
    rs = redexes(p(r"(\x. x y)"), BETA)
    assert [(r.path, r.label.rule) for r in rs] == [((), Rule.BETA)]
    rs = redexes(p("(mu a. [a] x y)"), BETAMU)
    assert len(rs) == 1 and rs[0].label.rule is Rule.MU_ARG and rs[0].label.mu_zero
    rs = redexes(p("(<x, y> p1)"), FULL)
    assert [r.label.rule for r in rs] == [Rule.PAIR_PROJ]


def test_mu_zero_flag():
    rs = redexes(p("(mu a. [a] [a] x y)"), BETAMU)
    assert not rs[0].label.mu_zero


def test_presets():
    assert Rule.RHO not in FULL and Rule.THETA not in FULL
    assert BETAMU_RT == BETAMU | RHO_THETA
    assert FULL_RT == FULL | RHO_THETA


def test_step_examples():
    assert alpha_eq(step(p("(mu a. [a] x y)"), ()), p("mu a. [a] (x y)"))
    assert step(p("(w1 z [x1. x1 | x2. y])"), ()) == p("z")
    assert step(p("mu a. [a] y"), ()) == p("y")
    assert alpha_eq(step(p("[b] mu a. [a] [c] [a] x"), ()), p("[b] [c] [b] x"))


def test_mu_rules_on_eliminators():
    got = step(p("(mu a. [a] [a] x p1)"), ())
    assert alpha_eq(got, p("mu a. [a] ([a] (x p1) p1)"))
    got = step(p("(mu a. [a] x [u. u | v. v])"), ())
    assert alpha_eq(got, p("mu a. [a] (x [u. u | v. v])"))


def test_permutations():
    got = step(p("(m [x1. n1 | x2. n2] n)"), ())
    assert alpha_eq(got, p("(m [x1. (n1 n) | x2. (n2 n)])"))
    got = step(p("(m [x1. n1 | x2. n2] [y1. l1 | y2. l2])"), ())
    assert alpha_eq(got, p("(m [x1. (n1 [y1. l1 | y2. l2]) | x2. (n2 [y1. l1 | y2. l2])])"))


def test_permutation_avoids_capture():
    got = step(p("(m [x1. n1 | x2. n2] x1)"), ())
    assert alpha_eq(got, p("(m [u. (n1 x1) | x2. (n2 x1)])"))


def test_graph_examples():
    g = reduction_graph(p(r"\x. x"))
    assert len(g) == 1 and g.complete
    g = reduction_graph(p(r"(\x. (x x) \y. y)"), BETA)
    assert len(g) == 3 and g.complete and g.find_cycle() is None
    (_, _, m, _), _ = mendler_terms()
    g = reduction_graph(m, FULL, 50)
    cyc = g.find_cycle()
    assert cyc is not None and cyc[-1].target == g.root


def test_eta_examples():
    assert eta(p(r"\x. x")) == 0
    assert eta(p(r"(\x. (x x) \y. y)"), BETA) == 2
    (_, _, m, _), _ = mendler_terms()
    with pytest.raises(NotStronglyNormalizing):
        eta(m, FULL, 20)


def test_sn_verdict_examples():
    assert sn_verdict(p(r"(\x. x y)"), BETA) == SN(1)
    n = p(MENDLER_N)
    assert isinstance(sn_verdict(App(n, Inj(2, n)), FULL, 20), Loop)
    omega3 = p(r"(\x. (x x x) \x. (x x x))")
    assert isinstance(sn_verdict(omega3, BETA, 5), Unknown)


def test_loop_trace_returns_to_start():
    (_, _, m, _), _ = mendler_terms()
    v = sn_verdict(m, FULL, 20)
    assert isinstance(v, Loop)
    assert alpha_eq(v.cycle.end, m) or any(alpha_eq(v.cycle.end, t) for t in v.cycle.terms()[:-1])


def test_reach_examples():
    t = reach(p(r"((\z. z) mu a. [a] \x. x)"), p(r"\x. x"), BETAMU_RT)
    assert t.lg == 2 and t.lg_bm == 1
    assert reach(p("x"), p("y"), BETA) is None


def test_appendix_pair_projection_golden():
    img = circle(p("(<x, y> p1)"))
    t = reach(img, p("x"), BETAMU_RT)
    assert t.labels == [Rule.BETA, Rule.BETA, Rule.BETA, Rule.RHO, Rule.THETA]
    assert alpha_eq(t.terms()[3], p("mu a. [phi] mu g. [a] x"), annotations=False)
    assert alpha_eq(t.terms()[4], p("mu a. [a] x"), annotations=False)


def test_normalize_and_format():
    tr = normalize(p("(<x, y> p1)"), FULL)
    assert tr.format() == "1: pair-proj@root -> x\nlg=1 lg_bm=0"
    assert tr.format("lines").splitlines()[-1] == "summary\tlg=1\tlg_bm=0"


@settings(max_examples=200, deadline=None)
@given(raw_terms())
def test_rho_theta_shrink(m):
    before = RHO_THETA_STATS.violations
    t = m
    while True:
        rs = redexes(t, RHO_THETA)
        if not rs:
            break
        u = step(t, rs[-1].path)
        assert size(u) < size(t)
        t = u
    assert RHO_THETA_STATS.violations == before


@settings(max_examples=200, deadline=None)
@given(raw_terms())
def test_every_redex_steps(m):
    # soundness: each listed redex contracts, and counters are coherent
    for r in redexes(m, FULL_RT):
        step(m, r.path)
    tr = normalize(m, FULL_RT, 10)
    assert tr.lg_bm <= tr.lg
    both = tr.then(Trace(tr.end))
    assert both.lg == tr.lg and both.lg_bm == tr.lg_bm


@settings(max_examples=60, deadline=None)
@given(typed_items(Sort.FULL))
def test_typed_terms_normalize(item):
    assert isinstance(sn_verdict(item.term, FULL, 20000), SN)
