import random

import pytest

from lmcalc.corpus import CorpusSpec, Item
from lmcalc.lemmas import (
    APPENDIX_FAMILIES, LEMMA_IDS, LemmaReport, appendix_terms, check_coding_circle,
    check_coding_diamond, check_diag, check_diag_star, check_new, check_postponement,
    check_simulation_aggregate, check_simulation_circle, check_simulation_diamond,
    check_sn_transfer, check_substitution_sn, check_tran, check_typing_translations,
    postpone, random_trace, replay, replay_failure, run_counterexamples, simulate_circle_step,
    simulate_diamond_step, trace_from_paths, types_up_to_depth, verify,
)
from lmcalc.reduction import BETAMU_RT, Rule, Trace
from lmcalc.syntax import Context, Mode, parse_term, parse_type
from lmcalc.terms import Sort, alpha_eq
from lmcalc.translate import circle
from lmcalc.types import And, Atom, BOT

p = parse_term
A, B = Atom("A"), Atom("B")

# ρ redex sitting at the name of a μ redex: the μ step moves the argument
# under the name and no single βμ step from the ρ side rejoins
DIAG_COUNTER = "(mu a. [a] mu d. [d] y z)"


def test_types_up_to_depth():
    assert types_up_to_depth(1) == [A, BOT]
    assert len(types_up_to_depth(2, bot=False)) == 2
    assert len(types_up_to_depth(3, bot=False)) == 5


def test_tran():
    rep = check_tran(3)
    assert rep.ok and rep.tried == len(types_up_to_depth(3))


def test_simulation_diamond_examples():
    rep = check_simulation_diamond(p(r"(\x. x y)", Sort.LAMBDA))
    assert rep.ok and rep.passed == 1
    m = p("(mu a:~(A -> B). [a] x y)", Sort.LAMBDA_MU, Mode.CHURCH)
    t = simulate_diamond_step(m, ())
    assert t.lg >= 2 and all(r is Rule.BETA for r in t.labels)
    rep = check_simulation_diamond(p(r"\x:A. x", Sort.LAMBDA, Mode.CHURCH))
    assert rep.ok and rep.tried == 0


@pytest.mark.parametrize("family", sorted(APPENDIX_FAMILIES))
def test_appendix_families_simulate(family):
    rep = check_simulation_circle(appendix_terms()[family])
    assert rep.ok and rep.passed >= 1


def test_perm_arg_image_is_reached_without_rho():
    m = p("(x [x1. n1 | x2. n2] z)")
    sim = simulate_circle_step(m, ())
    assert sim.back.lg == 0 and sim.forward.lg_bm >= 1


def test_perm_proj_needs_rho_on_reduct_side():
    m = p("(x [x1. n1 | x2. n2] p1)")
    sim = simulate_circle_step(m, ())
    assert sim.back.lg >= 1 and all(r is Rule.RHO for r in sim.back.labels)


def test_pair_projection_witness():
    sim = simulate_circle_step(p("(<x, y> p1)"), ())
    assert alpha_eq(sim.witness, p("x"))
    assert sim.forward.labels[-2:] == [Rule.RHO, Rule.THETA]


def test_simulation_aggregate():
    m = p("(<(w1 x [u. u | v. v]), y> p1)")
    tr = trace_from_paths(m, [(), ()])
    rep = check_simulation_aggregate(tr)
    assert rep.ok and rep.passed == 1


def test_postponement_examples():
    m = p(r"((\z. z) mu a. [a] \x. x)")
    theta_first = trace_from_paths(m, [(1,), ()])
    assert theta_first.labels == [Rule.THETA, Rule.BETA]
    fwd, back = postpone(theta_first)
    assert fwd.labels == [Rule.BETA] and back.labels == [Rule.THETA]
    assert check_postponement(theta_first).ok
    beta_only = trace_from_paths(p(r"(\x. x y)"), [()])
    fwd, back = postpone(beta_only)
    assert back.lg == 0 and alpha_eq(fwd.end, beta_only.end)
    m = p(r"[b] (mu a. [a] \u. u y)")
    tr = trace_from_paths(m, [(0,), ()])
    assert tr.labels == [Rule.MU_ARG, Rule.RHO]
    assert check_postponement(tr).ok


def test_commutation_examples():
    assert check_diag_star(p("x")).ok
    m = p("[b] mu a. [a] (mu c. [c] x y)")
    assert check_diag(m).ok and check_new(m).ok and check_diag_star(m).ok


def test_diag_counterexample_detected():
    m = p(DIAG_COUNTER)
    rep = check_diag(m)
    assert len(rep.failures) == 1 and rep.failures[0].inputs["clause"] == "2"
    assert not check_new(m).ok
    assert not check_diag_star(m).ok


def test_failures_replay():
    rep = check_diag(p(DIAG_COUNTER))
    again = replay_failure(rep.failures[0])
    assert not again.ok
    bad = LemmaReport("sim-circle")
    bad.record(False, {"term": "(<x, y> p1)", "paths": "root"})
    assert replay_failure(bad.failures[0]).ok


def test_replay_rejects_forged_trace():
    tr = trace_from_paths(p("(<x, y> p1)"), [()])
    assert replay(tr)
    step = tr.steps[0]
    forged = Trace(tr.start, (step.__class__(step.path, step.label, p("y")),))
    assert not replay(forged)


def test_coding_checks():
    item = Item(Context.of({"x": And(A, B)}), p("(x p1)"), A)
    assert check_coding_circle(item).ok
    peirce = p(r"\x:(A -> B) -> A. mu a:~A. [a] (x \y:A. mu d:~B. [a] y)",
               Sort.LAMBDA_MU, Mode.CHURCH)
    item = Item(Context(), peirce, parse_type("((A -> B) -> A) -> A"))
    assert check_coding_diamond(item).ok


def test_typing_translations_small():
    rep = check_typing_translations(CorpusSpec(sort=Sort.FULL, max_size=4), tran_depth=3)
    assert rep.ok and rep.tried > 0


def test_sn_transfer_examples():
    assert check_sn_transfer(p(r"(\x. x y)", Sort.LAMBDA_MU)).ok
    rep = check_sn_transfer(p(r"(\x. (x x) \x. (x x))", Sort.LAMBDA_MU), fuel=3)
    assert rep.ok and rep.passed == rep.tried
    rep = check_sn_transfer(p(r"(\x. (x x x) \x. (x x x))", Sort.LAMBDA_MU), fuel=3)
    assert rep.ok and rep.inconclusive == rep.tried


def test_substitution_sn_small():
    rep = check_substitution_sn(CorpusSpec(sort=Sort.LAMBDA, max_size=4))
    assert rep.ok and rep.passed > 0


def test_counterexamples():
    rep = run_counterexamples()
    assert rep.ok and rep.passed == rep.tried == 7


def test_random_traces_are_replayable():
    rng = random.Random(1)
    m = circle(p("(<(w1 x [u. u | v. v]), y> p1)"))
    for _ in range(10):
        tr = random_trace(rng, m, BETAMU_RT, 5)
        assert replay(tr) and tr.lg_bm <= tr.lg


@pytest.mark.parametrize("lemma", [l for l in LEMMA_IDS if l not in ("diag", "diag-star")])
def test_verify_dispatch(lemma):
    rep = verify(lemma, Sort.FULL, max_size=3, count=2)
    assert rep.ok, [str(f) for f in rep.failures[:3]]


def test_verify_rejects_unknown_lemma():
    with pytest.raises(ValueError):
        verify("nope")


def test_mu_projection_witness_replays():
    sim = simulate_circle_step(p("(mu a. [a] x p1)"), ())
    assert sim is not None and replay(sim.forward) and replay(sim.back)
    assert sim.forward.lg_bm >= 1
