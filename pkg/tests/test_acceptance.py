"""Acceptance criteria 1-9, each printing one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s``.
"""

import random
import time

import pytest

from lmcalc.corpus import CorpusSpec, enumerate_typed_terms, random_typed_term
from lmcalc.lemmas import (
    APPENDIX_FAMILIES, GOOD_EQS_TEXT, LemmaReport, appendix_terms, check_coding_circle,
    check_coding_diamond, check_postponement, check_simulation_circle,
    check_simulation_diamond_trace, check_snrth, check_substitution_sn, check_tran, random_trace,
    run_counterexamples, simulate_circle_step, sn_sweep,
)
from lmcalc.reduction import (
    BETAMU, BETAMU_RT, FULL, RHO_THETA_STATS, Rule, reach, redexes,
)
from lmcalc.syntax import parse_equations, parse_term, print_term
from lmcalc.terms import Sort, alpha_eq
from lmcalc.translate import circle
from lmcalc.types import circle_equations, is_good


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    return emit


def _outcome(rep: LemmaReport):
    return rep.ok and rep.inconclusive == 0 and rep.passed == rep.tried


def test_criterion_1_appendix_replay(report):
    t0 = time.perf_counter()
    rep = LemmaReport("sim-circle")
    for m in appendix_terms().values():
        check_simulation_circle(m, report=rep)
    img = circle(parse_term("(<x, y> p1)"))
    gold = reach(img, parse_term("x"), BETAMU_RT)
    labels = gold.labels if gold else []
    golden = (gold is not None
              and labels[:-2] == [Rule.BETA] * (len(labels) - 2) and len(labels) > 2
              and labels[-2:] == [Rule.RHO, Rule.THETA]
              and alpha_eq(gold.terms()[-3], parse_term("mu a. [phi] mu g. [a] x"),
                           annotations=False)
              and alpha_eq(gold.terms()[-2], parse_term("mu a. [a] x"), annotations=False)
              and alpha_eq(gold.end, parse_term("x")))
    elapsed = time.perf_counter() - t0
    ok = _outcome(rep) and rep.tried >= len(APPENDIX_FAMILIES) and golden and elapsed < 10
    report(1, ok, f"{rep.passed}/{rep.tried} family steps, golden={golden}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_sn_sweep(report):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for sort, n in ((Sort.LAMBDA, 7), (Sort.LAMBDA_MU, 7), (Sort.FULL, 6)):
        rep = sn_sweep(CorpusSpec(sort=sort, max_size=n))
        ok &= _outcome(rep) and rep.tried > 0
        parts.append(f"{sort.name.lower()}<={n}: {rep.passed}/{rep.tried} SN, "
                     f"{len(rep.failures)} loop, {rep.inconclusive} unknown")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    report(2, ok, "; ".join(parts) + f", {elapsed:.1f}s")
    assert ok


def _has_redex(rs):
    return lambda m: bool(redexes(m, rs))


def test_criterion_3_simulation_inequality(report):
    rng = random.Random(7)
    rep = LemmaReport("sim-diamond")
    while rep.tried < 1000:
        item = random_typed_term(rng, Sort.LAMBDA_MU, depth=4, min_size=3, max_size=30,
                                 accept=_has_redex(BETAMU))
        check_simulation_diamond_trace(random_trace(rng, item.term, BETAMU, 6), report=rep)
    ok = _outcome(rep)
    report(3, ok, f"{rep.passed}/{rep.tried} traces with lg(image) >= lg(source)")
    assert ok


def test_criterion_4_simulation_circle(report):
    rng = random.Random(11)
    rep = LemmaReport("sim-circle")
    while rep.tried < 500:
        item = random_typed_term(rng, Sort.FULL, ("A", "B"), depth=4, min_size=3, max_size=30,
                                 accept=_has_redex(FULL))
        m = item.term
        r = rng.choice(redexes(m, FULL))
        sim = simulate_circle_step(m, r.path)
        rep.record(sim is not None and sim.forward.lg_bm >= 1, {"term": print_term(m), "path": r.path},
                   "no witness")
    ok = _outcome(rep)
    report(4, ok, f"{rep.passed}/{rep.tried} one-step reductions with a witness, lg_bm >= 1")
    assert ok


def test_criterion_5_postponement(report):
    rng = random.Random(13)
    rep = LemmaReport("postpone")
    with_rt = 0
    while rep.tried < 300:
        item = random_typed_term(rng, Sort.LAMBDA_MU, depth=4, min_size=3, max_size=30,
                                 accept=_has_redex(BETAMU))
        tr = random_trace(rng, item.term, BETAMU_RT, 6)
        if tr.lg_bm < 1:
            continue
        with_rt += tr.lg_bm < tr.lg
        check_postponement(tr, report=rep)
    ok = _outcome(rep)
    report(5, ok, f"{rep.passed}/{rep.tried} traces reordered, {with_rt} containing rho/theta")
    assert ok


def test_criterion_6_typing_preservation(report):
    tran = check_tran(4)
    good = parse_equations(GOOD_EQS_TEXT)
    parts = [f"tran {tran.passed}/{tran.tried}"]
    ok = _outcome(tran)
    runs = [
        ("diamond lambda<=7", CorpusSpec(sort=Sort.LAMBDA, max_size=7), check_coding_diamond),
        ("diamond lambdamu<=7", CorpusSpec(sort=Sort.LAMBDA_MU, max_size=7), check_coding_diamond),
        ("diamond lambdamu<=7 eqs", CorpusSpec(sort=Sort.LAMBDA_MU, max_size=7, atoms=("A", "B"),
                                                eqs=circle_equations(good)), check_coding_diamond),
        ("circle full<=6", CorpusSpec(sort=Sort.FULL, max_size=6), check_coding_circle),
        ("circle full<=6 eqs", CorpusSpec(sort=Sort.FULL, max_size=6, atoms=("A", "B"), eqs=good),
         check_coding_circle),
    ]
    for name, spec, fn in runs:
        rep = LemmaReport(name)
        for item in enumerate_typed_terms(spec):
            fn(item, spec.eqs, rep)
        ok &= _outcome(rep) and rep.tried > 0
        parts.append(f"{name} {rep.passed}/{rep.tried}")
    report(6, ok, ", ".join(parts))
    assert ok


def test_criterion_7_mendler(report):
    rep = run_counterexamples(fuel=20)
    good = parse_equations(GOOD_EQS_TEXT)
    sweep = sn_sweep(CorpusSpec(sort=Sort.FULL, max_size=6, atoms=("A", "B"), eqs=good))
    ok = _outcome(rep) and bool(is_good(good)) and _outcome(sweep) and sweep.tried > 0
    report(7, ok, f"counterexample checks {rep.passed}/{rep.tried}, "
                  f"good-eqs corpus {sweep.passed}/{sweep.tried} SN")
    assert ok


def test_criterion_9_substitution_sn(report):
    rep = check_substitution_sn(CorpusSpec(sort=Sort.LAMBDA, max_size=6))
    ok = rep.ok and rep.inconclusive == 0 and rep.tried > 0
    report(9, ok, f"{rep.tried} pairs, {len(rep.failures)} failures")
    assert ok


def test_criterion_8_rho_theta_termination(report):
    # runs last: the counters cover every ρ/θ step taken by the suites above
    if RHO_THETA_STATS.checked == 0:
        check_snrth(CorpusSpec(sort=Sort.FULL, max_size=5))
    ok = RHO_THETA_STATS.violations == 0 and RHO_THETA_STATS.checked > 0
    report(8, ok, f"{RHO_THETA_STATS.checked} rho/theta steps checked, "
                  f"{RHO_THETA_STATS.violations} violations")
    assert ok
