import pytest

from lmcalc.corpus import CorpusSpec, enumerate_typed_terms
from lmcalc.lemmas import GOOD_EQS_TEXT, PRESET_FOR_SORT, mendler_terms
from lmcalc.reduction import reducts
from lmcalc.syntax import Context, Mode, parse_context, parse_equations, parse_term, parse_type
from lmcalc.terms import Sort
from lmcalc.typecheck import System, TypingError, check, derive, infer, typechecks
from lmcalc.types import And, Arrow, Atom, BOT, congruent

A, B = Atom("A"), Atom("B")


def church(text, sort=Sort.FULL):
    return parse_term(text, sort, Mode.CHURCH)


def test_axiom():
    d = check(Context.of({"x": A}), parse_term("x"), A, System.S)
    assert d.rule == "ax"


def test_pair_intro():
    d = check(Context.of({"x": A, "y": B}), parse_term("<x, y>"), And(A, B), System.SFULL)
    assert d.rule == "and_i" and [p.rule for p in d.premises] == ["ax", "ax"]


def test_mendler_term_types_under_equations():
    (eqs, ctx, m, a), (eqs2, ctx2, n, a2) = mendler_terms()
    assert check(ctx, m, a, System.SFULL, eqs)
    assert check(ctx2, n, a2, System.SFULL, eqs2)
    with pytest.raises(TypingError):
        check(ctx, m, a, System.SFULL)


def test_infer_examples():
    assert infer(Context(), church(r"\x:A. x", Sort.LAMBDA), System.S) == Arrow(A, A)
    ctx = parse_context("mu a : ~A; x : A")
    assert infer(ctx, parse_term("[a] x"), System.SMU) == BOT
    peirce = church(r"\x:(A -> B) -> A. mu a:~A. [a] (x \y:A. mu d:~B. [a] y)")
    assert infer(Context(), peirce, System.SMU) == parse_type("((A -> B) -> A) -> A")


def test_constants_only_in_sc():
    c = parse_term("c[A]", Sort.LAMBDA)
    assert check(Context(), c, parse_type("~~A -> A"), System.SC)
    with pytest.raises(TypingError):
        check(Context(), c, parse_type("~~A -> A"), System.S)


def test_system_sorts_enforced():
    with pytest.raises(TypingError):
        check(Context(), church(r"\x:A /\ B. x"), parse_type("A /\\ B -> A /\\ B"), System.SMU)
    with pytest.raises(TypingError):
        check(Context(), parse_term("mu a. [a] x"), A, System.S)


def test_ill_typed():
    assert not typechecks(Context.of({"x": A}), parse_term("(x x)"), A, System.S)
    assert not typechecks(Context(), parse_term("y"), A, System.S)


def test_conversion_nodes_recorded():
    eqs = parse_equations("X = A -> X")
    ctx = Context.of({"f": Atom("X"), "a": A})
    d = check(ctx, parse_term("((f a) a)"), Atom("X"), System.SFULL, eqs)
    assert "≈" in set(d.rules())


def test_case_and_injection():
    ctx = parse_context("z : A \\/ B; f : A -> B")
    m = parse_term("(z [x. (f x) | y. y])")
    assert check(ctx, m, B, System.SFULL)
    inj = church("w2[A \\/ B] y")
    assert infer(Context.of({"y": B}), inj) == parse_type("A \\/ B")


def _corpora():
    yield CorpusSpec(sort=Sort.LAMBDA, max_size=6)
    yield CorpusSpec(sort=Sort.LAMBDA_MU, max_size=6)
    yield CorpusSpec(sort=Sort.FULL, max_size=5)
    yield CorpusSpec(sort=Sort.FULL, max_size=5, atoms=("A", "B"),
                     eqs=parse_equations(GOOD_EQS_TEXT))


@pytest.mark.parametrize("spec", list(_corpora()), ids=lambda s: f"{s.sort.name}-{s.max_size}-{bool(s.eqs)}")
def test_subject_reduction(spec):
    n = 0
    for ctx, m, a in enumerate_typed_terms(spec):
        for _, m2 in reducts(m, PRESET_FOR_SORT[spec.sort], spec.eqs):
            check(ctx, m2, a, spec.system, spec.eqs)
            n += 1
    assert n > 0


@pytest.mark.parametrize("spec", list(_corpora()), ids=lambda s: f"{s.sort.name}-{s.max_size}-{bool(s.eqs)}")
def test_infer_agrees_with_check(spec):
    for ctx, m, a in enumerate_typed_terms(spec):
        d = derive(ctx, m, spec.system, spec.eqs)
        assert congruent(d.type, a, spec.eqs)
        check(ctx, m, d.type, spec.system, spec.eqs)
