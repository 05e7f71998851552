"""Hypothesis strategies shared by the test modules."""

import random

from hypothesis import strategies as st

from lmcalc.corpus import random_typed_term
from lmcalc.terms import App, Case, Inj, Lam, Mu, Name, Pair, Proj, Sort, Var
from lmcalc.types import And, Arrow, Atom, BOT, EquationSet, Or

ATOMS = ("A", "B", "X", "Y")
RECVARS = ("X", "Y")


def types(atoms=ATOMS, full=True, max_leaves=8):
    leaves = st.sampled_from([Atom(a) for a in atoms] + [BOT])
    ctors = [Arrow, And, Or] if full else [Arrow]
    return st.recursive(
        leaves,
        lambda sub: st.builds(lambda c, l, r: c(l, r), st.sampled_from(ctors), sub, sub),
        max_leaves=max_leaves)


def _contractive(t):
    return not (isinstance(t, Atom) and t.name in RECVARS)


@st.composite
def equation_sets(draw, full=True):
    names = draw(st.sampled_from([("X",), ("X", "Y")]))
    eqs = {}
    for x in names:
        eqs[x] = draw(types(("A", "B") + names, full, 6).filter(_contractive))
    return EquationSet(eqs)


TVARS = ("x", "y", "z")
MVARS = ("a", "b")


def _terms(sub):
    return st.one_of(
        st.builds(Lam, st.sampled_from(TVARS), st.none(), sub),
        st.builds(App, sub, sub),
        st.builds(App, sub, st.builds(Proj, st.sampled_from([1, 2]))),
        st.builds(lambda f, v1, b1, v2, b2: App(f, Case(v1, b1, v2, b2)),
                  sub, st.sampled_from(TVARS), sub, st.sampled_from(TVARS), sub),
        st.builds(Pair, sub, sub),
        st.builds(Inj, st.sampled_from([1, 2]), sub),
        st.builds(lambda a, b, body: Mu(a, None, Name(b, body)),
                  st.sampled_from(MVARS), st.sampled_from(MVARS), sub),
    )


def raw_terms(max_leaves=10):
    """Untyped full-sort terms in curry mode (named terms only under μ)."""
    return st.recursive(st.builds(Var, st.sampled_from(TVARS)), _terms, max_leaves=max_leaves)


def typed_items(sort=Sort.FULL, depth=3, atoms=("A", "B")):
    """Random well-typed corpus items driven by a hypothesis seed."""
    return st.integers(0, 2 ** 32 - 1).map(
        lambda seed: random_typed_term(random.Random(seed), sort, atoms, depth=depth))
