"""Translations λμ → λ (``diamond``) and λμ^{→∧∨} → λμ (``circle``).

``diamond`` decomposes the type of each μ-variable with the terms ``T_A``
down to a constant ``c[X] : ~~X -> X``.  ``circle`` codes pairs and
injections by continuations and routes projections and case analysis
through the reserved μ-variable ``phi``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .syntax import PHI, Context
from .terms import App, Const, Inj, Lam, Mu, Name, Pair, Proj, Term, Var, all_names, apps, is_term
from .typecheck import Derivation, System, check, derive
from .types import Arrow, Atom, BOT, Bot, EquationSet, Type, circle_type, neg, unfold


class TranslationError(ValueError):
    pass


def t_term(a: Type) -> Term:
    """The λ-term ``T_A : ~~A -> A`` (constants ``c[X]`` at atoms)."""
    if isinstance(a, Bot):
        return Lam("x", neg(neg(BOT)), App(Var("x"), Lam("y", BOT, Var("y"))))
    if isinstance(a, Atom):
        return Const(a.name)
    if isinstance(a, Arrow):
        dom, cod = a.left, a.right
        inner = Lam("u", neg(cod), App(Var("x"), Lam(
            "v", a, App(Var("u"), App(Var("v"), Var("y"))))))
        return Lam("x", neg(neg(a)), Lam("y", dom, App(t_term(cod), inner)))
    raise TranslationError("T_A is only defined on implicational types")


@dataclass
class TranslationEnv:
    """Names chosen by a translation: ``x_alpha`` for each μ-variable and fresh binders."""

    avoid: set = field(default_factory=set)
    mu_to_term_var: dict = field(default_factory=dict)
    phi: str = PHI
    counter: itertools.count = field(default_factory=lambda: itertools.count(1))
    eqs: Optional[EquationSet] = None

    def term_var_for(self, a: str) -> str:
        if a not in self.mu_to_term_var:
            name = "x_" + a
            taken = self.avoid | set(self.mu_to_term_var.values())
            while name in taken:
                name += "'"
            self.mu_to_term_var[a] = name
        return self.mu_to_term_var[a]

    def fresh(self, base: str) -> str:
        while True:
            name = f"{base}{next(self.counter)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


# ---------------------------------------------------------------------------
# λμ -> λ


def diamond(m: Term, env: Optional[TranslationEnv] = None) -> Term:
    """``M⋄``; every μ-binder must carry its annotation."""
    if env is None:
        env = TranslationEnv(all_names(m))
    return _diamond(m, env)


def _diamond(m, env):
    if isinstance(m, (Var, Const)):
        return m
    if isinstance(m, Lam):
        return Lam(m.var, m.ann, _diamond(m.body, env))
    if isinstance(m, App):
        if not is_term(m.arg):
            raise TranslationError("diamond is defined on λμ-terms only")
        return App(_diamond(m.fun, env), _diamond(m.arg, env))
    if isinstance(m, Mu):
        if m.ann is None:
            raise TranslationError(f"mu-binder {m.var} needs a type annotation")
        x = env.term_var_for(m.var)
        return App(t_term(m.ann), Lam(x, neg(m.ann), _diamond(m.body, env)))
    if isinstance(m, Name):
        return App(Var(env.term_var_for(m.var)), _diamond(m.body, env))
    raise TranslationError("diamond is defined on λμ-terms only")


def diamond_context(ctx: Context, env: Optional[TranslationEnv] = None) -> Context:
    env = env or TranslationEnv(set(dict(ctx.terms)))
    terms = dict(ctx.terms)
    for a, t in ctx.mus:
        terms[env.term_var_for(a)] = neg(t)
    return Context.of(terms)


# ---------------------------------------------------------------------------
# λμ^{→∧∨} -> λμ


def circle(m: Term, env: Optional[TranslationEnv] = None) -> Term:
    """``M∘``; introduced binders are unannotated, existing ones are mapped by ``circle_type``."""
    if env is None:
        env = TranslationEnv(all_names(m) | {PHI})
    return _circle(m, env, None)


def _ct(a):
    return None if a is None else circle_type(a)


def _circle(m, env, types):
    """Translate ``m``; ``types`` maps the subterm to its derivation (typed mode) or is None."""
    d = None
    if types is not None:
        d = types
        while d.rule == "≈":
            d = d.premises[0]
    sub = (lambda i: d.premises[i]) if d is not None else (lambda i: None)
    phi = env.phi

    if isinstance(m, (Var, Const)):
        return m
    if isinstance(m, Lam):
        ann = m.ann
        if d is not None:
            ann = unfold(d.type, env.eqs).left if ann is None else ann
        return Lam(m.var, _ct(ann), _circle(m.body, env, sub(0)))
    if isinstance(m, Mu):
        ann = m.ann if m.ann is not None or d is None else d.type
        return Mu(m.var, _ct(ann), _circle(m.body, env, sub(0)))
    if isinstance(m, Name):
        return Name(m.var, _circle(m.body, env, sub(0)))
    if isinstance(m, Pair):
        z = env.fresh("z")
        ann = None
        if d is not None:
            t = unfold(d.type, env.eqs)
            ann = Arrow(circle_type(t.left), Arrow(circle_type(t.right), BOT))
        return Lam(z, ann, apps(Var(z), _circle(m.left, env, sub(0)),
                                _circle(m.right, env, sub(1))))
    if isinstance(m, Inj):
        x1, x2 = env.fresh("y"), env.fresh("y")
        a1 = a2 = None
        if d is not None or m.ann is not None:
            t = unfold(d.type if d is not None else m.ann, env.eqs)
            a1, a2 = neg(circle_type(t.left)), neg(circle_type(t.right))
        xi = x1 if m.index == 1 else x2
        return Lam(x1, a1, Lam(x2, a2, App(Var(xi), _circle(m.body, env, sub(0)))))
    if isinstance(m, App):
        e = m.arg
        if is_term(e):
            return App(_circle(m.fun, env, sub(0)), _circle(e, env, sub(1)))
        alpha, gamma = env.fresh("a"), env.fresh("g")
        head = _circle(m.fun, env, sub(0))
        alpha_ann = d.type if d is not None else getattr(e, "ann", None)
        if isinstance(e, Proj):
            x1, x2 = env.fresh("y"), env.fresh("y")
            a1 = a2 = None
            if d is not None:
                t = unfold(_unconv(d.premises[0]).type, env.eqs)
                a1, a2 = circle_type(t.left), circle_type(t.right)
            xi = x1 if e.index == 1 else x2
            k = Lam(x1, a1, Lam(x2, a2, Mu(gamma, BOT if d else None,
                                          Name(alpha, Var(xi)))))
            return Mu(alpha, _ct(alpha_ann), Name(phi, App(head, k)))
        # case
        a1 = a2 = None
        if d is not None:
            t = unfold(_unconv(d.premises[0]).type, env.eqs)
            a1, a2 = circle_type(t.left), circle_type(t.right)
        g_ann = BOT if d else None
        gamma2 = env.fresh("g")     # one γ per branch keeps every γ binder distinct
        k1 = Lam(e.var1, a1, Mu(gamma, g_ann, Name(alpha, _circle(e.body1, env, sub(1)))))
        k2 = Lam(e.var2, a2, Mu(gamma2, g_ann, Name(alpha, _circle(e.body2, env, sub(2)))))
        return Mu(alpha, _ct(alpha_ann), Name(phi, apps(head, k1, k2)))
    raise TranslationError(f"cannot translate {m!r}")


def _unconv(d: Derivation) -> Derivation:
    """Premise as derived by its own rule: the type before any ≈ retyping."""
    while d.rule == "≈":
        d = d.premises[0]
    return d


def circle_typed(ctx: Context, m: Term, a: Optional[Type] = None,
                 eqs: Optional[EquationSet] = None,
                 env: Optional[TranslationEnv] = None) -> Term:
    """``M∘`` with every introduced binder annotated from a typing of ``m``."""
    d = check(ctx, m, a, System.SFULL, eqs) if a is not None else derive(
        ctx, m, System.SFULL, eqs)
    if env is None:
        env = TranslationEnv(all_names(m) | {PHI} | set(dict(ctx.terms)) | set(dict(ctx.mus)))
    env.eqs = eqs
    return _circle(m, env, d)


def circle_context(ctx: Context) -> Context:
    if PHI in dict(ctx.mus):
        raise TranslationError(f"context already declares {PHI}")
    terms = {x: circle_type(t) for x, t in ctx.terms}
    mus = {a: circle_type(t) for a, t in ctx.mus}
    mus[PHI] = BOT
    return Context.of(terms, mus)
