"""Typecheckers for S, S^c, S^μ and S^{→∧∨}, optionally modulo equations.

Checking is bidirectional: binder annotations are needed only where a type
has to be synthesised (the head of an elimination, or a closed term with no
expected type).  With an equation set every comparison goes through
``congruent`` and a ``≈`` node is recorded whenever the two types differ
syntactically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .syntax import Context, print_term, print_type
from .terms import App, Case, Const, Inj, Lam, Mu, Name, Pair, Proj, Sort, Term, Var
from .types import (
    And, Arrow, Atom, BOT, EquationSet, Or, Type, TypeSort, congruent, neg,
    type_sort, unfold,
)


class System(enum.Enum):
    S = "S"
    SC = "Sc"
    SMU = "Smu"
    SFULL = "Sfull"

    @property
    def sort(self) -> Sort:
        return {System.S: Sort.LAMBDA, System.SC: Sort.LAMBDA,
                System.SMU: Sort.LAMBDA_MU, System.SFULL: Sort.FULL}[self]

    @property
    def type_sort(self) -> TypeSort:
        return TypeSort.T_PRIME if self is System.SFULL else TypeSort.T


class TypingError(Exception):
    pass


@dataclass(frozen=True)
class Derivation:
    rule: str           # ax, const, ->i, ->e, bot_i, bot_e, and_i, and_e, or_i, or_e, ≈
    ctx: Context
    term: Term
    type: Type
    premises: tuple["Derivation", ...] = ()

    def rules(self):
        yield self.rule
        for p in self.premises:
            yield from p.rules()

    def pretty(self, indent: int = 0) -> str:
        line = f"{'  ' * indent}{self.rule}: {print_term(self.term)} : {print_type(self.type)}"
        return "\n".join([line] + [p.pretty(indent + 1) for p in self.premises])


class _Checker:
    def __init__(self, system: System, eqs: Optional[EquationSet]):
        self.system = system
        self.eqs = eqs or None

    # -- helpers ---------------------------------------------------------

    def fail(self, msg):
        raise TypingError(msg)

    def sort_check(self, a: Type):
        if self.system.type_sort is TypeSort.T and type_sort(a) is not TypeSort.T:
            self.fail(f"type {print_type(a)} is not allowed in system {self.system.value}")

    def term_sort(self, m, needed: Sort):
        if self.system.sort < needed:
            self.fail(f"{print_term(m)}: sort violation in system {self.system.value}")

    def same(self, a: Type, b: Type) -> bool:
        return a == b or congruent(a, b, self.eqs)

    def shape(self, a: Type, cls, what: str, m) -> Type:
        u = unfold(a, self.eqs)
        if not isinstance(u, cls):
            self.fail(f"{print_term(m)}: expected {what} type, found {print_type(a)}")
        return u

    def convert(self, d: Derivation, a: Type) -> Derivation:
        """Retype ``d`` at ``a`` using ≈ if needed."""
        if d.type == a:
            return d
        if not congruent(d.type, a, self.eqs):
            self.fail(f"{print_term(d.term)} has type {print_type(d.type)}, "
                      f"expected {print_type(a)}")
        return Derivation("≈", d.ctx, d.term, a, (d,))

    @staticmethod
    def bind(ctx: Context, x: str, a: Type) -> Context:
        terms = tuple((n, t) for n, t in ctx.terms if n != x) + ((x, a),)
        return Context(terms, ctx.mus)

    @staticmethod
    def bind_mu(ctx: Context, x: str, a: Type) -> Context:
        mus = tuple((n, t) for n, t in ctx.mus if n != x) + ((x, a),)
        return Context(ctx.terms, mus)

    # -- synthesis -------------------------------------------------------

    def synth(self, ctx: Context, m: Term) -> Derivation:
        if isinstance(m, Var):
            tm = ctx.term_map
            if m.name not in tm:
                self.fail(f"unbound variable {m.name}")
            return Derivation("ax", ctx, m, tm[m.name])
        if isinstance(m, Const):
            if self.system is not System.SC:
                self.fail(f"constant c[{m.atom}] outside system Sc")
            x = Atom(m.atom)
            return Derivation("const", ctx, m, Arrow(neg(neg(x)), x))
        if isinstance(m, Lam):
            if m.ann is None:
                self.fail(f"{print_term(m)}: missing annotation on {m.var}")
            self.sort_check(m.ann)
            d = self.synth(self.bind(ctx, m.var, m.ann), m.body)
            return Derivation("->i", ctx, m, Arrow(m.ann, d.type), (d,))
        if isinstance(m, App):
            return self.elim(ctx, m, None)
        if isinstance(m, Pair):
            self.term_sort(m, Sort.FULL)
            d1, d2 = self.synth(ctx, m.left), self.synth(ctx, m.right)
            return Derivation("and_i", ctx, m, And(d1.type, d2.type), (d1, d2))
        if isinstance(m, Inj):
            self.term_sort(m, Sort.FULL)
            if m.ann is None:
                self.fail(f"{print_term(m)}: injection needs its disjunction annotation")
            return self.check(ctx, m, m.ann)
        if isinstance(m, Mu):
            if m.ann is None:
                self.fail(f"{print_term(m)}: missing annotation on {m.var}")
            return self.check(ctx, m, m.ann)
        if isinstance(m, Name):
            return self.check(ctx, m, BOT)
        self.fail(f"cannot type {m!r}")

    def elim(self, ctx: Context, m: App, expected: Optional[Type]) -> Derivation:
        arg = m.arg
        df = self.synth(ctx, m.fun)
        if isinstance(arg, Proj):
            self.term_sort(m, Sort.FULL)
            t = self.shape(df.type, And, "conjunction", m.fun)
            df = self.convert(df, t)
            out = t.left if arg.index == 1 else t.right
            d = Derivation("and_e", ctx, m, out, (df,))
        elif isinstance(arg, Case):
            self.term_sort(m, Sort.FULL)
            t = self.shape(df.type, Or, "disjunction", m.fun)
            df = self.convert(df, t)
            c1, c2 = self.bind(ctx, arg.var1, t.left), self.bind(ctx, arg.var2, t.right)
            target = arg.ann if arg.ann is not None else expected
            if arg.ann is not None:
                self.sort_check(arg.ann)
            if target is None:
                d1 = self.synth(c1, arg.body1)
                target = d1.type
            else:
                d1 = self.check(c1, arg.body1, target)
            d2 = self.check(c2, arg.body2, target)
            d = Derivation("or_e", ctx, m, target, (df, d1, d2))
        else:
            t = self.shape(df.type, Arrow, "function", m.fun)
            df = self.convert(df, t)
            da = self.check(ctx, arg, t.left)
            d = Derivation("->e", ctx, m, t.right, (df, da))
        return d

    # -- checking --------------------------------------------------------

    def check(self, ctx: Context, m: Term, a: Type) -> Derivation:
        self.sort_check(a)
        if isinstance(m, Lam):
            t = self.shape(a, Arrow, "function", m)
            dom = t.left
            if m.ann is not None:
                self.sort_check(m.ann)
                if not self.same(m.ann, dom):
                    self.fail(f"{print_term(m)}: annotation {print_type(m.ann)} "
                              f"does not match {print_type(dom)}")
                dom = m.ann
            d = self.check(self.bind(ctx, m.var, dom), m.body, t.right)
            return self.convert(Derivation("->i", ctx, m, Arrow(dom, t.right), (d,)), a)
        if isinstance(m, Pair):
            self.term_sort(m, Sort.FULL)
            t = self.shape(a, And, "conjunction", m)
            d1, d2 = self.check(ctx, m.left, t.left), self.check(ctx, m.right, t.right)
            return self.convert(Derivation("and_i", ctx, m, t, (d1, d2)), a)
        if isinstance(m, Inj):
            self.term_sort(m, Sort.FULL)
            if m.ann is not None:
                self.sort_check(m.ann)
                if not self.same(m.ann, a):
                    self.fail(f"{print_term(m)}: annotation {print_type(m.ann)} "
                              f"does not match {print_type(a)}")
            t = self.shape(a, Or, "disjunction", m)
            d = self.check(ctx, m.body, t.left if m.index == 1 else t.right)
            return self.convert(Derivation("or_i", ctx, m, t, (d,)), a)
        if isinstance(m, Mu):
            self.term_sort(m, Sort.LAMBDA_MU)
            target = a
            if m.ann is not None:
                self.sort_check(m.ann)
                if not self.same(m.ann, a):
                    self.fail(f"{print_term(m)}: annotation {print_type(m.ann)} "
                              f"does not match {print_type(a)}")
                target = m.ann
            d = self.check(self.bind_mu(ctx, m.var, target), m.body, BOT)
            return self.convert(Derivation("bot_e", ctx, m, target, (d,)), a)
        if isinstance(m, Name):
            self.term_sort(m, Sort.LAMBDA_MU)
            mm = ctx.mu_map
            if m.var not in mm:
                self.fail(f"unbound mu-variable {m.var}")
            d = self.check(ctx, m.body, mm[m.var])
            return self.convert(Derivation("bot_i", ctx, m, BOT, (d,)), a)
        if isinstance(m, App) and isinstance(m.arg, Case):
            return self.convert(self.elim(ctx, m, a), a)
        return self.convert(self.synth(ctx, m), a)


def check(ctx: Context, m: Term, a: Type, system: System = System.SFULL,
          eqs: Optional[EquationSet] = None) -> Derivation:
    """Derivation of ``ctx ⊢ m : a``; raises ``TypingError`` when there is none."""
    c = _Checker(system, eqs)
    for _, t in ctx.terms + ctx.mus:
        c.sort_check(t)
    return c.check(ctx, m, a)


def infer(ctx: Context, m: Term, system: System = System.SFULL,
          eqs: Optional[EquationSet] = None) -> Type:
    return derive(ctx, m, system, eqs).type


def derive(ctx: Context, m: Term, system: System = System.SFULL,
           eqs: Optional[EquationSet] = None) -> Derivation:
    """Synthesised derivation of ``m`` (its conclusion carries the inferred type)."""
    c = _Checker(system, eqs)
    for _, t in ctx.terms + ctx.mus:
        c.sort_check(t)
    return c.synth(ctx, m)


def typechecks(ctx: Context, m: Term, a: Type, system: System = System.SFULL,
               eqs: Optional[EquationSet] = None) -> bool:
    try:
        check(ctx, m, a, system, eqs)
    except TypingError:
        return False
    return True
