"""Executable checks of the normalization lemmas on concrete terms and corpora.

Every check returns a ``LemmaReport``.  Existential conclusions are
discharged by bounded witness search, and a witness only counts once it has
been replayed step by step from the original term.  Failures keep their
inputs in the concrete syntax so that ``replay`` can rerun them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .corpus import (
    CorpusSpec, Item, enumerate_typed_terms, random_typed_term, skeletons, type_skeleton,
)
from .reduction import (
    BETA, BETAMU, BETAMU_RT, DEFAULT_FUEL, FULL, RHO, RHO_THETA, InvariantViolation,
    Loop, RuleSet, SN, Trace, TraceStep, Unknown, closure, contract, redexes, reach,
    rho_closure, sn_verdict, step,
)
from .syntax import (
    PHI, Context, parse_context, parse_equations, parse_term, parse_type,
    print_context, print_equations, print_term, print_type,
)
from .terms import (
    App, Inj, Lam, Pair, Sort, Term, Var, all_names, alpha_eq, alpha_key, children, replace_at,
    size, sort_of, subst, subterm, term_fv,
)
from .translate import (
    TranslationEnv, circle, circle_context, circle_typed, diamond, diamond_context, t_term,
)
from .typecheck import System, TypingError, check
from .types import (
    Arrow, Atom, BOT, EquationSet, Type, circle_equations, circle_type, is_good, neg,
)

PRESET_FOR_SORT = {Sort.LAMBDA: BETA, Sort.LAMBDA_MU: BETAMU, Sort.FULL: FULL}

GOOD_EQS_TEXT = "X = A /\\ (B -> X)"
MENDLER_EQS_TEXT = "X = A /\\ (X -> B)"
MENDLER_OR_EQS_TEXT = "X = A \\/ (X -> B)"


@dataclass
class Failure:
    lemma: str
    inputs: dict
    reason: str

    def __str__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.inputs.items())
        return f"{self.lemma} failed on {args}: {self.reason}"


@dataclass
class LemmaReport:
    lemma: str
    tried: int = 0
    passed: int = 0
    failures: list = field(default_factory=list)
    inconclusive: int = 0

    def record(self, outcome: Optional[bool], inputs: dict, reason: str = "") -> None:
        """``outcome`` is True (pass), False (failure) or None (out of fuel)."""
        self.tried += 1
        if outcome is True:
            self.passed += 1
        elif outcome is None:
            self.inconclusive += 1
        else:
            self.failures.append(Failure(self.lemma, dict(inputs), reason))

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "LemmaReport") -> "LemmaReport":
        return LemmaReport(self.lemma, self.tried + other.tried, self.passed + other.passed,
                           self.failures + other.failures,
                           self.inconclusive + other.inconclusive)

    def summary(self) -> str:
        return (f"{self.lemma}: tried={self.tried} passed={self.passed} "
                f"failed={len(self.failures)} inconclusive={self.inconclusive}")


# ---------------------------------------------------------------------------
# trace plumbing


def replay(trace: Trace, eqs: Optional[EquationSet] = None) -> bool:
    """Whether every recorded step really is that reduction."""
    t = trace.start
    for s in trace.steps:
        try:
            t = step(t, s.path, eqs)
        except Exception:
            return False
        if not alpha_eq(t, s.result, annotations=False):
            return False
    return True


def random_trace(rng: random.Random, m: Term, rs: RuleSet, max_len: int,
                 eqs: Optional[EquationSet] = None) -> Trace:
    """A random walk of at most ``max_len`` steps."""
    steps, t = [], m
    for _ in range(max_len):
        rx = redexes(t, rs)
        if not rx:
            break
        r = rng.choice(rx)
        t = step(t, r.path, eqs)
        steps.append(TraceStep(r.path, r.label, t))
    return Trace(m, tuple(steps))


def trace_from_paths(m: Term, paths: Iterable[tuple], eqs=None) -> Trace:
    steps, t = [], m
    for p in paths:
        label = _label_at(t, p)
        t = step(t, p, eqs)
        steps.append(TraceStep(tuple(p), label, t))
    return Trace(m, tuple(steps))


def _label_at(t, p):
    sub = subterm(t, p)
    for r in redexes(sub, FULL | RHO_THETA):
        if r.path == ():
            return r.label
    raise ValueError(f"no redex at {p}")


def _paths_text(trace: Trace) -> str:
    return " ".join(".".join(map(str, s.path)) or "root" for s in trace.steps)


def _parse_paths(text: str) -> list[tuple]:
    return [() if p == "root" else tuple(int(i) for i in p.split("."))
            for p in text.split()]


_HOLE = "•"   # not an identifier of the concrete syntax, so it never clashes


def _find_var(t, name) -> Optional[tuple]:
    stack = [(t, ())]
    while stack:
        u, path = stack.pop()
        if isinstance(u, Var) and u.name == name:
            return path
        for i, c in enumerate(children(u)):
            stack.append((c, path + (i,)))
    return None


def _lift(trace: Trace, ctx_img: Term, hole: tuple) -> Trace:
    """Run a trace of the hole's filler inside the surrounding context."""
    steps = tuple(TraceStep(hole + s.path, s.label, replace_at(ctx_img, hole, s.result))
                  for s in trace.steps)
    return Trace(replace_at(ctx_img, hole, trace.start), steps)


def _split_image(m, path, translate, env, eqs=None):
    """Image of ``m`` with a hole at ``path``, the hole's position in it, and the
    images of the redex at ``path`` and of its contractum."""
    redex = subterm(m, path)
    ctx_img = translate(replace_at(m, path, Var(_HOLE)), env)
    hole = _find_var(ctx_img, _HOLE)
    return ctx_img, hole, translate(redex, env), translate(contract(redex, eqs), env)


# ---------------------------------------------------------------------------
# λμ -> λ simulation


def simulate_diamond_step(m: Term, path: tuple, fuel: int = DEFAULT_FUEL,
                          eqs: Optional[EquationSet] = None) -> Optional[Trace]:
    """A trace ``m⋄ ▷β⁺ n⋄`` where ``n`` is the reduct of ``m`` at ``path``.

    The search runs on the redex's image first (translation is compositional)
    and is lifted into the context; the whole-term search is the fallback.
    """
    n = step(m, path, eqs)
    avoid = all_names(m) | all_names(n)
    dm = diamond(m, TranslationEnv(set(avoid)))
    dn = diamond(n, TranslationEnv(set(avoid)))
    ctx_img, hole, r_img, c_img = _split_image(m, path, diamond, TranslationEnv(set(avoid)), eqs)
    local = reach(r_img, c_img, BETA, fuel, min_steps=1)
    if local is not None:
        t = _lift(local, ctx_img, hole)
        if (alpha_eq(t.start, dm, annotations=False) and alpha_eq(t.end, dn, annotations=False)
                and replay(t)):
            return Trace(dm, t.steps)
    return reach(dm, dn, BETA, fuel, min_steps=1)


def check_simulation_diamond(m: Term, fuel: int = DEFAULT_FUEL,
                             eqs: Optional[EquationSet] = None,
                             report: Optional[LemmaReport] = None) -> LemmaReport:
    """Each one-step βμ reduct ``n`` of ``m`` gives ``m⋄ ▷β⁺ n⋄``."""
    rep = report or LemmaReport("sim-diamond")
    for r in redexes(m, BETAMU):
        t = simulate_diamond_step(m, r.path, fuel, eqs)
        inputs = {"term": print_term(m), "paths": _paths_text(Trace(m, (TraceStep(r.path, r.label, m),)))}
        if t is None:
            rep.record(False, inputs, f"no β-trace from the image of {r.label} step")
        else:
            rep.record(t.lg >= 1 and all(l.is_beta_mu for l in t.labels), inputs,
                       "image trace is empty or not pure β")
    return rep


def check_simulation_diamond_trace(trace: Trace, fuel: int = DEFAULT_FUEL,
                                   eqs: Optional[EquationSet] = None,
                                   report: Optional[LemmaReport] = None) -> LemmaReport:
    """Aggregate form: the images of a βμ trace are joined by at least as many β steps."""
    rep = report or LemmaReport("sim-diamond")
    inputs = {"term": print_term(trace.start), "paths": _paths_text(trace)}
    total, prev = 0, trace.start
    for s in trace.steps:
        t = simulate_diamond_step(prev, s.path, fuel, eqs)
        if t is None:
            rep.record(False, inputs, f"no β-trace simulating {s.label} at {s.path}")
            return rep
        total += t.lg
        prev = s.result
    rep.record(total >= trace.lg, inputs, f"image length {total} < source length {trace.lg}")
    return rep


# ---------------------------------------------------------------------------
# λμ^{→∧∨} -> λμ simulation


@dataclass(frozen=True)
class CircleSimulation:
    forward: Trace     # m∘ ▷*_{βμρθ} P
    back: Trace        # n∘ ▷*_ρ P

    @property
    def witness(self) -> Term:
        return self.forward.end


def simulate_circle_step(m: Term, path: tuple, fuel: int = DEFAULT_FUEL,
                         eqs: Optional[EquationSet] = None, min_bm: int = 1
                         ) -> Optional[CircleSimulation]:
    """Witness ``P`` with ``m∘ ▷*_{βμρθ} P`` (at least ``min_bm`` βμ steps) and ``n∘ ▷ρ* P``."""
    n = step(m, path, eqs)
    avoid = all_names(m) | all_names(n) | {PHI}
    cm = circle(m, TranslationEnv(set(avoid)))
    cn = circle(n, TranslationEnv(set(avoid)))
    ctx_img, hole, r_img, c_img = _split_image(m, path, circle, TranslationEnv(set(avoid)), eqs)
    targets = rho_closure(c_img)
    local = reach(r_img, lambda k, _t: k in targets, BETAMU_RT, fuel, min_bm=min_bm)
    if local is not None:
        back = reach(c_img, local.end, RHO, fuel)
        if back is not None:
            fwd, bwd = _lift(local, ctx_img, hole), _lift(back, ctx_img, hole)
            sim = CircleSimulation(Trace(cm, fwd.steps), Trace(cn, bwd.steps))
            if (alpha_eq(fwd.start, cm, annotations=False)
                    and alpha_eq(bwd.start, cn, annotations=False) and _valid(sim, min_bm)):
                return sim
    targets = rho_closure(cn)
    fwd = reach(cm, lambda k, _t: k in targets, BETAMU_RT, fuel, min_bm=min_bm)
    if fwd is None:
        return None
    bwd = reach(cn, fwd.end, RHO, fuel)
    sim = CircleSimulation(fwd, bwd)
    return sim if bwd is not None and _valid(sim, min_bm) else None


def _valid(sim: CircleSimulation, min_bm: int) -> bool:
    return (replay(sim.forward) and replay(sim.back) and sim.forward.lg_bm >= min_bm
            and all(l.value == "rho" for l in sim.back.labels)
            and alpha_eq(sim.forward.end, sim.back.end, annotations=False))


def check_simulation_circle(m: Term, fuel: int = DEFAULT_FUEL,
                            eqs: Optional[EquationSet] = None,
                            report: Optional[LemmaReport] = None) -> LemmaReport:
    """Each one-step reduct ``n`` of ``m``: ``m∘ ▷*_{βμρθ} P`` with lg_βμ ≥ 1 and ``n∘ ▷ρ* P``."""
    rep = report or LemmaReport("sim-circle")
    for r in redexes(m, FULL):
        inputs = {"term": print_term(m), "paths": ".".join(map(str, r.path)) or "root"}
        sim = simulate_circle_step(m, r.path, fuel, eqs)
        rep.record(sim is not None, inputs, f"no witness for the {r.label} step")
    return rep


def check_simulation_aggregate(trace: Trace, fuel: int = DEFAULT_FUEL,
                               report: Optional[LemmaReport] = None) -> LemmaReport:
    """Multi-step form: ``P`` with lg_βμ(m∘ ▷* P) ≥ lg(trace) and ``end∘ ▷ρ* P``.

    Searched directly rather than by chaining one-step witnesses.
    """
    rep = report or LemmaReport("sim-aggregate")
    inputs = {"term": print_term(trace.start), "paths": _paths_text(trace)}
    avoid = set().union(*(all_names(t) for t in trace.terms())) | {PHI}
    cm = circle(trace.start, TranslationEnv(set(avoid)))
    cn = circle(trace.end, TranslationEnv(set(avoid)))
    targets = rho_closure(cn)
    fwd = reach(cm, lambda k, _t: k in targets, BETAMU_RT, fuel, min_bm=trace.lg)
    if fwd is None:
        rep.record(None if trace.lg > 0 else False, inputs,
                   "no witness within fuel")
        return rep
    bwd = reach(cn, fwd.end, RHO, fuel)
    ok = bwd is not None and _valid(CircleSimulation(fwd, bwd), trace.lg)
    rep.record(ok, inputs, "witness did not replay")
    return rep


# ---------------------------------------------------------------------------
# postponement of ρθ


def postpone(trace: Trace, fuel: int = DEFAULT_FUEL) -> Optional[tuple[Trace, Trace]]:
    """``start ▷βμ⁺ P`` and ``P ▷ρθ* end`` for a βμρθ trace with a βμ step."""
    if all(l.is_beta_mu for l in trace.labels):
        return trace, Trace(trace.end)
    end_key = alpha_key(trace.end)
    end_size = size(trace.end)

    def goal(_k, t):
        return size(t) >= end_size and end_key in closure(t, RHO_THETA)

    fwd = reach(trace.start, goal, BETAMU, fuel, min_steps=1)
    if fwd is None:
        return None
    back = reach(fwd.end, trace.end, RHO_THETA, fuel)
    if back is None:
        return None
    return fwd, back


def check_postponement(trace: Trace, fuel: int = DEFAULT_FUEL,
                       report: Optional[LemmaReport] = None) -> LemmaReport:
    rep = report or LemmaReport("postpone")
    inputs = {"term": print_term(trace.start), "paths": _paths_text(trace)}
    if trace.lg_bm < 1:
        rep.record(True, inputs)
        return rep
    found = postpone(trace, fuel)
    if found is None:
        rep.record(False, inputs, "no βμ⁺ then ρθ* reordering found")
        return rep
    fwd, back = found
    ok = (replay(fwd) and replay(back) and fwd.lg >= 1
          and all(l.is_beta_mu for l in fwd.labels)
          and all(not l.is_beta_mu for l in back.labels)
          and alpha_eq(fwd.end, back.start, annotations=False)
          and alpha_eq(back.end, trace.end, annotations=False))
    rep.record(ok, inputs, "reordered traces did not replay")
    return rep


# ---------------------------------------------------------------------------
# commutation of ρ with the other rules


def _one_step(t, rs) -> dict:
    out = {}
    for r in redexes(t, rs):
        u = step(t, r.path)
        out.setdefault(alpha_key(u), u)
    return out


def check_diag(m: Term, report: Optional[LemmaReport] = None) -> LemmaReport:
    """One-step commutation of ρ with ρθ and with βμ."""
    rep = report or LemmaReport("diag")
    rho1 = _one_step(m, RHO)
    for pk, p in rho1.items():
        for qk, q in _one_step(m, RHO_THETA).items():
            ok = pk == qk or bool(_one_step(p, RHO_THETA).keys() & _one_step(q, RHO).keys())
            rep.record(ok, {"term": print_term(m), "P": print_term(p), "Q": print_term(q),
                            "clause": "1"}, "no N with P ▷ρθ N and Q ▷ρ N")
        for qk, q in _one_step(m, BETAMU).items():
            ok = bool(_one_step(p, BETAMU).keys() & rho_closure(q).keys())
            rep.record(ok, {"term": print_term(m), "P": print_term(p), "Q": print_term(q),
                            "clause": "2"}, "no N with P ▷βμ N and Q ▷ρ* N")
    return rep


def check_new(m: Term, report: Optional[LemmaReport] = None) -> LemmaReport:
    """ρ* against at most one ρθ step, against ρθ*, and against one βμ step."""
    rep = report or LemmaReport("new")
    rho_star = rho_closure(m)
    for p in rho_star.values():
        p_rt1 = {alpha_key(p)} | _one_step(p, RHO_THETA).keys()
        p_rt = closure(p, RHO_THETA).keys()
        for q in [m] + list(_one_step(m, RHO_THETA).values()):
            ok = bool(p_rt1 & rho_closure(q).keys())
            rep.record(ok, {"term": print_term(m), "P": print_term(p), "Q": print_term(q),
                            "clause": "1"}, "no N with P ▷ρθ^≤1 N and Q ▷ρ* N")
        for q in closure(m, RHO_THETA).values():
            ok = bool(p_rt & rho_closure(q).keys())
            rep.record(ok, {"term": print_term(m), "P": print_term(p), "Q": print_term(q),
                            "clause": "2"}, "no N with P ▷ρθ* N and Q ▷ρ* N")
        for q in _one_step(m, BETAMU).values():
            ok = bool(_one_step(p, BETAMU).keys() & rho_closure(q).keys())
            rep.record(ok, {"term": print_term(m), "P": print_term(p), "Q": print_term(q),
                            "clause": "3"}, "no N with P ▷βμ N and Q ▷ρ* N")
    return rep


def _bounded_traces(m: Term, rs: RuleSet, depth: int, limit: int) -> list[Trace]:
    """One shortest trace to each term reachable in at most ``depth`` steps."""
    out = [Trace(m)]
    seen = {alpha_key(m)}
    frontier = [Trace(m)]
    for _ in range(depth):
        nxt = []
        for tr in frontier:
            for r in redexes(tr.end, rs):
                u = step(tr.end, r.path)
                k = alpha_key(u)
                if k in seen:
                    continue
                seen.add(k)
                t2 = Trace(m, tr.steps + (TraceStep(r.path, r.label, u),))
                out.append(t2)
                nxt.append(t2)
                if len(out) >= limit:
                    return out
        frontier = nxt
    return out


def check_diag_star(m: Term, depth: int = 3, limit: int = 40, fuel: int = DEFAULT_FUEL,
                    report: Optional[LemmaReport] = None) -> LemmaReport:
    """``m ▷ρ* P``, ``m ▷*_{βμρθ} Q`` ⟹ ``P ▷* N``, ``Q ▷ρ* N`` with equal βμ counts."""
    rep = report or LemmaReport("diag-star")
    for p in rho_closure(m).values():
        for tq in _bounded_traces(m, BETAMU_RT, depth, limit):
            targets = rho_closure(tq.end)
            found = reach(p, lambda k, _t: k in targets, BETAMU_RT, fuel, exact_bm=tq.lg_bm)
            ok = found is not None and replay(found)
            rep.record(ok, {"term": print_term(m), "P": print_term(p),
                            "paths": _paths_text(tq)},
                       f"no N with lg_βμ(P ▷* N) = {tq.lg_bm} and Q ▷ρ* N")
    return rep


def check_commutation(m: Term, depth: int = 3, limit: int = 40,
                      fuel: int = DEFAULT_FUEL) -> dict[str, LemmaReport]:
    return {"diag": check_diag(m), "new": check_new(m),
            "diag-star": check_diag_star(m, depth, limit, fuel)}


# ---------------------------------------------------------------------------
# typing of the translations


def types_up_to_depth(depth: int, atoms=("A",), bot: bool = True) -> list[Type]:
    """Implicational types over ``atoms`` (and ⊥) of depth at most ``depth``; atoms have depth 1."""
    base = [Atom(a) for a in atoms] + ([BOT] if bot else [])
    every = list(base)
    for _ in range(depth - 1):
        every = list(dict.fromkeys(base + [Arrow(l, r) for l in every for r in every]))
    return every


def check_tran(depth: int = 4, atoms=("A",), report: Optional[LemmaReport] = None) -> LemmaReport:
    rep = report or LemmaReport("tran")
    for a in types_up_to_depth(depth, atoms):
        try:
            check(Context(), t_term(a), Arrow(neg(neg(a)), a), System.SC)
            rep.record(True, {"type": print_type(a)})
        except TypingError as exc:
            rep.record(False, {"type": print_type(a)}, str(exc))
    return rep


def check_coding_diamond(item: Item, eqs: Optional[EquationSet] = None,
                         report: Optional[LemmaReport] = None) -> LemmaReport:
    """Γ⋄ ⊢ M⋄ : A in S^c (modulo ``eqs``)."""
    rep = report or LemmaReport("coding3" if eqs else "coding1")
    ctx, m, a = item
    env = TranslationEnv(all_names(m) | set(ctx.term_map) | set(ctx.mu_map))
    inputs = _item_inputs(item, eqs)
    try:
        dm = diamond(m, env)
        check(diamond_context(ctx, env), dm, a, System.SC, eqs)
        rep.record(True, inputs)
    except (TypingError, ValueError) as exc:
        rep.record(False, inputs, str(exc))
    return rep


def check_coding_circle(item: Item, eqs: Optional[EquationSet] = None,
                        report: Optional[LemmaReport] = None) -> LemmaReport:
    """Γ∘ ⊢ M∘ : A∘ in S^μ (modulo ``eqs``∘), binders of M∘ annotated from M's typing."""
    rep = report or LemmaReport("coding4" if eqs else "coding2")
    ctx, m, a = item
    inputs = _item_inputs(item, eqs)
    try:
        cm = circle_typed(ctx, m, a, eqs)
        check(circle_context(ctx), cm, circle_type(a), System.SMU,
              circle_equations(eqs) if eqs else None)
        rep.record(True, inputs)
    except (TypingError, ValueError) as exc:
        rep.record(False, inputs, str(exc))
    return rep


def check_typing_translations(spec: CorpusSpec, tran_depth: int = 4) -> LemmaReport:
    """Lemmas tran and coding1-4 over a corpus: ⋄ for λμ sorts, ∘ for the full sort."""
    rep = check_tran(tran_depth)
    rep.lemma = "typing-translations"
    for item in enumerate_typed_terms(spec):
        if spec.sort is Sort.FULL:
            rep = rep.merge(check_coding_circle(item, spec.eqs))
        else:
            rep = rep.merge(check_coding_diamond(item, spec.eqs))
    rep.lemma = "typing-translations"
    return rep


def _item_inputs(item: Item, eqs=None) -> dict:
    d = {"context": print_context(item.ctx), "term": print_term(item.term),
         "type": print_type(item.type)}
    if eqs:
        d["eqs"] = print_equations(eqs).replace("\n", "; ")
    return d


# ---------------------------------------------------------------------------
# SN checks


def _implies(premise, conclusion) -> Optional[bool]:
    if isinstance(premise, Loop):
        return True
    if isinstance(premise, Unknown) or isinstance(conclusion, Unknown):
        return None
    return isinstance(conclusion, SN)


def check_sn_transfer(m: Term, fuel: int = DEFAULT_FUEL,
                      report: Optional[LemmaReport] = None) -> LemmaReport:
    """SN of the translated term transfers back to the source term.

    Full terms: SN(m∘, βμρθ) ⟹ SN(m).  λμ terms: SN(m⋄, β) ⟹ SN(m, βμ)
    (when m is annotated) and SN(m, βμ) ⟹ SN(m, βμρθ).
    """
    rep = report or LemmaReport("sn-transfer")
    inputs = {"term": print_term(m)}
    if sort_of(m) is Sort.FULL:
        pre = sn_verdict(circle(m), BETAMU_RT, fuel)
        rep.record(_implies(pre, sn_verdict(m, FULL, fuel)), inputs, "m∘ is SN but m is not")
        return rep
    v_bm = sn_verdict(m, BETAMU, fuel)
    try:
        dm = diamond(m)
    except ValueError:
        dm = None
    if dm is not None:
        rep.record(_implies(sn_verdict(dm, BETA, fuel), v_bm), inputs, "m⋄ is SN but m is not")
    rep.record(_implies(v_bm, sn_verdict(m, BETAMU_RT, fuel)), inputs,
               "m is βμ-SN but not βμρθ-SN")
    return rep


def sn_sweep(spec: CorpusSpec, fuel: int = DEFAULT_FUEL,
             report: Optional[LemmaReport] = None) -> LemmaReport:
    """Every corpus item is SN under its sort's rule set."""
    rep = report or LemmaReport("sn-sweep")
    rs = PRESET_FOR_SORT[spec.sort]
    for item in enumerate_typed_terms(spec):
        v = sn_verdict(item.term, rs, fuel, spec.eqs)
        outcome = True if isinstance(v, SN) else None if isinstance(v, Unknown) else False
        rep.record(outcome, _item_inputs(item, spec.eqs), "reduction graph has a cycle")
    return rep


def check_substitution_sn(spec: CorpusSpec, fuel: int = DEFAULT_FUEL,
                          var: str = "x", report: Optional[LemmaReport] = None) -> LemmaReport:
    """Typed SN terms M (x : B free) and N : B give an SN M[x:=N].

    Pairs come from typing the skeleton ``(\\x. M) N`` jointly, so every
    pair for which the substitution is well typed is visited.
    """
    rep = report or LemmaReport("subst-sn")
    rs = PRESET_FOR_SORT[spec.sort]
    opened = [s for n in range(1, spec.max_size + 1)
              for s in skeletons(spec.sort, n, (var,)) if var in term_fv(s)]
    closed = [s for n in range(1, spec.max_size + 1) for s in skeletons(spec.sort, n)]
    pair_spec = CorpusSpec(sort=spec.sort, atoms=spec.atoms)
    verdicts = {}

    def verdict(t):
        k = alpha_key(t)
        if k not in verdicts:
            verdicts[k] = sn_verdict(t, rs, fuel)
        return verdicts[k]

    for sm in opened:
        for sn in closed:
            for item in type_skeleton(App(Lam(var, None, sm), sn), pair_spec):
                lam, n = item.term.fun, item.term.arg
                m = lam.body
                inputs = {"M": print_term(m), "x": var, "N": print_term(n)}
                vm, vn = verdict(m), verdict(n)
                if not (isinstance(vm, SN) and isinstance(vn, SN)):
                    unknown = isinstance(vm, Unknown) or isinstance(vn, Unknown)
                    rep.record(None if unknown else True, inputs)
                    continue
                v = sn_verdict(subst(m, var, n), rs, fuel)
                rep.record(True if isinstance(v, SN) else None if isinstance(v, Unknown) else False,
                           inputs, "M[x:=N] is not SN")
    return rep


def check_snrth(spec: CorpusSpec, report: Optional[LemmaReport] = None) -> LemmaReport:
    """ρθ-closures of corpus terms (and of their ∘ images) terminate with shrinking steps."""
    rep = report or LemmaReport("snrth")
    for item in enumerate_typed_terms(spec):
        inputs = _item_inputs(item)
        try:
            terms = [item.term]
            if spec.sort is Sort.FULL:
                terms.append(circle(item.term))
            for t in terms:
                for u in closure(t, RHO_THETA).values():
                    if not all(size(step(u, r.path)) < size(u) for r in redexes(u, RHO_THETA)):
                        raise InvariantViolation("ρθ step did not shrink")
            rep.record(True, inputs)
        except InvariantViolation as exc:
            rep.record(False, inputs, str(exc))
    return rep


# ---------------------------------------------------------------------------
# recursive types: Mendler's counterexamples


MENDLER_M = r"\x:X. ((x p2) x)"
MENDLER_N = r"\x:X. (x [y. y | z. (z w2[X] z)])"


def mendler_terms():
    """The two self-applying terms with their equations, contexts and types.

    The disjunctive term is typed under ``X = A \\/ (X -> A)``: its case
    branches have types A and B, so typing forces B = A.
    """
    m = parse_term(MENDLER_M)
    y = Var("y")
    first = (parse_equations(MENDLER_EQS_TEXT), Context.of({"y": Atom("A")}),
             App(m, Pair(y, m)), Atom("B"))
    n = parse_term(MENDLER_N)
    second = (parse_equations("X = A \\/ (X -> A)"), Context(),
              App(n, Inj(2, n, Atom("X"))), Atom("A"))
    return first, second


def run_counterexamples(fuel: int = 20, good_max_size: int = 6,
                        report: Optional[LemmaReport] = None) -> LemmaReport:
    rep = report or LemmaReport("mendler-counter")
    for text in (MENDLER_EQS_TEXT, MENDLER_OR_EQS_TEXT):
        g = is_good(parse_equations(text))
        rep.record(not g.good, {"eqs": text, "check": "not good"}, "accepted as good")
    for eqs, ctx, t, a in mendler_terms():
        inputs = {"eqs": print_equations(eqs), "term": print_term(t)}
        try:
            check(ctx, t, a, System.SFULL, eqs)
            rep.record(True, {**inputs, "check": "typechecks"})
        except TypingError as exc:
            rep.record(False, {**inputs, "check": "typechecks"}, str(exc))
        v = sn_verdict(t, FULL, fuel)
        rep.record(isinstance(v, Loop), {**inputs, "check": "loop"}, f"verdict {v}")
    good = parse_equations(GOOD_EQS_TEXT)
    rep.record(is_good(good).good, {"eqs": GOOD_EQS_TEXT, "check": "good"}, "rejected")
    return rep


# ---------------------------------------------------------------------------
# appendix redex families


APPENDIX_FAMILIES = {
    "beta": r"(\x. (x n) m)",
    "mu-arg": "(mu a. [a] m n)",
    "mu-proj": "(mu a. [a] m p1)",
    "mu-case": "(mu a. [a] m [x1. n1 | x2. n2])",
    "pair-proj": "(<m1, m2> p1)",
    "case-inj": "(w1 m [x1. x1 | x2. n2])",
    "perm-arg": "(m [x1. n1 | x2. n2] n)",
    "perm-proj": "(m [x1. n1 | x2. n2] p1)",
    "perm-case": "(m [x1. n1 | x2. n2] [y1. l1 | y2. l2])",
}


def appendix_terms() -> dict[str, Term]:
    return {k: parse_term(v) for k, v in APPENDIX_FAMILIES.items()}


# ---------------------------------------------------------------------------
# dispatcher


LEMMA_IDS = ("tran", "coding1", "coding2", "coding3", "coding4", "sim-diamond",
             "sim-circle", "sim-aggregate", "postpone", "diag", "diag-star",
             "sn-transfer", "subst-sn", "snrth", "mendler-counter", "sn-sweep")


def verify(lemma: str, sort: Sort = Sort.FULL, max_size: int = 4, seed: int = 0,
           count: int = 0, fuel: int = DEFAULT_FUEL, eqs: Optional[EquationSet] = None,
           atoms=("A",)) -> LemmaReport:
    """Run one lemma check over an exhaustive corpus (plus ``count`` random samples)."""
    rng = random.Random(seed)

    def corpus(s=sort, e=eqs, at=atoms):
        return list(enumerate_typed_terms(CorpusSpec(sort=s, max_size=max_size, atoms=at, eqs=e)))

    def randoms(s):
        return [random_typed_term(rng, s, atoms, depth=4, min_size=3, max_size=30).term
                for _ in range(count)]

    rep = LemmaReport(lemma)
    if lemma == "tran":
        return check_tran(max_size, atoms)
    if lemma in ("coding1", "coding3"):
        e = eqs
        if lemma == "coding3" and e is None:
            e = circle_equations(parse_equations(GOOD_EQS_TEXT))
        at = atoms if lemma == "coding1" else ("A", "B")
        for item in corpus(Sort.LAMBDA_MU, e, at):
            check_coding_diamond(item, e, rep)
        return rep
    if lemma in ("coding2", "coding4"):
        e = eqs
        if lemma == "coding4" and e is None:
            e = parse_equations(GOOD_EQS_TEXT)
        at = atoms if lemma == "coding2" else ("A", "B")
        for item in corpus(Sort.FULL, e, at):
            check_coding_circle(item, e, rep)
        return rep
    if lemma == "sim-diamond":
        s = min(sort, Sort.LAMBDA_MU)
        for item in corpus(s):
            check_simulation_diamond(item.term, fuel, report=rep)
        for m in randoms(s):
            check_simulation_diamond_trace(random_trace(rng, m, BETAMU, 6), fuel, report=rep)
        return rep
    if lemma == "sim-circle":
        for item in corpus(Sort.FULL):
            check_simulation_circle(item.term, fuel, report=rep)
        for m in randoms(Sort.FULL):
            check_simulation_circle(m, fuel, report=rep)
        return rep
    if lemma == "sim-aggregate":
        for item in corpus(Sort.FULL):
            check_simulation_aggregate(random_trace(rng, item.term, FULL, 3), fuel, report=rep)
        return rep
    if lemma == "postpone":
        s = min(sort, Sort.LAMBDA_MU)
        terms = [i.term for i in corpus(s)] + randoms(s)
        for m in terms:
            tr = random_trace(rng, m, BETAMU_RT, 6)
            if tr.lg_bm >= 1:
                check_postponement(tr, fuel, report=rep)
        return rep
    if lemma == "diag":
        for item in corpus(min(sort, Sort.LAMBDA_MU)):
            check_diag(item.term, rep)
            check_new(item.term, rep)
        return rep
    if lemma == "diag-star":
        for item in corpus(min(sort, Sort.LAMBDA_MU)):
            check_diag_star(item.term, fuel=fuel, report=rep)
        return rep
    if lemma == "sn-transfer":
        for item in corpus():
            check_sn_transfer(item.term, fuel, rep)
        return rep
    if lemma == "subst-sn":
        return check_substitution_sn(CorpusSpec(sort=Sort.LAMBDA, max_size=max_size, atoms=atoms),
                                     fuel)
    if lemma == "snrth":
        return check_snrth(CorpusSpec(sort=sort, max_size=max_size, atoms=atoms))
    if lemma == "mendler-counter":
        return run_counterexamples()
    if lemma == "sn-sweep":
        return sn_sweep(CorpusSpec(sort=sort, max_size=max_size, atoms=atoms, eqs=eqs), fuel)
    raise ValueError(f"unknown lemma {lemma!r}; expected one of {', '.join(LEMMA_IDS)}")


def replay_failure(f: Failure, fuel: int = DEFAULT_FUEL) -> LemmaReport:
    """Rerun the check that produced ``f`` on its stored inputs."""
    inp = f.inputs
    eqs = parse_equations(inp["eqs"]) if "eqs" in inp else None
    if f.lemma in ("coding1", "coding2", "coding3", "coding4"):
        item = Item(parse_context(inp["context"]), parse_term(inp["term"]), parse_type(inp["type"]))
        fn = check_coding_diamond if f.lemma in ("coding1", "coding3") else check_coding_circle
        return fn(item, eqs)
    if f.lemma == "sn-sweep":
        m = parse_term(inp["term"])
        rep = LemmaReport("sn-sweep")
        v = sn_verdict(m, PRESET_FOR_SORT[sort_of(m)], fuel, eqs)
        rep.record(True if isinstance(v, SN) else None if isinstance(v, Unknown) else False,
                   inp, "reduction graph has a cycle")
        return rep
    if f.lemma == "subst-sn":
        rep = LemmaReport("subst-sn")
        m, n = parse_term(inp["M"]), parse_term(inp["N"])
        v = sn_verdict(subst(m, inp["x"], n), PRESET_FOR_SORT[sort_of(m)], fuel)
        rep.record(True if isinstance(v, SN) else None if isinstance(v, Unknown) else False,
                   inp, "M[x:=N] is not SN")
        return rep
    m = parse_term(inp["term"])
    if f.lemma == "sim-diamond":
        tr = trace_from_paths(m, _parse_paths(inp["paths"]))
        return check_simulation_diamond_trace(tr, fuel)
    if f.lemma == "sim-circle":
        rep = LemmaReport("sim-circle")
        sim = simulate_circle_step(m, _parse_paths(inp["paths"])[0], fuel)
        rep.record(sim is not None, inp, "no witness")
        return rep
    if f.lemma == "sim-aggregate":
        return check_simulation_aggregate(trace_from_paths(m, _parse_paths(inp["paths"])), fuel)
    if f.lemma == "postpone":
        return check_postponement(trace_from_paths(m, _parse_paths(inp["paths"])), fuel)
    if f.lemma == "diag":
        return check_diag(m)
    if f.lemma == "new":
        return check_new(m)
    if f.lemma == "diag-star":
        return check_diag_star(m, fuel=fuel)
    if f.lemma == "sn-transfer":
        return check_sn_transfer(m, fuel)
    raise ValueError(f"cannot replay {f.lemma}")
