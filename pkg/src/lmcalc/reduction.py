"""Redexes, one-step reduction, traces, reduction graphs and SN verdicts."""

from __future__ import annotations

import enum
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .syntax import print_term
from .terms import (
    App, Case, Elim, Inj, Lam, Mu, Name, Pair, Position, Proj, Term, Var, alpha_key,
    children, count_mu_occurrences, fresh_name, all_names, free_vars, mu_fv,
    mu_rename, replace_at, size, struct_subst, subst, subterm, is_term,
)
from .types import And, Arrow, EquationSet, Type, unfold

DEFAULT_FUEL = 100_000


class Rule(enum.Enum):
    BETA = "beta"
    MU_ARG = "mu-arg"
    MU_PROJ = "mu-proj"
    MU_CASE = "mu-case"
    PAIR_PROJ = "pair-proj"
    CASE_INJ = "case-inj"
    PERM_ARG = "perm-arg"
    PERM_PROJ = "perm-proj"
    PERM_CASE = "perm-case"
    RHO = "rho"
    THETA = "theta"

    @property
    def is_mu(self) -> bool:
        return self in MU_RULES

    @property
    def is_beta_mu(self) -> bool:
        return self is Rule.BETA or self in MU_RULES


MU_RULES = frozenset({Rule.MU_ARG, Rule.MU_PROJ, Rule.MU_CASE})


@dataclass(frozen=True)
class StepLabel:
    rule: Rule
    mu_zero: bool = False   # μ-step whose variable occurs at most once

    def __str__(self):
        return self.rule.value + ("(mu0)" if self.mu_zero else "")


class RuleSet(frozenset):
    """A set of enabled ``Rule`` values."""

    def __repr__(self):
        return "RuleSet({" + ", ".join(sorted(r.value for r in self)) + "})"


BETA = RuleSet({Rule.BETA})
BETAMU = RuleSet({Rule.BETA} | MU_RULES)
RHO_THETA = RuleSet({Rule.RHO, Rule.THETA})
RHO = RuleSet({Rule.RHO})
BETAMU_RT = RuleSet(BETAMU | RHO_THETA)
FULL = RuleSet(BETAMU | {Rule.PAIR_PROJ, Rule.CASE_INJ,
                         Rule.PERM_ARG, Rule.PERM_PROJ, Rule.PERM_CASE})
FULL_RT = RuleSet(FULL | RHO_THETA)

PRESETS = {
    "beta": BETA, "betamu": BETAMU, "betamu-rt": BETAMU_RT,
    "full": FULL, "full-rt": FULL_RT, "rho": RHO, "rho-theta": RHO_THETA,
}


class ReductionError(Exception):
    pass


class InvariantViolation(ReductionError):
    pass


# Counts of ρ/θ steps whose size decrease was checked.  Diagnostic only.
class _SizeStats:
    def __init__(self):
        self._lock = threading.Lock()
        self.checked = 0
        self.violations = 0

    def record(self, ok: bool):
        with self._lock:
            self.checked += 1
            if not ok:
                self.violations += 1


RHO_THETA_STATS = _SizeStats()


# ---------------------------------------------------------------------------
# Redex detection


def _classify(t: Term) -> Optional[StepLabel]:
    if isinstance(t, App):
        f, e = t.fun, t.arg
        if isinstance(f, Lam) and is_term(e):
            return StepLabel(Rule.BETA)
        if isinstance(f, Mu):
            once = count_mu_occurrences(f.body, f.var) <= 1
            if isinstance(e, Proj):
                return StepLabel(Rule.MU_PROJ, once)
            if isinstance(e, Case):
                return StepLabel(Rule.MU_CASE, once)
            return StepLabel(Rule.MU_ARG, once)
        if isinstance(f, Pair) and isinstance(e, Proj):
            return StepLabel(Rule.PAIR_PROJ)
        if isinstance(f, Inj) and isinstance(e, Case):
            return StepLabel(Rule.CASE_INJ)
        if isinstance(f, App) and isinstance(f.arg, Case):
            if isinstance(e, Proj):
                return StepLabel(Rule.PERM_PROJ)
            if isinstance(e, Case):
                return StepLabel(Rule.PERM_CASE)
            return StepLabel(Rule.PERM_ARG)
        return None
    if isinstance(t, Name) and isinstance(t.body, Mu):
        return StepLabel(Rule.RHO)
    if (isinstance(t, Mu) and isinstance(t.body, Name) and t.body.var == t.var
            and t.var not in mu_fv(t.body.body)):
        return StepLabel(Rule.THETA)
    return None


@dataclass(frozen=True)
class Redex:
    path: Position
    label: StepLabel

    @property
    def rule(self) -> Rule:
        return self.label.rule


def redexes(m: Term, rs: RuleSet = FULL) -> list[Redex]:
    """All enabled redex occurrences, leftmost-outermost first."""
    out: list[Redex] = []
    stack: list[tuple[Term, Position]] = [(m, ())]
    while stack:
        t, path = stack.pop()
        label = _classify(t)
        if label is not None and label.rule in rs:
            out.append(Redex(path, label))
        kids = children(t)
        for i in range(len(kids) - 1, -1, -1):
            stack.append((kids[i], path + (i,)))
    return out


# ---------------------------------------------------------------------------
# Contraction


def _elim_result(ann: Optional[Type], e: Elim, eqs) -> Optional[Type]:
    """Type of ``(N e)`` given the type ``ann`` of ``N``, when it is determined."""
    if ann is None:
        return None
    if isinstance(e, Case):
        return e.ann
    u = unfold(ann, eqs)
    if isinstance(e, Proj):
        if isinstance(u, And):
            return u.left if e.index == 1 else u.right
        return None
    return u.right if isinstance(u, Arrow) else None


def contract(t: Term, eqs: Optional[EquationSet] = None) -> Term:
    """Contract the redex at the root of ``t``."""
    label = _classify(t)
    if label is None:
        raise ReductionError(f"no redex at root of {print_term(t)}")
    rule = label.rule
    if rule is Rule.BETA:
        return subst(t.fun.body, t.fun.var, t.arg)
    if rule in MU_RULES:
        mu, e = t.fun, t.arg
        var, body = mu.var, mu.body
        if var in free_vars(e)[1]:
            var = fresh_name(var, free_vars(e)[1] | all_names(body))
            body = mu_rename(body, mu.var, var)
        return Mu(var, _elim_result(mu.ann, e, eqs), struct_subst(body, var, e))
    if rule is Rule.PAIR_PROJ:
        return t.fun.left if t.arg.index == 1 else t.fun.right
    if rule is Rule.CASE_INJ:
        inj, case = t.fun, t.arg
        if inj.index == 1:
            return subst(case.body1, case.var1, inj.body)
        return subst(case.body2, case.var2, inj.body)
    if rule in (Rule.PERM_ARG, Rule.PERM_PROJ, Rule.PERM_CASE):
        inner, e = t.fun, t.arg
        case = inner.arg
        etv = free_vars(e)[0]
        branches = []
        for var, body in ((case.var1, case.body1), (case.var2, case.body2)):
            if var in etv:
                new = fresh_name(var, etv | all_names(body))
                body = subst(body, var, Var(new))
                var = new
            branches.append((var, App(body, e)))
        (v1, b1), (v2, b2) = branches
        return App(inner.fun, Case(v1, b1, v2, b2, _elim_result(case.ann, e, eqs)))
    if rule is Rule.RHO:
        mu = t.body
        return mu_rename(mu.body, mu.var, t.var)
    # THETA
    return t.body.body


def step(m: Term, path: Position, eqs: Optional[EquationSet] = None) -> Term:
    """Contract the redex at ``path``.  ρ and θ steps must shrink the term."""
    try:
        redex = subterm(m, path)
    except IndexError as exc:
        raise ReductionError(str(exc)) from None
    reduct = contract(redex, eqs)
    result = replace_at(m, path, reduct)
    label = _classify(redex)
    if label.rule in (Rule.RHO, Rule.THETA):
        ok = size(reduct) < size(redex)
        RHO_THETA_STATS.record(ok)
        if not ok:
            raise InvariantViolation(
                f"{label.rule.value} step did not decrease size: "
                f"{print_term(redex)} -> {print_term(reduct)}")
    return result


def reducts(m: Term, rs: RuleSet, eqs: Optional[EquationSet] = None
            ) -> Iterator[tuple[Redex, Term]]:
    for r in redexes(m, rs):
        yield r, step(m, r.path, eqs)


# ---------------------------------------------------------------------------
# Traces


@dataclass(frozen=True)
class TraceStep:
    path: Position
    label: StepLabel
    result: Term


@dataclass(frozen=True)
class Trace:
    start: Term
    steps: tuple[TraceStep, ...] = ()

    @property
    def end(self) -> Term:
        return self.steps[-1].result if self.steps else self.start

    @property
    def lg(self) -> int:
        return len(self.steps)

    @property
    def lg_bm(self) -> int:
        return sum(1 for s in self.steps if s.label.rule.is_beta_mu)

    @property
    def labels(self) -> list[Rule]:
        return [s.label.rule for s in self.steps]

    def terms(self) -> list[Term]:
        return [self.start] + [s.result for s in self.steps]

    def then(self, other: "Trace") -> "Trace":
        return Trace(self.start, self.steps + other.steps)

    def format(self, fmt: str = "text") -> str:
        lines = []
        for n, s in enumerate(self.steps, 1):
            path = ".".join(map(str, s.path)) or "root"
            if fmt == "lines":
                lines.append(f"step\t{n}\t{s.label}\t{path}\t{print_term(s.result)}")
            else:
                lines.append(f"{n}: {s.label}@{path} -> {print_term(s.result)}")
        if fmt == "lines":
            lines.append(f"summary\tlg={self.lg}\tlg_bm={self.lg_bm}")
        else:
            lines.append(f"lg={self.lg} lg_bm={self.lg_bm}")
        return "\n".join(lines)


def normalize(m: Term, rs: RuleSet = FULL, fuel: int = DEFAULT_FUEL,
              eqs: Optional[EquationSet] = None) -> Trace:
    """Leftmost-outermost reduction to normal form, at most ``fuel`` steps."""
    steps = []
    t = m
    for _ in range(fuel):
        rs_here = redexes(t, rs)
        if not rs_here:
            break
        r = rs_here[0]
        t = step(t, r.path, eqs)
        steps.append(TraceStep(r.path, r.label, t))
    return Trace(m, tuple(steps))


# ---------------------------------------------------------------------------
# Reduction graphs


@dataclass
class Edge:
    source: object
    path: Position
    label: StepLabel
    target: object


@dataclass
class ReductionGraph:
    root: object
    nodes: dict = field(default_factory=dict)        # key -> representative term
    edges: dict = field(default_factory=dict)        # key -> list[Edge]
    complete: bool = False
    expansions: int = 0

    def __len__(self):
        return len(self.nodes)

    def successors(self, key) -> list[Edge]:
        return self.edges.get(key, [])

    def find_cycle(self) -> Optional[list[Edge]]:
        """Edges of a path from the root ending in a cycle, if one exists."""
        WHITE, GREY, BLACK = 0, 1, 2
        colour = {k: WHITE for k in self.nodes}
        path_edges: list[Edge] = []
        stack = [(self.root, iter(self.successors(self.root)))]
        colour[self.root] = GREY
        while stack:
            key, it = stack[-1]
            edge = next(it, None)
            if edge is None:
                stack.pop()
                colour[key] = BLACK
                if path_edges:
                    path_edges.pop()
                continue
            tgt = edge.target
            if colour.get(tgt, WHITE) == GREY:
                return path_edges + [edge]
            if colour.get(tgt, WHITE) == WHITE and tgt in self.edges:
                colour[tgt] = GREY
                path_edges.append(edge)
                stack.append((tgt, iter(self.successors(tgt))))
        return None

    def trace_of(self, edges: list[Edge]) -> Trace:
        return Trace(self.nodes[self.root], tuple(
            TraceStep(e.path, e.label, self.nodes[e.target]) for e in edges))


def reduction_graph(m: Term, rs: RuleSet = FULL, fuel: int = DEFAULT_FUEL,
                    eqs: Optional[EquationSet] = None) -> ReductionGraph:
    """Breadth-first reduction graph of ``m``, nodes taken modulo alpha.

    ``fuel`` bounds the number of node expansions; ``complete`` tells
    whether every reachable node was expanded.
    """
    root = alpha_key(m)
    g = ReductionGraph(root, {root: m})
    queue = deque([root])
    while queue:
        if g.expansions >= fuel:
            return g
        key = queue.popleft()
        g.expansions += 1
        out = []
        for r, t in reducts(g.nodes[key], rs, eqs):
            k = alpha_key(t)
            if k not in g.nodes:
                g.nodes[k] = t
                queue.append(k)
            out.append(Edge(key, r.path, r.label, k))
        g.edges[key] = out
    g.complete = True
    return g


class NotStronglyNormalizing(ReductionError):
    def __init__(self, cycle: Trace):
        super().__init__("reduction graph has a cycle")
        self.cycle = cycle


@dataclass(frozen=True)
class Unknown:
    fuel_spent: int


@dataclass(frozen=True)
class SN:
    eta: int


@dataclass(frozen=True)
class Loop:
    cycle: Trace


SnVerdict = Union[SN, Loop, Unknown]


def longest_path(g: ReductionGraph) -> int:
    """Longest path from the root of a complete acyclic graph."""
    memo: dict = {}
    stack = [(g.root, False)]
    while stack:
        key, done = stack.pop()
        if done:
            memo[key] = max((memo[e.target] + 1 for e in g.successors(key)), default=0)
            continue
        if key in memo:
            continue
        stack.append((key, True))
        for e in g.successors(key):
            if e.target not in memo:
                stack.append((e.target, False))
    return memo[g.root]


def eta(m: Term, rs: RuleSet = FULL, fuel: int = DEFAULT_FUEL,
        eqs: Optional[EquationSet] = None) -> Union[int, Unknown]:
    """Length of the longest reduction of ``m``.

    Raises ``NotStronglyNormalizing`` when a cycle is found.
    """
    g = reduction_graph(m, rs, fuel, eqs)
    cyc = g.find_cycle()
    if cyc is not None:
        raise NotStronglyNormalizing(g.trace_of(cyc))
    if not g.complete:
        return Unknown(g.expansions)
    return longest_path(g)


def sn_verdict(m: Term, rs: RuleSet = FULL, fuel: int = DEFAULT_FUEL,
               eqs: Optional[EquationSet] = None) -> SnVerdict:
    g = reduction_graph(m, rs, fuel, eqs)
    cyc = g.find_cycle()
    if cyc is not None:
        return Loop(g.trace_of(cyc))
    if not g.complete:
        return Unknown(g.expansions)
    return SN(longest_path(g))


# ---------------------------------------------------------------------------
# Witness search


def reach(m: Term, target, rs: RuleSet, fuel: int = DEFAULT_FUEL,
          eqs: Optional[EquationSet] = None, min_bm: int = 0,
          min_steps: int = 0, exact_bm: Optional[int] = None) -> Optional[Trace]:
    """Shortest trace ``m ▷* t`` with ``t`` alpha-equal to ``target``.

    ``target`` is a term or a predicate ``goal(key, term)`` on alpha keys and
    representatives.  ``min_bm`` and ``min_steps`` require at least that many
    βμ steps / steps in total; ``exact_bm`` requires exactly that many βμ
    steps.  Returns ``None`` if nothing is found within ``fuel`` dequeued
    states.
    """
    if callable(target):
        goal = target
    else:
        tkey = alpha_key(target)
        goal = lambda key, _t: key == tkey  # noqa: E731
    bm_cap = exact_bm + 1 if exact_bm is not None else min_bm

    def state(key, bm, n):
        return key, min(bm, bm_cap), min(n, min_steps)

    def done(bm, n):
        if exact_bm is not None and bm != exact_bm:
            return False
        return bm >= min_bm and n >= min_steps

    start = state(alpha_key(m), 0, 0)
    terms = {start[0]: m}
    parent: dict = {start: None}
    queue = deque([start])
    spent = 0
    while queue and spent < fuel:
        st = queue.popleft()
        spent += 1
        key, bm, n = st
        if done(bm, n) and goal(key, terms[key]):
            return _rebuild(m, st, parent, terms)
        for r, t in reducts(terms[key], rs, eqs):
            k = alpha_key(t)
            terms.setdefault(k, t)
            nxt = state(k, bm + r.rule.is_beta_mu, n + 1)
            if nxt not in parent:
                parent[nxt] = (st, r)
                queue.append(nxt)
    return None


def _rebuild(m, st, parent, terms) -> Trace:
    steps = []
    while parent[st] is not None:
        prev, r = parent[st]
        steps.append(TraceStep(r.path, r.label, terms[st[0]]))
        st = prev
    steps.reverse()
    return Trace(m, tuple(steps))


def closure(m: Term, rs: RuleSet, eqs: Optional[EquationSet] = None,
            fuel: Optional[int] = None) -> dict:
    """Every term reachable from ``m`` (alpha key -> term), including ``m``.

    Without ``fuel`` this must only be used for terminating rule sets such
    as ρ or ρθ, which shrink the term at every step.
    """
    seen = {alpha_key(m): m}
    queue = deque([m])
    while queue:
        if fuel is not None:
            if fuel <= 0:
                raise ReductionError("closure fuel exhausted")
            fuel -= 1
        t = queue.popleft()
        for _, u in reducts(t, rs, eqs):
            k = alpha_key(u)
            if k not in seen:
                seen[k] = u
                queue.append(u)
    return seen


def rho_closure(m: Term) -> dict:
    return closure(m, RHO)
