"""Typed term corpora.

Exhaustive mode enumerates untyped skeletons by size (bound variables named
by de Bruijn level, so distinct skeletons are distinct modulo α), types each
one by first-order unification and reads the principal type back with the
residual type variables grounded to the first atom.  Under an equation set
the unifier runs without an occurs check and cyclic solutions are folded
back onto recursion variables.

Random mode grows typing derivations directly, so every sample is typed by
construction.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .syntax import Context, Mode
from .terms import App, Case, Inj, Lam, Mu, Name, Pair, Proj, Sort, Term, Var, size
from .typecheck import System, TypingError, check
from .types import And, Arrow, Atom, BOT, Bot, EquationSet, Or, Type

SYSTEM_FOR_SORT = {Sort.LAMBDA: System.S, Sort.LAMBDA_MU: System.SMU, Sort.FULL: System.SFULL}


@dataclass(frozen=True)
class CorpusSpec:
    sort: Sort = Sort.LAMBDA
    max_size: int = 4
    atoms: tuple = ("A",)
    mode: Mode = Mode.CHURCH
    eqs: Optional[EquationSet] = None
    generation: str = "exhaustive"      # or "random"
    seed: int = 0
    count: int = 100
    free: tuple = ()                    # free term variables allowed in exhaustive mode
    min_size: int = 1

    @property
    def system(self) -> System:
        return SYSTEM_FOR_SORT[self.sort]


@dataclass(frozen=True)
class Item:
    ctx: Context
    term: Term
    type: Type

    def __iter__(self):
        return iter((self.ctx, self.term, self.type))


def enumerate_typed_terms(spec: CorpusSpec) -> Iterator[Item]:
    if spec.generation == "random":
        yield from random_corpus(spec)
        return
    gen = _Skeletons(spec.sort, tuple(spec.free))
    seen = set()
    for n in range(spec.min_size, spec.max_size + 1):
        for skel in gen.terms(n, 0, 0):
            for item in type_skeleton(skel, spec):
                key = (item.term, item.type, item.ctx)
                if key not in seen:
                    seen.add(key)
                    yield item


def skeletons(sort: Sort, size: int, free: tuple = ()) -> tuple:
    """All untyped skeletons of exactly ``size`` nodes, pruned of untypable subterms."""
    return _Skeletons(sort, tuple(free)).terms(size, 0, 0)


# ---------------------------------------------------------------------------
# skeletons


class _Skeletons:
    def __init__(self, sort: Sort, free: tuple, prune: bool = True):
        self.sort = sort
        self.free = free
        self.prune = prune
        self.terms = functools.lru_cache(maxsize=None)(self._terms)

    def _terms(self, n: int, k: int, j: int) -> tuple:
        out = []
        tv = [Var(x) for x in self.free] + [Var(f"x{i}") for i in range(k)]
        mv = [f"a{i}" for i in range(j)]
        if n == 1:
            out.extend(tv)
        if n >= 2:
            x = f"x{k}"
            out.extend(Lam(x, None, b) for b in self.terms(n - 1, k + 1, j))
        for i in range(1, n - 1):
            for f in self.terms(i, k, j):
                for a in self.terms(n - 1 - i, k, j):
                    out.append(App(f, a))
        if self.sort >= Sort.LAMBDA_MU and n >= 2:
            a = f"a{j}"
            out.extend(Mu(a, None, b) for b in self.terms(n - 1, k, j + 1))
            body = self.terms(n - 1, k, j)
            for b in mv:
                out.extend(Name(b, t) for t in body)
        if self.sort >= Sort.FULL:
            for i in range(1, n - 1):
                for l in self.terms(i, k, j):
                    for r in self.terms(n - 1 - i, k, j):
                        out.append(Pair(l, r))
            if n >= 2:
                for b in self.terms(n - 1, k, j):
                    out.append(Inj(1, b))
                    out.append(Inj(2, b))
            if n >= 3:
                for f in self.terms(n - 2, k, j):
                    out.append(App(f, Proj(1)))
                    out.append(App(f, Proj(2)))
            x = f"x{k}"
            for fs in range(1, n - 3):
                for s1 in range(1, n - 2 - fs):
                    s2 = n - 2 - fs - s1
                    for f in self.terms(fs, k, j):
                        for b1 in self.terms(s1, k + 1, j):
                            for b2 in self.terms(s2, k + 1, j):
                                out.append(App(f, Case(x, b1, x, b2)))
        if self.prune:
            out = [t for t in out if _typable_open(t, k, j, self.free)]
        return tuple(out)


def _typable_open(t: Term, k: int, j: int, free: tuple) -> bool:
    """Typable with every variable in scope given an unconstrained type.

    Only a constructor clash is ruled out here; cycles are left to the caller.
    """
    u = _Unifier()
    env = {x: u.var() for x in free}
    env.update({f"x{i}": u.var() for i in range(k)})
    menv = {f"a{i}": u.var() for i in range(j)}
    try:
        _infer(u, t, env, menv)
    except _Clash:
        return False
    return True


# ---------------------------------------------------------------------------
# unification over possibly cyclic type graphs


class _Clash(Exception):
    pass


class _Unifier:
    def __init__(self):
        self.parent: list[int] = []
        self.node: list = []

    def copy(self) -> "_Unifier":
        u = _Unifier()
        u.parent = list(self.parent)
        u.node = list(self.node)
        return u

    def var(self) -> int:
        self.parent.append(len(self.parent))
        self.node.append(None)
        return len(self.parent) - 1

    def con(self, tag, *kids) -> int:
        i = self.var()
        self.node[i] = (tag,) + kids
        return i

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def unify(self, a: int, b: int):
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            na, nb = self.node[a], self.node[b]
            if na is None:
                self.parent[a] = b
            elif nb is None:
                self.parent[b] = a
            elif na[0] != nb[0]:
                raise _Clash
            else:
                self.parent[a] = b
                stack.extend(zip(na[1:], nb[1:]))

    def shape(self, i: int):
        return self.node[self.find(i)]

    def acyclic(self, roots) -> bool:
        state = {}
        for r in roots:
            stack = [(self.find(r), False)]
            while stack:
                n, done = stack.pop()
                if done:
                    state[n] = 2
                    continue
                s = state.get(n)
                if s == 2:
                    continue
                if s == 1:
                    return False
                state[n] = 1
                stack.append((n, True))
                for c in (self.node[n] or ())[1:]:
                    c = self.find(c)
                    if state.get(c) == 1:
                        return False
                    if state.get(c) is None:
                        stack.append((c, False))
        return True

    def residuals(self, roots) -> list[int]:
        seen, out, stack = set(), [], [self.find(r) for r in roots]
        while stack:
            n = self.find(stack.pop())
            if n in seen:
                continue
            seen.add(n)
            if self.node[n] is None:
                out.append(n)
            else:
                stack.extend(self.node[n][1:])
        return out

    def bisimilar(self, a: int, b: int) -> bool:
        seen, stack = set(), [(a, b)]
        while stack:
            a, b = stack.pop()
            a, b = self.find(a), self.find(b)
            if a == b or (a, b) in seen:
                continue
            seen.add((a, b))
            na, nb = self.node[a], self.node[b]
            if na is None or nb is None or na[0] != nb[0]:
                return False
            stack.extend(zip(na[1:], nb[1:]))
        return True


_ARROW, _AND, _OR, _BOT = "->", "/\\", "\\/", "bot"


def _from_type(u: _Unifier, t: Type, eqs: Optional[EquationSet], memo: dict) -> int:
    if isinstance(t, Atom):
        if eqs is not None and t.name in eqs:
            if t.name not in memo:
                v = u.var()
                memo[t.name] = v
                u.unify(v, _from_type(u, eqs[t.name], eqs, memo))
            return memo[t.name]
        return u.con("atom:" + t.name)
    if isinstance(t, Bot):
        return u.con(_BOT)
    tag = _ARROW if isinstance(t, Arrow) else _AND if isinstance(t, And) else _OR
    return u.con(tag, _from_type(u, t.left, eqs, memo), _from_type(u, t.right, eqs, memo))


def _infer(u: _Unifier, t, env: dict, menv: dict):
    """Type node of ``t``; returns ``(node, template)`` where annotation slots hold node ids."""
    if isinstance(t, Var):
        if t.name not in env:
            raise _Clash
        return env[t.name], t
    if isinstance(t, Lam):
        a = u.var()
        b, body = _infer(u, t.body, {**env, t.var: a}, menv)
        return u.con(_ARROW, a, b), Lam(t.var, a, body)
    if isinstance(t, Mu):
        a = u.var()
        b, body = _infer(u, t.body, env, {**menv, t.var: a})
        u.unify(b, u.con(_BOT))
        return a, Mu(t.var, a, body)
    if isinstance(t, Name):
        b, body = _infer(u, t.body, env, menv)
        if t.var not in menv:
            raise _Clash
        u.unify(b, menv[t.var])
        return u.con(_BOT), Name(t.var, body)
    if isinstance(t, Pair):
        l, lt = _infer(u, t.left, env, menv)
        r, rt = _infer(u, t.right, env, menv)
        return u.con(_AND, l, r), Pair(lt, rt)
    if isinstance(t, Inj):
        b, body = _infer(u, t.body, env, menv)
        other = u.var()
        n = u.con(_OR, b, other) if t.index == 1 else u.con(_OR, other, b)
        return n, Inj(t.index, body, n)
    if isinstance(t, App):
        f, ft = _infer(u, t.fun, env, menv)
        e = t.arg
        if isinstance(e, Proj):
            l, r = u.var(), u.var()
            u.unify(f, u.con(_AND, l, r))
            return (l if e.index == 1 else r), App(ft, e)
        if isinstance(e, Case):
            l, r, res = u.var(), u.var(), u.var()
            u.unify(f, u.con(_OR, l, r))
            b1, t1 = _infer(u, e.body1, {**env, e.var1: l}, menv)
            b2, t2 = _infer(u, e.body2, {**env, e.var2: r}, menv)
            u.unify(b1, res)
            u.unify(b2, res)
            return res, App(ft, Case(e.var1, t1, e.var2, t2, res))
        a, at = _infer(u, e, env, menv)
        res = u.var()
        u.unify(f, u.con(_ARROW, a, res))
        return res, App(ft, at)
    raise _Clash


class _NotExpressible(Exception):
    pass


class _Reader:
    """Reads graph nodes back as finite types, folding onto recursion variables."""

    def __init__(self, u: _Unifier, eqs: Optional[EquationSet], rec_nodes: dict):
        self.u, self.eqs, self.rec = u, eqs, rec_nodes
        self.memo = {}

    def read(self, n: int, path=frozenset()) -> Type:
        u = self.u
        n = u.find(n)
        if n in self.memo:
            return self.memo[n]
        for x, xn in self.rec.items():
            if u.bisimilar(n, xn):
                self.memo[n] = Atom(x)
                return self.memo[n]
        if n in path:
            raise _NotExpressible
        node = u.node[n]
        tag = node[0]
        if tag.startswith("atom:"):
            t = Atom(tag[5:])
        elif tag == _BOT:
            t = BOT
        else:
            path = path | {n}
            l, r = self.read(node[1], path), self.read(node[2], path)
            t = {_ARROW: Arrow, _AND: And, _OR: Or}[tag](l, r)
        self.memo[n] = t
        return t


def _fill(t, read):
    """Replace node-id annotation slots by the types they denote."""
    if isinstance(t, Var):
        return t
    if isinstance(t, Lam):
        return Lam(t.var, read(t.ann), _fill(t.body, read))
    if isinstance(t, Mu):
        return Mu(t.var, read(t.ann), _fill(t.body, read))
    if isinstance(t, Name):
        return Name(t.var, _fill(t.body, read))
    if isinstance(t, Pair):
        return Pair(_fill(t.left, read), _fill(t.right, read))
    if isinstance(t, Inj):
        return Inj(t.index, _fill(t.body, read), read(t.ann))
    if isinstance(t, App):
        e = t.arg
        if isinstance(e, Proj):
            return App(_fill(t.fun, read), e)
        if isinstance(e, Case):
            return App(_fill(t.fun, read), Case(e.var1, _fill(e.body1, read), e.var2,
                                                _fill(e.body2, read), read(e.ann)))
        return App(_fill(t.fun, read), _fill(e, read))
    raise TypeError(t)


def _slots(t, binders_only: bool = False) -> list[int]:
    """Annotation slots of a template (only λ and μ binders if ``binders_only``)."""
    out = []
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, (Lam, Mu)):
            out.append(t.ann)
            stack.append(t.body)
        elif isinstance(t, Inj):
            if not binders_only:
                out.append(t.ann)
            stack.append(t.body)
        elif isinstance(t, Name):
            stack.append(t.body)
        elif isinstance(t, Pair):
            stack += [t.right, t.left]
        elif isinstance(t, App):
            e = t.arg
            if isinstance(e, Case):
                if not binders_only:
                    out.append(e.ann)
                stack += [e.body2, e.body1]
            elif not isinstance(e, Proj):
                stack.append(e)
            stack.append(t.fun)
    return out


def strip_annotations(t):
    if isinstance(t, Var):
        return t
    if isinstance(t, (Lam, Mu)):
        return type(t)(t.var, None, strip_annotations(t.body))
    if isinstance(t, Name):
        return Name(t.var, strip_annotations(t.body))
    if isinstance(t, Pair):
        return Pair(strip_annotations(t.left), strip_annotations(t.right))
    if isinstance(t, Inj):
        return Inj(t.index, strip_annotations(t.body))
    if isinstance(t, App):
        e = t.arg
        if isinstance(e, Case):
            e = Case(e.var1, strip_annotations(e.body1), e.var2, strip_annotations(e.body2))
        elif not isinstance(e, Proj):
            e = strip_annotations(e)
        return App(strip_annotations(t.fun), e)
    return t


def type_skeleton(skel: Term, spec: CorpusSpec) -> list[Item]:
    """Church-annotated typed instances of ``skel`` (empty when untypable).

    Without equations there is at most one instance: the principal typing with
    residual variables grounded to the first atom.  With equations the
    principal instance is joined by variants in which one binder is forced to
    each recursion variable.
    """
    u = _Unifier()
    env = {x: u.var() for x in spec.free}
    try:
        root, tmpl = _infer(u, skel, env, {})
    except _Clash:
        return []
    eqs = spec.eqs
    variants = [u]
    if eqs is not None:
        for slot in _slots(tmpl, binders_only=True):
            for x in sorted(eqs.variables):
                v = u.copy()
                try:
                    v.unify(slot, _from_type(v, Atom(x), eqs, {}))
                except _Clash:
                    continue
                variants.append(v)
    items = []
    for v in variants:
        item = _instance(v, root, tmpl, env, spec)
        if item is not None and item not in items:
            items.append(item)
    return items


def _instance(u: _Unifier, root, tmpl, env, spec: CorpusSpec) -> Optional[Item]:
    eqs = spec.eqs
    roots = [root] + list(env.values()) + _slots(tmpl)
    if eqs is None and not u.acyclic(roots):
        return None
    ground = u.con("atom:" + spec.atoms[0])
    for r in u.residuals(roots):
        u.unify(r, ground)
    rec = {}
    if eqs is not None:
        memo = {}
        for x in sorted(eqs.variables):
            rec[x] = _from_type(u, Atom(x), eqs, memo)
    reader = _Reader(u, eqs, rec)
    try:
        term = _fill(tmpl, reader.read)
        ty = reader.read(root)
        ctx = Context.of({x: reader.read(n) for x, n in env.items()})
    except _NotExpressible:
        return None
    try:
        check(ctx, term, ty, spec.system, eqs)
    except TypingError:
        return None
    if spec.mode is Mode.CURRY:
        term = strip_annotations(term)
    return Item(ctx, term, ty)


# ---------------------------------------------------------------------------
# random type-directed synthesis


@dataclass
class _Gen:
    rng: random.Random
    sort: Sort
    atoms: tuple
    depth: int
    names: dict = field(default_factory=dict)

    def fresh(self, base):
        n = self.names.get(base, 0)
        self.names[base] = n + 1
        return f"{base}{n}"

    def small_type(self, d=2) -> Type:
        r = self.rng.random()
        if d <= 0 or r < 0.4:
            return Atom(self.rng.choice(self.atoms))
        if r < 0.5:
            return BOT
        if self.sort >= Sort.FULL and r < 0.7:
            ctor = self.rng.choice((And, Or))
            return ctor(self.small_type(d - 1), self.small_type(d - 1))
        return Arrow(self.small_type(d - 1), self.small_type(d - 1))

    def term(self, env: dict, menv: dict, a: Type, d: int) -> Term:
        rng = self.rng
        hits = [x for x, t in env.items() if t == a]
        if d <= 0:
            return self.intro(env, menv, a, d, hits, force=True)
        r = rng.random()
        if hits and r < 0.2:
            return Var(rng.choice(hits))
        if r < 0.55:
            return self.elim(env, menv, a, d)
        if self.sort >= Sort.LAMBDA_MU and r < 0.7:
            return self.mu(env, menv, a, d)
        return self.intro(env, menv, a, d, hits)

    def intro(self, env, menv, a, d, hits, force=False):
        rng = self.rng
        if force and hits:
            return Var(rng.choice(hits))
        if isinstance(a, Arrow):
            x = self.fresh("x")
            return Lam(x, a.left, self.term({**env, x: a.left}, menv, a.right, d - 1))
        if isinstance(a, And):
            return Pair(self.term(env, menv, a.left, d - 1), self.term(env, menv, a.right, d - 1))
        if isinstance(a, Or):
            i = rng.choice((1, 2))
            return Inj(i, self.term(env, menv, a.left if i == 1 else a.right, d - 1), a)
        if hits:
            return Var(rng.choice(hits))
        if force:
            # an atom or ⊥ with nothing at hand: close it off through a μ-variable
            named = [b for b, t in menv.items()]
            if self.sort >= Sort.LAMBDA_MU and isinstance(a, Bot) and named:
                b = rng.choice(named)
                goal = [x for x, t in env.items() if t == menv[b]]
                if goal:
                    return Name(b, Var(rng.choice(goal)))
            raise _Stuck
        if self.sort >= Sort.LAMBDA_MU:
            return self.mu(env, menv, a, d)
        return self.elim(env, menv, a, d)

    def mu(self, env, menv, a, d):
        rng = self.rng
        if isinstance(a, Bot) and menv and rng.random() < 0.5:
            b = rng.choice(sorted(menv))
            return Name(b, self.term(env, menv, menv[b], d - 1))
        al = self.fresh("a")
        menv = {**menv, al: a}
        b = al if rng.random() < 0.6 else rng.choice(sorted(menv))
        return Mu(al, a, Name(b, self.term(env, menv, menv[b], d - 1)))

    def elim(self, env, menv, a, d):
        rng = self.rng
        r = rng.random()
        if self.sort >= Sort.FULL and r < 0.25:
            other = self.small_type(1)
            i = rng.choice((1, 2))
            pt = And(a, other) if i == 1 else And(other, a)
            return App(self.head(env, menv, pt, d), Proj(i))
        if self.sort >= Sort.FULL and r < 0.45:
            l, rr = self.small_type(1), self.small_type(1)
            x1, x2 = self.fresh("y"), self.fresh("y")
            return App(self.head(env, menv, Or(l, rr), d),
                       Case(x1, self.term({**env, x1: l}, menv, a, d - 1),
                            x2, self.term({**env, x2: rr}, menv, a, d - 1), a))
        b = self.small_type(1)
        return App(self.head(env, menv, Arrow(b, a), d), self.term(env, menv, b, d - 1))

    def head(self, env, menv, a, d):
        """Head of an elimination; biased towards introductions so redexes appear."""
        r = self.rng.random()
        if self.sort >= Sort.LAMBDA_MU and r < 0.2:
            return self.mu(env, menv, a, d - 1)
        if r < 0.7 and not isinstance(a, (Atom, Bot)):
            return self.intro(env, menv, a, d - 1, [])
        return self.term(env, menv, a, d - 1)


class _Stuck(Exception):
    pass


def random_context(sort: Sort, atoms=("A",)) -> Context:
    terms = {f"z{i}": Atom(x) for i, x in enumerate(atoms)}
    mus = {f"k{i}": Atom(x) for i, x in enumerate(atoms)} if sort >= Sort.LAMBDA_MU else {}
    return Context.of(terms, mus)


def random_typed_term(rng: random.Random, sort: Sort, atoms=("A",), depth: int = 4,
                      ctx: Optional[Context] = None, a: Optional[Type] = None,
                      tries: int = 500, min_size: int = 1, max_size: int = 10 ** 9,
                      accept=None) -> Item:
    """One random typed term; retries when synthesis gets stuck or the sample is rejected.

    ``accept`` is an optional predicate on the term, e.g. "has a redex".
    """
    ctx = ctx if ctx is not None else random_context(sort, atoms)
    for _ in range(tries):
        g = _Gen(rng, sort, tuple(atoms), depth)
        ty = a if a is not None else g.small_type(2)
        try:
            m = g.term(dict(ctx.terms), dict(ctx.mus), ty, depth)
        except (_Stuck, RecursionError):
            continue
        if not min_size <= size(m) <= max_size or (accept is not None and not accept(m)):
            continue
        check(ctx, m, ty, SYSTEM_FOR_SORT[sort])
        return Item(ctx, m, ty)
    raise RuntimeError("random synthesis kept getting stuck")


def random_corpus(spec: CorpusSpec) -> Iterator[Item]:
    rng = random.Random(spec.seed)
    depth = max(1, spec.max_size)
    for _ in range(spec.count):
        yield random_typed_term(rng, spec.sort, spec.atoms, depth)
