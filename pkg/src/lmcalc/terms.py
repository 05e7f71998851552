"""Term syntax shared by the λ-, λμ- and λμ^{→∧∨}-calculi.

Term variables and μ-variables live in separate namespaces; a ``Name``
always refers to a μ-variable and a ``Var`` to a term variable, so the
same identifier may be used in both without interference.

Application takes an *elimination* as its argument: either a term, a
projection ``Proj`` or a case ``Case``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .types import Type


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Const:
    atom: str


@dataclass(frozen=True, slots=True)
class Lam:
    var: str
    ann: Optional[Type]
    body: "Term"


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Elim"


@dataclass(frozen=True, slots=True)
class Pair:
    left: "Term"
    right: "Term"


@dataclass(frozen=True, slots=True)
class Inj:
    index: int
    body: "Term"
    ann: Optional[Type] = None   # the whole disjunction A1 \/ A2


@dataclass(frozen=True, slots=True)
class Mu:
    var: str
    ann: Optional[Type]          # A, where the μ-variable has type ~A
    body: "Term"


@dataclass(frozen=True, slots=True)
class Name:
    var: str
    body: "Term"


@dataclass(frozen=True, slots=True)
class Proj:
    index: int


@dataclass(frozen=True, slots=True)
class Case:
    var1: str
    body1: "Term"
    var2: str
    body2: "Term"
    ann: Optional[Type] = None   # type of both branches


Term = Union[Var, Const, Lam, App, Pair, Inj, Mu, Name]
Elim = Union[Term, Proj, Case]
TERM_TYPES = (Var, Const, Lam, App, Pair, Inj, Mu, Name)


def is_term(e) -> bool:
    return isinstance(e, TERM_TYPES)


def apps(head: Term, *elims: Elim) -> Term:
    """Left-nested application ``(head e1 ... ek)``."""
    for e in elims:
        head = App(head, e)
    return head


class Sort(enum.IntEnum):
    LAMBDA = 0
    LAMBDA_MU = 1
    FULL = 2


def sort_of(t: Elim) -> Sort:
    """Least sort admitting every constructor of ``t`` (constants count as λ)."""
    best = Sort.LAMBDA
    for node in _nodes(t):
        if isinstance(node, (Mu, Name)):
            best = max(best, Sort.LAMBDA_MU)
        elif isinstance(node, (Pair, Inj, Proj, Case)):
            return Sort.FULL
    return best


def _nodes(t: Elim):
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, App):
            stack.append(node.arg)
            stack.append(node.fun)
        elif isinstance(node, Case):
            stack.append(node.body2)
            stack.append(node.body1)
        elif isinstance(node, (Lam, Mu, Name, Inj)):
            stack.append(node.body)
        elif isinstance(node, Pair):
            stack.append(node.right)
            stack.append(node.left)


# ---------------------------------------------------------------------------
# Free variables and size


def free_vars(t: Elim) -> tuple[frozenset[str], frozenset[str]]:
    """Free term variables and free μ-variables of ``t``."""
    tv: set[str] = set()
    mv: set[str] = set()
    _fv(t, frozenset(), frozenset(), tv, mv)
    return frozenset(tv), frozenset(mv)


def _fv(t, bt, bm, tv, mv):
    while True:
        if isinstance(t, Var):
            if t.name not in bt:
                tv.add(t.name)
            return
        if isinstance(t, App):
            _fv(t.fun, bt, bm, tv, mv)
            t = t.arg
        elif isinstance(t, Lam):
            bt = bt | {t.var}
            t = t.body
        elif isinstance(t, Mu):
            bm = bm | {t.var}
            t = t.body
        elif isinstance(t, Name):
            if t.var not in bm:
                mv.add(t.var)
            t = t.body
        elif isinstance(t, Inj):
            t = t.body
        elif isinstance(t, Pair):
            _fv(t.left, bt, bm, tv, mv)
            t = t.right
        elif isinstance(t, Case):
            _fv(t.body1, bt | {t.var1}, bm, tv, mv)
            bt = bt | {t.var2}
            t = t.body2
        else:  # Const, Proj
            return


def term_fv(t: Elim) -> frozenset[str]:
    return free_vars(t)[0]


def mu_fv(t: Elim) -> frozenset[str]:
    return free_vars(t)[1]


def all_names(t: Elim) -> set[str]:
    """Every identifier occurring in ``t``, bound or free, in either namespace."""
    names = set()
    for node in _nodes(t):
        if isinstance(node, (Var, Lam, Mu, Name)):
            names.add(node.name if isinstance(node, Var) else node.var)
        elif isinstance(node, Case):
            names.add(node.var1)
            names.add(node.var2)
    return names


def size(t: Elim) -> int:
    """Node count; a projection and a case node each count one."""
    return sum(1 for _ in _nodes(t))


def count_mu_occurrences(t: Elim, a: str) -> int:
    """Number of free occurrences of μ-variable ``a`` in ``t``."""
    if isinstance(t, Name):
        return (t.var == a) + count_mu_occurrences(t.body, a)
    if isinstance(t, Mu):
        return 0 if t.var == a else count_mu_occurrences(t.body, a)
    return sum(count_mu_occurrences(c, a) for c in children(t))


# ---------------------------------------------------------------------------
# Fresh names


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """``base`` followed by enough primes to miss every name in ``avoid``."""
    avoid = set(avoid)
    name = base
    while name in avoid:
        name += "'"
    return name


# ---------------------------------------------------------------------------
# Substitutions


def subst(m: Elim, x: str, n: Term) -> Elim:
    """Capture-avoiding ``m[x := n]``."""
    ntv, nmv = free_vars(n)
    return _subst(m, x, n, ntv, nmv)


def _subst(m, x, n, ntv, nmv):
    if isinstance(m, Var):
        return n if m.name == x else m
    if isinstance(m, App):
        return App(_subst(m.fun, x, n, ntv, nmv), _subst(m.arg, x, n, ntv, nmv))
    if isinstance(m, Lam):
        if m.var == x:
            return m
        var, body = m.var, m.body
        if var in ntv and x in term_fv(body):
            var, body = _rename_binder(var, body, ntv | {x})
        return Lam(var, m.ann, _subst(body, x, n, ntv, nmv))
    if isinstance(m, Mu):
        var, body = m.var, m.body
        if var in nmv and x in term_fv(body):
            var, body = _rename_mu_binder(var, body, nmv)
        return Mu(var, m.ann, _subst(body, x, n, ntv, nmv))
    if isinstance(m, Name):
        return Name(m.var, _subst(m.body, x, n, ntv, nmv))
    if isinstance(m, Pair):
        return Pair(_subst(m.left, x, n, ntv, nmv), _subst(m.right, x, n, ntv, nmv))
    if isinstance(m, Inj):
        return Inj(m.index, _subst(m.body, x, n, ntv, nmv), m.ann)
    if isinstance(m, Case):
        branches = []
        for var, body in ((m.var1, m.body1), (m.var2, m.body2)):
            if var != x:
                if var in ntv and x in term_fv(body):
                    var, body = _rename_binder(var, body, ntv | {x})
                body = _subst(body, x, n, ntv, nmv)
            branches.append((var, body))
        (v1, b1), (v2, b2) = branches
        return Case(v1, b1, v2, b2, m.ann)
    return m  # Const, Proj


def _rename_binder(var, body, avoid):
    new = fresh_name(var, avoid | all_names(body))
    return new, subst(body, var, Var(new))


def _rename_mu_binder(var, body, avoid):
    new = fresh_name(var, avoid | all_names(body))
    return new, mu_rename(body, var, new)


def mu_rename(m: Elim, a: str, b: str) -> Elim:
    """Replace free occurrences of μ-variable ``a`` by ``b``."""
    if a == b:
        return m
    if isinstance(m, Name):
        return Name(b if m.var == a else m.var, mu_rename(m.body, a, b))
    if isinstance(m, Mu):
        if m.var == a:
            return m
        var, body = m.var, m.body
        if var == b and a in mu_fv(body):
            var, body = _rename_mu_binder(var, body, {a, b})
        return Mu(var, m.ann, mu_rename(body, a, b))
    return map_children(m, lambda c: mu_rename(c, a, b))


def struct_subst(m: Elim, a: str, e: Elim) -> Elim:
    """Structural substitution ``m[(a L) := (a (L e))]``.

    Occurrences nested inside ``L`` are rewritten first, then the outer
    name receives ``e``.
    """
    etv, emv = free_vars(e)
    return _struct(m, a, e, etv, emv)


def _struct(m, a, e, etv, emv):
    if isinstance(m, Name):
        body = _struct(m.body, a, e, etv, emv)
        if m.var == a:
            return Name(a, App(body, e))
        return Name(m.var, body)
    if isinstance(m, Mu):
        if m.var == a:
            return m
        var, body = m.var, m.body
        if var in emv and a in mu_fv(body):
            var, body = _rename_mu_binder(var, body, emv | {a})
        return Mu(var, m.ann, _struct(body, a, e, etv, emv))
    if isinstance(m, Lam):
        var, body = m.var, m.body
        if var in etv and a in mu_fv(body):
            var, body = _rename_binder(var, body, etv)
        return Lam(var, m.ann, _struct(body, a, e, etv, emv))
    if isinstance(m, Case):
        branches = []
        for var, body in ((m.var1, m.body1), (m.var2, m.body2)):
            if var in etv and a in mu_fv(body):
                var, body = _rename_binder(var, body, etv)
            branches.append((var, _struct(body, a, e, etv, emv)))
        (v1, b1), (v2, b2) = branches
        return Case(v1, b1, v2, b2, m.ann)
    if isinstance(m, App):
        # not map_children: a case argument must go through the binder renaming above
        return App(_struct(m.fun, a, e, etv, emv), _struct(m.arg, a, e, etv, emv))
    return map_children(m, lambda c: _struct(c, a, e, etv, emv))


# ---------------------------------------------------------------------------
# Children and positions
#
# Child indices: Lam/Mu/Name/Inj -> body at 0; Pair -> 0, 1; App -> fun at 0,
# then the argument's children: a term argument at 1, case branches at 1, 2.


def children(t: Elim) -> tuple:
    if isinstance(t, App):
        arg = t.arg
        if isinstance(arg, Proj):
            return (t.fun,)
        if isinstance(arg, Case):
            return (t.fun, arg.body1, arg.body2)
        return (t.fun, arg)
    if isinstance(t, (Lam, Mu, Name, Inj)):
        return (t.body,)
    if isinstance(t, Pair):
        return (t.left, t.right)
    if isinstance(t, Case):
        return (t.body1, t.body2)
    return ()


def map_children(t: Elim, f) -> Elim:
    if isinstance(t, App):
        arg = t.arg
        if isinstance(arg, Proj):
            return App(f(t.fun), arg)
        return App(f(t.fun), map_children(arg, f) if isinstance(arg, Case) else f(arg))
    if isinstance(t, Lam):
        return Lam(t.var, t.ann, f(t.body))
    if isinstance(t, Mu):
        return Mu(t.var, t.ann, f(t.body))
    if isinstance(t, Name):
        return Name(t.var, f(t.body))
    if isinstance(t, Inj):
        return Inj(t.index, f(t.body), t.ann)
    if isinstance(t, Pair):
        return Pair(f(t.left), f(t.right))
    if isinstance(t, Case):
        return Case(t.var1, f(t.body1), t.var2, f(t.body2), t.ann)
    return t


def replace_child(t: Elim, i: int, new: Term) -> Elim:
    it = iter(range(len(children(t))))

    def pick(c):
        return new if next(it) == i else c

    if not 0 <= i < len(children(t)):
        raise IndexError(f"no child {i}")
    return map_children(t, pick)


Position = tuple[int, ...]


def subterm(t: Term, path: Position) -> Term:
    for i in path:
        kids = children(t)
        if not 0 <= i < len(kids):
            raise IndexError(f"invalid position {path}")
        t = kids[i]
    return t


def replace_at(t: Term, path: Position, new: Term) -> Term:
    if not path:
        return new
    kids = children(t)
    i = path[0]
    if not 0 <= i < len(kids):
        raise IndexError(f"invalid position {path}")
    return replace_child(t, i, replace_at(kids[i], path[1:], new))


# ---------------------------------------------------------------------------
# Alpha-equivalence


def alpha_key(t: Elim, annotations: bool = False):
    """Hashable key equal for exactly the alpha-equivalent terms.

    Bound variables become de Bruijn levels (separately per namespace).
    Annotations take part only when ``annotations`` is true.
    """
    return _key(t, {}, {}, 0, 0, annotations)


def _key(t, tenv, menv, td, md, ann):
    if isinstance(t, Var):
        lvl = tenv.get(t.name)
        return ("v", t.name) if lvl is None else td - lvl
    if isinstance(t, App):
        return ("@", _key(t.fun, tenv, menv, td, md, ann), _key(t.arg, tenv, menv, td, md, ann))
    if isinstance(t, Lam):
        body = _bind(t.var, t.body, tenv, menv, td, md, ann, True)
        return ("\\", t.ann if ann else None, body)
    if isinstance(t, Mu):
        body = _bind(t.var, t.body, tenv, menv, td, md, ann, False)
        return ("mu", t.ann if ann else None, body)
    if isinstance(t, Name):
        lvl = menv.get(t.var)
        ref = ("v", t.var) if lvl is None else md - lvl
        return ("[]", ref, _key(t.body, tenv, menv, td, md, ann))
    if isinstance(t, Pair):
        return ("<>", _key(t.left, tenv, menv, td, md, ann), _key(t.right, tenv, menv, td, md, ann))
    if isinstance(t, Inj):
        return ("w", t.index, t.ann if ann else None, _key(t.body, tenv, menv, td, md, ann))
    if isinstance(t, Case):
        return ("case", t.ann if ann else None,
                _bind(t.var1, t.body1, tenv, menv, td, md, ann, True),
                _bind(t.var2, t.body2, tenv, menv, td, md, ann, True))
    if isinstance(t, Proj):
        return ("p", t.index)
    return ("c", t.atom)


def _bind(var, body, tenv, menv, td, md, ann, is_term_var):
    env = tenv if is_term_var else menv
    old = env.get(var)
    if is_term_var:
        env[var] = td + 1
        td += 1
    else:
        env[var] = md + 1
        md += 1
    try:
        return _key(body, tenv, menv, td, md, ann)
    finally:
        if old is None:
            del env[var]
        else:
            env[var] = old


def alpha_eq(m: Elim, n: Elim, annotations: bool = True) -> bool:
    return alpha_key(m, annotations) == alpha_key(n, annotations)
