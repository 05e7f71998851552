"""Types, recursive equation sets, the congruence they generate, and polarity."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union


@dataclass(frozen=True, slots=True)
class Atom:
    name: str


@dataclass(frozen=True, slots=True)
class Bot:
    pass


@dataclass(frozen=True, slots=True)
class Arrow:
    left: "Type"
    right: "Type"


@dataclass(frozen=True, slots=True)
class And:
    left: "Type"
    right: "Type"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Type"
    right: "Type"


Type = Union[Atom, Bot, Arrow, And, Or]

BOT = Bot()


def neg(a: Type) -> Arrow:
    return Arrow(a, BOT)


class TypeSort(enum.Enum):
    T = "T"          # atoms, bot, ->
    T_PRIME = "T'"   # additionally /\ and \/


def type_sort(a: Type) -> TypeSort:
    for sub in subtypes(a):
        if isinstance(sub, (And, Or)):
            return TypeSort.T_PRIME
    return TypeSort.T


def subtypes(a: Type) -> Iterator[Type]:
    stack = [a]
    while stack:
        t = stack.pop()
        yield t
        if isinstance(t, (Arrow, And, Or)):
            stack.append(t.right)
            stack.append(t.left)


def atoms_of(a: Type) -> set[str]:
    return {t.name for t in subtypes(a) if isinstance(t, Atom)}


def type_depth(a: Type) -> int:
    """Number of constructor levels; atoms and bot have depth 1."""
    if isinstance(a, (Arrow, And, Or)):
        return 1 + max(type_depth(a.left), type_depth(a.right))
    return 1


def circle_type(a: Type) -> Type:
    """Code conjunction and disjunction with implication and bot."""
    if isinstance(a, (Atom, Bot)):
        return a
    if isinstance(a, Arrow):
        return Arrow(circle_type(a.left), circle_type(a.right))
    l, r = circle_type(a.left), circle_type(a.right)
    if isinstance(a, And):
        return neg(Arrow(l, Arrow(r, BOT)))
    return Arrow(neg(l), Arrow(neg(r), BOT))


# ---------------------------------------------------------------------------
# Equation sets


class EquationError(ValueError):
    pass


@dataclass(frozen=True)
class EquationSet:
    """Mutually recursive equations ``X_i = F_i`` over recursion variables."""

    equations: Mapping[str, Type] = field(default_factory=dict)

    def __post_init__(self):
        eqs = dict(self.equations)
        for x, f in eqs.items():
            if isinstance(f, Atom) and f.name in eqs:
                raise EquationError(
                    f"equation {x} = {f.name} is not contractive")
        object.__setattr__(self, "equations", eqs)

    def __hash__(self):
        return hash(tuple(sorted(self.equations.items(), key=lambda kv: kv[0])))

    def __contains__(self, name):
        return name in self.equations

    def __getitem__(self, name):
        return self.equations[name]

    def __iter__(self):
        return iter(self.equations)

    def __len__(self):
        return len(self.equations)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(self.equations)

    @property
    def sort(self) -> TypeSort:
        if any(type_sort(f) is TypeSort.T_PRIME for f in self.equations.values()):
            return TypeSort.T_PRIME
        return TypeSort.T

    @classmethod
    def from_pairs(cls, pairs) -> "EquationSet":
        eqs: dict[str, Type] = {}
        for x, f in pairs:
            if x in eqs:
                raise EquationError(f"variable {x} defined twice")
            eqs[x] = f
        return cls(eqs)


EMPTY = EquationSet()


def unfold(a: Type, eqs: Optional[EquationSet]) -> Type:
    """Replace a head recursion variable by its right-hand side until none is left."""
    if not eqs:
        return a
    while isinstance(a, Atom) and a.name in eqs.equations:
        a = eqs.equations[a.name]
    return a


def circle_equations(eqs: EquationSet) -> EquationSet:
    return EquationSet({x: circle_type(f) for x, f in eqs.equations.items()})


def congruent(a: Type, b: Type, eqs: Optional[EquationSet] = None) -> bool:
    """Decide ``a ≈ b`` by comparing the regular unfoldings of both types.

    Pairs are assumed equal once visited, so the search is a bisimulation
    check and terminates on the finitely many subterms of a, b and the
    right-hand sides.
    """
    if a == b:
        return True
    seen: set[tuple[Type, Type]] = set()
    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        if x == y or (x, y) in seen:
            continue
        seen.add((x, y))
        x, y = unfold(x, eqs), unfold(y, eqs)
        if type(x) is not type(y):
            return False
        if isinstance(x, Atom):
            if x.name != y.name:
                return False
        elif not isinstance(x, Bot):
            todo.append((x.left, y.left))
            todo.append((x.right, y.right))
    return True


# ---------------------------------------------------------------------------
# Polarity and goodness


class Polarity(enum.Enum):
    ABSENT = "absent"
    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"

    def join(self, other: "Polarity") -> "Polarity":
        if self is other or other is Polarity.ABSENT:
            return self
        if self is Polarity.ABSENT:
            return other
        return Polarity.BOTH

    def flip(self) -> "Polarity":
        return _FLIP[self]

    def times(self, other: "Polarity") -> "Polarity":
        """Sign of an occurrence found at sign ``other`` inside a context of sign ``self``."""
        if Polarity.ABSENT in (self, other):
            return Polarity.ABSENT
        if Polarity.BOTH in (self, other):
            return Polarity.BOTH
        return Polarity.POSITIVE if self is other else Polarity.NEGATIVE

    @property
    def in_positive(self) -> bool:
        return self in (Polarity.POSITIVE, Polarity.ABSENT)

    @property
    def in_negative(self) -> bool:
        return self in (Polarity.NEGATIVE, Polarity.ABSENT)


_FLIP = {
    Polarity.ABSENT: Polarity.ABSENT,
    Polarity.POSITIVE: Polarity.NEGATIVE,
    Polarity.NEGATIVE: Polarity.POSITIVE,
    Polarity.BOTH: Polarity.BOTH,
}

_POS, _NEG = Polarity.POSITIVE, Polarity.NEGATIVE


def _occurrences(a: Type, sign: Polarity = _POS) -> Iterator[tuple[str, Polarity]]:
    """Yield (atom name, sign) for every atom occurrence in ``a``."""
    if isinstance(a, Atom):
        yield a.name, sign
    elif isinstance(a, Arrow):
        yield from _occurrences(a.left, sign.flip())
        yield from _occurrences(a.right, sign)
    elif isinstance(a, (And, Or)):
        yield from _occurrences(a.left, sign)
        yield from _occurrences(a.right, sign)


def _signed_edges(eqs: EquationSet) -> dict[str, set[tuple[str, Polarity]]]:
    return {
        x: {(y, s) for y, s in _occurrences(f) if y in eqs.equations}
        for x, f in eqs.equations.items()
    }


def _signed_reach(eqs: EquationSet, start: str):
    """Breadth-first closure over (variable, sign) pairs reachable from ``start``.

    Returns a parent map so a path to any reached pair can be rebuilt.
    """
    edges = _signed_edges(eqs)
    parent: dict[tuple[str, Polarity], Optional[tuple[str, Polarity]]] = {}
    queue = deque()
    for y, s in edges[start]:
        if (y, s) not in parent:
            parent[(y, s)] = None
            queue.append((y, s))
    while queue:
        y, s = queue.popleft()
        for z, t in edges[y]:
            nxt = (z, s.times(t))
            if nxt not in parent:
                parent[nxt] = (y, s)
                queue.append(nxt)
    return parent


def polarity_of(x: str, a: Type, eqs: Optional[EquationSet] = None) -> Polarity:
    """Join of the signs with which ``x`` occurs in ``a``.

    Occurrences of other recursion variables are followed through their
    equations; ``x`` itself is never unfolded.
    """
    result = Polarity.ABSENT
    reach_cache: dict[str, Polarity] = {}
    for y, s in _occurrences(a):
        if y == x:
            result = result.join(s)
        elif eqs and y in eqs.equations:
            if y not in reach_cache:
                p = Polarity.ABSENT
                own = {(z, t) for z, t in _occurrences(eqs.equations[y])}
                reached = set(_signed_reach(eqs, y)) | own
                for z, t in reached:
                    if z == x:
                        p = p.join(t)
                reach_cache[y] = p
            result = result.join(s.times(reach_cache[y]))
    return result


@dataclass(frozen=True)
class Goodness:
    good: bool
    # closed walk X0 -s1-> X1 ... -> X0 with negative overall sign
    cycle: Optional[tuple[tuple[str, Polarity], ...]] = None

    def __bool__(self):
        return self.good

    def describe(self) -> str:
        if self.good:
            return "good"
        steps = " -> ".join(f"{v}({s.value})" for v, s in self.cycle)
        return f"not good: negative cycle {steps}"


def is_good(eqs: EquationSet) -> Goodness:
    """Decide goodness on the signed dependency graph of ``eqs``.

    ``X_i -s-> X_j`` when ``X_j`` occurs with sign ``s`` in ``F_i``; the set
    is good iff no variable reaches itself with negative overall sign.
    """
    for x in sorted(eqs.equations):
        parent = _signed_reach(eqs, x)
        if (x, _NEG) in parent:
            path = []
            node: Optional[tuple[str, Polarity]] = (x, _NEG)
            while node is not None:
                path.append(node)
                node = parent[node]
            path.append((x, _POS))
            return Goodness(False, tuple(reversed(path)))
    return Goodness(True)
