"""Concrete syntax for types, terms, contexts and equation files.

Terms::

    term ::= ident | "c[" ident "]" | "\\" ident [":" type] "." term
           | "(" term elim+ ")" | "<" term "," term ">"
           | "w1" term | "w2" term | "w1[" type "]" term | "w2[" type "]" term
           | "mu" ident [":~" type] "." term | "[" ident "]" term
    elim ::= term | "p1" | "p2" | "[" ident "." term "|" ident "." term [":" type] "]"

Types::

    type ::= ident | "bot" | type "->" type | type "/\\" type | type "\\/" type
           | "~" type | "(" type ")"

``->`` is right-associative and binds loosest, then ``\\/``, then ``/\\``;
``~`` is prefix.  ``w1[`` (no space) opens an injection annotation, so an
injected named term must be written ``w1 [a] M``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .terms import (
    App, Case, Const, Elim, Inj, Lam, Mu, Name, Pair, Proj, Sort, Term, Var,
)
from .types import (
    And, Arrow, Atom, BOT, Bot, EquationSet, Or, Type,
)

PHI = "phi"
KEYWORDS = {"mu", "w1", "w2", "p1", "p2", "bot"}


class ParseError(ValueError):
    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        if pos is not None and text is not None:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            message = f"{message} at line {line}, column {col}"
        super().__init__(message)


class SortError(ParseError):
    pass


class Mode(enum.Enum):
    CHURCH = "church"
    CURRY = "curry"


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<sym>->|/\\|\\/|w[12]\[|c\[|[\\~()<>,.:\[\]|])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


def tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            tokens.append((m.group(), pos))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, sort=Sort.FULL, mode=Mode.CURRY):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.sort = sort
        self.mode = mode

    # -- token helpers ---------------------------------------------------

    @property
    def tok(self):
        return self.tokens[self.i][0]

    @property
    def pos(self):
        return self.tokens[self.i][1]

    def error(self, message, cls=ParseError):
        return cls(message, self.pos, self.text)

    def advance(self):
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, tok):
        if self.tok != tok:
            raise self.error(f"expected {tok!r}, found {self.tok!r}")
        return self.advance()

    def ident(self):
        tok = self.tok
        if not _is_ident(tok):
            raise self.error(f"expected identifier, found {tok!r}")
        return self.advance()

    def finish(self, value):
        if self.tok != "<eof>":
            raise self.error(f"unexpected trailing input {self.tok!r}")
        return value

    def require_sort(self, needed: Sort, what: str):
        if self.sort < needed:
            raise self.error(f"{what} is not allowed in sort {self.sort.name}", SortError)

    # -- types -----------------------------------------------------------

    def type_(self) -> Type:
        left = self.or_type()
        if self.tok == "->":
            self.advance()
            return Arrow(left, self.type_())
        return left

    def or_type(self) -> Type:
        left = self.and_type()
        if self.tok == "\\/":
            self.advance()
            return Or(left, self.or_type())
        return left

    def and_type(self) -> Type:
        left = self.unary_type()
        if self.tok == "/\\":
            self.advance()
            return And(left, self.and_type())
        return left

    def unary_type(self) -> Type:
        if self.tok == "~":
            self.advance()
            return Arrow(self.unary_type(), BOT)
        if self.tok == "(":
            self.advance()
            t = self.type_()
            self.expect(")")
            return t
        if self.tok == "bot":
            self.advance()
            return BOT
        return Atom(self.ident())

    # -- terms -----------------------------------------------------------

    def term(self) -> Term:
        tok = self.tok
        if tok == "\\":
            self.advance()
            x = self.ident()
            ann = None
            if self.tok == ":":
                self.advance()
                ann = self.type_()
            elif self.mode is Mode.CHURCH:
                raise self.error(f"missing annotation on binder {x} in church mode")
            self.expect(".")
            return Lam(x, ann, self.term())
        if tok == "mu":
            self.require_sort(Sort.LAMBDA_MU, "mu-abstraction")
            self.advance()
            a = self.ident()
            if a == PHI:
                raise self.error(f"{PHI} is reserved and cannot be bound")
            ann = None
            if self.tok == ":":
                self.advance()
                self.expect("~")
                ann = self.type_()
            elif self.mode is Mode.CHURCH:
                raise self.error(f"missing annotation on mu-binder {a} in church mode")
            self.expect(".")
            return Mu(a, ann, self.term())
        if tok == "[":
            self.require_sort(Sort.LAMBDA_MU, "named term")
            self.advance()
            a = self.ident()
            self.expect("]")
            return Name(a, self.term())
        if tok == "(":
            self.advance()
            head = self.term()
            while self.tok != ")":
                head = App(head, self.elim())
            self.advance()
            return head
        if tok == "<":
            self.require_sort(Sort.FULL, "pair")
            self.advance()
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(">")
            return Pair(left, right)
        if tok in ("w1", "w2", "w1[", "w2["):
            self.require_sort(Sort.FULL, "injection")
            self.advance()
            ann = None
            if tok.endswith("["):
                ann = self.type_()
                self.expect("]")
            elif self.mode is Mode.CHURCH:
                raise self.error("missing injection annotation in church mode")
            return Inj(int(tok[1]), self.term(), ann)
        if tok == "c[":
            self.require_sort(Sort.LAMBDA, "constant")
            if self.sort is not Sort.LAMBDA:
                raise self.error("constants only occur in sort LAMBDA", SortError)
            self.advance()
            x = self.ident()
            self.expect("]")
            return Const(x)
        if tok in ("p1", "p2"):
            raise self.error(f"projection {tok} outside an application")
        return Var(self.ident())

    def elim(self) -> Elim:
        tok = self.tok
        if tok in ("p1", "p2"):
            self.require_sort(Sort.FULL, "projection")
            self.advance()
            return Proj(int(tok[1]))
        if tok == "[" and self.tokens[self.i + 2][0] == ".":
            self.require_sort(Sort.FULL, "case")
            self.advance()
            x1 = self.ident()
            self.expect(".")
            n1 = self.term()
            self.expect("|")
            x2 = self.ident()
            self.expect(".")
            n2 = self.term()
            ann = None
            if self.tok == ":":
                self.advance()
                ann = self.type_()
            self.expect("]")
            return Case(x1, n1, x2, n2, ann)
        return self.term()


def _is_ident(tok):
    return bool(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok)) and tok not in KEYWORDS


def parse_type(text: str) -> Type:
    p = _Parser(text)
    return p.finish(p.type_())


def parse_term(text: str, sort: Sort = Sort.FULL, mode: Mode = Mode.CURRY) -> Term:
    p = _Parser(text, sort, mode)
    return p.finish(p.term())


# ---------------------------------------------------------------------------
# Printing

_PREC_ARROW, _PREC_OR, _PREC_AND, _PREC_ATOM = range(4)


def print_type(t: Type) -> str:
    return _ptype(t, _PREC_ARROW)


def _ptype(t, prec):
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Bot):
        return "bot"
    if isinstance(t, Arrow) and isinstance(t.right, Bot):
        return "~" + _ptype(t.left, _PREC_ATOM)
    if isinstance(t, Arrow):
        s, mine = f"{_ptype(t.left, _PREC_OR)} -> {_ptype(t.right, _PREC_ARROW)}", _PREC_ARROW
    elif isinstance(t, Or):
        s, mine = f"{_ptype(t.left, _PREC_AND)} \\/ {_ptype(t.right, _PREC_OR)}", _PREC_OR
    else:
        s, mine = f"{_ptype(t.left, _PREC_ATOM)} /\\ {_ptype(t.right, _PREC_AND)}", _PREC_AND
    return f"({s})" if mine < prec else s


def _ann(t: Type) -> str:
    return _ptype(t, _PREC_ATOM)


def print_term(t: Elim) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return f"c[{t.atom}]"
    if isinstance(t, Lam):
        ann = "" if t.ann is None else ":" + print_type(t.ann)
        return f"\\{t.var}{ann}. {print_term(t.body)}"
    if isinstance(t, Mu):
        ann = "" if t.ann is None else ":~" + _ann(t.ann)
        return f"mu {t.var}{ann}. {print_term(t.body)}"
    if isinstance(t, Name):
        return f"[{t.var}] {print_term(t.body)}"
    if isinstance(t, Pair):
        return f"<{print_term(t.left)}, {print_term(t.right)}>"
    if isinstance(t, Inj):
        if t.ann is None:
            return f"w{t.index} {print_term(t.body)}"
        return f"w{t.index}[{print_type(t.ann)}] {print_term(t.body)}"
    if isinstance(t, Proj):
        return f"p{t.index}"
    if isinstance(t, Case):
        ann = "" if t.ann is None else " : " + print_type(t.ann)
        return f"[{t.var1}. {print_term(t.body1)} | {t.var2}. {print_term(t.body2)}{ann}]"
    elims = []
    while isinstance(t, App):
        elims.append(t.arg)
        t = t.fun
    parts = [print_term(t)] + [print_term(e) for e in reversed(elims)]
    return "(" + " ".join(parts) + ")"


# ---------------------------------------------------------------------------
# Contexts and equation files


@dataclass(frozen=True)
class Context:
    """Typing context: term variables to types, μ-variables to the A of ~A."""

    terms: tuple[tuple[str, Type], ...] = ()
    mus: tuple[tuple[str, Type], ...] = ()

    def __post_init__(self):
        for kind, decls in (("term", self.terms), ("mu", self.mus)):
            names = [n for n, _ in decls]
            if len(names) != len(set(names)):
                raise ValueError(f"{kind} variable declared twice in context")

    @classmethod
    def of(cls, terms=None, mus=None) -> "Context":
        return cls(tuple((terms or {}).items()), tuple((mus or {}).items()))

    @property
    def term_map(self) -> dict[str, Type]:
        return dict(self.terms)

    @property
    def mu_map(self) -> dict[str, Type]:
        return dict(self.mus)

    def __str__(self):
        return "{" + print_context(self, ", ") + "}"


def print_context(ctx: Context, sep: str = "; ") -> str:
    """Context in the ``parse_context`` format (entries joined by ``sep``)."""
    parts = [f"{x} : {print_type(a)}" for x, a in ctx.terms]
    parts += [f"mu {a} : ~{_ann(t)}" for a, t in ctx.mus]
    return sep.join(parts)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _entries(text: str):
    for raw in text.splitlines():
        for part in _strip_comment(raw).split(";"):
            part = part.strip()
            if part:
                yield part


def parse_context(text: str) -> Context:
    """Lines ``x : type`` and ``mu a : ~type`` (``;`` also separates entries)."""
    terms, mus = {}, {}
    for entry in _entries(text):
        if ":" not in entry:
            raise ParseError(f"bad context entry {entry!r}")
        lhs, rhs = (s.strip() for s in entry.split(":", 1))
        if lhs.startswith("mu "):
            name = lhs[3:].strip()
            t = parse_type(rhs)
            if not (isinstance(t, Arrow) and isinstance(t.right, Bot)):
                raise ParseError(f"mu variable {name} must have a type ~A")
            target = mus
            t = t.left
        else:
            name, target, t = lhs, terms, parse_type(rhs)
        if not _is_ident(name):
            raise ParseError(f"bad variable name {name!r}")
        if name in target:
            raise ParseError(f"variable {name} declared twice")
        target[name] = t
    return Context.of(terms, mus)


def parse_equations(text: str) -> EquationSet:
    """One ``X = type`` per line (or separated by ``;``); ``#`` starts a comment."""
    pairs = []
    for entry in _entries(text):
        if "=" not in entry:
            raise ParseError(f"bad equation {entry!r}")
        lhs, rhs = (s.strip() for s in entry.split("=", 1))
        if not _is_ident(lhs):
            raise ParseError(f"bad recursion variable {lhs!r}")
        pairs.append((lhs, parse_type(rhs)))
    return EquationSet.from_pairs(pairs)


def print_equations(eqs: EquationSet) -> str:
    return "\n".join(f"{x} = {print_type(f)}" for x, f in eqs.equations.items())
