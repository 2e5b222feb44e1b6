"""Signatures, a small term language, and term evaluation.

Surface syntax (ASCII)::

    term   := sum
    sum    := meet ('+' meet)*
    meet   := comp ('.' comp)*
    comp   := unary (';' unary)*
    unary  := '-' unary | postfix
    postfix:= atom '~'*
    atom   := '0' | '1' | "1'" | NAME | '(' term ')'

All binary operators are left-associative; ``;`` binds tightest, then ``.``,
then ``+``.  Postfix converse binds tighter than prefix complement, so
``-a~`` is ``-(a~)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .algebra import AtomStructure, Element, compose, converse_of, join, meet, negate
from .relations import BaseMismatch, ProperStructure, Relation

# Signature symbols in canonical order.
SYMBOLS = ("0", "1", "1'", "-", "+", ".", "~", ";", "<=")
OPERATION_SYMBOLS = SYMBOLS[:-1]
CONSTANTS = ("0", "1", "1'")

_SYMBOL_ALIASES = {
    "·": ".",
    "*": ".",
    "⌣": "~",
    "−": "-",
    "≤": "<=",
    "1’": "1'",
}


class SignatureError(ValueError):
    pass


class Signature(frozenset):
    """A set of symbols drawn from ``0 1 1' - + . ~ ; <=``."""

    def __new__(cls, symbols: Iterable[str] = ()):
        syms = set()
        for s in symbols:
            s = _SYMBOL_ALIASES.get(s, s)
            if s not in SYMBOLS:
                raise SignatureError(f"unknown signature symbol {s!r}")
            syms.add(s)
        return super().__new__(cls, syms)

    @classmethod
    def parse(cls, text: str) -> Signature:
        """Parse ``"-,;"`` or ``"0 1 + 1' ~ ;"`` style symbol lists."""
        tokens = [t for t in re.split(r"[\s,]+", text.strip()) if t]
        return cls(tokens)

    def ordered(self) -> list[str]:
        return [s for s in SYMBOLS if s in self]

    def __str__(self) -> str:
        return "{" + ",".join(self.ordered()) + "}"

    def __repr__(self) -> str:
        return f"Signature({self.ordered()!r})"


# -- AST --


@dataclass(frozen=True)
class Const:
    symbol: str  # "0", "1" or "1'"


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "~"
    arg: "Term"


@dataclass(frozen=True)
class Binary:
    op: str  # "+", "." or ";"
    left: "Term"
    right: "Term"


Term = Union[Const, Name, Unary, Binary]

_BINARY_PREC = {"+": 1, ".": 2, ";": 3}


class TermSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnboundName(KeyError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<one_prime>1')|(?P<num>[01])(?![0-9A-Za-z_])|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+.;~()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unknown token {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if kind in ("one_prime", "num"):
            out.append(("const", value, start))
        elif kind == "name":
            out.append(("name", value, start))
        else:
            out.append(("op", value, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, value, pos = self.advance()
        if kind != "op" or value != op:
            what = "end of input" if kind == "end" else repr(value)
            raise TermSyntaxError(f"expected {op!r}, found {what}", pos)

    def parse(self) -> Term:
        t = self.binary(1)
        kind, value, pos = self.peek()
        if kind != "end":
            raise TermSyntaxError(f"unexpected {value!r}", pos)
        return t

    def binary(self, min_prec: int) -> Term:
        left = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind != "op" or value not in _BINARY_PREC:
                return left
            prec = _BINARY_PREC[value]
            if prec < min_prec:
                return left
            self.advance()
            right = self.binary(prec + 1)
            left = Binary(value, left, right)

    def unary(self) -> Term:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Unary("-", self.unary())
        return self.postfix()

    def postfix(self) -> Term:
        t = self.primary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "~":
                self.advance()
                t = Unary("~", t)
            else:
                return t

    def primary(self) -> Term:
        kind, value, pos = self.advance()
        if kind == "const":
            return Const(value)
        if kind == "name":
            return Name(value)
        if kind == "op" and value == "(":
            t = self.binary(1)
            self.expect_op(")")
            return t
        what = "end of input" if kind == "end" else repr(value)
        raise TermSyntaxError(f"unexpected {what}", pos)


def parse_term(text: str) -> Term:
    return _Parser(text).parse()


def format_term(t: Term) -> str:
    """Print with the fewest parentheses that re-parse to the same tree."""
    return _fmt(t, 0)


def _fmt(t: Term, ctx: int) -> str:
    # ctx: binding strength required by the parent (0 none, 1..3 binary, 4 prefix, 5 postfix)
    if isinstance(t, Const):
        return t.symbol
    if isinstance(t, Name):
        return t.ident
    if isinstance(t, Unary):
        if t.op == "~":
            return _fmt(t.arg, 5) + "~"
        s = "-" + _fmt(t.arg, 4)
        return f"({s})" if ctx > 4 else s
    prec = _BINARY_PREC[t.op]
    s = f"{_fmt(t.left, prec)} {t.op} {_fmt(t.right, prec + 1)}"
    return f"({s})" if ctx > prec else s


def symbols_of(t: Term) -> Signature:
    found = set()

    def walk(u):
        if isinstance(u, Const):
            found.add(u.symbol)
        elif isinstance(u, Unary):
            found.add(u.op)
            walk(u.arg)
        elif isinstance(u, Binary):
            found.add(u.op)
            walk(u.left)
            walk(u.right)

    walk(t)
    return Signature(found)


def names_of(t: Term) -> set[str]:
    if isinstance(t, Name):
        return {t.ident}
    if isinstance(t, Unary):
        return names_of(t.arg)
    if isinstance(t, Binary):
        return names_of(t.left) | names_of(t.right)
    return set()


def _lookup(env: Mapping, name: str):
    try:
        return env[name]
    except KeyError:
        raise UnboundName(f"unbound name {name!r}") from None


def eval_abstract(A: AtomStructure, t: Term, env: Mapping[str, Element] | None = None) -> Element:
    env = env or {}
    if isinstance(t, Const):
        if t.symbol == "0":
            return A.zero
        if t.symbol == "1":
            return A.one
        return A.identity
    if isinstance(t, Name):
        return A.element(_lookup(env, t.ident))
    if isinstance(t, Unary):
        x = eval_abstract(A, t.arg, env)
        return negate(x) if t.op == "-" else converse_of(x)
    x = eval_abstract(A, t.left, env)
    y = eval_abstract(A, t.right, env)
    if t.op == "+":
        return join(x, y)
    if t.op == ".":
        return meet(x, y)
    return compose(x, y)


def eval_proper(
    P: ProperStructure, t: Term, env: Mapping[str, Relation] | None = None
) -> Relation:
    """Evaluate with set-theoretic operations; names default to ``P``'s relations."""
    if env is None:
        env = P.relations
    n = P.size
    if isinstance(t, Const):
        if t.symbol == "0":
            return Relation.empty(n)
        if t.symbol == "1":
            return Relation.full(n)
        return Relation.identity(n)
    if isinstance(t, Name):
        r = _lookup(env, t.ident)
        if r.size != n:
            raise BaseMismatch(f"{t.ident!r} lives on base {r.size}, not {n}")
        return r
    if isinstance(t, Unary):
        r = eval_proper(P, t.arg, env)
        return r.complement() if t.op == "-" else r.converse()
    r = eval_proper(P, t.left, env)
    s = eval_proper(P, t.right, env)
    if t.op == "+":
        return r.union(s)
    if t.op == ".":
        return r.intersection(s)
    return r.compose(s)
