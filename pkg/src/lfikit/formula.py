"""Propositional language with a consistency operator.

The signature is conjunction, disjunction, implication, a paraconsistent
negation written ``!``, and a unary consistency marker written ``@``.
Two surface abbreviations are accepted by the parser and desugared on the
spot, so they never appear in syntax trees: ``a <-> b`` becomes
``(a -> b) & (b -> a)`` and the strong (explosive) negation ``~a`` becomes
``!a & @a``.

Syntax trees are immutable and compared structurally.  No simplification is
ever applied: logically equivalent but syntactically distinct formulas stay
distinct, which is essential when the surrounding logic lacks the
replacement property.

Grammar (whitespace-insensitive)::

    formula := iff
    iff     := imp ("<->" imp)*          left-associative, desugared
    imp     := or ("->" imp)?            right-associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | "@" unary | "~" unary | ident | "(" formula ")"
    ident   := [a-z][a-zA-Z0-9_]*
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


class Formula:
    """Base class for syntax tree nodes. All nodes are frozen dataclasses."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name})"


@dataclass(frozen=True, repr=False)
class Neg(Formula):
    operand: Formula

    def __repr__(self) -> str:
        return f"Neg({self.operand!r})"


@dataclass(frozen=True, repr=False)
class Circ(Formula):
    """Consistency marker: `@a` asserts that `a` behaves classically."""

    operand: Formula

    def __repr__(self) -> str:
        return f"Circ({self.operand!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Imp({self.left!r}, {self.right!r})"


BINARY_NODES = (And, Or, Imp)
UNARY_NODES = (Neg, Circ)


def iff(a: Formula, b: Formula) -> Formula:
    """The biconditional abbreviation: (a -> b) & (b -> a)."""
    return And(Imp(a, b), Imp(b, a))


def strong_neg(a: Formula) -> Formula:
    """The explosive negation abbreviation: !a & @a."""
    return And(Neg(a), Circ(a))


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, UNARY_NODES):
        return (f.operand,)
    return (f.left, f.right)


def atoms_of(f: Formula) -> set[str]:
    """Names of all propositional variables occurring in `f`."""
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        else:
            stack.extend(children(g))
    return out


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    """Syntax error with position and the set of tokens that were expected."""

    def __init__(self, message: str, line: int, column: int, expected: frozenset[str]):
        super().__init__(f"{message} at line {line}, column {column}"
                         + (f" (expected one of: {', '.join(sorted(expected))})" if expected else ""))
        self.line = line
        self.column = column
        self.expected = expected


_OPERATORS = ("<->", "->", "|", "&", "!", "@", "~", "(", ")")


@dataclass(frozen=True)
class _Token:
    kind: str  # operator text, "ident" or "end"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                tokens.append(_Token(op, op, line, col))
                i += len(op)
                col += len(op)
                break
        else:
            if ch.islower() and ch.isalpha():
                j = i + 1
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                tokens.append(_Token("ident", text[i:j], line, col))
                col += j - i
                i = j
            else:
                raise ParseError(f"unexpected character {ch!r}", line, col,
                                 frozenset({"identifier", "(", "!", "@", "~"}))
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"unexpected token {tok.text or 'end of input'!r}",
                             tok.line, tok.column, frozenset({kind}))
        return self.advance()

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        left = self.imp()
        while self.peek().kind == "<->":
            self.advance()
            right = self.imp()
            left = And(Imp(left, right), Imp(right, left))
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek().kind == "->":
            self.advance()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek().kind == "|":
            self.advance()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek().kind == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "!":
            self.advance()
            return Neg(self.unary())
        if tok.kind == "@":
            self.advance()
            return Circ(self.unary())
        if tok.kind == "~":
            self.advance()
            operand = self.unary()
            return And(Neg(operand), Circ(operand))
        if tok.kind == "ident":
            self.advance()
            return Atom(tok.text)
        if tok.kind == "(":
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {tok.text or 'end of input'!r}",
                         tok.line, tok.column,
                         frozenset({"identifier", "(", "!", "@", "~"}))


def parse(text: str) -> Formula:
    """Parse a formula from its surface syntax.

    Raises ParseError with line/column information on malformed input.
    """
    parser = _Parser(_tokenize(text))
    f = parser.formula()
    tok = parser.peek()
    if tok.kind != "end":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.column, frozenset({"end"}))
    return f


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_PREC = {Imp: 1, Or: 2, And: 3}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 4)


def render(f: Formula) -> str:
    """Minimal-parenthesis surface form; parse(render(f)) == f."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Neg):
        return "!" + _render_operand(f.operand)
    if isinstance(f, Circ):
        return "@" + _render_operand(f.operand)
    if isinstance(f, And):
        return _render_side(f.left, 3, tight=False) + " & " + _render_side(f.right, 3, tight=True)
    if isinstance(f, Or):
        return _render_side(f.left, 2, tight=False) + " | " + _render_side(f.right, 2, tight=True)
    if isinstance(f, Imp):
        # right-associative: the left child needs parentheses at equal level
        return _render_side(f.left, 1, tight=True) + " -> " + _render_side(f.right, 1, tight=False)
    raise TypeError(f"not a formula: {f!r}")


def _render_side(f: Formula, level: int, tight: bool) -> str:
    p = _prec(f)
    if p < level or (tight and p == level):
        return "(" + render(f) + ")"
    return render(f)


def _render_operand(f: Formula) -> str:
    if isinstance(f, (Atom, Neg, Circ)):
        return render(f)
    return "(" + render(f) + ")"


# ---------------------------------------------------------------------------
# Subformula index
# ---------------------------------------------------------------------------


class SubformulaIndex:
    """Deduplicated subformula list, children before parents.

    The order is the deterministic post-order traversal of the inputs; a
    formula appearing twice (structurally) is listed once, at its first
    occurrence.
    """

    def __init__(self, formulas: Iterable[Formula]):
        entries: list[Formula] = []
        position: dict[Formula, int] = {}

        def visit(f: Formula) -> None:
            if f in position:
                return
            for c in children(f):
                visit(c)
            position[f] = len(entries)
            entries.append(f)

        for f in formulas:
            visit(f)
        self.entries: tuple[Formula, ...] = tuple(entries)
        self.position: dict[Formula, int] = position

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.entries)

    def __contains__(self, f: Formula) -> bool:
        return f in self.position

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubformulaIndex) and self.entries == other.entries

    def __repr__(self) -> str:
        return "SubformulaIndex([" + ", ".join(render(f) for f in self.entries) + "])"


def subformulas(formulas: Iterable[Formula]) -> SubformulaIndex:
    """Index of all distinct subformulas of the given formulas."""
    return SubformulaIndex(formulas)


# ---------------------------------------------------------------------------
# Schema instantiation
# ---------------------------------------------------------------------------


class UnboundMetavariable(KeyError):
    """A schema atom had no binding during substitution."""


def substitute(schema: Formula, binding: Mapping[str, Formula]) -> Formula:
    """Simultaneously replace every atom of `schema` using `binding`.

    Atoms play the role of metavariables here; every atom occurring in the
    schema must be bound.
    """
    if isinstance(schema, Atom):
        try:
            return binding[schema.name]
        except KeyError:
            raise UnboundMetavariable(schema.name) from None
    if isinstance(schema, Neg):
        return Neg(substitute(schema.operand, binding))
    if isinstance(schema, Circ):
        return Circ(substitute(schema.operand, binding))
    if isinstance(schema, And):
        return And(substitute(schema.left, binding), substitute(schema.right, binding))
    if isinstance(schema, Or):
        return Or(substitute(schema.left, binding), substitute(schema.right, binding))
    if isinstance(schema, Imp):
        return Imp(substitute(schema.left, binding), substitute(schema.right, binding))
    raise TypeError(f"not a formula: {schema!r}")
