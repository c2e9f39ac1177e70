"""Recursive-descent parser for the ASCII surface syntax.

    formula = impl
    impl    = disj ["->" impl]
    disj    = conj {"|" conj}
    conj    = unary {"&" unary}
    unary   = "!" unary | "D{" vars "}" unary | "E{" vars "}" unary | atom
    atom    = IDENT "(" vars ")"
            | "dep(" "{" vars "}" "," (IDENT | "{" vars "}") ")"
            | IDENT "=" IDENT
            | "inc(" "(" vars ")" "," "(" vars ")" ")"
            | "(" formula ")"
    vars    = [IDENT {"," IDENT}]

``|`` and ``->`` are sugar over negation and conjunction, ``E{X}`` is
the dual of ``D{X}``, and a set-valued second argument to ``dep`` is
sugar for a conjunction of dependence atoms.  The parser emits core AST
nodes only.
"""

from __future__ import annotations

import re

from .errors import ParseError, VocabularyError
from .syntax import (
    And,
    DAtom,
    DQuant,
    Eq,
    Formula,
    Incl,
    Not,
    PredAtom,
    Vocabulary,
    infer_vocabulary,
    neg,
)

_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<arrow>->)|(?P<sym>[(){},&|!=]))"
)

_KEYWORDS = {"dep", "inc"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", pos)
        if m.lastgroup == "ident":
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        elif m.lastgroup == "arrow":
            tokens.append(("->", "->", m.start("arrow")))
        else:
            sym = m.group("sym")
            tokens.append((sym, sym, m.start("sym")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.at = 0

    def peek(self, offset: int = 0) -> tuple[str, str, int]:
        return self.tokens[min(self.at + offset, len(self.tokens) - 1)]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.at]
        if tok[0] != "end":
            self.at += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return self.take()

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "->":
            self.take()
            right = self.formula()
            # a -> b  desugars to  !(a & !b)
            return Not(And(left, neg(right)))
        return left

    def disj(self) -> Formula:
        acc = self.conj()
        while self.peek()[0] == "|":
            self.take()
            rhs = self.conj()
            # a | b  desugars to  !(!a & !b)
            acc = Not(And(neg(acc), neg(rhs)))
        return acc

    def conj(self) -> Formula:
        acc = self.unary()
        while self.peek()[0] == "&":
            self.take()
            acc = And(acc, self.unary())
        return acc

    def unary(self) -> Formula:
        kind, value, _pos = self.peek()
        if kind == "!":
            self.take()
            return Not(self.unary())
        if kind == "ident" and value in ("D", "E") and self.peek(1)[0] == "{":
            self.take()
            xs = self.braced_vars()
            body = self.unary()
            if value == "D":
                return DQuant(xs, body)
            # E{X} φ  desugars to  !D{X} !φ
            return Not(DQuant(xs, neg(body)))
        return self.atom()

    def braced_vars(self) -> frozenset[str]:
        self.expect("{")
        return frozenset(self.var_list("}"))

    def var_list(self, closer: str) -> list[str]:
        out: list[str] = []
        if self.peek()[0] == closer:
            self.take()
            return out
        while True:
            tok = self.expect("ident")
            out.append(tok[1])
            if self.peek()[0] == ",":
                self.take()
                continue
            self.expect(closer)
            return out

    def atom(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "(":
            self.take()
            inner = self.formula()
            self.expect(")")
            return inner
        if kind != "ident":
            raise ParseError(f"expected an atom, found {value or 'end of input'!r}", pos)
        if value == "dep" and self.peek(1)[0] == "(":
            return self.dep_atom()
        if value == "inc" and self.peek(1)[0] == "(":
            return self.inc_atom()
        self.take()
        nxt = self.peek()
        if nxt[0] == "(":
            self.take()
            args = tuple(self.var_list(")"))
            return PredAtom(value, args)
        if nxt[0] == "=":
            self.take()
            rhs = self.expect("ident")
            return Eq(value, rhs[1])
        raise ParseError(f"expected '(' or '=' after {value!r}", nxt[2])

    def dep_atom(self) -> Formula:
        self.take()  # dep
        self.expect("(")
        xs = self.braced_vars()
        self.expect(",")
        kind, _value, pos = self.peek()
        if kind == "{":
            ys = sorted(self.braced_vars())
            if not ys:
                raise ParseError("dep with an empty dependent set", pos)
            self.expect(")")
            acc: Formula = DAtom(xs, ys[0])
            for y in ys[1:]:
                acc = And(acc, DAtom(xs, y))
            return acc
        y = self.expect("ident")[1]
        self.expect(")")
        return DAtom(xs, y)

    def inc_atom(self) -> Formula:
        self.take()  # inc
        self.expect("(")
        self.expect("(")
        left = tuple(self.var_list(")"))
        self.expect(",")
        self.expect("(")
        right = tuple(self.var_list(")"))
        self.expect(")")
        return Incl(left, right)


def validate_formula(phi: Formula, vocab: Vocabulary) -> None:
    """Check symbol usage against a vocabulary; raise VocabularyError."""
    arity = vocab.arity
    known = set(vocab.variables)

    def check_var(v: str):
        if v not in known:
            raise VocabularyError(f"unknown variable {v!r}")

    def walk(f: Formula):
        if isinstance(f, PredAtom):
            if f.pred not in arity:
                raise VocabularyError(f"unknown predicate {f.pred!r}")
            if arity[f.pred] != len(f.args):
                raise VocabularyError(
                    f"predicate {f.pred!r} expects {arity[f.pred]} arguments, got {len(f.args)}"
                )
            for v in f.args:
                check_var(v)
        elif isinstance(f, Eq):
            check_var(f.left)
            check_var(f.right)
        elif isinstance(f, Incl):
            if len(f.left) != len(f.right):
                raise VocabularyError("inclusion atom with tuples of different lengths")
            for v in f.left + f.right:
                check_var(v)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, And):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, DQuant):
            for v in f.xs:
                check_var(v)
            walk(f.body)
        elif isinstance(f, DAtom):
            for v in f.xs | {f.y}:
                check_var(v)

    walk(phi)


def parse_formula(text: str, vocab: Vocabulary | None = None) -> Formula:
    """Parse surface syntax into a core AST.

    With no vocabulary, symbols are taken at face value and a vocabulary
    is inferred; otherwise every symbol is checked against the one given.
    """
    parser = _Parser(text)
    phi = parser.formula()
    trailing = parser.peek()
    if trailing[0] != "end":
        raise ParseError(f"trailing input {trailing[1]!r}", trailing[2])
    if any(len(f.left) != len(f.right) for f in _incl_atoms(phi)):
        raise VocabularyError("inclusion atom with tuples of different lengths")
    if vocab is None:
        vocab = infer_vocabulary(phi)
    validate_formula(phi, vocab)
    return phi


def _incl_atoms(phi: Formula):
    if isinstance(phi, Incl):
        yield phi
    elif isinstance(phi, Not):
        yield from _incl_atoms(phi.body)
    elif isinstance(phi, And):
        yield from _incl_atoms(phi.left)
        yield from _incl_atoms(phi.right)
    elif isinstance(phi, DQuant):
        yield from _incl_atoms(phi.body)
