"""Recursive-descent parser for scalar and noncommutative polynomial expressions.

Grammar (juxtaposition means multiplication)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := power (('*'|'/')? power)*
    power   := primary ('^' ['-'] INT)?
    primary := INT | IDENT | '(' expr ')'

``q`` always denotes the distinguished root of unity.  Negative exponents and
division are only allowed on nonzero scalars.  The result is a free-algebra
element: a dict mapping words (tuples of generator indices) to scalars.
"""

from __future__ import annotations

import re

from .errors import ParseError, UnknownGenerator

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")

Terms = dict  # word -> Scalar


def tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            break
        if mt.group(1) is not None:
            tokens.append(("int", mt.group(1), mt.start(1)))
        elif mt.group(2) is not None:
            tokens.append(("ident", mt.group(2), mt.start(2)))
        elif mt.group(3) is not None:
            ch = mt.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", mt.start(3), text)
            tokens.append(("op", ch, mt.start(3)))
        pos = mt.end()
    tokens.append(("end", "", len(text)))
    return tokens


def add_into(acc: Terms, word, c) -> None:
    s = acc.get(word)
    s = c if s is None else s + c
    if s:
        acc[word] = s
    else:
        acc.pop(word, None)


def t_add(a: Terms, b: Terms, sign: int = 1) -> Terms:
    out = dict(a)
    for w, c in b.items():
        add_into(out, w, c if sign > 0 else -c)
    return out


def t_mul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for u, c in a.items():
        for v, d in b.items():
            add_into(out, u + v, c * d)
    return out


class _Parser:
    def __init__(self, text, F, generators):
        self.text = text
        self.F = F
        self.gens = generators
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2], self.text)
        return tok

    def const(self, c) -> Terms:
        c = self.F.coerce(c)
        return {(): c} if c else {}

    def parse(self) -> Terms:
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return result

    def expr(self) -> Terms:
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = t_add({}, self.term(), sign)
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                acc = t_add(acc, self.term(), -1 if tok[1] == "-" else 1)
            else:
                return acc

    def _starts_primary(self, tok):
        return tok[0] in ("int", "ident") or (tok[0] == "op" and tok[1] == "(")

    def term(self) -> Terms:
        acc = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                acc = t_mul(acc, self.power())
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                at = self.peek()[2]
                acc = t_mul(acc, self._invert(self.power(), at))
            elif self._starts_primary(tok):
                acc = t_mul(acc, self.power())
            else:
                return acc

    def _invert(self, val: Terms, pos) -> Terms:
        if set(val) - {()}:
            raise ParseError("only scalars can be inverted", pos, self.text)
        c = val.get(())
        if c is None:
            raise ParseError("division by zero", pos, self.text)
        return {(): c.inv()}

    def power(self) -> Terms:
        base_pos = self.peek()[2]
        base = self.primary()
        tok = self.peek()
        if not (tok[0] == "op" and tok[1] == "^"):
            return base
        self.take()
        neg = False
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            neg = True
        e = int(self.expect("int")[1])
        if neg:
            base = self._invert(base, base_pos)
        result: Terms = self.const(1)
        for _ in range(e):
            result = t_mul(result, base)
        return result

    def primary(self) -> Terms:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return self.const(int(val))
        if kind == "ident":
            if val == "q":
                return self.const(self.F.q)
            if self.gens is None or val not in self.gens:
                if self.gens is None:
                    raise ParseError(f"unknown symbol {val!r}", pos, self.text)
                raise UnknownGenerator(val)
            return {(self.gens[val],): self.F.one}
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect("op", ")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, self.text)


def parse_expression(text: str, F, generators: dict[str, int] | None) -> Terms:
    """Parse ``text`` into free-algebra terms over ``F``.

    ``generators`` maps names to indices; ``None`` means scalars only.
    """
    return _Parser(text, F, generators).parse()
