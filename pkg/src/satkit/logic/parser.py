"""Recursive-descent parser for the functional prefix grammar.

    expr := ATOM | KIND '(' expr (',' expr)* ')'
    KIND := 'And' | 'Or' | 'Not' | 'Implies' | 'Iff'

Whitespace is insignificant, keywords are case-sensitive and reserved.
Errors carry the character offset into the input line.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from ..errors import SatkitError
from .expressions import And, Atom, Iff, Implies, LogicalExpr, Not, Or

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

# operator name -> (min_arity, max_arity or None for unbounded)
_OPERATORS = {
    "And": (2, None),
    "Or": (2, None),
    "Not": (1, 1),
    "Implies": (2, 2),
    "Iff": (2, 2),
}


class ExpressionError(SatkitError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExpressionSyntaxError(ExpressionError):
    pass


class ArityError(ExpressionError):
    pass


class _Token(NamedTuple):
    kind: str  # IDENT | LPAREN | RPAREN | COMMA | END
    text: str
    offset: int


def _tokenize(line: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(line)
    while i < n:
        ch = line[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("LPAREN", ch, i))
            i += 1
        elif ch == ")":
            tokens.append(_Token("RPAREN", ch, i))
            i += 1
        elif ch == ",":
            tokens.append(_Token("COMMA", ch, i))
            i += 1
        else:
            m = _IDENT.match(line, i)
            if m is None:
                raise ExpressionSyntaxError(f"unexpected character {ch!r}", i)
            tokens.append(_Token("IDENT", m.group(), i))
            i = m.end()
    tokens.append(_Token("END", "", n))
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

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.advance()
        if tok.kind != kind:
            raise ExpressionSyntaxError(f"expected {what}, got {tok.text or 'end of input'!r}", tok.offset)
        return tok

    def parse_expr(self) -> LogicalExpr:
        tok = self.expect("IDENT", "an identifier")
        if tok.text not in _OPERATORS:
            return Atom(tok.text)
        self.expect("LPAREN", f"'(' after operator {tok.text}")
        args = [self.parse_expr()]
        while self.peek().kind == "COMMA":
            self.advance()
            args.append(self.parse_expr())
        self.expect("RPAREN", "')' or ','")
        lo, hi = _OPERATORS[tok.text]
        if len(args) < lo or (hi is not None and len(args) > hi):
            bound = f"exactly {lo}" if hi == lo else f"at least {lo}"
            raise ArityError(f"{tok.text} takes {bound} argument(s), got {len(args)}", tok.offset)
        match tok.text:
            case "And":
                return And(tuple(args))
            case "Or":
                return Or(tuple(args))
            case "Not":
                return Not(args[0])
            case "Implies":
                return Implies(args[0], args[1])
            case "Iff":
                return Iff(args[0], args[1])
        raise AssertionError("unreachable")


def parse_expression(line: str) -> LogicalExpr:
    parser = _Parser(_tokenize(line))
    expr = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "END":
        raise ExpressionSyntaxError(f"unexpected trailing input {tail.text!r}", tail.offset)
    return expr
