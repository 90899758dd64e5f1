"""Recursive-descent parser for coefficient expressions.

Grammar (UTF-8 input)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' uint)?
    base   := uint | ident | '(' expr ')'

Exponents must be nonnegative integer literals.  Every value is evaluated
eagerly into a canonical RatFunc, so "(x^2 - y^2)/(x - y)" parses straight
to x + y and division by an expression that reduces to zero is reported at
the offending '/' position.
"""

from __future__ import annotations

from .errors import DivisionByZero, ExprError, UnknownVariable
from .ratfunc import BaseContext, RatFunc

_SYMBOLS = "+-*/^()"


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind  # "int" | "ident" | one of _SYMBOLS | "end"
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], i))
            i = j
        elif ch in _SYMBOLS:
            tokens.append(_Token(ch, ch, i))
            i += 1
        else:
            raise ExprError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], ctx: BaseContext):
        self.tokens = tokens
        self.pos = 0
        self.ctx = ctx

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprError(f"expected {kind!r}, found {tok.text or 'end of input'!r}",
                            tok.pos)
        return self.advance()

    def parse_expr(self) -> RatFunc:
        value = self.parse_term()
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            rhs = self.parse_term()
            value = value + rhs if op.kind == "+" else value - rhs
        return value

    def parse_term(self) -> RatFunc:
        value = self.parse_factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance()
            rhs = self.parse_factor()
            if op.kind == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except DivisionByZero:
                    raise ExprError("division by an expression equal to zero",
                                    op.pos) from None
        return value

    def parse_factor(self) -> RatFunc:
        if self.peek().kind == "-":
            self.advance()
            return -self.parse_factor()
        value = self.parse_base()
        if self.peek().kind == "^":
            caret = self.advance()
            tok = self.peek()
            if tok.kind != "int":
                raise ExprError("exponent must be a nonnegative integer literal",
                                caret.pos)
            self.advance()
            value = value ** int(tok.text)
        return value

    def parse_base(self) -> RatFunc:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return RatFunc.const(self.ctx, int(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text not in self.ctx.vars:
                raise UnknownVariable(f"unknown variable {tok.text!r}", tok.pos)
            return RatFunc.variable(self.ctx, tok.text)
        if tok.kind == "(":
            self.advance()
            value = self.parse_expr()
            self.expect(")")
            return value
        raise ExprError(f"expected a number, variable or '(', found "
                        f"{tok.text or 'end of input'!r}", tok.pos)


def parse_expr(text: str, ctx: BaseContext) -> RatFunc:
    """Parse a textual expression into a canonical RatFunc."""
    parser = _Parser(_tokenize(text), ctx)
    value = parser.parse_expr()
    parser.expect("end")
    return value
