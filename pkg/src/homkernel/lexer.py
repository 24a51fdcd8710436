from dataclasses import dataclass
from typing import Iterable, List, Optional

from src.homkernel.errors import ParseError, TypeMismatch, UndeclaredIdentifier
from src.homkernel.polynomials import Polynomial, PolynomialRing


NUM = "num"
NAME = "name"
SYM = "sym"
EOF = "eof"

DIGITS = "0123456789"
SYMBOLS = ("==", "(", ")", "[", "]", ",", ";", "=", "+", "-", "*", "^", "/")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == EOF else repr(self.text)


def tokenize(text: str) -> List[Token]:
    """Split script text into tokens; `#` starts a comment that runs to the end of the line."""
    tokens: List[Token] = []
    line, column, index = 1, 1, 0
    while index < len(text):
        char = text[index]
        if char == "\n":
            line, column, index = line + 1, 1, index + 1
            continue
        if char.isspace():
            column, index = column + 1, index + 1
            continue
        if char == "#":
            while index < len(text) and text[index] != "\n":
                index += 1
            continue
        start_column = column
        if char in DIGITS:
            end = index
            while end < len(text) and text[end] in DIGITS:
                end += 1
            tokens.append(Token(NUM, text[index:end], line, start_column))
        elif char.isalpha() or char == "_":
            end = index
            while end < len(text) and (text[end].isalnum() or text[end] == "_"):
                end += 1
            tokens.append(Token(NAME, text[index:end], line, start_column))
        else:
            symbol = next((s for s in SYMBOLS if text.startswith(s, index)), None)
            if symbol is None:
                raise ParseError(f"unexpected character {char!r}", line, start_column)
            end = index + len(symbol)
            tokens.append(Token(SYM, symbol, line, start_column))
        column += end - index
        index = end
    tokens.append(Token(EOF, "", line, column))
    return tokens


class TokenStream:
    """Cursor over the token list with the eat/expect helpers the script parser needs."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.position = 0

    def next(self) -> Token:
        return self.tokens[self.position]

    def peek(self, lookahead: int = 1) -> Token:
        return self.tokens[min(self.position + lookahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.tokens[self.position]
        if token.kind != EOF:
            self.position += 1
        return token

    def at_eof(self) -> bool:
        return self.next().kind == EOF

    def next_is(self, text: str) -> bool:
        token = self.next()
        return token.kind in (SYM, NAME) and token.text == text

    def fail(self, message: str, expected: Optional[Iterable[str]] = None, token: Optional[Token] = None) -> ParseError:
        token = token or self.next()
        return ParseError(message, token.line, token.column, expected)

    def eat(self, text: str) -> Token:
        if not self.next_is(text):
            raise self.fail(f"unexpected {self.next().describe()}", [text])
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.next_is(text):
            self.advance()
            return True
        return False

    def eat_int(self) -> int:
        negative = self.accept("-")
        token = self.next()
        if token.kind != NUM:
            raise self.fail(f"unexpected {token.describe()}", ["<integer>"])
        self.advance()
        return -int(token.text) if negative else int(token.text)

    def eat_name(self) -> Token:
        token = self.next()
        if token.kind != NAME:
            raise self.fail(f"unexpected {token.describe()}", ["<identifier>"])
        return self.advance()


def parse_polynomial(stream: TokenStream, ring: PolynomialRing) -> Polynomial:
    """expr := term (('+'|'-') term)*; term := unary (('*'|'/') unary)*; unary := '-' unary | atom ['^' int]."""
    result = _parse_term(stream, ring)
    while stream.next_is("+") or stream.next_is("-"):
        op = stream.advance().text
        right = _parse_term(stream, ring)
        result = result + right if op == "+" else result - right
    return result


def _parse_term(stream: TokenStream, ring: PolynomialRing) -> Polynomial:
    result = _parse_unary(stream, ring)
    while stream.next_is("*") or stream.next_is("/"):
        op = stream.advance()
        right = _parse_unary(stream, ring)
        if op.text == "*":
            result = result * right
        else:
            if not right.is_constant() or right.is_zero():
                raise TypeMismatch("division is only allowed by a nonzero constant", op.line, op.column)
            result = result.scale(ring.field.inv(right.constant_term()))
    return result


def _parse_unary(stream: TokenStream, ring: PolynomialRing) -> Polynomial:
    if stream.accept("-"):
        return -_parse_unary(stream, ring)
    base = _parse_atom(stream, ring)
    if stream.accept("^"):
        token = stream.next()
        if token.kind != NUM:
            raise stream.fail(f"unexpected {token.describe()}", ["<integer>"])
        stream.advance()
        base = base ** int(token.text)
    return base


def _parse_atom(stream: TokenStream, ring: PolynomialRing) -> Polynomial:
    token = stream.next()
    if token.kind == NUM:
        stream.advance()
        return ring.constant(int(token.text))
    if token.kind == NAME:
        if token.text not in ring.variables:
            raise UndeclaredIdentifier(
                f"{token.text!r} is not a variable of the ring", token.line, token.column, ring.variables
            )
        stream.advance()
        return ring.var(token.text)
    if stream.accept("("):
        inner = parse_polynomial(stream, ring)
        stream.eat(")")
        return inner
    raise stream.fail(f"unexpected {token.describe()}", ["<integer>", "<variable>", "(", "-"])


def parse_polynomial_text(ring: PolynomialRing, text: str) -> Polynomial:
    stream = TokenStream(text)
    poly = parse_polynomial(stream, ring)
    if not stream.at_eof():
        raise stream.fail(f"unexpected {stream.next().describe()}", ["+", "-", "*", "/", "^", "end of input"])
    return poly
