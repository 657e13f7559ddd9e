"""ASCII polynomial expressions: `2*y1*g1^2 - (g1 + g2)^3`, `*` optional."""
from __future__ import annotations

import re
from typing import Mapping, Optional

from .algebra import Poly, Ring

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_']*)|(\S))")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


def _tokenize(text: str, line: int):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(0).strip() == "":
            break
        col = m.start() + len(m.group(0)) - len(m.group(0).lstrip()) + 1
        if m.group(1):
            toks.append(("num", int(m.group(1)), col))
        elif m.group(2):
            toks.append(("id", m.group(2), col))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", line, col)
            toks.append((ch, ch, col))
        pos = m.end()
    toks.append(("end", None, len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text, ring, subs, line):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.ring = ring
        self.subs = subs or {}
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", self.line, tok[2])
        self.i += 1
        return tok

    def expr(self) -> Poly:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        result = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self) -> Poly:
        result = self.power()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                result = result * self.power()
            elif kind in ("num", "id", "("):
                result = result * self.power()
            else:
                return result

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("num")
            return base ** tok[1]
        return base

    def atom(self) -> Poly:
        kind, val, col = self.peek()
        if kind == "num":
            self.take()
            return self.ring.const(val)
        if kind == "id":
            self.take()
            if val in self.subs:
                return self.subs[val]
            try:
                return self.ring.gen(val)
            except KeyError:
                raise ParseError(f"unknown variable {val!r}", self.line, col) from None
        if kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        raise ParseError(f"unexpected {val!r}", self.line, col)


def parse_poly(text: str, ring: Ring, subs: Optional[Mapping[str, Poly]] = None, line: int = 1) -> Poly:
    if not text.strip():
        raise ParseError("empty expression", line, 1)
    p = _Parser(text, ring, subs, line)
    result = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"trailing input {tok[1]!r}", line, tok[2])
    return result


def split_list(text: str) -> list:
    """Split a comma-separated polynomial list, respecting parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]
