"""Tokenizer and recursive-descent parser for the shared expression grammar.

The parser only builds a syntax tree; evaluation lives next to the value
types (``field.rf_normalize`` for rational functions, ``charp.evaluate`` for
forms and symbols).  Grammar (see docs/grammar.md for the full EBNF)::

    sum     := term (('+' | '-') term)*
    term    := product ('^' product)*          wedge product
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' ['-'] INT)*           integer power
    atom    := INT | IDENT | 'd' '(' sum ')' | '(' sum ')'
             | '[' list ']'                    Witt vector
             | '[' list '|' list '}'           H-symbol
             | '{' list '}' ['@' INT]          Milnor symbol

A ``^`` followed by an optional minus sign and an integer literal is a
power, any other ``^`` is a wedge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\]{},|@=]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'ident', 'op', 'end'
    text: str
    pos: int


@dataclass(frozen=True)
class Node:
    kind: str
    args: tuple
    pos: int = 0


def tokenize(text: str) -> list[Token]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if m is None or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i, text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), start))
        i = m.end()
    out.append(Token("end", "", n))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text, k=0):
        t = self.peek(k)
        return t.kind == "op" and t.text == text

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.peek()
        if not (t.kind == "op" and t.text == text):
            found = t.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", t.pos, self.text)
        return self.advance()

    def fail(self, what):
        t = self.peek()
        found = t.text or "end of input"
        raise ParseError(f"expected {what}, found {found!r}", t.pos, self.text)

    # grammar rules

    def parse_sum(self):
        node = self.parse_term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            rhs = self.parse_term()
            node = Node("add" if op.text == "+" else "sub", (node, rhs), op.pos)
        return node

    def _power_follows(self):
        # '^' INT or '^' '-' INT
        if not self.at("^"):
            return False
        t1 = self.peek(1)
        if t1.kind == "int":
            return True
        return t1.kind == "op" and t1.text == "-" and self.peek(2).kind == "int"

    def parse_term(self):
        node = self.parse_product()
        while self.at("^") and not self._power_follows():
            op = self.advance()
            rhs = self.parse_product()
            node = Node("wedge", (node, rhs), op.pos)
        return node

    def parse_product(self):
        node = self.parse_unary()
        while self.at("*") or self.at("/"):
            op = self.advance()
            rhs = self.parse_unary()
            node = Node("mul" if op.text == "*" else "div", (node, rhs), op.pos)
        return node

    def parse_unary(self):
        if self.at("-"):
            op = self.advance()
            return Node("neg", (self.parse_unary(),), op.pos)
        if self.at("+"):
            self.advance()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        node = self.parse_atom()
        while self._power_follows():
            op = self.advance()
            sign = 1
            if self.at("-"):
                self.advance()
                sign = -1
            k = int(self.advance().text)
            node = Node("pow", (node, sign * k), op.pos)
        return node

    def parse_list(self, closers):
        items = []
        if any(self.at(c) for c in closers):
            return items
        items.append(self.parse_sum())
        while self.at(","):
            self.advance()
            items.append(self.parse_sum())
        return items

    def parse_atom(self):
        t = self.peek()
        if t.kind == "int":
            self.advance()
            return Node("int", (int(t.text),), t.pos)
        if t.kind == "ident":
            self.advance()
            if t.text == "d" and self.at("("):
                self.advance()
                inner = self.parse_sum()
                self.expect(")")
                return Node("d", (inner,), t.pos)
            return Node("var", (t.text,), t.pos)
        if self.at("("):
            self.advance()
            inner = self.parse_sum()
            self.expect(")")
            return inner
        if self.at("["):
            self.advance()
            witt = self.parse_list(("]", "|"))
            if self.at("]"):
                self.advance()
                if not witt:
                    raise ParseError("empty Witt vector", t.pos, self.text)
                return Node("witt", (tuple(witt),), t.pos)
            self.expect("|")
            entries = self.parse_list(("}",))
            self.expect("}")
            if not witt:
                raise ParseError("empty Witt part in H-symbol", t.pos, self.text)
            return Node("hsym", (tuple(witt), tuple(entries)), t.pos)
        if self.at("{"):
            self.advance()
            entries = self.parse_list(("}",))
            self.expect("}")
            modulus = None
            if self.at("@"):
                self.advance()
                m = self.peek()
                if m.kind != "int":
                    self.fail("integer modulus")
                self.advance()
                modulus = int(m.text)
            return Node("ksym", (tuple(entries), modulus), t.pos)
        self.fail("an expression")


def parse(text: str) -> Node:
    """Parse ``text`` into a syntax tree; raise ParseError with a position."""
    p = _Parser(text)
    node = p.parse_sum()
    if p.peek().kind != "end":
        p.fail("end of input")
    return node


def parse_binding(text: str) -> tuple[str, Node]:
    """Parse ``NAME = expr`` as used by ``--let``."""
    m = re.match(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*=(.*)$", text, re.S)
    if not m:
        raise ParseError("binding must look like NAME = expression", 0, text)
    name = m.group(1)
    try:
        node = parse(m.group(2))
    except ParseError as e:
        offset = m.start(2)
        raise ParseError(str(e).rsplit(" at position", 1)[0],
                         (e.position or 0) + offset, text) from None
    return name, node


def free_variables(node: Node) -> set[str]:
    out = set()
    stack = [node]
    while stack:
        nd = stack.pop()
        if nd.kind == "var":
            out.add(nd.args[0])
            continue
        for a in nd.args:
            if isinstance(a, Node):
                stack.append(a)
            elif isinstance(a, tuple):
                stack.extend(x for x in a if isinstance(x, Node))
    return out
