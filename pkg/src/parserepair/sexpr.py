"""Tokenizer and reader for the parenthesized wire format.

All on-disk formats (feature structures, type specifications, corpus
records, network dumps' vocabularies) share this lexical layer: lists in
parentheses, case-insensitive symbols, integers, double-quoted strings,
and `;` comments running to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class ParseError(Exception):
    """Malformed input text.  `offset` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.message = message
        self.offset = offset


@dataclass(frozen=True)
class Symbol:
    """Case-insensitive identifier, canonicalized to lowercase."""

    name: str

    def __post_init__(self):
        object.__setattr__(self, "name", self.name.lower())

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"Symbol({self.name!r})"


# Atoms as produced by the tokenizer: symbols, integers, quoted strings.
Atom = Union[Symbol, int, str]

_ATOM_RE = re.compile(r'[^()";\s]+')
_INT_RE = re.compile(r"[+-]?\d+")
_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}
_UNESCAPES = {"\n": "\\n", "\t": "\\t", '"': '\\"', "\\": "\\\\"}


@dataclass(frozen=True)
class Token:
    kind: str  # "lparen" | "rparen" | "atom" | "eof"
    value: object
    offset: int


@dataclass(frozen=True)
class Node:
    """A parenthesized list; `offset` points at `(`, `end` at its `)`."""

    items: tuple  # of Node | Token("atom")
    offset: int
    end: int


Form = Union[Node, Token]


def tokenize(text: str) -> list:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == ";":
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
        elif c == "(":
            tokens.append(Token("lparen", "(", i))
            i += 1
        elif c == ")":
            tokens.append(Token("rparen", ")", i))
            i += 1
        elif c == '"':
            start = i
            i += 1
            parts = []
            while i < n and text[i] != '"':
                if text[i] == "\\":
                    i += 1
                    if i >= n:
                        break
                    parts.append(_ESCAPES.get(text[i], text[i]))
                else:
                    parts.append(text[i])
                i += 1
            if i >= n:
                raise ParseError("unterminated string", start)
            tokens.append(Token("atom", "".join(parts), start))
            i += 1
        else:
            m = _ATOM_RE.match(text, i)
            word = m.group()
            if _INT_RE.fullmatch(word):
                tokens.append(Token("atom", int(word), i))
            else:
                tokens.append(Token("atom", Symbol(word), i))
            i = m.end()
    tokens.append(Token("eof", None, n))
    return tokens


def read_forms(text: str) -> list:
    """Read every top-level form; raises ParseError on unbalanced input."""
    tokens = tokenize(text)
    pos = 0

    def parse() -> Form:
        nonlocal pos
        tok = tokens[pos]
        if tok.kind == "lparen":
            pos += 1
            items = []
            while True:
                nxt = tokens[pos]
                if nxt.kind == "rparen":
                    pos += 1
                    return Node(tuple(items), tok.offset, nxt.offset)
                if nxt.kind == "eof":
                    raise ParseError("unbalanced parentheses: missing )", tok.offset)
                items.append(parse())
        if tok.kind == "rparen":
            raise ParseError("unbalanced parentheses: unexpected )", tok.offset)
        pos += 1
        return tok

    forms = []
    while tokens[pos].kind != "eof":
        forms.append(parse())
    return forms


def atom_text(value: Atom) -> str:
    if isinstance(value, Symbol):
        return value.name
    if isinstance(value, int):
        return str(value)
    return '"' + "".join(_UNESCAPES.get(c, c) for c in value) + '"'


def expect_symbol(form: Form, what: str) -> Symbol:
    if isinstance(form, Token) and isinstance(form.value, Symbol):
        return form.value
    raise ParseError(f"expected {what}", form.offset)


def expect_node(form: Form, what: str) -> Node:
    if isinstance(form, Node):
        return form
    raise ParseError(f"expected {what}", form.offset)
