"""A small s-expression language for string diagrams.

::

    expr  := "(" gen label* ")" | "(" op expr+ ")"
    gen   := id | cup | cap | cupL | capL | braid | braidinv | twist | twistinv
           | basis | dualbasis
    op    := compose | tensor | trace

``(compose f g)`` means ``f∘g``: the first argument is applied last.
``basis a b c [i]`` is the vertex ``a⊗b → c`` and ``dualbasis`` its dual
``c → a⊗b``.  Labels are display names.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from . import diagrams as dg
from .category import Category, ParseError
from .homspace import Hom

GENS = {
    "id": (0, None),
    "cup": (1, 1),
    "cap": (1, 1),
    "cupL": (1, 1),
    "capL": (1, 1),
    "braid": (2, 2),
    "braidinv": (2, 2),
    "twist": (1, 1),
    "twistinv": (1, 1),
    "basis": (3, 4),
    "dualbasis": (3, 4),
}
OPS = {"compose", "tensor", "trace"}


class DiagramSyntaxError(ParseError):
    def __init__(self, msg: str, line: int, col: int, expected: list[str] | None = None):
        self.line, self.col, self.expected = line, col, sorted(expected or [])
        tail = f"; expected one of {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"{line}:{col}: {msg}{tail}")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    out: list[Token] = []
    line, col, i = 1, 1, 0
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            col, i = col + 1, i + 1
            continue
        if ch in "()":
            out.append(Token(ch, line, col))
            col, i = col + 1, i + 1
            continue
        j = i
        while j < len(src) and not src[j].isspace() and src[j] not in "()":
            j += 1
        out.append(Token(src[i:j], line, col))
        col += j - i
        i = j
    return out


class _Parser:
    def __init__(self, src: str, cat: Category | None):
        self.toks = tokenize(src)
        self.pos = 0
        self.cat = cat
        self.end = self._end_position(src)

    @staticmethod
    def _end_position(src: str) -> tuple[int, int]:
        lines = src.split("\n")
        return len(lines), len(lines[-1]) + 1

    def peek(self) -> Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def fail(self, msg: str, expected: list[str] | None = None, tok: Token | None = None):
        tok = tok or self.peek()
        line, col = (tok.line, tok.col) if tok else self.end
        raise DiagramSyntaxError(msg, line, col, expected)

    def take(self, expected: str | None = None) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of input", [expected] if expected else None)
        if expected is not None and tok.text != expected:
            self.fail(f"unexpected {tok.text!r}", [expected], tok)
        self.pos += 1
        return tok

    def expr(self) -> Any:
        self.take("(")
        head = self.peek()
        if head is None or head.text in "()":
            self.fail("missing operator", sorted(GENS) + sorted(OPS))
        self.pos += 1
        if head.text in OPS:
            parts = []
            while (t := self.peek()) is not None and t.text == "(":
                parts.append(self.expr())
            if not parts:
                self.fail(f"{head.text} needs at least one argument", ["("])
            if head.text == "trace" and len(parts) != 1:
                self.fail("trace takes exactly one argument", [")"], head)
            self.take(")")
            if head.text == "compose":
                return dg.C(*parts)
            if head.text == "tensor":
                return dg.T(*parts)
            return dg.Trace(parts[0])
        if head.text not in GENS:
            self.fail(f"unknown operator {head.text!r}", sorted(GENS) + sorted(OPS), head)
        lo, hi = GENS[head.text]
        args: list[Any] = []
        toks: list[Token] = []
        while (t := self.peek()) is not None and t.text not in "()":
            toks.append(t)
            self.pos += 1
        if len(toks) < lo or (hi is not None and len(toks) > hi):
            want = f"{lo}" if lo == hi else f"{lo} to {hi}" if hi is not None else f"at least {lo}"
            self.fail(f"{head.text} takes {want} argument(s), got {len(toks)}", None, head)
        for n, t in enumerate(toks):
            if head.text in ("basis", "dualbasis") and n == 3:
                if not t.text.isdigit():
                    self.fail(f"multiplicity index must be a non-negative integer, got {t.text!r}", None, t)
                args.append(int(t.text))
            else:
                args.append(self.label(t))
        self.take(")")
        return dg.Gen(head.text, tuple(args))

    def label(self, t: Token):
        if self.cat is None:
            return t.text
        try:
            return self.cat.index(t.text)
        except Exception:
            self.fail(f"unknown label {t.text!r}", list(self.cat.labels), t)


def parse_diagram(src: str, cat: Category | None = None) -> Any:
    """Parse to a diagram tree; with ``cat`` given, labels are resolved and checked."""
    p = _Parser(src, cat)
    if not p.toks:
        p.fail("empty expression", ["("])
    out = p.expr()
    if p.peek() is not None:
        p.fail(f"trailing input {p.peek().text!r}", ["end of input"])
    return out


def evaluate(src: str, cat: Category) -> Hom:
    return dg.eval_diagram(cat, parse_diagram(src, cat))


def describe(h: Hom) -> dict:
    """JSON-friendly view of a morphism: the scalar of a closed diagram, else charge blocks."""
    cat = h.cat
    if not h.src and not h.tgt:
        z = h.scalar()
        return {"scalar": [z.real, z.imag]}
    return {
        "src": cat.label_names(h.src),
        "tgt": cat.label_names(h.tgt),
        "blocks": {cat.labels[c]: [[[float(z.real), float(z.imag)] for z in row] for row in b]
                   for c, b in sorted(h.blocks.items()) if b.size},
    }
