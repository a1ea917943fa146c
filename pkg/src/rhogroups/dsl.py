"""Recursive-descent parser for the corpus DSL.

One group per line::

    s3: S(3)                 # optional label, then a recipe
    Direct(C(2), D(6))       # unlabeled lines are labelled by their recipe text

Recipes: ``C(n)``, ``Ab(n,...)``, ``D(m)``, ``Dic(m)``, ``S(k)``, ``A(k)``,
``Direct(r, r)``, ``SD(m,d,k)``, ``Frob(p,d)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import recipes as R
from .errors import DuplicateLabel, ParseError, RecipeInvalid

__all__ = ["parse_corpus", "parse_recipe", "KEYWORDS"]

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|(?P<nat>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_.\-]*)|(?P<punct>[():,])"
)

# keyword -> (recipe class, arity; None means one or more)
KEYWORDS: dict[str, tuple[type, int | None]] = {
    "C": (R.Cyclic, 1),
    "Ab": (R.Abelian, None),
    "D": (R.Dihedral, 1),
    "Dic": (R.Dicyclic, 1),
    "S": (R.Symmetric, 1),
    "A": (R.Alternating, 1),
    "SD": (R.SemidirectCC, 3),
    "Frob": (R.FrobAffine, 2),
    "Direct": (R.Direct, 2),
}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Tok]:
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        assert kind is not None
        if kind == "nl":
            toks.append(_Tok("nl", "\n", line, pos - line_start + 1))
            line += 1
            line_start = m.end()
        elif kind == "punct":
            toks.append(_Tok(m.group(), m.group(), line, pos - line_start + 1))
        elif kind in ("nat", "ident"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, expected: tuple[str, ...], tok: _Tok | None = None) -> ParseError:
        tok = tok or self.tok
        found = {"nl": "end of line", "eof": "end of input"}.get(tok.kind, repr(tok.text))
        return ParseError(f"unexpected {found}", tok.line, tok.col, expected)

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            raise self.fail((repr(kind) if len(kind) == 1 else kind,))
        tok = self.tok
        self.i += 1
        return tok

    def nat(self) -> int:
        return int(self.expect("nat").text)

    def recipe(self) -> R.GroupRecipe:
        start = self.tok
        if start.kind != "ident" or start.text not in KEYWORDS:
            raise self.fail(tuple(f"{k}(" for k in KEYWORDS))
        self.i += 1
        cls, arity = KEYWORDS[start.text]
        self.expect("(")
        if cls is R.Direct:
            left = self.recipe()
            self.expect(",")
            args: list = [left, self.recipe()]
        else:
            args = [self.nat()]
            while self.tok.kind == "," and (arity is None or len(args) < arity):
                self.i += 1
                args.append(self.nat())
            if arity is not None and len(args) < arity:
                raise self.fail(("','",))
        self.expect(")")
        node = cls(tuple(args)) if cls is R.Abelian else cls(*args)
        try:
            node.validate()
        except RecipeInvalid as exc:
            err = RecipeInvalid(f"{start.line}:{start.col}: {exc}")
            err.line, err.column = start.line, start.col  # type: ignore[attr-defined]
            raise err from None
        return node

    def end_of_line(self) -> None:
        if self.tok.kind == "eof":
            return
        if self.tok.kind != "nl":
            raise self.fail(("end of line", "'#' comment"))
        self.i += 1


def parse_recipe(text: str) -> R.GroupRecipe:
    """Parse a single recipe such as ``"Direct(C(2), D(6))"``."""
    p = _Parser(text)
    node = p.recipe()
    while p.tok.kind == "nl":
        p.i += 1
    if p.tok.kind != "eof":
        raise p.fail(("end of input",))
    return node


def parse_corpus(source: str) -> list[tuple[str, R.GroupRecipe]]:
    """Parse corpus text into ``(label, recipe)`` pairs in source order."""
    p = _Parser(source)
    out: list[tuple[str, R.GroupRecipe]] = []
    seen: dict[str, int] = {}
    while p.tok.kind != "eof":
        if p.tok.kind == "nl":
            p.i += 1
            continue
        first = p.tok
        label = None
        if first.kind == "ident" and p.peek().kind == ":":
            label = first.text
            p.i += 2
        recipe = p.recipe()
        p.end_of_line()
        label = label or str(recipe)
        if label in seen:
            raise DuplicateLabel(f"duplicate label {label!r} (first on line {seen[label]})", first.line, first.col)
        seen[label] = first.line
        out.append((label, recipe))
    return out
