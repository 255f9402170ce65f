"""Syntax tree node type and the source-function record.

The tree is a concrete syntax tree: every lexical token of the source is a
terminal node, children appear in source order, and a node's span covers
exactly the tokens beneath it.  Node kinds are plain grammar names
("function_definition", "binary_expression", ...); keyword and punctuation
terminals use their own text as the kind ("for", ";", "<=").  Offsets are
character offsets into the function text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional


class Language(str, Enum):
    C = "c"
    CPP = "cpp"
    JAVA = "java"

    @classmethod
    def of(cls, value) -> "Language":
        if isinstance(value, cls):
            return value
        v = str(value).lower()
        aliases = {"c": cls.C, "cpp": cls.CPP, "c++": cls.CPP, "cxx": cls.CPP, "java": cls.JAVA}
        if v not in aliases:
            raise ValueError(f"unsupported language: {value!r}")
        return aliases[v]


@dataclass
class SourceFunction:
    """One extracted function or method."""

    id: str
    language: Language
    text: str

    def __post_init__(self):
        self.language = Language.of(self.language)


ERROR_KIND = "ERROR"


class AstNode:
    """One node of the concrete syntax tree.

    Terminals carry their token text; interior nodes own an ordered child
    list whose spans are disjoint and tile the parent span.  Trees are
    immutable after construction and safe to share across threads.
    """

    __slots__ = ("kind", "start", "end", "children", "parent", "text")

    def __init__(self, kind: str, start: int, end: int, children=None, text: Optional[str] = None):
        self.kind = kind
        self.start = start
        self.end = end
        self.children: list[AstNode] = children if children is not None else []
        self.parent: Optional[AstNode] = None
        self.text = text
        for ch in self.children:
            ch.parent = self

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    @property
    def is_terminal(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["AstNode"]:
        """Pre-order traversal of the subtree rooted here."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def terminals(self) -> Iterator["AstNode"]:
        for node in self.walk():
            if node.is_terminal:
                yield node

    def find_all(self, kind: str) -> list["AstNode"]:
        return [n for n in self.walk() if n.kind == kind]

    def first(self, kind: str) -> Optional["AstNode"]:
        for n in self.walk():
            if n.kind == kind:
                return n
        return None

    def child_of_kind(self, kind: str) -> Optional["AstNode"]:
        for ch in self.children:
            if ch.kind == kind:
                return ch
        return None

    def ancestors(self) -> Iterator["AstNode"]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def has_errors(self) -> bool:
        return any(n.kind == ERROR_KIND for n in self.walk())

    def error_spans(self) -> list[tuple[int, int]]:
        return [n.span for n in self.walk() if n.kind == ERROR_KIND]

    def src(self, source: str) -> str:
        """Slice of the original source covered by this node."""
        return source[self.start:self.end]

    def __repr__(self):
        if self.is_terminal:
            return f"({self.kind} {self.start}..{self.end} {self.text!r})"
        return f"({self.kind} {self.start}..{self.end} [{len(self.children)}])"

    def pretty(self, source: str = "", indent: int = 0) -> str:
        pad = "  " * indent
        if self.is_terminal:
            return f"{pad}{self.kind}: {self.text!r}"
        lines = [f"{pad}{self.kind}"]
        for ch in self.children:
            lines.append(ch.pretty(source, indent + 1))
        return "\n".join(lines)


@dataclass
class FlatToken:
    """One source token as produced by flatten_tokens."""

    text: str
    kind: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


def flatten_tokens(root: AstNode, src: str) -> list[FlatToken]:
    """Terminals of the tree in source order.

    The concatenation of the returned token texts with the original
    inter-token bytes (whitespace and comments) reproduces ``src``.
    """
    toks = [FlatToken(t.text, t.kind, t.start, t.end) for t in root.terminals()]
    toks.sort(key=lambda t: t.start)
    return toks
