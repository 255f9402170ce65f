"""Span-based source editing.

Transforms and bug injectors describe changes as (start, end, new_text)
edits against the original text and never mutate trees.  render() splices
all edits in one pass; apply_edits() additionally re-parses the result so
a malformed rewrite is caught immediately.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import OverlappingEdits, ParseError, PostEditParseFailure
from .tree import AstNode, SourceFunction


@dataclass(frozen=True)
class Edit:
    """Replace src[start:end] with text.  start == end inserts."""

    start: int
    end: int
    text: str

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"bad edit span ({self.start}, {self.end})")


def render(src: str, edits) -> str:
    """Apply all edits to src.  Edits may touch but must not overlap."""
    ordered = sorted(edits, key=lambda e: (e.start, e.end))
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.start < prev.end or (cur.start == prev.start and prev.start == prev.end == cur.end):
            raise OverlappingEdits(
                f"edit ({cur.start}, {cur.end}) overlaps ({prev.start}, {prev.end})"
            )
    out = []
    last = 0
    for e in ordered:
        if e.end > len(src):
            raise ValueError(f"edit ({e.start}, {e.end}) past end of source ({len(src)})")
        out.append(src[last:e.start])
        out.append(e.text)
        last = e.end
    out.append(src[last:])
    return "".join(out)


def apply_edits(fn: SourceFunction, edits, parse_fn=None) -> tuple[str, AstNode]:
    """Render edits against fn.text and re-parse the result.

    Raises PostEditParseFailure when the edited text no longer parses,
    chaining the underlying ParseError.
    """
    if parse_fn is None:
        from .parser import parse as parse_fn
    new_text = render(fn.text, edits)
    probe = SourceFunction(id=fn.id, language=fn.language, text=new_text)
    try:
        tree = parse_fn(probe)
    except ParseError as exc:
        raise PostEditParseFailure(
            f"{fn.id}: edited source no longer parses: {exc}"
        ) from exc
    return new_text, tree
