"""Structural token labels: each token tagged with its local tree context.

A token's label is the pair "terminal-kind#parent-kind" read off the
concrete syntax tree, so `x` in a declaration and `x` in a call carry
different labels even though the text is identical.  Labels feed the
token-type prediction objective; the vocabulary is built by scanning a
corpus exhaustively and is frozen afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lang import SourceFunction, parse
from .lang.tree import AstNode


@dataclass(frozen=True)
class AstLabel:
    """One token's two-level tree context."""

    terminal_type: str
    parent_type: str

    @property
    def rendered(self) -> str:
        return f"{self.terminal_type}#{self.parent_type}"


def label_sequence(root: AstNode, src: str = None) -> list:
    """One AstLabel per flattened token, in token order.

    Only node kinds matter, so the label stream is invariant under any
    renaming that keeps the tree shape.
    """
    out = []
    for term in root.terminals():
        parent = term.parent.kind if term.parent is not None else root.kind
        out.append(AstLabel(term.kind, parent))
    return out


PAD_LABEL = "[PAD]"
UNK_LABEL = "[UNK]"
CLS_LABEL = "[CLS]"
SEP_LABEL = "[SEP]"

_SPECIALS = (PAD_LABEL, UNK_LABEL, CLS_LABEL, SEP_LABEL)


class LabelVocab:
    """Dense label -> id table; specials first, then lexicographic."""

    def __init__(self, labels):
        labels = tuple(labels)
        if labels[:len(_SPECIALS)] != _SPECIALS:
            raise ValueError("label vocabulary must start with the special labels")
        self.labels = labels
        self._ids = {lab: i for i, lab in enumerate(labels)}
        if len(self._ids) != len(labels):
            raise ValueError("duplicate label in vocabulary")

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelVocab) and self.labels == other.labels

    @property
    def pad_id(self) -> int:
        return self._ids[PAD_LABEL]

    @property
    def unk_id(self) -> int:
        return self._ids[UNK_LABEL]

    @property
    def cls_id(self) -> int:
        return self._ids[CLS_LABEL]

    @property
    def sep_id(self) -> int:
        return self._ids[SEP_LABEL]

    def id_of(self, rendered: str) -> int:
        return self._ids.get(rendered, self.unk_id)

    def encode(self, labels) -> list:
        """Ids for a label_sequence result (unknowns map to UNK)."""
        return [self.id_of(lab.rendered) for lab in labels]

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for lab in self.labels:
                fh.write(lab + "\n")

    @classmethod
    def load(cls, path) -> "LabelVocab":
        with open(path, encoding="utf-8") as fh:
            return cls([line.rstrip("\n") for line in fh if line.strip()])


def build_label_vocab(corpus) -> LabelVocab:
    """Exhaustive scan over SourceFunctions; deterministic result.

    Two passes over the same corpus (in any order) produce byte-identical
    vocabularies: the label set is order-free and the layout is sorted.
    """
    seen = set()
    for fn in corpus:
        if not isinstance(fn, SourceFunction):
            raise TypeError(f"expected SourceFunction, got {type(fn).__name__}")
        for lab in label_sequence(parse(fn), fn.text):
            seen.add(lab.rendered)
    return LabelVocab(_SPECIALS + tuple(sorted(seen)))
