"""Model-ready sequences: specials, sub-token label alignment, masking.

Sequences are framed as [CLS] sub-tokens... [SEP], truncated to the head
when too long (signatures live there).  Every sub-token inherits the
structural label of its source token; the two frame specials carry the
dedicated [CLS]/[SEP] label ids, which the type-prediction loss skips.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .bpe import CLS_ID, MASK_ID, SEP_ID, SubwordModel

# LabelVocab construction pins its specials to these positions
_CLS_LABEL_ID = 2
_SEP_LABEL_ID = 3

MAX_LEN = 512

MASK_RATE = 0.15


@dataclass
class TokenizedSequence:
    """One encoded function, optionally with a masked variant applied."""

    ids: list
    label_ids: list
    mask_positions: list = field(default_factory=list)
    originals_at_mask: list = field(default_factory=list)
    truncated: bool = False

    def __post_init__(self):
        if len(self.ids) != len(self.label_ids):
            raise ValueError(
                f"{len(self.ids)} ids vs {len(self.label_ids)} label ids")
        if len(self.mask_positions) != len(self.originals_at_mask):
            raise ValueError("mask positions and originals out of step")

    @property
    def inner_length(self) -> int:
        """Sub-token count without the [CLS]/[SEP] frame."""
        return len(self.ids) - 2


def encode(model: SubwordModel, tokens, label_ids,
           max_len: int = MAX_LEN) -> TokenizedSequence:
    """Sub-tokenize one function's tokens with aligned labels, unmasked."""
    if len(tokens) != len(label_ids):
        raise ValueError(f"{len(tokens)} tokens vs {len(label_ids)} labels")
    ids = [CLS_ID]
    labs = [_CLS_LABEL_ID]
    for tok, lab in zip(tokens, label_ids):
        subs = model.encode_token(tok)
        ids.extend(subs)
        labs.extend([lab] * len(subs))
    truncated = len(ids) + 1 > max_len
    if truncated:
        ids = ids[:max_len - 1]
        labs = labs[:max_len - 1]
    ids.append(SEP_ID)
    labs.append(_SEP_LABEL_ID)
    return TokenizedSequence(ids=ids, label_ids=labs, truncated=truncated)


def mask_count(inner_len: int, rate: float = MASK_RATE) -> int:
    """Half-up rounding, floored at one masked position."""
    return max(1, math.floor(inner_len * rate + 0.5))


def mask_for_mlm(seq: TokenizedSequence, rng_seed: int,
                 rate: float = MASK_RATE) -> TokenizedSequence:
    """Mask 15% of the sub-tokens (never the frame), recording originals."""
    if seq.mask_positions:
        raise ValueError("sequence is already masked")
    k = seq.inner_length
    if k < 1:
        raise ValueError("nothing to mask in an empty sequence")
    rng = random.Random(rng_seed)
    positions = sorted(rng.sample(range(1, 1 + k), mask_count(k, rate)))
    ids = list(seq.ids)
    originals = []
    for p in positions:
        originals.append(ids[p])
        ids[p] = MASK_ID
    return TokenizedSequence(ids=ids, label_ids=list(seq.label_ids),
                             mask_positions=positions,
                             originals_at_mask=originals,
                             truncated=seq.truncated)


def write_sequences(path, seqs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in seqs:
            fh.write(json.dumps({
                "ids": s.ids,
                "label_ids": s.label_ids,
                "mask_positions": s.mask_positions,
                "originals_at_mask": s.originals_at_mask,
                "truncated": s.truncated,
            }, separators=(",", ":")) + "\n")


def read_sequences(path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            d = json.loads(line)
            out.append(TokenizedSequence(
                ids=d["ids"], label_ids=d["label_ids"],
                mask_positions=d["mask_positions"],
                originals_at_mask=d["originals_at_mask"],
                truncated=d["truncated"]))
    return out
