"""Byte-pair subword model trained from scratch on token streams.

The base alphabet is all 256 bytes, so any input is representable and
the unknown id exists only as a safety valve.  Merges are learned by
highest pair frequency, ties broken toward the lexicographically
smallest pair, which makes training deterministic for a fixed corpus.

Id layout: five specials first, then the 256 byte symbols, then one id
per merge in learned order.  `target_vocab` counts the non-special
symbols (bytes + merges).
"""

from __future__ import annotations

import hashlib
from collections import Counter

from .errors import CorpusTooSmall

PAD_TOKEN = "[PAD]"
UNK_TOKEN = "[UNK]"
CLS_TOKEN = "[CLS]"
SEP_TOKEN = "[SEP]"
MASK_TOKEN = "[MASK]"

SPECIAL_TOKENS = (PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN, MASK_TOKEN)

PAD_ID = 0
UNK_ID = 1
CLS_ID = 2
SEP_ID = 3
MASK_ID = 4

_N_SPECIALS = len(SPECIAL_TOKENS)
_N_BYTES = 256

_MAGIC = "# cloneforge subword model v1"


class SubwordModel:
    """Frozen merge table plus the derived sub-token id mapping."""

    def __init__(self, merges, corpus_sha256: str):
        self.merges = [(bytes(a), bytes(b)) for a, b in merges]
        self.corpus_sha256 = corpus_sha256
        self._ranks = {pair: i for i, pair in enumerate(self.merges)}
        if len(self._ranks) != len(self.merges):
            raise ValueError("duplicate merge rule")
        self._piece_ids = {bytes([b]): _N_SPECIALS + b for b in range(_N_BYTES)}
        for i, (a, b) in enumerate(self.merges):
            self._piece_ids[a + b] = _N_SPECIALS + _N_BYTES + i
        self._pieces = {i: p for p, i in self._piece_ids.items()}

    @property
    def vocab_size(self) -> int:
        """Non-special symbol count (bytes + merges)."""
        return _N_BYTES + len(self.merges)

    def __len__(self) -> int:
        return _N_SPECIALS + self.vocab_size

    def encode_token(self, text: str) -> list:
        """Sub-token ids for one source token (>= 1 of them)."""
        if text == "":
            raise ValueError("cannot encode an empty token")
        syms = [bytes([b]) for b in text.encode("utf-8")]
        while len(syms) > 1:
            ranked = [(self._ranks[p], i)
                      for i, p in enumerate(zip(syms, syms[1:]))
                      if p in self._ranks]
            if not ranked:
                break
            rank = min(ranked)[0]
            pair = self.merges[rank]
            syms = _merge_once(syms, pair)
        return [self._piece_ids[s] for s in syms]

    def decode(self, ids) -> str:
        """Byte content of the given ids; special ids are skipped."""
        chunks = []
        for i in ids:
            if i < _N_SPECIALS:
                continue
            piece = self._pieces.get(i)
            if piece is None:
                raise KeyError(f"id {i} is not in the vocabulary")
            chunks.append(piece)
        return b"".join(chunks).decode("utf-8", errors="replace")

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_MAGIC + "\n")
            fh.write(f"# corpus-sha256: {self.corpus_sha256}\n")
            fh.write("# specials: " + " ".join(SPECIAL_TOKENS) + "\n")
            fh.write(f"# merges: {len(self.merges)}\n")
            for a, b in self.merges:
                fh.write(f"{a.hex()} {b.hex()}\n")

    @classmethod
    def load(cls, path) -> "SubwordModel":
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines or lines[0] != _MAGIC:
            raise ValueError(f"{path}: not a subword model file")
        sha = lines[1].split(": ", 1)[1]
        merges = []
        for line in lines[4:]:
            if not line:
                continue
            a, b = line.split()
            merges.append((bytes.fromhex(a), bytes.fromhex(b)))
        return cls(merges, sha)


def _merge_once(syms, pair):
    """Replace every left-to-right occurrence of pair in the symbol list."""
    out = []
    i = 0
    while i < len(syms):
        if i + 1 < len(syms) and (syms[i], syms[i + 1]) == pair:
            out.append(syms[i] + syms[i + 1])
            i += 2
        else:
            out.append(syms[i])
            i += 1
    return out


def _count_pairs(seq) -> Counter:
    c = Counter()
    for a, b in zip(seq, seq[1:]):
        c[(a, b)] += 1
    return c


def train_subword(corpus, target_vocab: int) -> SubwordModel:
    """Learn merges until the symbol count reaches target_vocab.

    `corpus` is an iterable of token streams (one stream per function).
    Merging may stop early when no pair repeats; the vocabulary is then
    simply smaller than the target.
    """
    if target_vocab <= _N_BYTES:
        raise ValueError(f"target_vocab must exceed the {_N_BYTES} base symbols")
    words = Counter()
    for stream in corpus:
        for tok in stream:
            words[tok.encode("utf-8")] += 1
    if not words:
        raise CorpusTooSmall("no tokens to train on")

    # hash the word multiset, not the stream, so stream order cannot leak
    # into the saved model file
    hasher = hashlib.sha256()
    seqs = []
    counts = []
    for raw, n in sorted(words.items()):
        hasher.update(raw)
        hasher.update(b"\x00%d\x00" % n)
        seqs.append([bytes([b]) for b in raw])
        counts.append(n)

    pair_counts = Counter()
    where = {}                      # pair -> set of word indices
    for idx, seq in enumerate(seqs):
        for pair, k in _count_pairs(seq).items():
            pair_counts[pair] += k * counts[idx]
            where.setdefault(pair, set()).add(idx)

    merges = []
    for _ in range(target_vocab - _N_BYTES):
        if not pair_counts:
            break
        best = min(pair_counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        merges.append(best)
        for idx in sorted(where.get(best, ())):
            seq, n = seqs[idx], counts[idx]
            for pair, k in _count_pairs(seq).items():
                pair_counts[pair] -= k * n
                if pair_counts[pair] <= 0:
                    del pair_counts[pair]
                where[pair].discard(idx)
            seq = _merge_once(seq, best)
            seqs[idx] = seq
            for pair, k in _count_pairs(seq).items():
                pair_counts[pair] += k * n
                where.setdefault(pair, set()).add(idx)
    return SubwordModel(merges, hasher.hexdigest())
