"""Hand-built reference implementations used to check the real ones.

Everything here favors obviousness over speed: brute-force scans, direct
transcriptions of definitions, no shared code with the package under
test beyond the data types it exposes.
"""

from __future__ import annotations

import difflib
import math

import numpy as np


def check_tree_invariants(root, src: str):
    """Assert the structural contract of a concrete syntax tree.

    * children are ordered, non-overlapping, and tile the parent span
    * terminals carry text equal to their source slice
    * concatenating terminals with the gaps between them reproduces src
    * gaps between terminals hold only whitespace and comments
    """
    for node in root.walk():
        assert 0 <= node.start <= node.end <= len(src), f"bad span on {node!r}"
        if node.is_terminal:
            if node.text is not None:
                assert src[node.start:node.end] == node.text, (
                    f"terminal text mismatch at {node.span}: "
                    f"{src[node.start:node.end]!r} != {node.text!r}"
                )
            continue
        kids = node.children
        assert kids[0].start == node.start, f"{node!r} first child starts late"
        assert kids[-1].end == node.end, f"{node!r} last child ends early"
        for a, b in zip(kids, kids[1:]):
            assert a.end <= b.start, f"overlapping children under {node!r}"
        for ch in kids:
            assert ch.parent is node, f"broken parent link under {node!r}"

    terms = sorted((t for t in root.terminals()), key=lambda t: t.start)
    pieces = []
    last = root.start
    for t in terms:
        gap = src[last:t.start]
        assert _is_trivia(gap), f"non-trivia gap {gap!r} before offset {t.start}"
        pieces.append(gap)
        pieces.append(src[t.start:t.end])
        last = t.end
    pieces.append(src[last:root.end])
    assert _is_trivia(src[last:root.end]), "non-trivia tail inside root span"
    assert "".join(pieces) == src[root.start:root.end], "terminal tiling broke round-trip"


def _is_trivia(gap: str) -> bool:
    """True when gap is only whitespace and well-formed comments."""
    i = 0
    n = len(gap)
    while i < n:
        c = gap[i]
        if c in " \t\r\n":
            i += 1
        elif gap.startswith("//", i):
            j = gap.find("\n", i)
            i = n if j < 0 else j + 1
        elif gap.startswith("/*", i):
            j = gap.find("*/", i + 2)
            if j < 0:
                return False
            i = j + 2
        else:
            return False
    return True


def rebuild_source(root, src: str) -> str:
    """Source reproduced from terminal spans plus inter-token gaps."""
    out = []
    last = 0
    for t in sorted(root.terminals(), key=lambda n: n.start):
        out.append(src[last:t.start])
        out.append(src[t.start:t.end])
        last = t.end
    out.append(src[last:])
    return "".join(out)


def token_texts(root) -> list:
    return [t.text for t in sorted(root.terminals(), key=lambda n: n.start)]


def token_edit_distance(a: list, b: list) -> int:
    """Levenshtein distance over token text sequences, O(len(a)*len(b))."""
    m, n = len(a), len(b)
    prev = list(range(n + 1))
    for i in range(1, m + 1):
        cur = [i] + [0] * n
        for j in range(1, n + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev = cur
    return prev[n]


def naive_splice(src: str, edits) -> str:
    """Apply (start, end, text) edits one at a time, tracking offsets."""
    items = sorted(edits, key=lambda e: (e.start, e.end))
    shift = 0
    out = src
    for e in items:
        out = out[:e.start + shift] + e.text + out[e.end + shift:]
        shift += len(e.text) - (e.end - e.start)
    return out


# ---- retrieval metrics, transcribed directly from their definitions ----

def cosine(u, v) -> float:
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroDivisionError("zero-norm vector")
    return sum(x * y for x, y in zip(u, v)) / (nu * nv)


def brute_force_map_at_r(vectors, groups, r: int) -> float:
    """Mean over queries of average precision at R, with self excluded.

    vectors: list of embedding lists; groups: parallel list of group ids.
    Ties in similarity break toward the lower index (stable sort).
    """
    n = len(vectors)
    ap_values = []
    for q in range(n):
        order = sorted(
            (i for i in range(n) if i != q),
            key=lambda i: (-cosine(vectors[q], vectors[i]), i),
        )
        hits = 0
        precision_sum = 0.0
        for rank, i in enumerate(order[:r], start=1):
            if groups[i] == groups[q]:
                hits += 1
                precision_sum += hits / rank
        ap_values.append(precision_sum / r)
    return sum(ap_values) / n


def brute_force_mrr(vectors, groups) -> float:
    n = len(vectors)
    total = 0.0
    for q in range(n):
        order = sorted(
            (i for i in range(n) if i != q),
            key=lambda i: (-cosine(vectors[q], vectors[i]), i),
        )
        rr = 0.0
        for rank, i in enumerate(order, start=1):
            if groups[i] == groups[q]:
                rr = 1.0 / rank
                break
        total += rr
    return total / n


def close_ratio(a: list, b: list) -> float:
    """difflib similarity ratio over token lists (independent check data)."""
    return difflib.SequenceMatcher(a=a, b=b).ratio()


def brute_force_bpe_merges(streams, n_merges: int) -> list:
    """Replay pair merging with a full recount every round.

    Slow but direct transcription of the rule: merge the most frequent
    adjacent pair, ties to the lexicographically smallest, all
    occurrences at once, until n_merges rules exist or nothing repeats.
    """
    weights = {}
    for stream in streams:
        for tok in stream:
            raw = tok.encode("utf-8")
            weights[raw] = weights.get(raw, 0) + 1
    seqs = {w: [bytes([b]) for b in w] for w in weights}
    merges = []
    for _ in range(n_merges):
        counts = {}
        for w, seq in seqs.items():
            for i in range(len(seq) - 1):
                p = (seq[i], seq[i + 1])
                counts[p] = counts.get(p, 0) + weights[w]
        if not counts:
            break
        best = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        merges.append(best)
        for w, seq in seqs.items():
            out, i = [], 0
            while i < len(seq):
                if i + 1 < len(seq) and (seq[i], seq[i + 1]) == best:
                    out.append(seq[i] + seq[i + 1])
                    i += 2
                else:
                    out.append(seq[i])
                    i += 1
            seqs[w] = out
    return merges


def brute_force_mlm(dists, true_ids) -> float:
    """Sum of -log p[true] over masked positions, plain loops."""
    total = 0.0
    for row, t in zip(dists, true_ids):
        p = row[t]
        if p == 0:
            return math.inf
        total += -math.log(p)
    return total


def brute_force_ltsp(dists, true_ids, skip=(0, 2, 3)) -> float:
    total = 0.0
    for row, t in zip(dists, true_ids):
        if t in skip:
            continue
        p = row[t]
        if p == 0:
            return math.inf
        total += -math.log(p)
    return total


def brute_force_clr(anchors, positives, negatives, tau: float):
    """Direct transcription of the contrastive objective, no stabilization.

    Safe without max-subtraction because cosine/tau stays within +-20 at
    tau=0.05, far below float64 overflow.
    """
    n = len(anchors)
    per = []
    for i in range(n):
        num = math.exp(cosine(anchors[i], positives[i]) / tau)
        den = 0.0
        for j in range(n):
            den += math.exp(cosine(anchors[i], positives[j]) / tau)
            den += math.exp(cosine(anchors[i], negatives[j]) / tau)
        per.append(-math.log(num / den))
    return per, sum(per) / n


def central_difference_gradients(f, arrays, h: float = 1e-5):
    """Numeric df / d arrays[k][i][j] for a scalar f over a list of 2-D arrays."""

    def bump(k, i, j, delta):
        out = [[list(row) for row in a] for a in arrays]
        out[k][i][j] += delta
        return out

    grads = []
    for k, a in enumerate(arrays):
        g = [
            [
                (f(bump(k, i, j, h)) - f(bump(k, i, j, -h))) / (2 * h)
                for j in range(len(a[0]))
            ]
            for i in range(len(a))
        ]
        grads.append(g)
    return grads


def svd_pca(points, k: int):
    """PCA via SVD of the centered data matrix (different route than
    covariance eigendecomposition); returns projected coordinates only,
    sign convention unspecified."""
    m = np.asarray(points, dtype=float)
    centered = m - m.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    return centered @ vt[:k].T
