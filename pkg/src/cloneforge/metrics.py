"""Retrieval and classification metrics over embedding spaces.

Cosine similarity is the ranking score throughout, matching the
training objective.  Rankings exclude the query itself and break score
ties by ascending item id so results never depend on input order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from collections import Counter

import numpy as np

from .errors import GroupTooSmall


@dataclass(frozen=True)
class RetrievalDataset:
    """Embedded items with group labels, scored against top-r retrieval.

    ``items`` holds (id, vector, group) triples; ids must be unique and
    orderable, vectors finite with nonzero norm and a shared dimension.
    """

    items: tuple
    r: int

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if self.r < 1:
            raise ValueError("r must be positive")
        if len(self.items) < 2:
            raise ValueError("need at least two items")
        dims = set()
        ids = set()
        for item_id, vec, _ in self.items:
            v = np.asarray(vec, dtype=float)
            dims.add(v.shape)
            if not np.isfinite(v).all() or np.linalg.norm(v) == 0:
                raise ValueError(f"item {item_id!r} has a non-finite or zero vector")
            ids.add(item_id)
        if len(dims) != 1 or len(next(iter(dims))) != 1:
            raise ValueError(f"vectors must share one dimension, saw {sorted(dims)}")
        if len(ids) != len(self.items):
            raise ValueError("item ids are not unique")

    def group_sizes(self) -> Counter:
        return Counter(group for _, _, group in self.items)


def _unit_matrix(vectors) -> np.ndarray:
    m = np.asarray(vectors, dtype=float)
    return m / np.linalg.norm(m, axis=1)[:, None]


def map_at_r(ds: RetrievalDataset) -> float:
    """Mean over queries of average precision at r, self excluded.

    Average precision at r follows the retrieval convention with the
    fixed denominator r: AP = (1/r) * sum over relevant ranks of
    (hits so far / rank).  Every group must carry at least r+1 members
    so each query has r same-group candidates available.
    """
    small = {g: c for g, c in ds.group_sizes().items() if c < ds.r + 1}
    if small:
        raise GroupTooSmall(
            f"groups below {ds.r + 1} members: "
            + ", ".join(f"{g!r} ({c})" for g, c in sorted(small.items(), key=repr))
        )
    ids = [item_id for item_id, _, _ in ds.items]
    groups = [group for _, _, group in ds.items]
    sims = _unit_matrix([vec for _, vec, _ in ds.items])
    sims = sims @ sims.T

    n = len(ds.items)
    ap_total = 0.0
    for q in range(n):
        order = sorted(
            (j for j in range(n) if j != q),
            key=lambda j: (-sims[q, j], ids[j]),
        )
        hits, precision_sum = 0, 0.0
        for rank, j in enumerate(order[: ds.r], start=1):
            if groups[j] == groups[q]:
                hits += 1
                precision_sum += hits / rank
        ap_total += precision_sum / ds.r
    return ap_total / n


def mrr(ranked_relevance) -> float:
    """Mean reciprocal rank over pre-ranked candidate lists.

    Each list flags candidates in rank order, exactly one truthy entry
    per query.
    """
    if not ranked_relevance:
        raise ValueError("no queries")
    total = 0.0
    for pos, flags in enumerate(ranked_relevance):
        hits = [i for i, f in enumerate(flags) if f]
        if len(hits) != 1:
            raise ValueError(f"query {pos} has {len(hits)} relevant candidates, expected 1")
        total += 1.0 / (hits[0] + 1)
    return total / len(ranked_relevance)


@dataclass(frozen=True)
class PRF1:
    precision: float
    recall: float
    f1: float
    accuracy: float
    degenerate: bool


def prf1(tp: int, fp: int, tn: int, fn: int) -> PRF1:
    """Precision/recall/F1/accuracy; zero denominators score 0, flagged."""
    if min(tp, fp, tn, fn) < 0:
        raise ValueError("confusion counts must be non-negative")
    degenerate = False

    def ratio(num, den):
        nonlocal degenerate
        if den == 0:
            degenerate = True
            return 0.0
        return num / den

    precision = ratio(tp, tp + fp)
    recall = ratio(tp, tp + fn)
    f1 = ratio(2 * precision * recall, precision + recall)
    accuracy = ratio(tp + tn, tp + fp + tn + fn)
    return PRF1(precision, recall, f1, accuracy, degenerate)


@dataclass(frozen=True)
class ZeroShotStudy:
    """Similarity averages and top-1 retrieval shares over triplets.

    ``top1_counts`` percentages say how often a query's nearest item in
    the full augmented pool (all clones + all deviants, own counterparts
    included) was its own clone, its own deviant, or anything else.
    """

    n_triplets: int
    avg_clone_sim: float
    avg_deviant_sim: float
    avg_random_sim: float
    top1_counts: dict


def zero_shot_study(encoder, triplets, min_triplets: int = 100) -> ZeroShotStudy:
    """Measure how an encoder separates clones, deviants, and strangers.

    ``encoder`` maps one triplet element to a vector; ``triplets`` holds
    (original, clone, deviant) elements.  Clone/deviant averages pair
    each original with its own counterparts; the random average pairs it
    with every other augmented item.  Top-1 retrieval searches the whole
    augmented pool, clones ranked before deviants on exact score ties.
    """
    triplets = list(triplets)
    if len(triplets) < min_triplets:
        raise ValueError(f"need at least {min_triplets} triplets, got {len(triplets)}")
    n = len(triplets)
    originals = _unit_matrix([encoder(x) for x, _, _ in triplets])
    clones = _unit_matrix([encoder(c) for _, c, _ in triplets])
    deviants = _unit_matrix([encoder(d) for _, _, d in triplets])

    sim_clone = (originals * clones).sum(axis=1)
    sim_deviant = (originals * deviants).sum(axis=1)

    # pool columns: clones 0..n-1, deviants n..2n-1
    pool = np.concatenate([clones, deviants], axis=0)
    grid = originals @ pool.T
    own = np.zeros_like(grid, dtype=bool)
    idx = np.arange(n)
    own[idx, idx] = True
    own[idx, n + idx] = True
    avg_random = float(grid[~own].mean())

    top1 = grid.argmax(axis=1)
    counts = {
        "clone": float((top1 == idx).mean() * 100.0),
        "deviant": float((top1 == n + idx).mean() * 100.0),
        "random": float(((top1 != idx) & (top1 != n + idx)).mean() * 100.0),
    }
    return ZeroShotStudy(
        n_triplets=n,
        avg_clone_sim=float(sim_clone.mean()),
        avg_deviant_sim=float(sim_deviant.mean()),
        avg_random_sim=avg_random,
        top1_counts=counts,
    )


def pca_project(embeddings, k: int = 2):
    """Project onto the top-k principal directions.

    Returns (coordinates (n, k), explained variance ratios (k,)).
    Components are ordered by descending variance; each direction is
    signed so its largest-magnitude entry is positive, making output
    deterministic.
    """
    m = np.asarray(embeddings, dtype=float)
    if m.ndim != 2:
        raise ValueError("embeddings must be a 2-D array")
    if len(m) < k + 1:
        raise ValueError(f"need at least {k + 1} points for {k} components")
    centered = m - m.mean(axis=0)
    cov = centered.T @ centered / (len(m) - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:k]
    directions = eigvecs[:, order]
    for col in range(directions.shape[1]):
        peak = np.abs(directions[:, col]).argmax()
        if directions[peak, col] < 0:
            directions[:, col] = -directions[:, col]
    coords = centered @ directions
    eigvals = np.clip(eigvals, 0.0, None)  # eigh noise can dip below zero
    total = float(eigvals.sum())
    ratios = eigvals[order] / total if total > 0 else np.zeros(len(order))
    return coords, ratios


def write_embeddings(path, items) -> None:
    """One JSON object {id, group, vector} per line, input order kept."""
    with open(path, "w", encoding="utf-8") as fh:
        for item_id, vec, group in items:
            fh.write(
                json.dumps(
                    {"id": item_id, "group": group, "vector": [float(x) for x in vec]},
                    sort_keys=True,
                )
                + "\n"
            )


def read_embeddings(path):
    items = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            items.append((row["id"], row["vector"], row["group"]))
    return items
