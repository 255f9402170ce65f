"""A small trainable encoder exercising the contrastive objective.

The encoder is deliberately tiny: a learned sub-token embedding table,
mean pooling over a sequence's ids, and one linear projection to the
output dimension.  It stands in for a full transformer so the
contrastive training signal (clone pulled toward its original, deviant
pushed away, other in-batch samples as extra negatives) can be trained
and inspected in seconds on a laptop.

Training uses plain gradient descent driven by the analytic gradients
from ``clr_gradient``; no autodiff framework is involved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import Diverged
from .losses import DEFAULT_TAU, ContrastiveBatch, clr_gradient, clr_loss


@dataclass(frozen=True)
class ToyConfig:
    """Hyperparameters for ``toy_train``.

    ``vocab_size`` must cover every id that will ever be embedded
    (training and later evaluation alike).
    """

    vocab_size: int
    d: int = 64
    steps: int = 500
    lr: float = 0.05
    batch: int = 32
    seed: int = 0
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if self.vocab_size < 1:
            raise ValueError("vocab_size must be positive")
        if self.d < 1 or self.steps < 1 or self.batch < 1:
            raise ValueError("d, steps, and batch must be positive")
        if self.lr <= 0 or self.tau <= 0:
            raise ValueError("lr and tau must be positive")


class ToyEncoder:
    """Embedding table + mean pooling + linear projection."""

    def __init__(self, embeddings: np.ndarray, projection: np.ndarray, config: ToyConfig):
        self.embeddings = np.asarray(embeddings, dtype=float)
        self.projection = np.asarray(projection, dtype=float)
        self.config = config
        if self.embeddings.shape != (config.vocab_size, config.d):
            raise ValueError(
                f"embedding table {self.embeddings.shape} does not match "
                f"config ({config.vocab_size}, {config.d})"
            )
        if self.projection.shape != (config.d, config.d):
            raise ValueError(f"projection {self.projection.shape} is not square of size {config.d}")
        self.curve: list = []

    def _pooled(self, ids) -> np.ndarray:
        if len(ids) == 0:
            raise ValueError("cannot embed an empty id sequence")
        return self.embeddings[np.asarray(ids, dtype=int)].mean(axis=0)

    def embed(self, ids) -> np.ndarray:
        """Map one id sequence to its d-dimensional representation."""
        return self.projection @ self._pooled(ids)

    def embed_many(self, sequences) -> np.ndarray:
        return np.stack([self.embed(ids) for ids in sequences])

    def save(self, path) -> None:
        """Persist table, projection, and config as a single .npz archive."""
        np.savez(
            path,
            embeddings=self.embeddings,
            projection=self.projection,
            config=np.frombuffer(
                json.dumps(self.config.__dict__).encode("utf-8"), dtype=np.uint8
            ),
            curve=np.asarray(self.curve, dtype=float).reshape(-1, 2),
        )

    @classmethod
    def load(cls, path) -> "ToyEncoder":
        with np.load(path) as data:
            config = ToyConfig(**json.loads(bytes(data["config"]).decode("utf-8")))
            enc = cls(data["embeddings"], data["projection"], config)
            enc.curve = [(int(s), float(v)) for s, v in data["curve"]]
        return enc

    def save_curve(self, path) -> None:
        """Write the per-step training losses as CSV."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("step,clr_loss\n")
            for step, value in self.curve:
                fh.write(f"{step},{value!r}\n")


def _as_id_triples(triplets):
    """Accept (anchor, positive, negative) id-sequence triples."""
    out = []
    for t in triplets:
        a, p, n = t
        if not (len(a) and len(p) and len(n)):
            raise ValueError("triplet contains an empty id sequence")
        out.append((list(a), list(p), list(n)))
    return out


def toy_train(triplets, config: ToyConfig) -> ToyEncoder:
    """Fit a ToyEncoder by gradient descent on the contrastive loss.

    ``triplets`` is a sequence of (anchor_ids, positive_ids,
    negative_ids) sub-token id triples.  Each step draws the next
    seeded-shuffled batch of ``config.batch`` triplets (reshuffling each
    epoch, short final batches dropped), embeds all three roles, and
    applies one update from the exact contrastive gradient.  The
    per-step mean loss lands in ``encoder.curve``.

    Raises Diverged as soon as the loss or any parameter goes
    non-finite, and ValueError when fewer triplets than one batch exist.
    """
    data = _as_id_triples(triplets)
    if len(data) < config.batch:
        raise ValueError(f"need at least {config.batch} triplets, got {len(data)}")
    rng = np.random.default_rng(config.seed)

    embeddings = rng.normal(0.0, 0.1, size=(config.vocab_size, config.d))
    projection = rng.normal(0.0, 1.0 / np.sqrt(config.d), size=(config.d, config.d))
    encoder = ToyEncoder(embeddings, projection, config)

    order: list = []
    for step in range(1, config.steps + 1):
        if len(order) < config.batch:
            order = list(rng.permutation(len(data)))
        batch = [data[order.pop()] for _ in range(config.batch)]

        # forward: pooled means per role, then the shared projection
        pooled = [[encoder._pooled(ids) for ids, _, _ in batch],
                  [encoder._pooled(ids) for _, ids, _ in batch],
                  [encoder._pooled(ids) for _, _, ids in batch]]
        means = [np.stack(rows) for rows in pooled]
        with np.errstate(over="ignore", invalid="ignore"):
            z = [m @ encoder.projection.T for m in means]
        if not all(np.isfinite(m).all() for m in z):
            raise Diverged(f"embeddings became non-finite at step {step}")
        contrast = ContrastiveBatch(z[0], z[1], z[2], tau=config.tau)
        _, loss = clr_loss(contrast)
        if not np.isfinite(loss):
            raise Diverged(f"loss became non-finite at step {step}")
        encoder.curve.append((step, float(loss)))

        grads = clr_gradient(contrast)
        d_proj = np.zeros_like(encoder.projection)
        d_table = np.zeros_like(encoder.embeddings)
        for role, g_z in enumerate((grads.anchors, grads.positives, grads.negatives)):
            d_proj += g_z.T @ means[role]
            d_mean = g_z @ encoder.projection
            for ids_triple, g_m in zip(batch, d_mean):
                ids = np.asarray(ids_triple[role], dtype=int)
                np.add.at(d_table, ids, g_m / len(ids))

        encoder.projection -= config.lr * d_proj
        encoder.embeddings -= config.lr * d_table
        if not (np.isfinite(encoder.projection).all() and np.isfinite(encoder.embeddings).all()):
            raise Diverged(f"parameters became non-finite at step {step}")

    return encoder
