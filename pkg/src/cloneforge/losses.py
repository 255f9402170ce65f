"""Training objectives: masked-token, tree-label, and contrastive losses.

Three losses share one recipe, negative log likelihood, but differ in
what they score:

* ``mlm_loss`` scores predictions at masked token positions only.
* ``ltsp_loss`` scores tree-label predictions at every code token,
  skipping frame positions ([CLS]/[SEP]) and padding.
* ``clr_loss`` scores whole-function embeddings: each anchor must rank
  its own clone above every other clone and every deviant in the batch,
  via temperature-scaled cosine similarity.

``combined_loss`` mixes the three with per-objective weights, default
(1.0, 0.1, 1.0) with temperature 0.05.  ``clr_gradient`` provides the
exact analytic gradient of the mean contrastive loss so a trainer does
not need autodiff.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDistribution, ZeroNormEmbedding

DEFAULT_TAU = 0.05
DEFAULT_LAMBDAS = (1.0, 0.1, 1.0)

# LabelVocab pins [PAD]=0, [CLS]=2, [SEP]=3; [UNK]=1 labels a real token
# and therefore still counts toward the loss.
FRAME_LABEL_IDS = (0, 2, 3)

_DIST_TOL = 1e-6


def _nll(dists, true_ids, what: str) -> float:
    """Shared negative-log-likelihood accumulator over (row, id) pairs."""
    total = 0.0
    for pos, (row, true_id) in enumerate(zip(dists, true_ids)):
        row = np.asarray(row, dtype=float)
        if row.ndim != 1:
            raise ValueError(f"{what} at position {pos} is not a vector")
        if row.min() < 0 or abs(float(row.sum()) - 1.0) > _DIST_TOL:
            raise ValueError(f"{what} at position {pos} is not a probability distribution")
        if not 0 <= true_id < len(row):
            raise ValueError(f"true id {true_id} out of range at position {pos}")
        p = float(row[true_id])
        if p == 0.0:
            warnings.warn(
                f"{what} assigns zero probability to the true class at position {pos}",
                DegenerateDistribution,
                stacklevel=3,
            )
            return math.inf
        total += -math.log(p)
    return total


def mlm_loss(predicted_dists, true_ids) -> float:
    """Sum of -log P(true token) over the masked positions.

    ``predicted_dists`` holds one probability vector per masked position
    (each summing to 1 within 1e-6) and ``true_ids`` the token ids that
    were masked away.  Empty inputs cost 0.  A zero probability on a
    true token returns +inf and emits a DegenerateDistribution warning.
    """
    if len(predicted_dists) != len(true_ids):
        raise ValueError(
            f"{len(predicted_dists)} distributions for {len(true_ids)} true ids"
        )
    return _nll(predicted_dists, true_ids, "masked-position distribution")


def ltsp_loss(predicted_label_dists, true_label_ids, frame_ids=FRAME_LABEL_IDS) -> float:
    """Sum of -log P(true label) over every code-token position.

    Positions whose true label is in ``frame_ids`` ([CLS]/[SEP] frame and
    padding by default) are excluded entirely: their rows are never read,
    so callers may pass placeholder rows there.
    """
    if len(predicted_label_dists) != len(true_label_ids):
        raise ValueError(
            f"{len(predicted_label_dists)} distributions for {len(true_label_ids)} label ids"
        )
    skip = frozenset(frame_ids)
    kept = [
        (row, t)
        for row, t in zip(predicted_label_dists, true_label_ids)
        if t not in skip
    ]
    return _nll([r for r, _ in kept], [t for _, t in kept], "label distribution")


@dataclass(frozen=True)
class ContrastiveBatch:
    """N aligned (anchor, positive, negative) embedding triplets.

    Rows of the three (N, d) matrices correspond: ``positives[i]`` is the
    clone of ``anchors[i]``, ``negatives[i]`` its deviant.  All rows must
    be finite with nonzero norm; ``tau`` scales similarities before the
    softmax and must be positive.
    """

    anchors: np.ndarray
    positives: np.ndarray
    negatives: np.ndarray
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        for name in ("anchors", "positives", "negatives"):
            m = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, m)
            if m.ndim != 2:
                raise ValueError(f"{name} must be a 2-D array, got shape {m.shape}")
            if not np.isfinite(m).all():
                raise ValueError(f"{name} contains non-finite entries")
            if (np.linalg.norm(m, axis=1) == 0).any():
                raise ZeroNormEmbedding(f"{name} contains a zero vector")
        if not (self.anchors.shape == self.positives.shape == self.negatives.shape):
            raise ValueError(
                f"shape mismatch: anchors {self.anchors.shape}, "
                f"positives {self.positives.shape}, negatives {self.negatives.shape}"
            )
        if self.anchors.shape[0] < 1:
            raise ValueError("batch is empty")
        if not (isinstance(self.tau, (int, float)) and self.tau > 0):
            raise ValueError(f"tau must be positive, got {self.tau!r}")

    @property
    def size(self) -> int:
        return self.anchors.shape[0]


def _unit_rows(m: np.ndarray):
    norms = np.linalg.norm(m, axis=1)
    return m / norms[:, None], norms


def _similarity_grid(batch: ContrastiveBatch):
    """Unit rows with their norms, plus the two (N, N) cosine grids."""
    ah, an = _unit_rows(batch.anchors)
    ph, pn = _unit_rows(batch.positives)
    qh, qn = _unit_rows(batch.negatives)
    return ah, an, ph, pn, qh, qn, ah @ ph.T, ah @ qh.T


def _row_logsumexp(z: np.ndarray) -> np.ndarray:
    m = z.max(axis=1)
    return m + np.log(np.exp(z - m[:, None]).sum(axis=1))


def clr_loss(batch: ContrastiveBatch):
    """Per-anchor contrastive losses and their mean.

    Anchor i pays -log of the softmax weight its own positive receives
    against all 2N candidates (every positive and every negative in the
    batch, the own positive included in the denominator).  Computed via
    max-subtracted logsumexp so extreme similarity/tau ratios cannot
    overflow.
    """
    *_, sim_pos, sim_neg = _similarity_grid(batch)
    z = np.concatenate([sim_pos, sim_neg], axis=1) / batch.tau
    per_anchor = _row_logsumexp(z) - np.diagonal(sim_pos) / batch.tau
    return per_anchor, float(per_anchor.mean())


@dataclass(frozen=True)
class ClrGradients:
    """Gradients of the mean contrastive loss, aligned with the batch."""

    anchors: np.ndarray
    positives: np.ndarray
    negatives: np.ndarray


def clr_gradient(batch: ContrastiveBatch) -> ClrGradients:
    """Exact gradient of the mean of ``clr_loss`` for every embedding.

    Chains the softmax derivative through the cosine: with
    w = softmax(sim/tau) per anchor row, the loss depends on anchor i
    through row i of both similarity grids, on positive n through column
    n of the positive grid (numerator term subtracting 1 at n == i), and
    on negative n through column n of the negative grid.
    """
    ah, an, ph, pn, qh, qn, sim_pos, sim_neg = _similarity_grid(batch)
    n = batch.size
    z = np.concatenate([sim_pos, sim_neg], axis=1) / batch.tau
    w = np.exp(z - _row_logsumexp(z)[:, None])

    # d(mean loss)/d sim: softmax weight, minus 1 on each diagonal positive
    coef_pos = (w[:, :n] - np.eye(n)) / (batch.tau * n)
    coef_neg = w[:, n:] / (batch.tau * n)

    # cosine derivative: d cos(a,b)/da = (b_hat - cos * a_hat) / |a|
    row_dot = (coef_pos * sim_pos).sum(axis=1) + (coef_neg * sim_neg).sum(axis=1)
    g_anchors = (coef_pos @ ph + coef_neg @ qh - row_dot[:, None] * ah) / an[:, None]

    col_dot_pos = (coef_pos * sim_pos).sum(axis=0)
    g_positives = (coef_pos.T @ ah - col_dot_pos[:, None] * ph) / pn[:, None]

    col_dot_neg = (coef_neg * sim_neg).sum(axis=0)
    g_negatives = (coef_neg.T @ ah - col_dot_neg[:, None] * qh) / qn[:, None]

    return ClrGradients(g_anchors, g_positives, g_negatives)


def combined_loss(mlm: float, ltsp: float, clr: float, lambdas=DEFAULT_LAMBDAS) -> float:
    """Weighted sum lambda1*mlm + lambda2*ltsp + lambda3*clr."""
    l1, l2, l3 = lambdas
    for name, v in (("mlm", mlm), ("ltsp", ltsp), ("clr", clr)):
        if not math.isfinite(v):
            raise ValueError(f"{name} component is not finite: {v!r}")
    return l1 * mlm + l2 * ltsp + l3 * clr


@dataclass(frozen=True)
class LossBreakdown:
    """Per-objective loss values with their mixing weights."""

    mlm: float
    ltsp: float
    clr: float
    lambdas: tuple = DEFAULT_LAMBDAS

    @property
    def combined(self) -> float:
        return combined_loss(self.mlm, self.ltsp, self.clr, self.lambdas)
