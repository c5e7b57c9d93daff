"""Mini-batch Adam training loop.

Deterministic by construction: one Generator seeded from config.seed
drives both the epoch shuffles and the dropout masks, so identical
(dataset, params, config) always produce identical final weights.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from sentweet.embedding import EmbeddingTable
from sentweet.errors import DimensionMismatch, EmptyDataset, NonFiniteLoss
from sentweet.net.network import backward_batch, bce_loss, forward_batch
from sentweet.net.params import NetworkParameters


@dataclass
class TrainConfig:
    epochs: int = 30
    batch_size: int = 32
    learning_rate: float = 1e-3
    seed: int = 0
    clip_norm: Optional[float] = None  # max global gradient norm, None disables


class _Adam:
    """Adam with bias correction (beta1 0.9, beta2 0.999, eps 1e-8)."""

    def __init__(self, params: NetworkParameters, learning_rate: float):
        self.lr = learning_rate
        self.beta1 = 0.9
        self.beta2 = 0.999
        self.eps = 1e-8
        self.t = 0
        self.state = [(np.zeros_like(arr), np.zeros_like(arr))
                      for _, arr in params.flat_arrays()]

    def step(self, params: NetworkParameters, grads: NetworkParameters) -> None:
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for (m, v), (_, p), (_, g) in zip(self.state, params.flat_arrays(),
                                          grads.flat_arrays()):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
        params.mark_updated()


def _clip_gradients(grads: NetworkParameters, max_norm: float) -> None:
    total = 0.0
    for _, g in grads.flat_arrays():
        total += float(np.sum(g * g))
    norm = np.sqrt(total)
    if norm > max_norm:
        scale = max_norm / norm
        for _, g in grads.flat_arrays():
            g *= scale


def train(dataset, table: EmbeddingTable, params: NetworkParameters,
          config: TrainConfig):
    """Train on (EncodedSequence, label vector) pairs.

    Returns (trained copy of params, per-epoch mean training loss). The
    input params are never mutated; epochs=0 returns an untouched copy.
    """
    if len(dataset) == 0:
        raise EmptyDataset("training requires at least one example")
    if table.dimension != params.input_dim:
        raise DimensionMismatch(
            f"embedding dim {table.dimension} != network input dim {params.input_dim}")
    work = params.copy()
    if config.epochs == 0:
        return work, []

    n = len(dataset)
    indices = np.stack([seq.indices for seq, _ in dataset])
    lengths = np.array([seq.true_length for seq, _ in dataset], dtype=np.int64)
    targets = np.stack([np.asarray(y, dtype=np.float64) for _, y in dataset])
    if targets.shape != (n, work.n_labels):
        raise DimensionMismatch(
            f"label matrix shape {targets.shape}, expected ({n}, {work.n_labels})")

    rng = np.random.default_rng(config.seed)
    adam = _Adam(work, config.learning_rate)
    trace = []
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            sel = order[start:start + config.batch_size]
            lens = lengths[sel]
            width = int(lens.max())
            x = table.vectors[indices[sel, :width]]
            y = targets[sel]
            scores, _, cache = forward_batch(x, lens, work, training=True, rng=rng)
            loss = bce_loss(scores, y)
            if not np.isfinite(loss):
                raise NonFiniteLoss(
                    f"loss became non-finite at epoch {epoch}, batch starting {start} "
                    f"(learning rate {config.learning_rate})")
            epoch_loss += loss * len(sel)
            grads = backward_batch(cache, y)
            if config.clip_norm is not None:
                _clip_gradients(grads, config.clip_norm)
            adam.step(work, grads)
        trace.append(epoch_loss / n)
    return work, trace
