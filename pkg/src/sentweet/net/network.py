"""Forward and backward passes for the LSTM and BD-LSTM classifiers.

Layout conventions: batches are time-major inside this module, x is
(T, B, dim) and mask is (T, B) with mask[t, b] = 1.0 while t is inside
sequence b's valid prefix. Padding uses carry-through masking, so the
state at row T equals each sequence's state at its own last valid step.

Bidirectional directions run on the reversed valid prefix of their
input; _reverse_prefix is its own inverse, so the same helper aligns
backward-direction outputs (and their gradients) with forward time.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from sentweet.embedding import EmbeddingTable, EncodedSequence, embed
from sentweet.errors import DimensionMismatch, EmptySequence, StaleCache
from sentweet.net import cellkernels
from sentweet.net.params import LayerParams, NetworkParameters, zero_gradients

CLAMP_EPS = 1e-7


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def bce_loss(scores, target) -> float:
    """Mean element-wise binary cross-entropy; probabilities are clamped
    to [1e-7, 1 - 1e-7] before the logs. Accepts (n,) or (batch, n)."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(target, dtype=np.float64)
    if s.shape != y.shape:
        raise DimensionMismatch(f"scores shape {s.shape} != target shape {y.shape}")
    s = np.clip(s, CLAMP_EPS, 1.0 - CLAMP_EPS)
    return float(-np.mean(y * np.log(s) + (1.0 - y) * np.log1p(-s)))


def lstm_cell(x, h_prev, c_prev, layer: LayerParams):
    """One cell step for a single vector; returns (h, c)."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    h_prev = np.ascontiguousarray(h_prev, dtype=np.float64)
    c_prev = np.ascontiguousarray(c_prev, dtype=np.float64)
    hd = layer.hidden_dim
    if x.shape != (layer.input_dim,):
        raise DimensionMismatch(f"x shape {x.shape}, expected ({layer.input_dim},)")
    if h_prev.shape != (hd,) or c_prev.shape != (hd,):
        raise DimensionMismatch(f"state shapes {h_prev.shape}/{c_prev.shape}, expected ({hd},)")
    z = (x @ layer.w + h_prev @ layer.u + layer.b).reshape(1, 4 * hd)
    h_out = np.empty((1, hd))
    c_out = np.empty((1, hd))
    tc = np.empty((1, hd))
    cellkernels.cell_forward(z, c_prev.reshape(1, hd), h_prev.reshape(1, hd),
                             np.ones(1), h_out, c_out, tc)
    return h_out[0], c_out[0]


@dataclass
class DirectionCache:
    x: np.ndarray        # (T, B, din) input as fed (reversed for backward dirs)
    h: np.ndarray        # (T+1, B, hd) row 0 is the zero initial state
    c: np.ndarray        # (T+1, B, hd)
    gates: np.ndarray    # (T, B, 4*hd) activated gates
    tanh_c: np.ndarray   # (T, B, hd)


@dataclass
class ForwardCache:
    params: NetworkParameters
    revision: int
    mask: np.ndarray
    lengths: np.ndarray
    layer1: tuple
    layer2: tuple
    out1: np.ndarray                 # (T, B, d2in) layer-1 output before dropout
    drop1: Optional[np.ndarray]      # multiplicative masks, None means identity
    drop_rep: Optional[np.ndarray]
    rep: np.ndarray                  # (B, final_hidden) before dropout
    rep_dropped: np.ndarray
    scores: np.ndarray               # (B, n_labels)


@dataclass
class Prediction:
    scores: np.ndarray          # (n_labels,) sigmoid outputs
    labels: np.ndarray          # (n_labels,) 0/1 at the threshold used
    representation: np.ndarray  # (final_hidden,) features before dropout


def _reverse_prefix(a: np.ndarray, lengths: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Reverse each column's valid prefix along time; zero the padding rows."""
    steps = a.shape[0]
    t = np.arange(steps)[:, None]
    idx = np.where(t < lengths[None, :], lengths[None, :] - 1 - t, t)
    out = a[idx, np.arange(a.shape[1])[None, :]]
    out *= mask[..., None]
    return out


def _run_direction(x: np.ndarray, mask: np.ndarray, layer: LayerParams) -> DirectionCache:
    steps, batch, _ = x.shape
    hd = layer.hidden_dim
    h = np.zeros((steps + 1, batch, hd))
    c = np.zeros((steps + 1, batch, hd))
    tanh_c = np.empty((steps, batch, hd))
    gates = np.empty((steps, batch, 4 * hd))
    zx = x.reshape(steps * batch, -1) @ layer.w
    zx += layer.b
    zx = zx.reshape(steps, batch, 4 * hd)
    for t in range(steps):
        np.matmul(h[t], layer.u, out=gates[t])
        gates[t] += zx[t]
        cellkernels.cell_forward(gates[t], c[t], h[t], mask[t], h[t + 1], c[t + 1], tanh_c[t])
    return DirectionCache(x=x, h=h, c=c, gates=gates, tanh_c=tanh_c)


def _backprop_direction(cache: DirectionCache, layer: LayerParams, mask: np.ndarray,
                        d_out: np.ndarray, compute_dx: bool):
    """BPTT through one direction. d_out holds gradients w.r.t. the masked
    per-step outputs h[1:]; returns (dx or None, dw, du, db)."""
    steps, batch, hd = cache.tanh_c.shape
    dz = np.empty((steps, batch, 4 * hd))
    dh = np.zeros((batch, hd))
    dc = np.zeros((batch, hd))
    dc_prev = np.empty((batch, hd))
    dh_carry = np.empty((batch, hd))
    ut = np.ascontiguousarray(layer.u.T)
    for t in range(steps - 1, -1, -1):
        dh += d_out[t]
        cellkernels.cell_backward(dh, dc, cache.gates[t], cache.tanh_c[t], cache.c[t],
                                  mask[t], dz[t], dc_prev, dh_carry)
        dh = dz[t] @ ut
        dh += dh_carry
        dc, dc_prev = dc_prev, dc
    dz2 = dz.reshape(steps * batch, 4 * hd)
    dw = cache.x.reshape(steps * batch, -1).T @ dz2
    du = cache.h[:steps].reshape(steps * batch, hd).T @ dz2
    db = dz2.sum(axis=0)
    dx = (dz2 @ layer.w.T).reshape(steps, batch, -1) if compute_dx else None
    return dx, dw, du, db


def _dropout_mask(rng: np.random.Generator, shape, keep: float) -> np.ndarray:
    return (rng.random(shape) < keep).astype(np.float64) / keep


def forward_batch(x, lengths, params: NetworkParameters, training: bool = False,
                  rng: Optional[np.random.Generator] = None, dropout_masks=None):
    """Batched forward pass over already-embedded inputs.

    x is (batch, T, dim); lengths gives each sequence's valid prefix.
    Returns (scores, representations, cache); cache is None unless
    training is True. During training, inverted dropout is applied to the
    layer-1 output sequence and to the final representation; pass
    dropout_masks=(drop1, drop_rep) to replay recorded masks (used by the
    gradient checks), otherwise rng supplies fresh ones.
    """
    x = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    if x.ndim != 3:
        raise DimensionMismatch(f"x must be (batch, steps, dim), got shape {x.shape}")
    batch, steps, dim = x.shape
    if dim != params.input_dim:
        raise DimensionMismatch(f"input dim {dim} != network input dim {params.input_dim}")
    lengths = np.asarray(lengths, dtype=np.int64)
    if lengths.shape != (batch,):
        raise DimensionMismatch(f"lengths shape {lengths.shape} does not match batch {batch}")
    if np.any(lengths <= 0):
        raise EmptySequence("all sequences in a batch must have at least one valid token")
    if np.any(lengths > steps):
        raise DimensionMismatch("a sequence length exceeds the padded step count")

    xt = np.ascontiguousarray(x.transpose(1, 0, 2))
    mask = (np.arange(steps)[:, None] < lengths[None, :]).astype(np.float64)
    bidir = params.arch == "bdlstm"
    h1 = params.hidden1

    dirs1 = [_run_direction(xt, mask, params.layers1[0])]
    if bidir:
        dirs1.append(_run_direction(_reverse_prefix(xt, lengths, mask), mask, params.layers1[1]))
        out1 = np.concatenate(
            [dirs1[0].h[1:], _reverse_prefix(dirs1[1].h[1:], lengths, mask)], axis=2)
    else:
        out1 = dirs1[0].h[1:]

    drop1 = drop_rep = None
    if training:
        keep = 1.0 - params.dropout_rate
        d2in = out1.shape[2]
        final_dim = params.final_hidden
        if dropout_masks is not None:
            drop1, drop_rep = dropout_masks
            if drop1.shape != (steps, batch, d2in) or drop_rep.shape != (batch, final_dim):
                raise DimensionMismatch("replayed dropout masks do not match this batch")
        elif params.dropout_rate > 0.0:
            if rng is None:
                raise ValueError("training forward needs rng when no dropout masks are given")
            drop1 = _dropout_mask(rng, (steps, batch, d2in), keep)
            drop_rep = _dropout_mask(rng, (batch, final_dim), keep)
    d1 = out1 * drop1 if drop1 is not None else np.ascontiguousarray(out1)

    dirs2 = [_run_direction(d1, mask, params.layers2[0])]
    if bidir:
        dirs2.append(_run_direction(_reverse_prefix(d1, lengths, mask), mask, params.layers2[1]))
        rep = np.concatenate([dirs2[0].h[steps], dirs2[1].h[steps]], axis=1)
    else:
        rep = dirs2[0].h[steps]

    rep_dropped = rep * drop_rep if drop_rep is not None else rep
    logits = rep_dropped @ params.w_out
    logits += params.b_out
    scores = _sigmoid(logits)

    cache = None
    if training:
        cache = ForwardCache(
            params=params, revision=params.revision, mask=mask, lengths=lengths,
            layer1=tuple(dirs1), layer2=tuple(dirs2), out1=out1,
            drop1=drop1, drop_rep=drop_rep, rep=rep, rep_dropped=rep_dropped,
            scores=scores,
        )
    return scores, rep, cache


def backward_batch(cache: ForwardCache, targets) -> NetworkParameters:
    """Gradients of the mean clamped BCE over the batch, in a structure
    mirroring the parameters. Raises StaleCache if the parameters were
    updated after the cache was built."""
    params = cache.params
    if cache.revision != params.revision:
        raise StaleCache("parameters changed since this forward pass; rerun forward")
    targets = np.asarray(targets, dtype=np.float64)
    if targets.shape != cache.scores.shape:
        raise DimensionMismatch(f"targets shape {targets.shape} != scores shape {cache.scores.shape}")

    grads = zero_gradients(params)
    s = cache.scores
    inside = (s > CLAMP_EPS) & (s < 1.0 - CLAMP_EPS)
    dlogits = np.where(inside, s - targets, 0.0) / s.size

    grads.w_out[...] = cache.rep_dropped.T @ dlogits
    grads.b_out[...] = dlogits.sum(axis=0)
    drep = dlogits @ params.w_out.T
    if cache.drop_rep is not None:
        drep *= cache.drop_rep

    steps, batch = cache.mask.shape
    bidir = params.arch == "bdlstm"
    h2 = params.hidden2

    d_out2 = np.zeros((steps, batch, h2))
    d_out2[steps - 1] = drep[:, :h2]
    dxf, dw, du, db = _backprop_direction(cache.layer2[0], params.layers2[0],
                                          cache.mask, d_out2, True)
    g = grads.layers2[0]
    g.w[...], g.u[...], g.b[...] = dw, du, db
    dd1 = dxf
    if bidir:
        d_out2[:] = 0.0
        d_out2[steps - 1] = drep[:, h2:]
        dxr, dw, du, db = _backprop_direction(cache.layer2[1], params.layers2[1],
                                              cache.mask, d_out2, True)
        g = grads.layers2[1]
        g.w[...], g.u[...], g.b[...] = dw, du, db
        dd1 += _reverse_prefix(dxr, cache.lengths, cache.mask)

    if cache.drop1 is not None:
        dd1 *= cache.drop1
    h1 = params.hidden1
    _, dw, du, db = _backprop_direction(cache.layer1[0], params.layers1[0],
                                        cache.mask, dd1[..., :h1], False)
    g = grads.layers1[0]
    g.w[...], g.u[...], g.b[...] = dw, du, db
    if bidir:
        d_back = _reverse_prefix(dd1[..., h1:], lengths=cache.lengths, mask=cache.mask)
        _, dw, du, db = _backprop_direction(cache.layer1[1], params.layers1[1],
                                            cache.mask, d_back, False)
        g = grads.layers1[1]
        g.w[...], g.u[...], g.b[...] = dw, du, db
    return grads


def forward(seq: EncodedSequence, table: EmbeddingTable, params: NetworkParameters,
            training: bool = False, rng: Optional[np.random.Generator] = None,
            dropout_masks=None):
    """Run one sequence through the network; returns (Prediction, cache).

    The cache (None unless training) feeds backward_batch with a batch
    dimension of one.
    """
    if seq.true_length == 0:
        raise EmptySequence("cannot run the network on a sequence with no valid tokens")
    if table.dimension != params.input_dim:
        raise DimensionMismatch(
            f"embedding dim {table.dimension} != network input dim {params.input_dim}")
    steps = int(seq.true_length)
    x = embed(seq, table)[:steps][None, ...]
    scores, rep, cache = forward_batch(x, [steps], params, training=training,
                                       rng=rng, dropout_masks=dropout_masks)
    pred = Prediction(scores=scores[0], labels=(scores[0] >= 0.5).astype(np.int8),
                      representation=rep[0])
    return pred, cache


def backward(cache: ForwardCache, target) -> NetworkParameters:
    """Single-sequence wrapper over backward_batch."""
    target = np.asarray(target, dtype=np.float64)
    if target.ndim == 1:
        target = target[None, :]
    return backward_batch(cache, target)


def predict(seq: EncodedSequence, table: EmbeddingTable, params: NetworkParameters,
            threshold: float = 0.5) -> Prediction:
    """Inference pass: sigmoid scores plus 0/1 labels at the threshold."""
    pred, _ = forward(seq, table, params)
    return Prediction(scores=pred.scores,
                      labels=(pred.scores >= threshold).astype(np.int8),
                      representation=pred.representation)
