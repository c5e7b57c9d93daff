"""Network parameter containers and initialization.

Gate weights are stored fused: w is (input_dim, 4*hidden), u is
(hidden, 4*hidden), b is (4*hidden,), with gate blocks ordered input,
forget, output, cell-candidate. Per-gate views are available through
LayerParams.gate for tests and hand-built fixtures.

All math runs in float64, but initial values are quantized through
float32 so that a freshly initialized network survives the float32 model
file format bit-exactly.
"""

import copy
from dataclasses import dataclass, field

import numpy as np

from sentweet.labels import N_LABELS

GATE_ORDER = ("input", "forget", "output", "candidate")


@dataclass
class LayerParams:
    w: np.ndarray  # (input_dim, 4*hidden)
    u: np.ndarray  # (hidden, 4*hidden)
    b: np.ndarray  # (4*hidden,)

    @property
    def input_dim(self) -> int:
        return self.w.shape[0]

    @property
    def hidden_dim(self) -> int:
        return self.u.shape[0]

    def gate(self, name: str):
        """(w, u, b) slices for one gate."""
        k = GATE_ORDER.index(name)
        h = self.hidden_dim
        sl = slice(k * h, (k + 1) * h)
        return self.w[:, sl], self.u[:, sl], self.b[sl]

    @classmethod
    def from_gates(cls, w_gates, u_gates, b_gates) -> "LayerParams":
        """Assemble from per-gate arrays ordered like GATE_ORDER."""
        return cls(
            w=np.concatenate([np.asarray(a, dtype=np.float64) for a in w_gates], axis=1),
            u=np.concatenate([np.asarray(a, dtype=np.float64) for a in u_gates], axis=1),
            b=np.concatenate([np.asarray(a, dtype=np.float64) for a in b_gates]),
        )

    @classmethod
    def zeros(cls, input_dim: int, hidden_dim: int) -> "LayerParams":
        return cls(
            w=np.zeros((input_dim, 4 * hidden_dim)),
            u=np.zeros((hidden_dim, 4 * hidden_dim)),
            b=np.zeros(4 * hidden_dim),
        )


@dataclass
class NetworkParameters:
    """All weights of an LSTM or BD-LSTM classifier.

    layers1/layers2 hold one LayerParams per direction: (forward,) for
    "lstm", (forward, backward) for "bdlstm" in both layers. revision is
    bumped on every optimizer step so backward() can detect stale caches;
    it is not serialized and does not participate in equality.
    """

    arch: str
    layers1: tuple[LayerParams, ...]
    layers2: tuple[LayerParams, ...]
    w_out: np.ndarray  # (final_hidden, N_LABELS)
    b_out: np.ndarray  # (N_LABELS,)
    dropout_rate: float
    rng_seed: int
    revision: int = field(default=0, compare=False)

    @property
    def input_dim(self) -> int:
        return self.layers1[0].input_dim

    @property
    def hidden1(self) -> int:
        return self.layers1[0].hidden_dim

    @property
    def hidden2(self) -> int:
        return self.layers2[0].hidden_dim

    @property
    def n_labels(self) -> int:
        return self.w_out.shape[1]

    @property
    def final_hidden(self) -> int:
        return self.w_out.shape[0]

    def flat_arrays(self) -> list[tuple[str, np.ndarray]]:
        """Deterministic (name, array) list; the single source of parameter
        ordering for the optimizer, serialization, and gradient checks."""
        out = []
        for layer_no, directions in (("1", self.layers1), ("2", self.layers2)):
            for dir_no, layer in enumerate(directions):
                tag = f"layer{layer_no}.dir{dir_no}"
                out.append((f"{tag}.w", layer.w))
                out.append((f"{tag}.u", layer.u))
                out.append((f"{tag}.b", layer.b))
        out.append(("out.w", self.w_out))
        out.append(("out.b", self.b_out))
        return out

    def copy(self) -> "NetworkParameters":
        return copy.deepcopy(self)

    def mark_updated(self) -> None:
        self.revision += 1


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int, shape) -> np.ndarray:
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=shape)


def _init_layer(rng: np.random.Generator, input_dim: int, hidden: int) -> LayerParams:
    w = np.empty((input_dim, 4 * hidden))
    u = np.empty((hidden, 4 * hidden))
    b = np.zeros(4 * hidden)
    for k in range(4):
        sl = slice(k * hidden, (k + 1) * hidden)
        w[:, sl] = _glorot(rng, input_dim, hidden, (input_dim, hidden))
        u[:, sl] = _glorot(rng, hidden, hidden, (hidden, hidden))
    b[hidden:2 * hidden] = 1.0  # forget gate open at start
    return LayerParams(w=w, u=u, b=b)


def _quantize(arr: np.ndarray) -> np.ndarray:
    return arr.astype(np.float32).astype(np.float64)


def init_network(
    arch: str,
    input_dim: int = 300,
    hidden1: int = 128,
    hidden2: int = 64,
    n_labels: int = N_LABELS,
    dropout_rate: float = 0.65,
    seed: int = 42,
) -> NetworkParameters:
    """Seeded Glorot-uniform initialization; forget-gate biases start at 1."""
    if arch not in ("lstm", "bdlstm"):
        raise ValueError(f"arch must be 'lstm' or 'bdlstm', got {arch!r}")
    if not 0.0 <= dropout_rate < 1.0:
        raise ValueError("dropout_rate must be in [0, 1)")
    rng = np.random.default_rng(seed)
    n_dirs = 2 if arch == "bdlstm" else 1
    layers1 = tuple(_init_layer(rng, input_dim, hidden1) for _ in range(n_dirs))
    layer2_input = hidden1 * n_dirs
    layers2 = tuple(_init_layer(rng, layer2_input, hidden2) for _ in range(n_dirs))
    final_hidden = hidden2 * n_dirs
    w_out = _glorot(rng, final_hidden, n_labels, (final_hidden, n_labels))
    b_out = np.zeros(n_labels)
    params = NetworkParameters(
        arch=arch,
        layers1=layers1,
        layers2=layers2,
        w_out=w_out,
        b_out=b_out,
        dropout_rate=dropout_rate,
        rng_seed=seed,
    )
    for _, arr in params.flat_arrays():
        arr[...] = _quantize(arr)
    return params


def zero_gradients(params: NetworkParameters) -> NetworkParameters:
    """A zero-filled structure mirroring params, reused as gradient storage."""
    grads = params.copy()
    for _, arr in grads.flat_arrays():
        arr[...] = 0.0
    return grads


def params_equal(a: NetworkParameters, b: NetworkParameters) -> bool:
    if a.arch != b.arch or a.dropout_rate != b.dropout_rate or a.rng_seed != b.rng_seed:
        return False
    fa, fb = a.flat_arrays(), b.flat_arrays()
    if len(fa) != len(fb):
        return False
    return all(
        na == nb and ar.shape == br.shape and np.array_equal(ar, br)
        for (na, ar), (nb, br) in zip(fa, fb)
    )
