"""Compare the compiled and pure-numpy cell kernels.

Times the fused pointwise cell math on its own (the part the backends
actually swap) and a full forward+backward pass where the surrounding
matrix products are shared BLAS work, so the end-to-end speedup is
smaller than the kernel-level one.

Usage:
    python3 benchmarks/bench_kernels.py --batch 64 --hidden 128 --steps 40
"""

import argparse
import time

import numpy as np

from sentweet.net import backward_batch, forward_batch, init_network
from sentweet.net import cellkernels


def time_kernel(backend: str, batch: int, hidden: int, steps: int,
                repeats: int, seed: int) -> tuple:
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(batch, 4 * hidden))
    c = rng.normal(size=(batch, hidden))
    h = rng.normal(size=(batch, hidden))
    mask = (rng.random(batch) < 0.9).astype(np.float64)
    h_out = np.empty_like(c)
    c_out = np.empty_like(c)
    tanh_c = np.empty_like(c)
    dh = rng.normal(size=(batch, hidden))
    dc = rng.normal(size=(batch, hidden))
    gates = rng.random(size=(batch, 4 * hidden))
    dz = np.empty((batch, 4 * hidden))
    dc_prev = np.empty_like(c)
    dh_carry = np.empty_like(c)

    cellkernels.select_backend(backend)
    fwd_best = bwd_best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for _ in range(steps):
            cellkernels.cell_forward(z, c, h, mask, h_out, c_out, tanh_c)
        fwd_best = min(fwd_best, time.perf_counter() - start)
        start = time.perf_counter()
        for _ in range(steps):
            cellkernels.cell_backward(dh, dc, gates, tanh_c, c, mask,
                                      dz, dc_prev, dh_carry)
        bwd_best = min(bwd_best, time.perf_counter() - start)
    return fwd_best, bwd_best


def time_full_pass(backend: str, batch: int, hidden: int, steps: int,
                   repeats: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    params = init_network("bdlstm", input_dim=64, hidden1=hidden,
                          hidden2=hidden // 2, dropout_rate=0.0, seed=seed)
    x = rng.normal(size=(batch, steps, 64))
    lengths = rng.integers(1, steps + 1, size=batch)
    y = rng.integers(0, 2, size=(batch, 11)).astype(np.float64)
    cellkernels.select_backend(backend)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        _, _, cache = forward_batch(x, lengths, params, training=True)
        backward_batch(cache, y)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--batch", type=int, default=64)
    parser.add_argument("--hidden", type=int, default=128)
    parser.add_argument("--steps", type=int, default=40)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = cellkernels.available_backends()
    if "compiled" not in backends:
        print("note: compiled kernels are not built; timing the python "
              "backend only")

    original = cellkernels.backend_name()
    rows = {}
    try:
        for backend in backends:
            fwd, bwd = time_kernel(backend, args.batch, args.hidden,
                                   args.steps, args.repeats, args.seed)
            full = time_full_pass(backend, args.batch, args.hidden,
                                  args.steps, args.repeats, args.seed)
            rows[backend] = (fwd, bwd, full)
    finally:
        cellkernels.select_backend(original)

    header = (f"batch={args.batch} hidden={args.hidden} steps={args.steps} "
              f"best of {args.repeats}")
    print(header)
    print("-" * len(header))
    print(f"{'backend':<10} {'cell fwd':>12} {'cell bwd':>12} {'fwd+bwd pass':>14}")
    for backend, (fwd, bwd, full) in rows.items():
        print(f"{backend:<10} {fwd * 1e3:>10.2f}ms {bwd * 1e3:>10.2f}ms "
              f"{full * 1e3:>12.2f}ms")
    if "compiled" in rows and "python" in rows:
        speed = tuple(p / c for c, p in zip(rows["compiled"], rows["python"]))
        print(f"{'speedup':<10} {speed[0]:>11.2f}x {speed[1]:>11.2f}x "
              f"{speed[2]:>13.2f}x")


if __name__ == "__main__":
    main()
