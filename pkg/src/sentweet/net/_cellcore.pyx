# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled LSTM cell kernels: fused pointwise gate math.

Semantics identical to cell_numpy; see that module for the contract.
The win is removing the ~10 numpy temporaries per timestep once the
matmuls are delegated to BLAS. Transcendentals stay on numpy's vector
math (the same routines the fallback uses, so the backends agree
bit-for-bit); scalar libm calls here would cost more than the fusion
saves.
"""

import numpy as np

BACKEND_NAME = "compiled"


cdef void _forward_cell_state(double[:, ::1] gates, double[:, ::1] c_prev,
                              double[:, ::1] c_new) noexcept nogil:
    cdef Py_ssize_t b, j
    cdef Py_ssize_t batch = c_prev.shape[0]
    cdef Py_ssize_t hidden = c_prev.shape[1]
    for b in range(batch):
        for j in range(hidden):
            c_new[b, j] = (gates[b, hidden + j] * c_prev[b, j]
                           + gates[b, j] * gates[b, 3 * hidden + j])


cdef void _forward_outputs(double[:, ::1] gates, double[:, ::1] c_prev,
                           double[:, ::1] h_prev, double[::1] mask,
                           double[:, ::1] tanh_c, double[:, ::1] h_out,
                           double[:, ::1] c_out) noexcept nogil:
    cdef Py_ssize_t b, j
    cdef Py_ssize_t batch = c_prev.shape[0]
    cdef Py_ssize_t hidden = c_prev.shape[1]
    cdef double m
    for b in range(batch):
        m = mask[b]
        for j in range(hidden):
            c_out[b, j] = m * c_out[b, j] + (1.0 - m) * c_prev[b, j]
            h_out[b, j] = (m * gates[b, 2 * hidden + j] * tanh_c[b, j]
                           + (1.0 - m) * h_prev[b, j])


def cell_forward(double[:, ::1] z, double[:, ::1] c_prev, double[:, ::1] h_prev,
                 double[::1] mask, double[:, ::1] h_out, double[:, ::1] c_out,
                 double[:, ::1] tanh_c_out):
    cdef Py_ssize_t hidden = c_prev.shape[1]
    znp = np.asarray(z)
    sig = znp[:, :3 * hidden]  # sigmoid blocks activated in place
    np.negative(sig, out=sig)
    with np.errstate(over="ignore"):  # exp overflow saturates cleanly to 0
        np.exp(sig, out=sig)
    sig += 1.0
    np.reciprocal(sig, out=sig)
    cand = znp[:, 3 * hidden:]
    np.tanh(cand, out=cand)
    _forward_cell_state(z, c_prev, c_out)  # unmasked c_new, staged in c_out
    np.tanh(np.asarray(c_out), out=np.asarray(tanh_c_out))
    _forward_outputs(z, c_prev, h_prev, mask, tanh_c_out, h_out, c_out)


def cell_backward(double[:, ::1] dh, double[:, ::1] dc, double[:, ::1] gates,
                  double[:, ::1] tanh_c, double[:, ::1] c_prev, double[::1] mask,
                  double[:, ::1] dz_out, double[:, ::1] dc_prev_out,
                  double[:, ::1] dh_carry_out):
    cdef Py_ssize_t b, j
    cdef Py_ssize_t batch = c_prev.shape[0]
    cdef Py_ssize_t hidden = c_prev.shape[1]
    cdef double ig, fg, og, gg, tc, m, dh_new, dc_new, di, df, dg, do
    with nogil:
        for b in range(batch):
            m = mask[b]
            for j in range(hidden):
                ig = gates[b, j]
                fg = gates[b, hidden + j]
                og = gates[b, 2 * hidden + j]
                gg = gates[b, 3 * hidden + j]
                tc = tanh_c[b, j]
                dh_new = m * dh[b, j]
                dc_new = m * dc[b, j] + dh_new * og * (1.0 - tc * tc)
                do = dh_new * tc
                di = dc_new * gg
                df = dc_new * c_prev[b, j]
                dg = dc_new * ig
                dz_out[b, j] = di * ig * (1.0 - ig)
                dz_out[b, hidden + j] = df * fg * (1.0 - fg)
                dz_out[b, 2 * hidden + j] = do * og * (1.0 - og)
                dz_out[b, 3 * hidden + j] = dg * (1.0 - gg * gg)
                dc_prev_out[b, j] = dc_new * fg + (1.0 - m) * dc[b, j]
                dh_carry_out[b, j] = (1.0 - m) * dh[b, j]
