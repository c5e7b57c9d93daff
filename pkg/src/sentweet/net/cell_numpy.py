"""Pure-numpy LSTM cell kernels, the fallback for the compiled core.

Both backends implement the same two pointwise operations; the compiled
version in _cellcore.pyx fuses them into single C passes. Gate layout in
the preactivation/gate buffers is four contiguous blocks of width H in
the order input, forget, output, cell-candidate.

Masking uses the carry-through rule: where mask is 0 (padding timestep),
state passes through unchanged, so the state at the final timestep equals
the state at each sequence's last valid timestep.
"""

import numpy as np

BACKEND_NAME = "python"


def _sigmoid(x):
    with np.errstate(over="ignore"):  # exp overflow saturates cleanly to 0
        return 1.0 / (1.0 + np.exp(-x))


def cell_forward(z, c_prev, h_prev, mask, h_out, c_out, tanh_c_out):
    """One LSTM cell step for a batch.

    z        (B, 4H) gate preactivations; overwritten with activated gates.
    c_prev   (B, H)  cell state entering the step.
    h_prev   (B, H)  hidden state entering the step.
    mask     (B,)    1.0 for valid timesteps, 0.0 for padding.
    h_out    (B, H)  written: mask*h_new + (1-mask)*h_prev.
    c_out    (B, H)  written: mask*c_new + (1-mask)*c_prev.
    tanh_c_out (B, H) written: tanh of the unmasked new cell state.
    """
    hidden = c_prev.shape[1]
    i = _sigmoid(z[:, :hidden])
    f = _sigmoid(z[:, hidden:2 * hidden])
    o = _sigmoid(z[:, 2 * hidden:3 * hidden])
    g = np.tanh(z[:, 3 * hidden:])
    c_new = f * c_prev + i * g
    tc = np.tanh(c_new)
    h_new = o * tc
    m = mask[:, None]
    z[:, :hidden] = i
    z[:, hidden:2 * hidden] = f
    z[:, 2 * hidden:3 * hidden] = o
    z[:, 3 * hidden:] = g
    tanh_c_out[:] = tc
    c_out[:] = m * c_new + (1.0 - m) * c_prev
    h_out[:] = m * h_new + (1.0 - m) * h_prev


def cell_backward(dh, dc, gates, tanh_c, c_prev, mask, dz_out, dc_prev_out, dh_carry_out):
    """Reverse of cell_forward for one timestep.

    dh, dc   (B, H)  incoming gradients w.r.t. the step's (masked) outputs.
    gates    (B, 4H) activated gates cached by cell_forward.
    tanh_c   (B, H)  cached tanh of the unmasked new cell state.
    c_prev   (B, H)  cell state that entered the step.
    mask     (B,)    as in forward.
    dz_out   (B, 4H) written: gradient w.r.t. the preactivations.
    dc_prev_out  (B, H) written: gradient w.r.t. c_prev (carry included).
    dh_carry_out (B, H) written: (1-mask)*dh; the recurrent matmul part of
                 dh_prev is the caller's job (dz @ U.T + dh_carry).
    """
    hidden = c_prev.shape[1]
    i = gates[:, :hidden]
    f = gates[:, hidden:2 * hidden]
    o = gates[:, 2 * hidden:3 * hidden]
    g = gates[:, 3 * hidden:]
    m = mask[:, None]
    dh_new = m * dh
    dc_new = m * dc + dh_new * o * (1.0 - tanh_c * tanh_c)
    do = dh_new * tanh_c
    di = dc_new * g
    df = dc_new * c_prev
    dg = dc_new * i
    dz_out[:, :hidden] = di * i * (1.0 - i)
    dz_out[:, hidden:2 * hidden] = df * f * (1.0 - f)
    dz_out[:, 2 * hidden:3 * hidden] = do * o * (1.0 - o)
    dz_out[:, 3 * hidden:] = dg * (1.0 - g * g)
    dc_prev_out[:] = dc_new * f + (1.0 - m) * dc
    dh_carry_out[:] = (1.0 - m) * dh
