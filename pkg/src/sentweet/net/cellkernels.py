"""Kernel backend selection: compiled extension if importable, numpy otherwise.

select_backend exists for the benchmark and the backend-equivalence tests;
normal code just calls cell_forward/cell_backward through this module.
"""

from sentweet.net import cell_numpy

try:
    from sentweet.net import _cellcore
except ImportError:
    _cellcore = None

_active = _cellcore if _cellcore is not None else cell_numpy


def available_backends() -> tuple[str, ...]:
    return ("python",) if _cellcore is None else ("compiled", "python")


def backend_name() -> str:
    return _active.BACKEND_NAME


def select_backend(name: str) -> None:
    """Switch the active backend ("compiled" or "python")."""
    global _active
    if name == "python":
        _active = cell_numpy
    elif name == "compiled":
        if _cellcore is None:
            raise RuntimeError("compiled kernels are not available in this install")
        _active = _cellcore
    else:
        raise ValueError(f"unknown backend {name!r}")


def cell_forward(z, c_prev, h_prev, mask, h_out, c_out, tanh_c_out):
    _active.cell_forward(z, c_prev, h_prev, mask, h_out, c_out, tanh_c_out)


def cell_backward(dh, dc, gates, tanh_c, c_prev, mask, dz_out, dc_prev_out, dh_carry_out):
    _active.cell_backward(dh, dc, gates, tanh_c, c_prev, mask, dz_out, dc_prev_out, dh_carry_out)
