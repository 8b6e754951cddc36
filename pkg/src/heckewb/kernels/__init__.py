"""Exact rational matrix kernels with a compiled fast path.

The Cython extension ``_ckernels`` is used when built; setting the
environment variable ``HECKEWB_PURE=1`` forces the pure-Python twin.
Both expose the same functions on list-of-list-of-Fraction matrices.
"""

import os

from heckewb.kernels import pykernels as _pure

if os.environ.get("HECKEWB_PURE") == "1":
    _impl = _pure
else:
    try:
        from heckewb.kernels import _ckernels as _impl  # type: ignore
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
mat_mul = _impl.mat_mul
mat_vec = _impl.mat_vec
trace_mul = _impl.trace_mul
rref = _impl.rref
reduce_vector = _impl.reduce_vector
nullspace = _impl.nullspace
mat_inv = _impl.mat_inv
Span = _impl.Span
int_mat_mul = _impl.int_mat_mul
int_gram = _impl.int_gram

__all__ = [
    "BACKEND",
    "mat_mul",
    "mat_vec",
    "trace_mul",
    "rref",
    "reduce_vector",
    "nullspace",
    "mat_inv",
    "Span",
    "int_mat_mul",
    "int_gram",
]
