"""Kernel backends for the max-plus matrix product.

Two interchangeable implementations of the one hot kernel, the product
[A (x) B]_ij = max_p (A_ip + B_pj):

* ``cython`` — typed C loop compiled from ``_mpkernels.pyx`` at install time.
* ``numpy`` — broadcast fallback, always available.

The compiled kernel is preferred when present. ``TG_BACKEND=cython`` or
``TG_BACKEND=numpy`` forces the choice at import time.
"""

from __future__ import annotations

import os

import numpy as np

_NEG_INF = float("-inf")


def _mul_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0:
        return np.full((a.shape[0], b.shape[1]), _NEG_INF)
    return np.max(a[:, :, None] + b[None, :, :], axis=1)


class _NumpyBackend:
    name = "numpy"
    mul = staticmethod(_mul_numpy)


try:
    from tropigait import _mpkernels
except ImportError:
    _mpkernels = None


class _CythonBackend:
    name = "cython"

    @staticmethod
    def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return _mpkernels.mp_mul(a, b)


def available_backends() -> dict:
    out = {"numpy": _NumpyBackend}
    if _mpkernels is not None:
        out["cython"] = _CythonBackend
    return out


def get_backend(name: str | None = None):
    table = available_backends()
    if name is None:
        name = os.environ.get("TG_BACKEND")
    if name is None:
        return table.get("cython", _NumpyBackend)
    try:
        return table[name]
    except KeyError:
        known = ", ".join(sorted(table))
        raise ImportError(
            f"backend {name!r} is not available (have: {known})"
        ) from None


ACTIVE = get_backend()
mul = ACTIVE.mul
