"""Backend selection for the O(M) summation kernel.

The compiled extension ``xlirs._kernels`` is used when it imports; otherwise
(or with ``XLIRS_PURE_PYTHON=1``) a numpy implementation with the same row
structure is used.  Both return per-row sums which are combined with
``math.fsum`` in ascending i_z order.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from . import _kernels as _ext
except ImportError:  # pragma: no cover - depends on the build
    _ext = None

__all__ = ["BACKEND", "available_backends", "kernel_sum", "row_sums", "worker_count"]

_BLOCK = 1 << 20


def _pure_requested():
    return os.environ.get("XLIRS_PURE_PYTHON", "").strip() not in ("", "0")


BACKEND = "compiled" if (_ext is not None and not _pure_requested()) else "python"


def available_backends():
    return ("compiled", "python") if _ext is not None else ("python",)


def worker_count() -> int:
    """Worker cap from ``XLIRS_THREADS``; defaults to the CPU count."""
    raw = os.environ.get("XLIRS_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"XLIRS_THREADS must be an integer, got {raw!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def _row_sums_numpy(eps_q, phi_q, theta_q, eps_p, phi_p, theta_p, half_y, half_z, expo):
    iy = np.arange(-half_y, half_y + 1, dtype=np.int64)
    iyf = iy.astype(float)
    iy2 = (iy * iy).astype(float)
    bq, bp = 2.0 * eps_q * phi_q, 2.0 * eps_p * phi_p
    cq, cp = eps_q * eps_q, eps_p * eps_p
    m_z = 2 * half_z + 1
    out = np.empty(m_z)
    rows = max(1, _BLOCK // iy.size)
    for start in range(0, m_z, rows):
        iz = np.arange(start, min(start + rows, m_z), dtype=np.int64) - half_z
        izf = iz.astype(float)[:, None]
        iz2 = (iz * iz).astype(float)[:, None]
        xq = (1.0 - 2.0 * izf * eps_q * theta_q + iz2 * cq) - iyf * bq + iy2 * cq
        xp = (1.0 - 2.0 * izf * eps_p * theta_p + iz2 * cp) - iyf * bp + iy2 * cp
        out[start:start + iz.size] = np.power(xq * xp, -expo).sum(axis=1)
    return out


def row_sums(eps_q, phi_q, theta_q, eps_p, phi_p, theta_p, half_y, half_z, expo,
             backend=None, threads=None):
    """Per-row sums of ``[x_q x_p]**(-expo)`` over the symmetric index grid."""
    backend = backend or BACKEND
    args = (float(eps_q), float(phi_q), float(theta_q), float(eps_p), float(phi_p),
            float(theta_p), int(half_y), int(half_z), float(expo))
    if backend == "compiled":
        if _ext is None:
            raise RuntimeError("compiled kernel is not available")
        return _ext.row_sums(*args, threads or worker_count())
    if backend == "python":
        return _row_sums_numpy(*args)
    raise ValueError(f"unknown backend {backend!r}")


def kernel_sum(*args, backend=None, threads=None) -> float:
    return math.fsum(row_sums(*args, backend=backend, threads=threads))
