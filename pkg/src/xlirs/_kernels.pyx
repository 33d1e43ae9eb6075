# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row sums of the two-hop amplitude kernel.

Each row (fixed i_z) is summed serially in ascending i_y with Neumaier
compensation; rows are independent, so the result does not depend on the
number of OpenMP threads.  Do not build with -ffast-math: it would remove
the compensation term.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport sqrt, pow, fabs

cnp.import_array()


cdef inline double _term(double t, double expo, int mode) noexcept nogil:
    cdef double s
    if mode == 1:
        return 1.0 / sqrt(t)
    elif mode == 2:
        s = sqrt(t)
        return 1.0 / (s * sqrt(s))
    elif mode == 3:
        return 1.0 / t
    return pow(t, -expo)


def row_sums(double eps_q, double phi_q, double theta_q,
             double eps_p, double phi_p, double theta_p,
             long half_y, long half_z, double expo, int threads=1):
    """Row sums over i_y of [x_q x_p]**(-expo), one entry per i_z ascending."""
    cdef long m_z = 2 * half_z + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m_z, dtype=np.float64)
    cdef double[::1] res = out
    cdef long r, iy, iz
    cdef double aq, ap, bq, bp, cq, cp, xq, xp, term, acc, comp, tmp
    cdef int mode = 0
    if expo == 0.5:
        mode = 1
    elif expo == 0.75:
        mode = 2
    elif expo == 1.0:
        mode = 3
    if threads < 1:
        threads = 1
    bq = 2.0 * eps_q * phi_q
    bp = 2.0 * eps_p * phi_p
    cq = eps_q * eps_q
    cp = eps_p * eps_p
    for r in prange(m_z, nogil=True, schedule="static", num_threads=threads):
        iz = r - half_z
        aq = 1.0 - 2.0 * iz * eps_q * theta_q + (iz * iz) * cq
        ap = 1.0 - 2.0 * iz * eps_p * theta_p + (iz * iz) * cp
        acc = 0.0
        comp = 0.0
        for iy in range(-half_y, half_y + 1):
            xq = aq - iy * bq + (iy * iy) * cq
            xp = ap - iy * bp + (iy * iy) * cp
            term = _term(xq * xp, expo, mode)
            tmp = acc + term
            if fabs(acc) >= fabs(term):
                comp = comp + ((acc - tmp) + term)
            else:
                comp = comp + ((term - tmp) + acc)
            acc = tmp
        res[r] = acc + comp
    return out
