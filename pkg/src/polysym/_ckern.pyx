# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: dense Gauss-Jordan elimination and tagged
nearest-neighbor point matching.

Both kernels mirror the numpy fallbacks in kernels.py operation for
operation so results are bit-identical across backends.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def rref_inplace(double[:, ::1] m, double thresh):
    """Reduce m to RREF in place. Returns the pivot column list.

    Partial pivoting by largest absolute value, ties broken by lowest row
    index; entries at or below `thresh` are treated as zero.
    """
    cdef Py_ssize_t rows = m.shape[0]
    cdef Py_ssize_t cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, best
    cdef double val, bestval, inv, f
    pivots = []
    for c in range(cols):
        if r >= rows:
            break
        best = r
        bestval = m[r, c] if m[r, c] >= 0 else -m[r, c]
        for i in range(r + 1, rows):
            val = m[i, c] if m[i, c] >= 0 else -m[i, c]
            if val > bestval:
                bestval = val
                best = i
        if bestval <= thresh:
            continue
        if best != r:
            for j in range(cols):
                val = m[r, j]
                m[r, j] = m[best, j]
                m[best, j] = val
        inv = 1.0 / m[r, c]
        for j in range(cols):
            m[r, j] *= inv
        m[r, c] = 1.0
        for i in range(rows):
            if i == r:
                continue
            f = m[i, c]
            if f != 0.0:
                for j in range(cols):
                    m[i, j] -= f * m[r, j]
                m[i, c] = 0.0
        pivots.append(c)
        r += 1
    return pivots


def match_permutation(double[:, ::1] pts, long[::1] tags,
                      double[:, ::1] q, double[::1] center, double eps):
    """Permutation mapping each transformed point onto the set, or None.

    For each point i the image center + Q (p_i - center) must have exactly
    one set member within eps, with an equal tag, and the assignment must
    be injective; otherwise the operation does not match.
    """
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t i, j, k, best
    cdef double x, y, z, ix, iy, iz, dx, dy, dz, d2, d1, d2nd, eps2
    eps2 = eps * eps
    perm_arr = np.empty(n, dtype=np.int64)
    used_arr = np.zeros(n, dtype=np.int64)
    cdef long[::1] perm = perm_arr
    cdef long[::1] used = used_arr
    for i in range(n):
        x = pts[i, 0] - center[0]
        y = pts[i, 1] - center[1]
        z = pts[i, 2] - center[2]
        ix = q[0, 0] * x + q[0, 1] * y + q[0, 2] * z + center[0]
        iy = q[1, 0] * x + q[1, 1] * y + q[1, 2] * z + center[1]
        iz = q[2, 0] * x + q[2, 1] * y + q[2, 2] * z + center[2]
        best = -1
        d1 = 1e300
        d2nd = 1e300
        for j in range(n):
            dx = pts[j, 0] - ix
            dy = pts[j, 1] - iy
            dz = pts[j, 2] - iz
            d2 = dx * dx + dy * dy + dz * dz
            if d2 < d1:
                d2nd = d1
                d1 = d2
                best = j
            elif d2 < d2nd:
                d2nd = d2
        if d1 > eps2 or d2nd <= eps2:
            return None
        if tags[best] != tags[i] or used[best]:
            return None
        used[best] = 1
        perm[i] = best
    return perm_arr
