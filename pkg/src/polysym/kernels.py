"""Hot numeric kernels with backend selection.

The compiled Cython extension (polysym._ckern) is preferred when it was
built; a numpy/scipy fallback provides identical semantics otherwise.
Set POLYSYM_PURE=1 to force the fallback. Both backends perform the same
floating-point operations in the same order, so pivots and solutions are
bit-identical.
"""

from __future__ import annotations

import os

import numpy as np
from scipy.spatial import cKDTree

try:
    from . import _ckern
except ImportError:  # extension not built; pure fallback
    _ckern = None

_FORCE_PURE = os.environ.get("POLYSYM_PURE", "") not in ("", "0")
COMPILED = _ckern is not None and not _FORCE_PURE


def backend_name() -> str:
    return "compiled" if COMPILED else "pure"


# --- reduced row echelon form --------------------------------------------


def pure_rref_inplace(m: np.ndarray, thresh: float) -> list[int]:
    """Gauss-Jordan elimination in place; returns pivot columns.

    Partial pivoting by largest absolute value (ties: lowest row index);
    entries at or below thresh count as zero.
    """
    rows, cols = m.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r >= rows:
            break
        best = r + int(np.argmax(np.abs(m[r:, c])))
        if abs(m[best, c]) <= thresh:
            continue
        if best != r:
            m[[r, best]] = m[[best, r]]
        m[r, :] *= 1.0 / m[r, c]
        m[r, c] = 1.0
        col = m[:, c].copy()
        col[r] = 0.0
        nz = np.nonzero(col)[0]
        if nz.size:
            m[nz, :] -= np.outer(col[nz], m[r, :])
            m[nz, c] = 0.0
        pivots.append(c)
        r += 1
    return pivots


def rref_inplace(m: np.ndarray, thresh: float) -> list[int]:
    if COMPILED:
        return _ckern.rref_inplace(m, thresh)
    return pure_rref_inplace(m, thresh)


def rref_with_pivots(mat: np.ndarray, rank_eps: float) -> tuple[np.ndarray, list[int]]:
    """RREF of a copy of mat, with the zero threshold scaled to its largest entry."""
    m = np.array(mat, dtype=np.float64, order="C", copy=True)
    if m.size == 0:
        return m, []
    scale = float(np.max(np.abs(m)))
    if scale == 0.0:
        return m, []
    pivots = rref_inplace(m, rank_eps * scale)
    return m, pivots


# --- tagged point matching ------------------------------------------------


def pure_match_permutation(pts: np.ndarray, tags: np.ndarray, q: np.ndarray,
                           center: np.ndarray, eps: float) -> np.ndarray | None:
    """Permutation induced by the isometry on the tagged set, or None.

    Each image must have exactly one set member within eps, tags must
    agree, and the assignment must be injective.
    """
    n = len(pts)
    images = (pts - center) @ q.T + center
    tree = cKDTree(pts)
    if n == 1:
        d1, idx = tree.query(images, k=1)
        d1 = np.atleast_1d(d1)
        idx = np.atleast_1d(idx)
        d2 = np.full(1, np.inf)
    else:
        dist, idx2 = tree.query(images, k=2)
        d1, d2 = dist[:, 0], dist[:, 1]
        idx = idx2[:, 0]
    if np.any(d1 > eps) or np.any(d2 <= eps):
        return None
    if not np.array_equal(tags[idx], tags):
        return None
    if np.unique(idx).size != n:
        return None
    return idx.astype(np.int64)


# The compiled matcher is O(n^2); the kd-tree fallback wins past this
# size (see benchmarks/bench_kernels.py).
_MATCH_CROSSOVER = 512


def match_permutation(pts: np.ndarray, tags: np.ndarray, q: np.ndarray,
                      center: np.ndarray, eps: float) -> np.ndarray | None:
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    tags = np.ascontiguousarray(tags, dtype=np.int64)
    q = np.ascontiguousarray(q, dtype=np.float64)
    center = np.ascontiguousarray(center, dtype=np.float64)
    if COMPILED and len(pts) <= _MATCH_CROSSOVER:
        return _ckern.match_permutation(pts, tags, q, center, float(eps))
    return pure_match_permutation(pts, tags, q, center, float(eps))


def compiled_available() -> bool:
    return _ckern is not None
