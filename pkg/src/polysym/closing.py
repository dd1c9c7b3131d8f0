"""Algebraic formulation: closing equation, RREF, GDoF, reconstruction.

Every face polygon must close when its edges are walked tip-to-tail with
fixed unit directions and variable internal lengths q. That gives three
rows per face of a linear system A q = 0; fixed-edge constraints extend
it to M q = t.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .diagram import Diagram, ToleranceConfig, Vec3, edge_directions
from .errors import InconsistentSystemError, PolysymError

DEFAULT_RANK_EPS = ToleranceConfig().rank_eps


@dataclass(frozen=True)
class RrefResult:
    R: np.ndarray
    pivot_columns: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivot_columns)


@dataclass(frozen=True)
class ClosingSystem:
    """The closing equation A q = 0 plus optional fixed-edge rows (M q = t).

    Columns are internal edges in ascending id order. External edges in a
    face loop contribute their fixed signed vectors to the right-hand side
    of that face's rows instead of a column.
    """

    edge_ids: tuple[int, ...]
    A: np.ndarray                       # 3|F| x e_int
    b: np.ndarray                       # rhs of the A rows
    fixed: tuple[tuple[int, float], ...] = ()  # (edge id, length)

    @cached_property
    def column_of(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.edge_ids)}

    @cached_property
    def M(self) -> np.ndarray:
        if not self.fixed:
            return self.A
        rows = np.zeros((len(self.fixed), len(self.edge_ids)))
        for i, (eid, _) in enumerate(self.fixed):
            rows[i, self.column_of[eid]] = 1.0
        return np.vstack([self.A, rows])

    @cached_property
    def t(self) -> np.ndarray:
        return np.concatenate([self.b, [v for _, v in self.fixed]])


def build_closing(d: Diagram) -> ClosingSystem:
    """Assemble A (and rhs) from the face loops of a diagram."""
    edge_ids = d.internal_edge_ids
    if not edge_ids:
        raise PolysymError("diagram has no internal edges")
    col = {e: i for i, e in enumerate(edge_ids)}
    dirs = edge_directions(d)
    A = np.zeros((3 * len(d.faces), len(edge_ids)))
    b = np.zeros(3 * len(d.faces))
    for fi, face in enumerate(d.faces):
        for eid, sign in face.loop:
            e = d.edge_by_id[eid]
            if e.kind == "internal":
                A[3 * fi:3 * fi + 3, col[eid]] += sign * dirs[eid]
            else:
                b[3 * fi:3 * fi + 3] -= sign * d.edge_vector(eid)
    return ClosingSystem(edge_ids, A, b)


def add_fixed_edges(sys: ClosingSystem, fixes: dict[int, float]) -> ClosingSystem:
    """Append one unit row per fixed internal edge length."""
    known = set(sys.edge_ids)
    already = {eid for eid, _ in sys.fixed}
    new = list(sys.fixed)
    for eid in sorted(fixes):
        if eid not in known:
            raise PolysymError(f"fix on unknown or external edge id {eid}")
        if eid in already:
            raise PolysymError(f"duplicate fix for edge {eid}")
        already.add(eid)
        new.append((eid, float(fixes[eid])))
    return ClosingSystem(sys.edge_ids, sys.A, sys.b, tuple(new))


def rref(matrix: np.ndarray, rank_eps: float = DEFAULT_RANK_EPS) -> RrefResult:
    """Deterministic reduced row echelon form (see kernels for pivoting rules)."""
    R, pivots = kernels.rref_with_pivots(np.atleast_2d(matrix), rank_eps)
    return RrefResult(R, tuple(pivots))


def gdof(matrix: np.ndarray, edge_ids: tuple[int, ...] | None = None,
         rank_eps: float = DEFAULT_RANK_EPS) -> tuple[int, list[int]]:
    """GDoF m = columns - rank, and the independent (non-pivot) columns.

    With edge_ids given, independent columns are mapped to edge ids.
    """
    matrix = np.atleast_2d(matrix)
    res = rref(matrix, rank_eps)
    piv = set(res.pivot_columns)
    free = [j for j in range(matrix.shape[1]) if j not in piv]
    if edge_ids is not None:
        free = [edge_ids[j] for j in free]
    return matrix.shape[1] - res.rank, free


def solve_lengths(matrix: np.ndarray, rhs: np.ndarray,
                  edge_ids: tuple[int, ...],
                  assignments: dict[int, float],
                  rank_eps: float = DEFAULT_RANK_EPS) -> np.ndarray:
    """Unique solution of matrix q = rhs with the independent edges assigned.

    The assignment keys must be exactly the non-pivot columns; the result
    matches the assignments exactly and satisfies the system via
    back-substitution through the RREF of the augmented matrix.
    """
    matrix = np.atleast_2d(matrix)
    n = matrix.shape[1]
    aug = np.hstack([matrix, np.asarray(rhs, dtype=float).reshape(-1, 1)])
    res = rref(aug, rank_eps)
    pivots = [c for c in res.pivot_columns if c < n]
    if any(c == n for c in res.pivot_columns):
        raise InconsistentSystemError("system is inconsistent (pivot in rhs column)")
    free_cols = [j for j in range(n) if j not in set(pivots)]
    free_ids = [edge_ids[j] for j in free_cols]
    missing = [e for e in free_ids if e not in assignments]
    extra = [e for e in assignments if e not in set(free_ids)]
    if missing or extra:
        raise PolysymError(
            f"assignments must cover exactly the independent edges; "
            f"missing {missing}, extra {extra}")
    q = np.zeros(n)
    for j, eid in zip(free_cols, free_ids):
        q[j] = float(assignments[eid])
    R = res.R
    for r, c in enumerate(pivots):
        q[c] = R[r, n] - R[r, free_cols] @ q[free_cols]
    scale = max(float(np.max(np.abs(matrix))), 1.0)
    residual = np.abs(matrix @ q - rhs)
    if residual.size and residual.max() > 1e3 * rank_eps * scale * max(
            1.0, float(np.max(np.abs(q)))):
        raise InconsistentSystemError(
            f"solution residual {residual.max():.3g} exceeds tolerance")
    return q


def reconstruct_geometry(d: Diagram, q: np.ndarray, root: int,
                         root_position: Vec3,
                         tol: ToleranceConfig | None = None) -> Diagram:
    """Realize the diagram with internal lengths q by a breadth-first walk.

    Directions are kept from the input; positions follow
    head = tail + q_e * u_e along tree edges. Non-tree edges are checked
    for consistency, which fails when q is not in the solution space.
    """
    tol = tol or ToleranceConfig()
    edge_ids = d.internal_edge_ids
    if len(q) != len(edge_ids):
        raise PolysymError("length vector size mismatch")
    qmap = dict(zip(edge_ids, q))
    dirs = edge_directions(d)

    def step(eid: int) -> Vec3:
        e = d.edge_by_id[eid]
        if e.kind == "internal":
            return qmap[eid] * dirs[eid]
        return d.edge_vector(eid)

    adj: dict[int, list[tuple[int, int, int]]] = {v.id: [] for v in d.vertices}
    for e in sorted(d.edges, key=lambda e: e.id):
        adj[e.tail].append((e.id, e.head, +1))
        adj[e.head].append((e.id, e.tail, -1))

    pos: dict[int, Vec3] = {root: np.asarray(root_position, dtype=float)}
    todo = deque([root])
    nontree: list[int] = []
    seen_edges: set[int] = set()
    while todo:
        u = todo.popleft()
        for eid, w, orient in adj[u]:
            if eid in seen_edges:
                continue
            seen_edges.add(eid)
            if w in pos:
                nontree.append(eid)
                continue
            pos[w] = pos[u] + orient * step(eid)
            todo.append(w)
    if len(pos) != len(d.vertices):
        raise PolysymError("disconnected diagram cannot be reconstructed")

    pts = np.array(list(pos.values()))
    scale = max(float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0))),
                d.bbox_diagonal)
    eps = tol.geom_eps * max(scale, 1e-300)
    for eid in nontree:
        e = d.edge_by_id[eid]
        gap = np.linalg.norm(pos[e.head] - pos[e.tail] - step(eid))
        if gap > eps:
            raise InconsistentSystemError(
                f"edge {eid}: closure gap {gap:.3g} exceeds {eps:.3g} "
                f"(q is not in the solution space)")
    return d.with_positions(pos)
