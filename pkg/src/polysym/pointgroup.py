"""Finite point-group detection over tagged 3D point sets.

Operations are isometries about the centroid of the analyzed set. The
detector generates candidate axes from the set itself (inertia axes,
centroid-to-point directions, same-tag pair midpoints/differences/cross
products, and same-tag triple normals), tests rotations, reflections,
improper rotations and the inversion against the set, closes the matched
operations under composition, and names the result in Schoenflies
notation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from . import kernels
from .diagram import ToleranceConfig, Vec3
from .errors import DegenerateInputError, PolysymError, SymmetryAssemblyError

IDENTITY = "identity"
REFLECTION = "reflection"
INVERSION = "inversion"
PROPER_ROTATION = "proper_rotation"
IMPROPER_ROTATION = "improper_rotation"

_KIND_RANK = {IDENTITY: 0, PROPER_ROTATION: 1, REFLECTION: 2,
              IMPROPER_ROTATION: 3, INVERSION: 4}

# Points from at most this many same-tag equivalence classes (smallest
# first) seed pair/triple axis candidates; members per class are capped.
_MAX_PAIR_CLASSES = 4
_MAX_CLASS_MEMBERS = 48
_PROBE_POINTS = 8
_SMALL_SET = 64

_MAX_TAG = 113


def rotation_matrix(axis: Vec3, theta: float) -> np.ndarray:
    """Rodrigues rotation about a unit axis."""
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    c, s = np.cos(theta), np.sin(theta)
    ux = np.array([[0.0, -u[2], u[1]],
                   [u[2], 0.0, -u[0]],
                   [-u[1], u[0], 0.0]])
    return c * np.eye(3) + s * ux + (1.0 - c) * np.outer(u, u)


def reflection_matrix(normal: Vec3) -> np.ndarray:
    u = np.asarray(normal, dtype=float)
    u = u / np.linalg.norm(u)
    return np.eye(3) - 2.0 * np.outer(u, u)


def _canonical_axis(axis: np.ndarray, angle: float) -> tuple[np.ndarray, float]:
    """Flip the axis so its first significant component is positive.

    Flipping an axis maps a rotation angle to its complement.
    """
    for x in axis:
        if abs(x) > 1e-8:
            if x < 0:
                return -axis, (2.0 * np.pi - angle) % (2.0 * np.pi)
            break
    return axis, angle


@dataclass(frozen=True)
class SymmetryOperation:
    """Isometry about a center: identity, reflection, inversion, or a
    proper/improper rotation. The axis field stores the plane normal for
    reflections."""

    kind: str
    center: tuple[float, float, float]
    axis: tuple[float, float, float] | None = None
    angle: float = 0.0

    @cached_property
    def matrix(self) -> np.ndarray:
        """Orthogonal linear part acting about the center."""
        if self.kind == IDENTITY:
            return np.eye(3)
        if self.kind == INVERSION:
            return -np.eye(3)
        if self.kind == REFLECTION:
            return reflection_matrix(np.asarray(self.axis))
        if self.kind == PROPER_ROTATION:
            return rotation_matrix(np.asarray(self.axis), self.angle)
        if self.kind == IMPROPER_ROTATION:
            return rotation_matrix(np.asarray(self.axis), self.angle) \
                @ reflection_matrix(np.asarray(self.axis))
        raise PolysymError(f"unknown operation kind {self.kind}")

    def sort_key(self):
        ax = self.axis or (0.0, 0.0, 0.0)
        return (_KIND_RANK[self.kind], tuple(round(x, 9) for x in ax),
                round(self.angle, 9))

    def describe(self) -> str:
        if self.kind in (IDENTITY, INVERSION):
            return {"identity": "E", "inversion": "i"}[self.kind]
        ax = np.asarray(self.axis)
        if self.kind == REFLECTION:
            return f"sigma(n=[{ax[0]:.3f},{ax[1]:.3f},{ax[2]:.3f}])"
        deg = np.degrees(self.angle)
        letter = "C" if self.kind == PROPER_ROTATION else "S"
        return f"{letter}({deg:.1f}deg, ax=[{ax[0]:.3f},{ax[1]:.3f},{ax[2]:.3f}])"


def identity_op(center: Vec3) -> SymmetryOperation:
    return SymmetryOperation(IDENTITY, tuple(float(x) for x in center))


def inversion_op(center: Vec3) -> SymmetryOperation:
    return SymmetryOperation(INVERSION, tuple(float(x) for x in center))


def reflection_op(normal: Vec3, center: Vec3) -> SymmetryOperation:
    u = np.asarray(normal, dtype=float)
    u = u / np.linalg.norm(u)
    u, _ = _canonical_axis(u, 0.0)
    return SymmetryOperation(REFLECTION, tuple(float(x) for x in center),
                             tuple(float(x) for x in u))


def rotation_op(axis: Vec3, angle: float, center: Vec3,
                improper: bool = False) -> SymmetryOperation:
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    angle = float(angle) % (2.0 * np.pi)
    u, angle = _canonical_axis(u, angle)
    kind = IMPROPER_ROTATION if improper else PROPER_ROTATION
    return SymmetryOperation(kind, tuple(float(x) for x in center),
                             tuple(float(x) for x in u), angle)


def operation_from_matrix(q: np.ndarray, center: Vec3,
                          angle_tol: float = 1e-7) -> SymmetryOperation:
    """Classify an orthogonal matrix into an operation about the center."""
    det = float(np.linalg.det(q))
    if abs(abs(det) - 1.0) > 1e-6:
        raise PolysymError("matrix is not orthogonal")
    if det > 0:
        axis, angle = _proper_axis_angle(q)
        if angle <= angle_tol or angle >= 2.0 * np.pi - angle_tol:
            return identity_op(center)
        return rotation_op(axis, angle, center)
    tr = float(np.trace(q))
    if abs(tr + 3.0) < 1e-6:
        return inversion_op(center)
    axis, phi = _proper_axis_angle(-q)
    theta = (phi - np.pi) % (2.0 * np.pi)
    if theta <= angle_tol or theta >= 2.0 * np.pi - angle_tol:
        return reflection_op(axis, center)
    if abs(theta - np.pi) <= angle_tol:
        return inversion_op(center)
    return rotation_op(axis, theta, center, improper=True)


def _proper_axis_angle(r: np.ndarray) -> tuple[np.ndarray, float]:
    # atan2 keeps the angle well-conditioned near pi, where arccos loses
    # half the significant digits
    w = np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    norm = float(np.linalg.norm(w))
    angle = float(np.arctan2(norm / 2.0, (np.trace(r) - 1.0) / 2.0))
    if norm > 1e-6:
        return w / norm, angle
    if angle < 1e-4:  # identity-like
        return np.array([0.0, 0.0, 1.0]), 0.0
    # angle ~ pi: axis is the +1 eigenvector of the symmetric matrix
    vals, vecs = np.linalg.eigh((r + r.T) / 2.0)
    return vecs[:, int(np.argmax(vals))], angle


def apply_operation(op: SymmetryOperation, p: Vec3) -> Vec3:
    c = np.asarray(op.center, dtype=float)
    return c + op.matrix @ (np.asarray(p, dtype=float) - c)


def compose(a: SymmetryOperation, b: SymmetryOperation) -> SymmetryOperation:
    """a after b. Both operations must share their center."""
    ca, cb = np.asarray(a.center), np.asarray(b.center)
    scale = 1.0 + max(np.abs(ca).max(), np.abs(cb).max())
    if np.abs(ca - cb).max() > 1e-9 * scale:
        raise PolysymError("cannot compose operations with different centers")
    return operation_from_matrix(a.matrix @ b.matrix, a.center)


@dataclass(frozen=True)
class TaggedPointSet:
    """Points with integer tags in [1, 113]; the unit the detector works on."""

    points: np.ndarray  # (n, 3)
    tags: np.ndarray    # (n,), int64

    def __post_init__(self):
        object.__setattr__(self, "points",
                           np.ascontiguousarray(self.points, dtype=np.float64))
        object.__setattr__(self, "tags",
                           np.ascontiguousarray(self.tags, dtype=np.int64))
        if self.points.ndim != 2 or self.points.shape[1] != 3 or not len(self.points):
            raise PolysymError("point set must be a non-empty (n, 3) array")
        if len(self.tags) != len(self.points):
            raise PolysymError("one tag per point required")
        if self.tags.min() < 1 or self.tags.max() > _MAX_TAG:
            raise PolysymError(f"tags must lie in [1, {_MAX_TAG}]")

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def bbox_diagonal(self) -> float:
        return float(np.linalg.norm(self.points.max(axis=0)
                                    - self.points.min(axis=0)))

    @cached_property
    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)


@dataclass(frozen=True)
class PointGroup:
    operations: tuple[SymmetryOperation, ...]
    schoenflies: str

    @property
    def order(self) -> int:
        return len(self.operations)

    def proper_rotations(self) -> list[SymmetryOperation]:
        return [o for o in self.operations if o.kind == PROPER_ROTATION]


@dataclass(frozen=True)
class OrbitPartition:
    """Disjoint equivalence classes of item indices (or edge ids)."""

    orbits: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.orbits)

    def orbit_of(self) -> dict[int, int]:
        return {m: i for i, orb in enumerate(self.orbits) for m in orb}


def operation_matches(op: SymmetryOperation, s: TaggedPointSet,
                      geom_eps: float) -> np.ndarray | None:
    """Permutation induced by op on the set, or None when op is not a
    symmetry of the set (tolerance is geom_eps times the bbox diagonal)."""
    eps_abs = geom_eps * s.bbox_diagonal
    return kernels.match_permutation(s.points, s.tags, op.matrix,
                                     np.asarray(op.center, dtype=float), eps_abs)


def coincident_pairs(points: np.ndarray, eps: float) -> list[tuple[int, int]]:
    """Index pairs closer than eps; these make midpoint matching ambiguous."""
    tree = cKDTree(points)
    return sorted(tuple(sorted(p)) for p in tree.query_pairs(eps))


# --- detection ------------------------------------------------------------


def detect_point_group(s: TaggedPointSet,
                       tol: ToleranceConfig | None = None) -> PointGroup:
    """All operations about the centroid that map the tagged set to itself."""
    tol = tol or ToleranceConfig()
    pts = s.points
    n = len(pts)
    centroid = s.centroid
    centered = pts - centroid
    diag = s.bbox_diagonal
    if diag <= 0.0:
        raise DegenerateInputError(
            "continuous symmetry unsupported: all points coincide")
    eps = tol.geom_eps * diag

    sv = np.linalg.svd(centered, compute_uv=False)
    if len(sv) < 2 or sv[1] <= max(eps, tol.rank_eps * sv[0]):
        raise DegenerateInputError(
            "continuous symmetry unsupported: points are collinear")

    zeros = np.zeros(3)
    work = TaggedPointSet(centered, s.tags)
    tree = cKDTree(centered)

    def match(mat: np.ndarray) -> np.ndarray | None:
        return kernels.match_permutation(centered, work.tags, mat, zeros, eps)

    classes = _tag_radius_classes(centered, s.tags, eps)
    axes = _candidate_axes(centered, classes, n, tol)
    probe = _probe_indices(classes, n)
    probe_pts = centered[probe]

    ops: list[SymmetryOperation] = [identity_op(zeros)]
    mats: list[np.ndarray] = [np.eye(3)]

    def try_add(op: SymmetryOperation) -> bool:
        q = op.matrix
        for m in mats:
            if np.abs(m - q).max() < tol.angle_eps:
                return False
        if match(q) is None:
            return False
        ops.append(op)
        mats.append(q)
        return True

    try_add(inversion_op(zeros))

    small = n <= _SMALL_SET
    rot_orders = list(range(tol.max_rotation_order, 1, -1))
    imp_orders = [2 * m for m in range(tol.max_rotation_order, 1, -1)]

    rot_ok = _probe_survivors(axes, [2 * np.pi / k for k in rot_orders],
                              probe_pts, tree, eps, improper=False) \
        if not small else None
    imp_ok = _probe_survivors(axes, [2 * np.pi / k for k in imp_orders],
                              probe_pts, tree, eps, improper=True) \
        if not small else None
    ref_ok = _probe_reflections(axes, probe_pts, tree, eps) \
        if not small else None

    for ai, axis in enumerate(axes):
        for ki, k in enumerate(rot_orders):
            if rot_ok is not None and not rot_ok[ai, ki]:
                continue
            if try_add(rotation_op(axis, 2 * np.pi / k, zeros)):
                break
        if ref_ok is None or ref_ok[ai]:
            try_add(reflection_op(axis, zeros))
        for ki, k in enumerate(imp_orders):
            if imp_ok is not None and not imp_ok[ai, ki]:
                continue
            if try_add(rotation_op(axis, 2 * np.pi / k, zeros, improper=True)):
                break

    _close_under_composition(ops, mats, match, tol)

    shifted = tuple(sorted(
        (SymmetryOperation(o.kind, tuple(float(x) for x in centroid),
                           o.axis, o.angle) for o in ops),
        key=lambda o: o.sort_key()))
    return PointGroup(shifted, classify_schoenflies(shifted, tol))


def _tag_radius_classes(centered: np.ndarray, tags: np.ndarray,
                        eps: float) -> list[np.ndarray]:
    """Index classes grouped by tag and clustered by centroid distance.

    Orbit mates always share tag and radius, so candidate pairs/triples
    only need to come from within a class. Classes are sorted smallest
    first (singletons last) for a cheap, informative search frontier.
    """
    radii = np.linalg.norm(centered, axis=1)
    classes = []
    for tag in np.unique(tags):
        idx = np.nonzero(tags == tag)[0]
        order = idx[np.argsort(radii[idx], kind="stable")]
        start = 0
        for j in range(1, len(order) + 1):
            if j == len(order) or radii[order[j]] - radii[order[j - 1]] > eps:
                classes.append(order[start:j])
                start = j
    classes.sort(key=lambda c: (len(c) < 2, len(c), int(c[0])))
    return classes


def _probe_indices(classes: list[np.ndarray], n: int) -> np.ndarray:
    if classes and len(classes[0]) >= 2:
        idx = classes[0][:_PROBE_POINTS]
    else:
        idx = np.arange(min(n, _PROBE_POINTS))
    return np.asarray(idx)


def _candidate_axes(centered: np.ndarray, classes: list[np.ndarray],
                    n: int, tol: ToleranceConfig) -> np.ndarray:
    """Deduplicated unit axis candidates from the set's own geometry."""
    cands: list[np.ndarray] = []

    inertia = np.einsum("ni,nj->ij", centered, centered)
    inertia = np.trace(inertia) * np.eye(3) - inertia
    _, vecs = np.linalg.eigh(inertia)
    cands.extend(vecs.T)

    pair_classes = [c[:_MAX_CLASS_MEMBERS] for c in classes
                    if len(c) >= 2][:_MAX_PAIR_CLASSES]
    if n <= 256:
        dir_sources = centered
    else:
        pool = [centered[c] for c in pair_classes] or [centered[:256]]
        dir_sources = np.vstack(pool)
    cands.extend(dir_sources)

    primary = pair_classes[0] if pair_classes else None
    for cls in pair_classes:
        p = centered[cls]
        for i, j in itertools.combinations(range(len(p)), 2):
            cands.append(p[i] + p[j])   # C2-type axes through pair midpoints
            cands.append(p[i] - p[j])   # mirror normals swapping the pair
            cands.append(np.cross(p[i], p[j]))  # planes through both points
    if primary is not None and len(primary) >= 3:
        p0 = centered[primary[0]]
        rest = centered[primary[1:]]
        # normals of planes through (p0, q, r): axes of odd-order rotations
        for i, j in itertools.combinations(range(len(rest)), 2):
            cands.append(np.cross(rest[i] - p0, rest[j] - rest[i]))

    arr = np.array(cands)
    norms = np.linalg.norm(arr, axis=1)
    arr = arr[norms > 1e-9 * max(1.0, norms.max())]
    arr = arr / np.linalg.norm(arr, axis=1)[:, None]
    flip = arr[np.arange(len(arr)),
               np.argmax(np.abs(arr) > 1e-8, axis=1)] < 0
    arr[flip] *= -1.0
    decimals = max(3, int(np.ceil(-np.log10(tol.angle_eps))) + 1)
    _, keep = np.unique(np.round(arr, decimals), axis=0, return_index=True)
    return arr[np.sort(keep)]


def _rodrigues_grid(axes: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """(A, T, 3, 3) rotation matrices for every axis/angle combination."""
    a = axes
    eye = np.eye(3)
    ux = np.zeros((len(a), 3, 3))
    ux[:, 0, 1], ux[:, 0, 2] = -a[:, 2], a[:, 1]
    ux[:, 1, 0], ux[:, 1, 2] = a[:, 2], -a[:, 0]
    ux[:, 2, 0], ux[:, 2, 1] = -a[:, 1], a[:, 0]
    uu = np.einsum("ai,aj->aij", a, a)
    c = np.cos(angles)[None, :, None, None]
    s = np.sin(angles)[None, :, None, None]
    return (c * eye[None, None] + s * ux[:, None]
            + (1.0 - c) * uu[:, None])


def _probe_survivors(axes: np.ndarray, angles: list[float],
                     probe_pts: np.ndarray, tree: cKDTree, eps: float,
                     improper: bool) -> np.ndarray:
    """Boolean (axes, angles) mask of operations whose probe images all
    land on the set; cheap pre-filter before full matching."""
    if not len(axes):
        return np.zeros((0, len(angles)), dtype=bool)
    mats = _rodrigues_grid(axes, np.asarray(angles))
    if improper:
        refl = np.eye(3)[None] - 2.0 * np.einsum("ai,aj->aij", axes, axes)
        mats = np.einsum("atij,ajk->atik", mats, refl)
    images = np.einsum("atij,kj->atki", mats, probe_pts)
    d, _ = tree.query(images.reshape(-1, 3))
    d = d.reshape(len(axes), len(angles), len(probe_pts))
    return d.max(axis=2) <= eps


def _probe_reflections(axes: np.ndarray, probe_pts: np.ndarray,
                       tree: cKDTree, eps: float) -> np.ndarray:
    if not len(axes):
        return np.zeros(0, dtype=bool)
    mats = np.eye(3)[None] - 2.0 * np.einsum("ai,aj->aij", axes, axes)
    images = np.einsum("aij,kj->aki", mats, probe_pts)
    d, _ = tree.query(images.reshape(-1, 3))
    return d.reshape(len(axes), len(probe_pts)).max(axis=1) <= eps


def _close_under_composition(ops: list[SymmetryOperation],
                             mats: list[np.ndarray], match,
                             tol: ToleranceConfig) -> None:
    """Extend ops/mats in place to the closure under composition.

    Composed candidates are re-verified against the point set; on clean
    input nothing is ever rejected.
    """
    cap = max(130, 4 * tol.max_rotation_order + 10)
    i = 0
    while i < len(ops):
        j = 0
        while j < len(ops):
            for q in (mats[i] @ mats[j], mats[j] @ mats[i]):
                stack = np.asarray(mats)
                if np.abs(stack - q).reshape(len(stack), -1).max(axis=1).min() \
                        >= tol.angle_eps:
                    op = operation_from_matrix(q, (0.0, 0.0, 0.0))
                    if match(op.matrix) is not None:
                        ops.append(op)
                        mats.append(op.matrix)
            j += 1
        i += 1
        if len(ops) > cap:
            raise SymmetryAssemblyError(
                f"operation closure exceeded {cap} elements; "
                "tolerances are too loose for this input")


# --- classification -------------------------------------------------------


def _axis_groups(ops: list[SymmetryOperation], ang_tol: float,
                 kinds: tuple[str, ...]) -> list[tuple[np.ndarray, list[SymmetryOperation]]]:
    groups: list[tuple[np.ndarray, list[SymmetryOperation]]] = []
    for op in ops:
        if op.kind not in kinds or op.axis is None:
            continue
        ax = np.asarray(op.axis)
        for known, members in groups:
            if abs(float(known @ ax)) >= np.cos(ang_tol):
                members.append(op)
                break
        else:
            groups.append((ax, [op]))
    return groups


def classify_schoenflies(operations, tol: ToleranceConfig | None = None) -> str:
    """Standard decision tree over a closed operation set."""
    tol = tol or ToleranceConfig()
    ops = list(operations)
    ang = max(tol.angle_eps, 1e-4)
    has_inversion = any(o.kind == INVERSION for o in ops)
    mirrors = [o for o in ops if o.kind == REFLECTION]
    impropers = [o for o in ops if o.kind == IMPROPER_ROTATION]
    rot_axes = _axis_groups(ops, ang, (PROPER_ROTATION,))
    imp_axes = _axis_groups(ops, ang, (IMPROPER_ROTATION,))

    if not rot_axes:
        if mirrors:
            return "Cs"
        if has_inversion:
            return "Ci"
        return "C1"

    orders = [(len(members) + 1, axis) for axis, members in rot_axes]
    high = [o for o, _ in orders if o >= 3]
    if len(high) >= 2:
        top = max(o for o, _ in orders)
        improper_any = bool(mirrors or impropers or has_inversion)
        if top >= 5:
            return "Ih" if improper_any else "I"
        if top == 4:
            return "Oh" if improper_any else "O"
        if has_inversion:
            return "Th"
        return "Td" if improper_any else "T"

    def imp_order_about(axis: np.ndarray) -> int:
        for iax, members in imp_axes:
            if abs(float(iax @ axis)) >= np.cos(ang):
                return len(members)
        return 0

    n, principal = max(
        orders, key=lambda oa: (oa[0], imp_order_about(oa[1]),
                                tuple(np.round(oa[1], 9))))
    perp_c2 = sum(1 for o, axis in orders
                  if abs(float(axis @ principal)) <= np.sin(ang))
    sigma_h = any(abs(float(np.asarray(m.axis) @ principal)) >= np.cos(ang)
                  for m in mirrors)
    vertical = sum(1 for m in mirrors
                   if abs(float(np.asarray(m.axis) @ principal)) <= np.sin(ang))

    if perp_c2 >= n:
        if sigma_h:
            return f"D{n}h"
        if vertical >= n:
            return f"D{n}d"
        return f"D{n}"
    if sigma_h:
        return f"C{n}h"
    if vertical >= n:
        return f"C{n}v"
    if imp_order_about(principal):
        return f"S{2 * n}"
    return f"C{n}"


# --- orbits ---------------------------------------------------------------


def orbits(g: PointGroup, s: TaggedPointSet, geom_eps: float) -> OrbitPartition:
    """Transitive closure of the permutations of every group operation."""
    n = len(s)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for op in g.operations:
        perm = operation_matches(op, s, geom_eps)
        if perm is None:
            raise SymmetryAssemblyError(
                f"group operation {op.describe()} no longer matches the set")
        for i, j in enumerate(perm):
            ri, rj = find(i), find(int(j))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

    buckets: dict[int, list[int]] = {}
    for i in range(n):
        buckets.setdefault(find(i), []).append(i)
    orbs = sorted((tuple(sorted(v)) for v in buckets.values()),
                  key=lambda t: t[0])
    return OrbitPartition(tuple(orbs))
