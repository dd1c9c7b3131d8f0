"""Polyhedral diagram data model, interchange parsing, and derived geometry.

A diagram is a network of vertices, edges (internal or external), faces
given as oriented edge loops, and optional cells. Geometry lives on the
vertices; everything else is derived.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import ParseError, PolysymError

Vec3 = np.ndarray  # shape (3,), float64

INTERNAL = "internal"
EXTERNAL = "external"

# Endpoints closer than this (relative to bbox diagonal) are rejected at
# construction; tolerance-scale degeneracy is reported by validate() instead.
_EXACT_ZERO_REL = 1e-12


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerance knobs used throughout detection and linear algebra.

    geom_eps is a fraction of the bounding-box diagonal of whatever point
    set is being analyzed; angle_eps deduplicates axis directions;
    rank_eps is relative to the largest matrix entry.
    """

    geom_eps: float = 1e-4
    angle_eps: float = 1e-3
    rank_eps: float = 1e-9
    max_rotation_order: int = 12

    def __post_init__(self):
        if not (self.geom_eps > 0 and self.angle_eps > 0 and self.rank_eps > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.max_rotation_order < 2:
            raise ValueError("max_rotation_order must be >= 2")


@dataclass(frozen=True)
class Vertex:
    id: int
    p: tuple[float, float, float]


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    kind: str = INTERNAL


@dataclass(frozen=True)
class Face:
    id: int
    loop: tuple[tuple[int, int], ...]  # (edge id, sign in {+1, -1})


@dataclass(frozen=True)
class Cell:
    id: int
    faces: tuple[int, ...]


@dataclass(frozen=True)
class Finding:
    level: str  # "ok" | "warning" | "error"
    code: str
    locus: str
    message: str
    value: float | None = None


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]
    connected: bool
    max_closure_residual: float

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.level == "error"]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.level == "warning"]


@dataclass(frozen=True)
class Diagram:
    """Immutable polyhedral diagram Γ = (V, E, F, C).

    Construction checks the structural invariants: unique ids, resolvable
    references, face loops forming single closed vertex cycles, every
    internal edge referenced by at least one face, and no exactly
    degenerate edge.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...]
    cells: tuple[Cell, ...] = ()

    def __post_init__(self):
        _check_structure(self)

    # --- indexed access -------------------------------------------------

    @cached_property
    def vertex_by_id(self) -> dict[int, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edge_by_id(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def internal_edge_ids(self) -> tuple[int, ...]:
        return tuple(sorted(e.id for e in self.edges if e.kind == INTERNAL))

    def position(self, vertex_id: int) -> Vec3:
        return np.asarray(self.vertex_by_id[vertex_id].p, dtype=float)

    @cached_property
    def positions(self) -> np.ndarray:
        """Vertex positions stacked in ascending vertex-id order, shape (n, 3)."""
        ids = sorted(v.id for v in self.vertices)
        by = self.vertex_by_id
        return np.array([by[i].p for i in ids], dtype=float)

    def edge_vector(self, edge_id: int) -> Vec3:
        e = self.edge_by_id[edge_id]
        return self.position(e.head) - self.position(e.tail)

    def edge_length(self, edge_id: int) -> float:
        return float(np.linalg.norm(self.edge_vector(edge_id)))

    @cached_property
    def bbox_diagonal(self) -> float:
        p = self.positions
        return float(np.linalg.norm(p.max(axis=0) - p.min(axis=0)))

    def internal_lengths(self) -> np.ndarray:
        """Current internal edge lengths in ascending edge-id order."""
        return np.array([self.edge_length(e) for e in self.internal_edge_ids])

    def with_positions(self, new_positions: dict[int, Vec3]) -> "Diagram":
        """Same topology with replaced vertex positions."""
        verts = tuple(
            Vertex(v.id, tuple(float(x) for x in new_positions[v.id]))
            for v in self.vertices
        )
        return Diagram(verts, self.edges, self.faces, self.cells)

    def translated(self, offset: Vec3) -> "Diagram":
        off = np.asarray(offset, dtype=float)
        return self.with_positions(
            {v.id: np.asarray(v.p) + off for v in self.vertices}
        )


def _oriented(edge: Edge, sign: int) -> tuple[int, int]:
    return (edge.tail, edge.head) if sign == 1 else (edge.head, edge.tail)


def _check_structure(d: Diagram) -> None:
    for name, items in (("vertex", d.vertices), ("edge", d.edges),
                        ("face", d.faces), ("cell", d.cells)):
        ids = [it.id for it in items]
        if len(ids) != len(set(ids)):
            raise ParseError(f"duplicate {name} id")
        if any(i < 0 for i in ids):
            raise ParseError(f"negative {name} id")
    if not d.vertices:
        raise ParseError("diagram has no vertices")
    vids = {v.id for v in d.vertices}
    for v in d.vertices:
        if len(v.p) != 3 or not all(math.isfinite(x) for x in v.p):
            raise ParseError(f"vertex {v.id}: position must be 3 finite numbers")
    eids = {e.id for e in d.edges}
    for e in d.edges:
        if e.tail not in vids or e.head not in vids:
            raise ParseError(f"edge {e.id}: dangling vertex reference")
        if e.kind not in (INTERNAL, EXTERNAL):
            raise ParseError(f"edge {e.id}: kind must be internal or external")
    edge_by_id = {e.id: e for e in d.edges}
    faced: set[int] = set()
    for f in d.faces:
        if len(f.loop) < 2:
            raise ParseError(f"face {f.id}: loop needs at least two entries")
        for eid, sign in f.loop:
            if eid not in eids:
                raise ParseError(f"face {f.id}: dangling edge reference {eid}")
            if sign not in (1, -1):
                raise ParseError(f"face {f.id}: sign must be +1 or -1")
        oriented = [_oriented(edge_by_id[eid], s) for eid, s in f.loop]
        for j, (tail, head) in enumerate(oriented):
            nxt = oriented[(j + 1) % len(oriented)]
            if head != nxt[0]:
                raise ParseError(f"face {f.id}: non-closing face cycle at entry {j}")
        faced.update(eid for eid, _ in f.loop)
    for e in d.edges:
        if e.kind == INTERNAL and e.id not in faced:
            raise ParseError(f"internal edge {e.id} not referenced by any face")
    fids = {f.id for f in d.faces}
    for c in d.cells:
        for fid in c.faces:
            if fid not in fids:
                raise ParseError(f"cell {c.id}: dangling face reference {fid}")
    # Exactly coincident endpoints are unusable (no direction).
    pos = {v.id: np.asarray(v.p, dtype=float) for v in d.vertices}
    pts = np.array([v.p for v in d.vertices], dtype=float)
    diag = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    thresh = _EXACT_ZERO_REL * max(diag, 1.0)
    for e in d.edges:
        if np.linalg.norm(pos[e.head] - pos[e.tail]) <= thresh:
            raise ParseError(f"edge {e.id}: zero-length (coincident endpoints)")


# --- interchange format -------------------------------------------------


def parse_diagram(text: str) -> Diagram:
    """Parse the JSON interchange format into a validated Diagram."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("malformed document: top level must be an object")
    try:
        vertices = tuple(
            Vertex(int(v["id"]), tuple(float(x) for x in v["p"]))
            for v in doc.get("vertices", [])
        )
        edges = tuple(
            Edge(int(e["id"]), int(e["tail"]), int(e["head"]),
                 str(e.get("kind", INTERNAL)))
            for e in doc.get("edges", [])
        )
        faces = tuple(
            Face(int(f["id"]),
                 tuple((int(eid), int(sign)) for eid, sign in f["loop"]))
            for f in doc.get("faces", [])
        )
        cells = tuple(
            Cell(int(c["id"]), tuple(int(x) for x in c["faces"]))
            for c in doc.get("cells", []) or []
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed document: {exc}") from exc
    return Diagram(vertices, edges, faces, cells)


def serialize_diagram(d: Diagram) -> str:
    doc = {
        "vertices": [{"id": v.id, "p": list(v.p)} for v in d.vertices],
        "edges": [
            {"id": e.id, "tail": e.tail, "head": e.head, "kind": e.kind}
            for e in d.edges
        ],
        "faces": [
            {"id": f.id, "loop": [[eid, sign] for eid, sign in f.loop]}
            for f in d.faces
        ],
    }
    if d.cells:
        doc["cells"] = [{"id": c.id, "faces": list(c.faces)} for c in d.cells]
    return json.dumps(doc, indent=2, sort_keys=True)


# --- derived quantities --------------------------------------------------


def geometric_center(points: Iterable[Vec3]) -> Vec3:
    """Unweighted centroid; the symmetry center of the analyzed set."""
    pts = np.atleast_2d(np.asarray(list(points), dtype=float))
    if pts.size == 0:
        raise PolysymError("geometric_center of empty point list")
    return pts.mean(axis=0)


def vertex_degrees(d: Diagram) -> dict[int, int]:
    """Incident-edge count per vertex, both internal and external edges."""
    deg = {v.id: 0 for v in d.vertices}
    for e in d.edges:
        deg[e.tail] += 1
        deg[e.head] += 1
    return deg


def edge_midpoints(d: Diagram) -> list[tuple[int, Vec3]]:
    """Midpoints of internal edges, ascending edge id."""
    out = []
    for eid in d.internal_edge_ids:
        e = d.edge_by_id[eid]
        out.append((eid, 0.5 * (d.position(e.tail) + d.position(e.head))))
    return out


def edge_directions(d: Diagram) -> dict[int, Vec3]:
    """Unit tail-to-head direction per edge (both kinds)."""
    dirs = {}
    for e in d.edges:
        v = d.edge_vector(e.id)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise PolysymError(f"edge {e.id}: zero-length edge has no direction")
        dirs[e.id] = v / n
    return dirs


def connected_components(d: Diagram) -> list[set[int]]:
    """Vertex components under the full edge set (both kinds)."""
    adj: dict[int, list[int]] = {v.id: [] for v in d.vertices}
    for e in d.edges:
        adj[e.tail].append(e.head)
        adj[e.head].append(e.tail)
    seen: set[int] = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def face_closure_residual(d: Diagram, face: Face,
                          lengths: dict[int, float] | None = None) -> float:
    """Norm of the signed edge-vector sum around a face.

    With `lengths` given, each edge contributes length * unit direction
    instead of its stored endpoint difference; this is how a candidate
    length vector is checked against a face polygon.
    """
    total = np.zeros(3)
    for eid, sign in face.loop:
        v = d.edge_vector(eid)
        if lengths is not None and eid in lengths:
            n = np.linalg.norm(v)
            v = v * (lengths[eid] / n)
        total = total + sign * v
    return float(np.linalg.norm(total))


def validate(d: Diagram, tol: ToleranceConfig | None = None) -> ValidationReport:
    """Report connectivity, degenerate edges, and per-face closure residuals."""
    tol = tol or ToleranceConfig()
    findings: list[Finding] = []
    scale = max(d.bbox_diagonal, 1e-300)
    eps = tol.geom_eps * scale

    comps = connected_components(d)
    connected = len(comps) == 1
    findings.append(Finding(
        "ok" if connected else "warning", "connectivity", "diagram",
        f"{len(comps)} connected component(s)", float(len(comps))))

    for e in d.edges:
        ln = d.edge_length(e.id)
        if ln <= eps:
            findings.append(Finding(
                "error", "zero_length_edge", f"edge {e.id}",
                f"length {ln:.3g} below tolerance {eps:.3g}", ln))

    max_residual = 0.0
    for f in d.faces:
        r = face_closure_residual(d, f)
        max_residual = max(max_residual, r)
        level = "ok" if r <= eps else "warning"
        findings.append(Finding(
            level, "face_closure", f"face {f.id}",
            f"closure residual {r:.3g}", r))

    for f in d.faces:
        pts = _face_points(d, f)
        if len(pts) >= 4:
            dev = _planarity_deviation(np.array(pts))
            if dev > eps:
                findings.append(Finding(
                    "warning", "non_planar_face", f"face {f.id}",
                    f"planarity deviation {dev:.3g}", dev))

    return ValidationReport(tuple(findings), connected, max_residual)


def _face_points(d: Diagram, f: Face) -> list[Vec3]:
    pts = []
    for eid, sign in f.loop:
        tail, _ = _oriented(d.edge_by_id[eid], sign)
        pts.append(d.position(tail))
    return pts


def _planarity_deviation(pts: np.ndarray) -> float:
    centered = pts - pts.mean(axis=0)
    # smallest singular direction = best-fit plane normal
    _, s, _ = np.linalg.svd(centered, full_matrices=False)
    return float(s[-1]) if len(s) == 3 else 0.0
