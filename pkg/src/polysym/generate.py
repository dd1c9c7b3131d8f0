"""Synthetic symmetric test diagrams.

A named point group is built from standard generators; a random
fundamental-domain polygon anchored at the origin is replicated under
every group operation. The origin vertex is shared by all copies, so the
result is connected, and vertex cycles make every face close exactly.
"""

from __future__ import annotations

import re

import numpy as np

from .diagram import Diagram, Edge, Face, Vertex
from .errors import PolysymError
from .pointgroup import (SymmetryOperation, identity_op, inversion_op,
                         operation_from_matrix, reflection_op, rotation_op)

_MERGE_DECIMALS = 9

_NAME_RE = re.compile(r"^(C|D|S)(\d+)(h|v|d)?$")


def named_group_operations(name: str) -> list[SymmetryOperation]:
    """Closed operation list (about the origin) for a Schoenflies name."""
    gens = _generators(name)
    mats = [np.eye(3)]
    for g in gens:
        _insert(mats, g.matrix)
    i = 0
    while i < len(mats):
        j = 0
        while j < len(mats):
            _insert(mats, mats[i] @ mats[j])
            j += 1
        i += 1
        if len(mats) > 150:
            raise PolysymError(f"group {name} did not close")
    ops = [operation_from_matrix(m, (0.0, 0.0, 0.0)) for m in mats]
    return sorted(ops, key=lambda o: o.sort_key())


def _insert(mats: list[np.ndarray], q: np.ndarray) -> None:
    for m in mats:
        if np.abs(m - q).max() < 1e-9:
            return
    mats.append(q)


def _generators(name: str) -> list[SymmetryOperation]:
    z = (0.0, 0.0, 1.0)
    x = (1.0, 0.0, 0.0)
    c = (0.0, 0.0, 0.0)
    diag = (1.0, 1.0, 1.0)
    if name == "C1":
        return [identity_op(c)]
    if name == "Cs":
        return [reflection_op(z, c)]
    if name == "Ci":
        return [inversion_op(c)]
    if name == "T":
        return [rotation_op(diag, 2 * np.pi / 3, c), rotation_op(z, np.pi, c)]
    if name == "Td":
        return _generators("T") + [reflection_op((1.0, -1.0, 0.0), c)]
    if name == "Th":
        return _generators("T") + [inversion_op(c)]
    if name == "O":
        return [rotation_op(z, np.pi / 2, c),
                rotation_op(diag, 2 * np.pi / 3, c)]
    if name == "Oh":
        return _generators("O") + [inversion_op(c)]
    if name in ("I", "Ih"):
        phi = (1 + np.sqrt(5)) / 2
        gens = [rotation_op((0.0, 1.0, phi), 2 * np.pi / 5, c),
                rotation_op(z, np.pi, c),
                rotation_op((1.0, 1.0, 1.0), 2 * np.pi / 3, c)]
        if name == "Ih":
            gens.append(inversion_op(c))
        return gens
    m = _NAME_RE.match(name)
    if not m:
        raise PolysymError(f"unknown group name {name!r}")
    family, n, suffix = m.group(1), int(m.group(2)), m.group(3)
    if n < 1:
        raise PolysymError(f"bad rotation order in {name!r}")
    if family == "S":
        if n % 2 or n < 4:
            raise PolysymError("S groups must have even order >= 4")
        return [rotation_op(z, 2 * np.pi / n, c, improper=True)]
    gens = [rotation_op(z, 2 * np.pi / n, c)] if n > 1 else [identity_op(c)]
    if family == "D":
        gens.append(rotation_op(x, np.pi, c))
        if suffix == "h":
            gens.append(reflection_op(z, c))
        elif suffix == "d":
            gens.append(rotation_op(z, np.pi / n, c, improper=True))
        elif suffix:
            raise PolysymError(f"unknown group name {name!r}")
    else:
        if suffix == "h":
            gens.append(reflection_op(z, c))
        elif suffix == "v":
            gens.append(reflection_op(x, c))
        elif suffix:
            raise PolysymError(f"unknown group name {name!r}")
    return gens


def generate_diagram(group: str, points: int = 3, seed: int = 0) -> Diagram:
    """Replicate a random fan polygon under the named group.

    Each operation maps the face (origin, p_1, ..., p_k); images share
    the origin hub, so the diagram is connected and every edge lies in a
    face. Internal edge count is |G| * (k + 1) for a generic domain.
    """
    if points < 2:
        raise PolysymError("fundamental domain needs at least 2 points")
    ops = named_group_operations(group)
    rng = np.random.default_rng(seed)
    # generic offsets keep the domain off mirrors/axes for any seed
    base = np.array([0.63, 0.41, 0.87])
    domain = [base + rng.uniform(0.15, 0.85, size=3) * [1.0, 0.8, 0.6]
              + 0.25 * k * np.array([0.9, 0.3, 0.2])
              for k in range(points)]

    vert_ids: dict[tuple, int] = {}
    positions: list[np.ndarray] = []

    def vid(p: np.ndarray) -> int:
        key = tuple(np.round(p, _MERGE_DECIMALS) + 0.0)
        if key not in vert_ids:
            vert_ids[key] = len(positions)
            positions.append(p)
        return vert_ids[key]

    edge_ids: dict[tuple[int, int], tuple[int, int]] = {}
    edges: list[Edge] = []

    def eid(a: int, b: int) -> tuple[int, int]:
        """Edge id and traversal sign for the ordered pair a -> b."""
        key = (min(a, b), max(a, b))
        if key not in edge_ids:
            edge_ids[key] = (len(edges), a)
            edges.append(Edge(len(edges), a, b, "internal"))
        e, tail = edge_ids[key]
        return e, 1 if tail == a else -1

    faces: list[Face] = []
    origin = vid(np.zeros(3))
    for op in ops:
        cyc = [origin] + [vid(op.matrix @ p) for p in domain]
        loop = []
        ok = True
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if a == b:  # degenerate image (domain touched a symmetry element)
                ok = False
                break
            loop.append(eid(a, b))
        if ok:
            faces.append(Face(len(faces), tuple(loop)))

    vertices = tuple(Vertex(i, tuple(map(float, p)))
                     for i, p in enumerate(positions))
    return Diagram(vertices, tuple(edges), tuple(faces))
