"""Edge fingerprints and the tagged-midpoint route to edge symmetry.

Midpoints alone cannot tell structurally different edges apart, so each
internal edge carries an integer tag hashed from its normalized length
and endpoint degrees. The edge symmetry group is the point group of the
tagged midpoint set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagram import Diagram, ToleranceConfig, edge_midpoints, vertex_degrees
from .errors import PolysymError
from .pointgroup import (OrbitPartition, PointGroup, TaggedPointSet,
                         detect_point_group, orbits)

# Guard against float noise pushing a length sitting exactly on a bin
# boundary into the next bin.
_CEIL_GUARD = 1e-9


@dataclass(frozen=True)
class FingerprintConfig:
    """Hash weights and the reference-length factor.

    The modulus 113 keeps tags in a small positive integer range; the
    weights skew the hash toward the normalized length, which is
    generally much larger than the vertex degrees.
    """

    p0: int = 113
    p1: int = 1
    p2: int = 11
    p3: int = 17
    f_ref: float = 0.0185

    def __post_init__(self):
        if self.p0 <= 1 or self.f_ref <= 0:
            raise ValueError("p0 must be > 1 and f_ref > 0")


def reference_length(d: Diagram, f_ref: float = FingerprintConfig.f_ref) -> float:
    """f_ref times the minimum edge length over all edges (both kinds)."""
    if not d.edges:
        raise PolysymError("diagram has no edges")
    return f_ref * min(d.edge_length(e.id) for e in d.edges)


def _guarded_ceil(x: float) -> int:
    return math.ceil(x - _CEIL_GUARD * max(1.0, abs(x)))


def fingerprint_hash(ceil_ratio: int, deg_a: int, deg_b: int,
                     cfg: FingerprintConfig = FingerprintConfig()) -> int:
    """Weighted-sum hash of the invariants, shifted into [1, p0].

    The raw residue can be 0, which the tag domain excludes, hence the
    +1 shift.
    """
    h = (cfg.p1 * ceil_ratio + cfg.p2 * min(deg_a, deg_b)
         + cfg.p3 * max(deg_a, deg_b)) % cfg.p0
    return h + 1


def fingerprint_edge(d: Diagram, edge_id: int,
                     cfg: FingerprintConfig = FingerprintConfig(),
                     ell_ref: float | None = None,
                     degrees: dict[int, int] | None = None) -> int:
    """Tag in [1, p0] from normalized length and endpoint degrees."""
    if ell_ref is None:
        ell_ref = reference_length(d, cfg.f_ref)
    if degrees is None:
        degrees = vertex_degrees(d)
    e = d.edge_by_id[edge_id]
    ratio = _guarded_ceil(d.edge_length(edge_id) / ell_ref)
    return fingerprint_hash(ratio, degrees[e.tail], degrees[e.head], cfg)


def tagged_midpoints(d: Diagram,
                     cfg: FingerprintConfig = FingerprintConfig()) -> TaggedPointSet:
    """One tagged item per internal edge, ascending edge id."""
    mids = edge_midpoints(d)
    if not mids:
        raise PolysymError("diagram has no internal edges")
    ell_ref = reference_length(d, cfg.f_ref)
    degrees = vertex_degrees(d)
    pts = np.array([m for _, m in mids])
    tags = np.array([fingerprint_edge(d, eid, cfg, ell_ref, degrees)
                     for eid, _ in mids], dtype=np.int64)
    return TaggedPointSet(pts, tags)


def edge_symmetry(d: Diagram, cfg: FingerprintConfig = FingerprintConfig(),
                  tol: ToleranceConfig | None = None
                  ) -> tuple[PointGroup, OrbitPartition]:
    """Edge symmetry group and edge orbits, keyed by internal edge id."""
    tol = tol or ToleranceConfig()
    s = tagged_midpoints(d, cfg)
    group = detect_point_group(s, tol)
    item_orbits = orbits(group, s, tol.geom_eps)
    ids = d.internal_edge_ids
    edge_orbits = OrbitPartition(tuple(
        tuple(ids[i] for i in orb) for orb in item_orbits.orbits))
    return group, edge_orbits


def vertex_symmetry(d: Diagram, tol: ToleranceConfig | None = None) -> PointGroup:
    """Point group of the vertex set under uniform tags."""
    tol = tol or ToleranceConfig()
    pts = d.positions
    if len(pts) < 2:
        raise PolysymError("vertex symmetry needs at least two vertices")
    s = TaggedPointSet(pts, np.ones(len(pts), dtype=np.int64))
    return detect_point_group(s, tol)
