"""Symmetry constraints over the closing system: GDoF reduction,
manipulation of independent edges, and preservation verification.

Every orbit of k equivalent edges contributes k - 1 chained equal-length
rows; stacking them under the closing system ties the solution space to
symmetric length vectors only.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .closing import ClosingSystem, build_closing, gdof, reconstruct_geometry, \
    solve_lengths
from .diagram import Diagram, ToleranceConfig, connected_components, \
    edge_midpoints, geometric_center
from .errors import ManipulationError, NotSymmetricError, PolysymError, \
    SymmetryAssemblyError
from .fingerprint import FingerprintConfig, edge_symmetry, tagged_midpoints
from .pointgroup import (OrbitPartition, PointGroup, SymmetryOperation,
                         TaggedPointSet, detect_point_group,
                         operation_matches, orbits)


@dataclass(frozen=True)
class SymmetryConstraintMatrix:
    """Sparse +1/-1 pair rows tying equal lengths within each orbit."""

    rows: tuple[tuple[int, int], ...]  # (left column, right column)
    n_columns: int

    def as_array(self) -> np.ndarray:
        s = np.zeros((len(self.rows), self.n_columns))
        for i, (l, r) in enumerate(self.rows):
            s[i, l] = 1.0
            s[i, r] = -1.0
        return s

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class GdofReport:
    group_name: str
    group_order: int
    e_int: int
    rows_of_s: int
    m_raw: int
    m_sym: int
    independent_edges_raw: tuple[int, ...]
    independent_edges_sym: tuple[int, ...]
    elapsed_s: float

    @property
    def reduction(self) -> float:
        return self.m_raw / self.m_sym


@dataclass(frozen=True)
class ManipulationSpec:
    """Positive scaling factors keyed by independent edge id; missing
    edges default to 1."""

    scaling: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for eid, lam in self.scaling.items():
            if not (np.isfinite(lam) and lam > 0):
                raise ManipulationError(
                    f"scaling factor for edge {eid} must be finite and > 0")


@dataclass(frozen=True)
class PreservationReport:
    preserved: bool
    original_order: int
    new_order: int
    original_name: str
    new_name: str
    missing: tuple[SymmetryOperation, ...]
    original_orbit_count: int
    new_orbit_count: int


@dataclass(frozen=True)
class AnalysisResult:
    group: PointGroup
    edge_orbits: OrbitPartition
    report: GdofReport
    q_new: np.ndarray
    diagram_new: Diagram
    preservation: PreservationReport
    warnings: tuple[str, ...] = ()


def build_symmetry_matrix(edge_orbits: OrbitPartition,
                          edge_ids: tuple[int, ...]) -> SymmetryConstraintMatrix:
    """Chain rows (i_j, i_{j+1}) over each orbit sorted ascending."""
    col = {e: i for i, e in enumerate(edge_ids)}
    rows: list[tuple[int, int]] = []
    for orb in edge_orbits.orbits:
        members = sorted(orb)
        for a, b in zip(members, members[1:]):
            if a not in col or b not in col:
                raise PolysymError(f"orbit references unknown edge ({a}, {b})")
            rows.append((col[a], col[b]))
    return SymmetryConstraintMatrix(tuple(rows), len(edge_ids))


def stack_symmetric(m: np.ndarray, s: SymmetryConstraintMatrix) -> np.ndarray:
    """M_sym: symmetry rows below the closing rows."""
    m = np.atleast_2d(m)
    if s.n_columns != m.shape[1]:
        raise PolysymError("column count mismatch between M and S")
    if not len(s):
        return m
    return np.vstack([m, s.as_array()])


def gdof_report(d: Diagram, sys: ClosingSystem, group: PointGroup,
                edge_orbits: OrbitPartition,
                tol: ToleranceConfig | None = None,
                elapsed_s: float = 0.0) -> GdofReport:
    """Raw and symmetry-constrained GDoF, with the reduction bound as a
    self-check (a violation signals a detection or assembly bug)."""
    tol = tol or ToleranceConfig()
    e_int = len(sys.edge_ids)
    s = build_symmetry_matrix(edge_orbits, sys.edge_ids)
    if len(s) != e_int - len(edge_orbits):
        raise SymmetryAssemblyError(
            f"rows(S) = {len(s)} but e_int - orbits = {e_int - len(edge_orbits)}")
    m_raw, ind_raw = gdof(sys.M, sys.edge_ids, tol.rank_eps)
    m_sym, ind_sym = gdof(stack_symmetric(sys.M, s), sys.edge_ids, tol.rank_eps)
    if m_sym <= 0:
        raise SymmetryAssemblyError(
            "constrained system admits no free edge; geometric noise above "
            "rank_eps makes the closing rows look independent, so analyze "
            "noisy inputs with rank_eps at the noise floor")
    reduction = m_raw / m_sym
    if not (1.0 - 1e-12 <= reduction <= group.order + 1e-12):
        raise SymmetryAssemblyError(
            f"reduction {reduction:.3g} outside [1, |G|={group.order}]")
    return GdofReport(group.schoenflies, group.order, e_int, len(s),
                      m_raw, m_sym, tuple(ind_raw), tuple(ind_sym), elapsed_s)


def _msym_and_rhs(sys: ClosingSystem, s: SymmetryConstraintMatrix
                  ) -> tuple[np.ndarray, np.ndarray]:
    m_sym = stack_symmetric(sys.M, s)
    rhs = np.concatenate([sys.t, np.zeros(len(s))])
    return m_sym, rhs


def check_baseline(d: Diagram, sys: ClosingSystem,
                   s: SymmetryConstraintMatrix,
                   tol: ToleranceConfig | None = None) -> np.ndarray:
    """Current lengths must satisfy the constrained stacked system."""
    tol = tol or ToleranceConfig()
    q0 = d.internal_lengths()
    m_sym, rhs = _msym_and_rhs(sys, s)
    residual = np.abs(m_sym @ q0 - rhs)
    eps = tol.geom_eps * max(d.bbox_diagonal, 1e-300)
    if residual.size and residual.max() > eps:
        raise NotSymmetricError(
            f"diagram is not symmetric as claimed: constraint residual "
            f"{residual.max():.3g} exceeds {eps:.3g}")
    return q0


def manipulate(d: Diagram, sys: ClosingSystem, s: SymmetryConstraintMatrix,
               report: GdofReport, q0: np.ndarray, spec: ManipulationSpec,
               tol: ToleranceConfig | None = None
               ) -> tuple[np.ndarray, Diagram, list[str]]:
    """Scale independent edges, re-solve the dependents, rebuild geometry.

    The rebuilt diagram is translated so its midpoint centroid matches the
    input's, which keeps identity manipulations bytewise stable.
    """
    tol = tol or ToleranceConfig()
    independent = set(report.independent_edges_sym)
    bad = [e for e in spec.scaling if e not in independent]
    if bad:
        raise ManipulationError(
            f"edges {sorted(bad)} are not independent; valid ids: "
            f"{sorted(independent)}")
    qmap = dict(zip(sys.edge_ids, q0))
    assignments = {
        eid: qmap[eid] * spec.scaling.get(eid, 1.0)
        for eid in report.independent_edges_sym
    }
    m_sym, rhs = _msym_and_rhs(sys, s)
    q_new = solve_lengths(m_sym, rhs, sys.edge_ids, assignments, tol.rank_eps)
    warnings = [
        f"edge {eid}: non-positive solved length {q:.3g}"
        for eid, q in zip(sys.edge_ids, q_new) if q <= 0
    ]
    root = min(v.id for v in d.vertices)
    d_new = reconstruct_geometry(d, q_new, root, d.position(root), tol)
    center_old = geometric_center([m for _, m in edge_midpoints(d)])
    center_new = geometric_center([m for _, m in edge_midpoints(d_new)])
    d_new = d_new.translated(center_old - center_new)
    return q_new, d_new, warnings


def verify_preservation(d: Diagram, d_new: Diagram,
                        cfg: FingerprintConfig = FingerprintConfig(),
                        tol: ToleranceConfig | None = None) -> PreservationReport:
    """Does the new geometry still hold every edge symmetry of the old?

    Operations are compared by linear part about each set's own centroid;
    tags are re-evaluated on the new geometry. Group growth is reported,
    never an error.
    """
    tol = tol or ToleranceConfig()
    if len(connected_components(d)) != 1:
        raise PolysymError("preservation check requires a connected diagram")
    group, old_orbits = edge_symmetry(d, cfg, tol)

    s_new = tagged_midpoints(d_new, cfg)
    recentered = TaggedPointSet(s_new.points - s_new.centroid, s_new.tags)

    missing = []
    for op in group.operations:
        shifted = SymmetryOperation(op.kind, (0.0, 0.0, 0.0), op.axis, op.angle)
        if operation_matches(shifted, recentered, tol.geom_eps) is None:
            missing.append(op)

    new_group = detect_point_group(s_new, tol)
    new_orbits = orbits(new_group, s_new, tol.geom_eps)
    return PreservationReport(
        preserved=not missing,
        original_order=group.order,
        new_order=new_group.order,
        original_name=group.schoenflies,
        new_name=new_group.schoenflies,
        missing=tuple(missing),
        original_orbit_count=len(old_orbits),
        new_orbit_count=len(new_orbits),
    )


def full_pipeline(d: Diagram, spec: ManipulationSpec,
                  cfg: FingerprintConfig = FingerprintConfig(),
                  tol: ToleranceConfig | None = None) -> AnalysisResult:
    """Analyze, constrain, manipulate, reconstruct, verify."""
    tol = tol or ToleranceConfig()
    if len(connected_components(d)) != 1:
        raise PolysymError("pipeline requires a connected diagram")
    t0 = time.perf_counter()
    group, edge_orbits = edge_symmetry(d, cfg, tol)
    sys = build_closing(d)
    s = build_symmetry_matrix(edge_orbits, sys.edge_ids)
    report = gdof_report(d, sys, group, edge_orbits, tol,
                         elapsed_s=time.perf_counter() - t0)
    q0 = check_baseline(d, sys, s, tol)
    q_new, d_new, warnings = manipulate(d, sys, s, report, q0, spec, tol)
    preservation = verify_preservation(d, d_new, cfg, tol)
    if not preservation.preserved:
        raise SymmetryAssemblyError(
            "symmetry was not preserved by a constrained manipulation; "
            f"missing: {[op.describe() for op in preservation.missing]}")
    return AnalysisResult(group, edge_orbits, report, q_new, d_new,
                          preservation, tuple(warnings))
