"""Analysis report document: a serializable mirror of the GDoF results.

The document is deterministic for identical inputs except for the
elapsed-time field; orbit color indices run from 0 in discovery order.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .diagram import Diagram
from .pipeline import GdofReport
from .pointgroup import OrbitPartition, PointGroup

SCHEMA_VERSION = 1


def input_digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def operation_record(op) -> dict[str, Any]:
    return {
        "kind": op.kind,
        "axis": list(op.axis) if op.axis is not None else None,
        "angle": op.angle,
        "center": list(op.center),
    }


def build_report(d: Diagram, group: PointGroup, edge_orbits: OrbitPartition,
                 gdof: GdofReport, digest: str, warnings: list[str],
                 elapsed_ms: float) -> dict[str, Any]:
    orbit_docs = []
    for color, orb in enumerate(edge_orbits.orbits):
        lengths = [d.edge_length(e) for e in orb]
        orbit_docs.append({
            "color": color,
            "edges": list(orb),
            "length_range": [min(lengths), max(lengths)],
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "input_digest": digest,
        "group": {
            "name": group.schoenflies,
            "order": group.order,
            "operations": [operation_record(op) for op in group.operations],
        },
        "orbits": orbit_docs,
        "gdof": {
            "e_int": gdof.e_int,
            "rows_of_s": gdof.rows_of_s,
            "m_raw": gdof.m_raw,
            "m_sym": gdof.m_sym,
            "reduction": gdof.reduction,
            "independent_edges_raw": list(gdof.independent_edges_raw),
            "independent_edges_sym": list(gdof.independent_edges_sym),
        },
        "warnings": list(warnings),
        "elapsed_ms": elapsed_ms,
    }


def serialize_report(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def preservation_record(p) -> dict[str, Any]:
    return {
        "preserved": p.preserved,
        "original_group": p.original_name,
        "original_order": p.original_order,
        "new_group": p.new_name,
        "new_order": p.new_order,
        "missing_operations": [operation_record(op) for op in p.missing],
        "original_orbit_count": p.original_orbit_count,
        "new_orbit_count": p.new_orbit_count,
    }
