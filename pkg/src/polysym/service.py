"""HTTP service exposing analysis and live manipulation to the companion UI.

One diagram at a time; reads run against an immutable snapshot, writes
are serialized behind a lock and advance a revision counter. A response
is only committed after the stacked system and the base-group
preservation have been re-verified.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from fastapi import Body, FastAPI, HTTPException, Request

from .closing import build_closing, reconstruct_geometry, solve_lengths
from .diagram import Diagram, ToleranceConfig, edge_midpoints, \
    geometric_center, parse_diagram, validate
from .errors import DegenerateInputError, InconsistentSystemError, \
    NotSymmetricError, ParseError, PolysymError
from .fingerprint import FingerprintConfig, edge_symmetry
from .pipeline import build_symmetry_matrix, check_baseline, gdof_report, \
    verify_preservation
from .report import build_report, input_digest, preservation_record


@dataclass
class Session:
    base: Diagram
    digest: str
    group_name: str
    group_order: int
    orbit_of: dict[int, int]
    orbit_count: int
    sys: Any
    s_matrix: Any
    report: Any
    m_sym: np.ndarray
    rhs: np.ndarray
    q_base: np.ndarray
    current: Diagram = None
    q_current: np.ndarray = None
    revision: int = 0
    analysis_cache: dict[int, dict] = field(default_factory=dict)

    def __post_init__(self):
        self.current = self.base
        self.q_current = self.q_base.copy()


class ServiceState:
    """Single-session service backend used by the HTTP handlers."""

    def __init__(self, tol: ToleranceConfig | None = None,
                 cfg: FingerprintConfig | None = None):
        self.tol = tol or ToleranceConfig()
        self.cfg = cfg or FingerprintConfig()
        self.lock = threading.Lock()
        self.session: Session | None = None

    # -- lifecycle --------------------------------------------------------

    def load(self, text: str) -> dict:
        d = parse_diagram(text)
        vreport = validate(d, self.tol)
        if vreport.errors:
            raise PolysymError("; ".join(
                f"{f.locus}: {f.message}" for f in vreport.errors))
        group, orbs = edge_symmetry(d, self.cfg, self.tol)
        sys_ = build_closing(d)
        s = build_symmetry_matrix(orbs, sys_.edge_ids)
        report = gdof_report(d, sys_, group, orbs, self.tol)
        q_base = check_baseline(d, sys_, s, self.tol)
        m_sym = np.vstack([sys_.M, s.as_array()]) if len(s) else sys_.M
        rhs = np.concatenate([sys_.t, np.zeros(len(s))])
        with self.lock:
            self.session = Session(
                base=d, digest=input_digest(text),
                group_name=group.schoenflies, group_order=group.order,
                orbit_of={e: i for i, orb in enumerate(orbs.orbits)
                          for e in orb},
                orbit_count=len(orbs.orbits),
                sys=sys_, s_matrix=s, report=report,
                m_sym=m_sym, rhs=rhs, q_base=q_base)
        return self.diagram_payload()

    def _require(self) -> Session:
        if self.session is None:
            raise HTTPException(status_code=404, detail="no diagram loaded")
        return self.session

    # -- reads --------------------------------------------------------------

    def diagram_payload(self) -> dict:
        ses = self._require()
        d = ses.current
        qmap = dict(zip(ses.sys.edge_ids, ses.q_current))
        base_q = dict(zip(ses.sys.edge_ids, ses.q_base))
        independent = set(ses.report.independent_edges_sym)
        return {
            "revision": ses.revision,
            "group": {"name": ses.group_name, "order": ses.group_order},
            "vertices": [{"id": v.id, "p": list(v.p)} for v in d.vertices],
            "edges": [{
                "id": e.id, "tail": e.tail, "head": e.head, "kind": e.kind,
                "orbit_color": ses.orbit_of.get(e.id),
                "length": qmap.get(e.id, d.edge_length(e.id)),
                "independent": e.id in independent,
            } for e in d.edges],
            "independent_edges": sorted(independent),
            "scaling": {str(e): qmap[e] / base_q[e] for e in independent},
        }

    def analysis_payload(self) -> dict:
        ses = self._require()
        if ses.revision not in ses.analysis_cache:
            t0 = time.perf_counter()
            group, orbs = edge_symmetry(ses.current, self.cfg, self.tol)
            sys_ = build_closing(ses.current)
            rep = gdof_report(ses.current, sys_, group, orbs, self.tol)
            doc = build_report(ses.current, group, orbs, rep, ses.digest, [],
                               elapsed_ms=(time.perf_counter() - t0) * 1e3)
            doc["revision"] = ses.revision
            ses.analysis_cache[ses.revision] = doc
        return ses.analysis_cache[ses.revision]

    # -- writes --------------------------------------------------------------

    def manipulate(self, scaling: dict[str, float]) -> dict:
        ses = self._require()
        with self.lock:
            if not scaling:
                payload = self.diagram_payload()
                payload["preserved"] = True
                return payload
            independent = list(ses.report.independent_edges_sym)
            parsed: dict[int, float] = {}
            for key, lam in scaling.items():
                try:
                    eid = int(key)
                    lam = float(lam)
                except (TypeError, ValueError):
                    raise HTTPException(400, detail={
                        "error": f"bad manipulation entry {key!r}",
                        "independent_edges": independent})
                if eid not in set(independent):
                    raise HTTPException(400, detail={
                        "error": f"edge {eid} is not an independent edge",
                        "independent_edges": independent})
                if not (np.isfinite(lam) and lam > 0):
                    raise HTTPException(400, detail={
                        "error": f"lambda for edge {eid} must be positive",
                        "independent_edges": independent})
                parsed[eid] = lam
            qmap = dict(zip(ses.sys.edge_ids, ses.q_current))
            assignments = {e: qmap[e] * parsed.get(e, 1.0) for e in independent}
            try:
                q_new = solve_lengths(ses.m_sym, ses.rhs, ses.sys.edge_ids,
                                      assignments, self.tol.rank_eps)
            except InconsistentSystemError as exc:
                raise HTTPException(409, detail=str(exc))
            residual = np.abs(ses.m_sym @ q_new - ses.rhs)
            eps = self.tol.geom_eps * max(ses.current.bbox_diagonal, 1e-300)
            if residual.size and residual.max() > eps:
                raise HTTPException(409, detail="baseline inconsistent")
            root = min(v.id for v in ses.current.vertices)
            d_new = reconstruct_geometry(ses.current, q_new, root,
                                         ses.current.position(root), self.tol)
            c_old = geometric_center([m for _, m in edge_midpoints(ses.current)])
            c_new = geometric_center([m for _, m in edge_midpoints(d_new)])
            d_new = d_new.translated(c_old - c_new)
            pres = verify_preservation(ses.base, d_new, self.cfg, self.tol)
            if not pres.preserved:
                raise HTTPException(500, detail={
                    "error": "manipulation would break base symmetry",
                    "preservation": preservation_record(pres)})
            ses.current = d_new
            ses.q_current = q_new
            ses.revision += 1
            payload = self.diagram_payload()
            payload["preserved"] = True
            payload["preservation"] = preservation_record(pres)
            return payload

    def reset(self) -> dict:
        ses = self._require()
        with self.lock:
            ses.current = ses.base
            ses.q_current = ses.q_base.copy()
            ses.revision = 0
            return self.diagram_payload()


def create_app(static_dir: str | None = None,
               tol: ToleranceConfig | None = None,
               cfg: FingerprintConfig | None = None) -> FastAPI:
    app = FastAPI(title="polysym manipulation service")
    state = ServiceState(tol, cfg)
    app.state.service = state

    @app.get("/api/health")
    def health():
        ses = state.session
        return {"status": "ok",
                "loaded": ses is not None,
                "revision": ses.revision if ses else None}

    @app.post("/api/load")
    async def load(request: Request):
        text = (await request.body()).decode("utf-8")
        try:
            return state.load(text)
        except ParseError as exc:
            raise HTTPException(400, detail=f"parse error: {exc}")
        except (DegenerateInputError, NotSymmetricError, PolysymError) as exc:
            raise HTTPException(422, detail=str(exc))

    @app.get("/api/diagram")
    def diagram():
        return state.diagram_payload()

    @app.get("/api/analysis")
    def analysis():
        return state.analysis_payload()

    @app.post("/api/manipulate")
    def manipulate(payload: dict[str, float] | None = Body(None)):
        return state.manipulate(payload or {})

    @app.post("/api/reset")
    def reset():
        return state.reset()

    if static_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="ui")

    return app


def get_state(app: FastAPI) -> ServiceState:
    return app.state.service
