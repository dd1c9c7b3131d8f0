"""Command-line interface: analyze, manipulate, export, gen, serve."""

from __future__ import annotations

import argparse
import sys
import time

from .closing import build_closing
from .diagram import Diagram, ToleranceConfig, parse_diagram, \
    serialize_diagram, validate
from .errors import DegenerateInputError, ParseError, PolysymError
from .fingerprint import FingerprintConfig, edge_symmetry, tagged_midpoints
from .generate import generate_diagram
from .pipeline import ManipulationSpec, full_pipeline, gdof_report
from .pointgroup import coincident_pairs
from .report import build_report, input_digest, preservation_record, \
    serialize_report

EXIT_IO = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3


def _tolerances(args) -> ToleranceConfig:
    return ToleranceConfig(geom_eps=args.tolerance,
                           max_rotation_order=args.max_order)


def _fingerprint(args) -> FingerprintConfig:
    return FingerprintConfig(f_ref=args.fref)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        print(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _load_diagram(path: str) -> tuple[Diagram, str]:
    text = _read(path)
    try:
        return parse_diagram(text), text
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _analysis_warnings(d: Diagram, report, tol: ToleranceConfig,
                       cfg: FingerprintConfig) -> list[str]:
    warnings = [f"{f.locus}: {f.message}" for f in report.warnings]
    mids = tagged_midpoints(d, cfg)
    eps = tol.geom_eps * mids.bbox_diagonal
    for i, j in coincident_pairs(mids.points, eps):
        ids = d.internal_edge_ids
        warnings.append(
            f"edges {ids[i]} and {ids[j]}: midpoints nearly coincide; "
            "matching may be ambiguous")
    return warnings


def cmd_analyze(args) -> int:
    d, text = _load_diagram(args.input)
    tol, cfg = _tolerances(args), _fingerprint(args)
    t0 = time.perf_counter()
    vreport = validate(d, tol)
    if vreport.errors:
        for f in vreport.errors:
            print(f"validation error: {f.locus}: {f.message}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        group, orbs = edge_symmetry(d, cfg, tol)
        sys_ = build_closing(d)
        gdof = gdof_report(d, sys_, group, orbs, tol,
                           elapsed_s=time.perf_counter() - t0)
    except DegenerateInputError as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    warnings = _analysis_warnings(d, vreport, tol, cfg)
    doc = build_report(d, group, orbs, gdof, input_digest(text), warnings,
                       elapsed_ms=(time.perf_counter() - t0) * 1e3)
    _write(args.out, serialize_report(doc))
    return 0


def cmd_manipulate(args) -> int:
    d, text = _load_diagram(args.input)
    tol, cfg = _tolerances(args), _fingerprint(args)
    scaling = {}
    for item in args.set or []:
        try:
            eid, lam = item.split("=", 1)
            scaling[int(eid)] = float(lam)
        except ValueError:
            print(f"error: --set expects edgeId=lambda, got {item!r}",
                  file=sys.stderr)
            return EXIT_PARSE
        if scaling[int(eid)] <= 0:
            print(f"error: lambda for edge {eid} must be positive",
                  file=sys.stderr)
            return EXIT_PARSE
    t0 = time.perf_counter()
    try:
        result = full_pipeline(d, ManipulationSpec(scaling), cfg, tol)
    except DegenerateInputError as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except PolysymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    doc = build_report(result.diagram_new, result.group, result.edge_orbits,
                       result.report, input_digest(text),
                       list(result.warnings),
                       elapsed_ms=(time.perf_counter() - t0) * 1e3)
    doc["preservation"] = preservation_record(result.preservation)
    _write(args.out, serialize_diagram(result.diagram_new))
    _write(args.report, serialize_report(doc))
    return 0 if result.preservation.preserved else EXIT_DOMAIN


def cmd_export(args) -> int:
    d, _ = _load_diagram(args.input)
    tol, cfg = _tolerances(args), _fingerprint(args)
    try:
        _, orbs = edge_symmetry(d, cfg, tol)
    except DegenerateInputError as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    lines = ["# polysym wireframe export"]
    ids = sorted(v.id for v in d.vertices)
    row = {vid: i + 1 for i, vid in enumerate(ids)}  # OBJ is 1-indexed
    for vid in ids:
        x, y, z = d.vertex_by_id[vid].p
        lines.append(f"v {x:.9g} {y:.9g} {z:.9g}")
    for k, orb in enumerate(orbs.orbits):
        lines.append(f"g orbit_{k}")
        for eid in orb:
            e = d.edge_by_id[eid]
            lines.append(f"l {row[e.tail]} {row[e.head]}")
    ext = [e for e in d.edges if e.kind == "external"]
    if ext:
        lines.append("g external")
        for e in ext:
            lines.append(f"l {row[e.tail]} {row[e.head]}")
    _write(args.obj, "\n".join(lines) + "\n")
    return 0


def cmd_gen(args) -> int:
    try:
        d = generate_diagram(args.group, points=args.points, seed=args.seed)
    except PolysymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _write(args.out, serialize_diagram(d))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static, tol=_tolerances(args),
                     cfg=_fingerprint(args))
    if args.input:
        from .service import get_state
        _, text = _load_diagram(args.input)
        try:
            get_state(app).load(text)
        except PolysymError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tolerance", type=float, default=1e-4,
                   help="geometric tolerance as a fraction of the bbox diagonal")
    p.add_argument("--fref", type=float, default=0.0185,
                   help="reference-length factor for edge fingerprints")
    p.add_argument("--max-order", type=int, default=12,
                   help="largest rotation order searched per axis")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="polysym",
        description="Point-group symmetry identification and preservation "
                    "for polyhedral diagrams")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="detect symmetry and report GDoF")
    p.add_argument("input")
    p.add_argument("--out", default=None, help="report path (default stdout)")
    _common_flags(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("manipulate",
                       help="scale independent edges, re-solve, verify")
    p.add_argument("input")
    p.add_argument("--set", action="append", metavar="EDGE=LAMBDA",
                   help="scaling factor for an independent edge (repeatable)")
    p.add_argument("--out", default=None, help="output diagram path")
    p.add_argument("--report", default=None, help="report path (default stdout)")
    _common_flags(p)
    p.set_defaults(fn=cmd_manipulate)

    p = sub.add_parser("export", help="write an OBJ wireframe, grouped per orbit")
    p.add_argument("input")
    p.add_argument("--obj", required=True, help="output path")
    _common_flags(p)
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("gen", help="generate a synthetic symmetric diagram")
    p.add_argument("group", help="Schoenflies name, e.g. C2v, D4h, Td, Oh")
    p.add_argument("--points", type=int, default=3,
                   help="fundamental-domain polygon size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("serve", help="run the manipulation HTTP service")
    p.add_argument("--input", default=None, help="diagram to load at startup")
    p.add_argument("--port", type=int, default=7341)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", default=None,
                   help="directory with the built UI bundle")
    _common_flags(p)
    p.set_defaults(fn=cmd_serve)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
