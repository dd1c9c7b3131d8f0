import json

import numpy as np
import pytest

from polysym.diagram import (Diagram, Edge, Face, Vertex, ToleranceConfig,
                             connected_components, edge_directions,
                             edge_midpoints, face_closure_residual,
                             geometric_center, parse_diagram,
                             serialize_diagram, validate, vertex_degrees)
from polysym.errors import ParseError, PolysymError

from conftest import make_square

SQUARE_DOC = json.dumps({
    "vertices": [{"id": i, "p": p} for i, p in enumerate(
        [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]])],
    "edges": [{"id": i, "tail": i, "head": (i + 1) % 4, "kind": "internal"}
              for i in range(4)],
    "faces": [{"id": 0, "loop": [[0, 1], [1, 1], [2, 1], [3, 1]]}],
})


class TestParse:
    def test_unit_square_counts(self):
        d = parse_diagram(SQUARE_DOC)
        assert len(d.vertices) == 4
        assert len(d.edges) == 4
        assert len(d.faces) == 1
        assert len(d.internal_edge_ids) == 4

    def test_cube_counts(self, cube):
        d = parse_diagram(serialize_diagram(cube))
        assert (len(d.vertices), len(d.edges), len(d.faces), len(d.cells)) \
            == (8, 12, 6, 1)
        assert len(d.internal_edge_ids) == 12

    def test_non_closing_face_cycle(self):
        doc = json.loads(SQUARE_DOC)
        # e0 = (0,1) and e2 = (2,3) share no vertex
        doc["faces"] = [{"id": 0, "loop": [[0, 1], [2, 1]]}]
        with pytest.raises(ParseError, match="non-closing face cycle"):
            parse_diagram(json.dumps(doc))

    def test_dangling_vertex_reference(self):
        doc = json.loads(SQUARE_DOC)
        doc["edges"][0]["head"] = 99
        with pytest.raises(ParseError, match="dangling"):
            parse_diagram(json.dumps(doc))

    def test_dangling_edge_reference(self):
        doc = json.loads(SQUARE_DOC)
        doc["faces"][0]["loop"][0][0] = 99
        with pytest.raises(ParseError, match="dangling edge"):
            parse_diagram(json.dumps(doc))

    def test_duplicate_id(self):
        doc = json.loads(SQUARE_DOC)
        doc["vertices"][1]["id"] = 0
        with pytest.raises(ParseError, match="duplicate"):
            parse_diagram(json.dumps(doc))

    def test_malformed_json(self):
        with pytest.raises(ParseError, match="malformed"):
            parse_diagram("{not json")

    def test_internal_edge_without_face(self):
        doc = json.loads(SQUARE_DOC)
        doc["edges"].append({"id": 4, "tail": 0, "head": 2, "kind": "internal"})
        with pytest.raises(ParseError, match="not referenced by any face"):
            parse_diagram(json.dumps(doc))

    def test_external_edge_needs_no_face(self):
        doc = json.loads(SQUARE_DOC)
        doc["vertices"].append({"id": 4, "p": [2, 0, 0]})
        doc["edges"].append({"id": 4, "tail": 1, "head": 4, "kind": "external"})
        d = parse_diagram(json.dumps(doc))
        assert d.internal_edge_ids == (0, 1, 2, 3)

    def test_coincident_endpoints_rejected(self):
        doc = json.loads(SQUARE_DOC)
        doc["vertices"][1]["p"] = [0, 0, 0]
        with pytest.raises(ParseError, match="zero-length"):
            parse_diagram(json.dumps(doc))

    def test_round_trip(self, cube):
        assert parse_diagram(serialize_diagram(cube)) == cube

    def test_round_trip_square(self, square):
        assert parse_diagram(serialize_diagram(square)) == square


class TestValidate:
    def test_unit_square_clean(self, square):
        rep = validate(square)
        assert rep.connected
        assert rep.max_closure_residual == 0.0
        assert not rep.errors

    def test_two_disjoint_squares(self):
        a = make_square()
        verts = list(a.vertices) + [
            Vertex(v.id + 4, (v.p[0] + 5.0, v.p[1], v.p[2])) for v in a.vertices]
        edges = list(a.edges) + [
            Edge(e.id + 4, e.tail + 4, e.head + 4, "internal") for e in a.edges]
        faces = list(a.faces) + [
            Face(1, tuple((eid + 4, s) for eid, s in a.faces[0].loop))]
        d = Diagram(tuple(verts), tuple(edges), tuple(faces))
        rep = validate(d)
        assert not rep.connected
        assert len(connected_components(d)) == 2

    def test_closure_telescopes_even_when_displaced(self):
        # Face loops are vertex-id cycles, so the signed edge-vector sum
        # telescopes to zero no matter how vertices move.
        d = make_square()
        moved = d.with_positions({
            0: np.array([0.0, 0.0, 0.0]), 1: np.array([1.0, 0.0, 0.0]),
            2: np.array([1.0, 1.0, 0.0]), 3: np.array([0.1, 1.0, 0.0])})
        assert face_closure_residual(moved, moved.faces[0]) < 1e-12

    def test_closure_residual_with_stale_lengths(self, square):
        # Overriding lengths is how a candidate q is checked: q=(2,1,1,1)
        # leaves a gap of exactly (1,0,0).
        r = face_closure_residual(square, square.faces[0],
                                  {0: 2.0, 1: 1.0, 2: 1.0, 3: 1.0})
        assert r == pytest.approx(1.0)

    def test_zero_length_reported_at_tolerance(self, square):
        d = square.with_positions({
            0: np.array([0.0, 0.0, 0.0]), 1: np.array([1e-6, 0.0, 0.0]),
            2: np.array([1.0, 1.0, 0.0]), 3: np.array([0.0, 1.0, 0.0])})
        rep = validate(d, ToleranceConfig(geom_eps=1e-2))
        assert any(f.code == "zero_length_edge" for f in rep.errors)

    def test_non_planar_face_is_warning(self):
        d = make_square()
        lifted = d.with_positions({
            0: np.array([0.0, 0.0, 0.0]), 1: np.array([1.0, 0.0, 0.0]),
            2: np.array([1.0, 1.0, 0.3]), 3: np.array([0.0, 1.0, 0.0])})
        rep = validate(lifted)
        assert any(f.code == "non_planar_face" for f in rep.warnings)
        assert not rep.errors


class TestGeometricCenter:
    def test_unit_square_corners(self, square):
        c = geometric_center([np.asarray(v.p) for v in square.vertices])
        assert np.allclose(c, [0.5, 0.5, 0.0])

    def test_single_point(self):
        p = np.array([3.0, -2.0, 7.0])
        assert np.allclose(geometric_center([p]), p)

    def test_centered_cube(self):
        pts = np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1)
                        for z in (-1, 1)], dtype=float)
        assert np.allclose(geometric_center(pts), [0, 0, 0])

    def test_empty_list_raises(self):
        with pytest.raises(PolysymError):
            geometric_center([])

    def test_translation_equivariance(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            pts = rng.normal(size=(rng.integers(1, 20), 3))
            t = rng.normal(size=3)
            assert np.allclose(geometric_center(pts + t),
                               geometric_center(pts) + t, atol=1e-12)


class TestDegrees:
    def test_square_all_two(self, square):
        assert set(vertex_degrees(square).values()) == {2}

    def test_cube_all_three(self, cube):
        assert set(vertex_degrees(cube).values()) == {3}

    def test_double_tetrahedron_apex(self, double_tetrahedron):
        deg = vertex_degrees(double_tetrahedron)
        assert deg[0] == 6
        assert all(deg[v] == 3 for v in range(1, 7))

    def test_counts_external_edges(self):
        doc = json.loads(SQUARE_DOC)
        doc["vertices"].append({"id": 4, "p": [2, 0, 0]})
        doc["edges"].append({"id": 4, "tail": 1, "head": 4, "kind": "external"})
        deg = vertex_degrees(parse_diagram(json.dumps(doc)))
        assert deg[1] == 3 and deg[4] == 1

    def test_handshake_identity(self):
        rng = np.random.default_rng(3)
        for seed in range(5):
            from polysym.generate import generate_diagram
            d = generate_diagram("C2v", points=3, seed=seed)
            assert sum(vertex_degrees(d).values()) == 2 * len(d.edges)


class TestMidpointsAndDirections:
    def test_square_midpoints(self, square):
        mids = edge_midpoints(square)
        assert [eid for eid, _ in mids] == [0, 1, 2, 3]
        expect = [(0.5, 0, 0), (1, 0.5, 0), (0.5, 1, 0), (0, 0.5, 0)]
        for (_, m), want in zip(mids, expect):
            assert np.allclose(m, want)

    def test_single_edge_with_pillow_face(self):
        # a lone internal edge carried by a degenerate two-entry face
        d = Diagram(
            (Vertex(0, (0.0, 0.0, 0.0)), Vertex(1, (2.0, 0.0, 0.0))),
            (Edge(0, 0, 1, "internal"),),
            (Face(0, ((0, 1), (0, -1))),),
        )
        assert np.allclose(edge_midpoints(d)[0][1], [1, 0, 0])

    def test_external_edges_excluded(self):
        doc = json.loads(SQUARE_DOC)
        doc["vertices"].append({"id": 4, "p": [2, 0, 0]})
        doc["edges"].append({"id": 4, "tail": 1, "head": 4, "kind": "external"})
        mids = edge_midpoints(parse_diagram(json.dumps(doc)))
        assert [eid for eid, _ in mids] == [0, 1, 2, 3]

    def test_directions(self):
        d = Diagram(
            (Vertex(0, (0.0, 0.0, 0.0)), Vertex(1, (2.0, 0.0, 0.0)),
             Vertex(2, (1.0, 1.0, 0.0))),
            (Edge(0, 0, 1), Edge(1, 1, 2), Edge(2, 2, 0)),
            (Face(0, ((0, 1), (1, 1), (2, 1))),),
        )
        dirs = edge_directions(d)
        assert np.allclose(dirs[0], [1, 0, 0])
        for v in dirs.values():
            assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)

    def test_diagonal_direction(self):
        d = Diagram(
            (Vertex(0, (0.0, 0.0, 0.0)), Vertex(1, (1.0, 1.0, 0.0))),
            (Edge(0, 0, 1, "internal"),),
            (Face(0, ((0, 1), (0, -1))),),
        )
        assert np.allclose(edge_directions(d)[0],
                           [np.sqrt(2) / 2, np.sqrt(2) / 2, 0])

    def test_midpoint_count_matches_e_int(self, cube):
        assert len(edge_midpoints(cube)) == len(cube.internal_edge_ids) == 12
