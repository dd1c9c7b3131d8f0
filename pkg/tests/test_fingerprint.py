import numpy as np
import pytest

from polysym.diagram import Diagram, Edge, Face, Vertex, ToleranceConfig
from polysym.fingerprint import (FingerprintConfig, edge_symmetry,
                                 fingerprint_edge, fingerprint_hash,
                                 reference_length, tagged_midpoints,
                                 vertex_symmetry)
from polysym.pointgroup import operation_matches, TaggedPointSet

CFG = FingerprintConfig()
TOL = ToleranceConfig()


class TestReferenceLength:
    def test_unit_square(self, square):
        assert reference_length(square) == pytest.approx(0.0185)

    def test_min_length_two(self, square):
        scaled = square.with_positions(
            {v.id: 2.0 * np.asarray(v.p) for v in square.vertices})
        assert reference_length(scaled) == pytest.approx(0.037)

    def test_fref_one(self, square):
        assert reference_length(square, f_ref=1.0) == pytest.approx(1.0)

    def test_considers_external_edges(self, square):
        verts = square.vertices + (Vertex(4, (1.25, 0.0, 0.0)),)
        edges = square.edges + (Edge(4, 1, 4, "external"),)
        d = Diagram(verts, edges, square.faces)
        assert reference_length(d, f_ref=1.0) == pytest.approx(0.25)


class TestHash:
    # direct evaluations of the weighted-sum hash
    def test_ratio_55_degrees_2_2(self):
        assert fingerprint_hash(55, 2, 2, CFG) == 112  # (55+22+34) % 113 + 1

    def test_ratio_109_degrees_2_2(self):
        assert fingerprint_hash(109, 2, 2, CFG) == 53  # 165 % 113 = 52

    def test_ratio_54_degrees_4_6(self):
        assert fingerprint_hash(54, 4, 6, CFG) == 88  # (54+44+102) % 113 = 87

    def test_endpoint_order_symmetric(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            r, a, b = rng.integers(1, 400), rng.integers(1, 20), rng.integers(1, 20)
            assert fingerprint_hash(r, a, b, CFG) == fingerprint_hash(r, b, a, CFG)

    def test_range(self):
        for r in range(1, 300):
            assert 1 <= fingerprint_hash(r, 2, 3, CFG) <= 113


class TestFingerprintEdge:
    def test_unit_square_tag(self, square):
        # min length 1.0, ratio 1/0.0185 = 54.05 -> ceil 55, degrees (2,2)
        assert fingerprint_edge(square, 0) == 112

    def test_rectangle_tags(self, rectangle):
        # short edges ceil 55 -> 112; long edges ceil(108.1) = 109 -> 53
        assert fingerprint_edge(rectangle, 1) == 112
        assert fingerprint_edge(rectangle, 0) == 53

    def test_boundary_bins_upward(self, square):
        # a length sitting exactly on a bin edge keeps its exact ceiling
        cfg = FingerprintConfig(f_ref=0.25)  # ratio exactly 4.0
        assert fingerprint_edge(square, 0, cfg) == \
            fingerprint_hash(4, 2, 2, cfg)


class TestTaggedMidpoints:
    def test_unit_square(self, square):
        s = tagged_midpoints(square)
        assert len(s) == 4
        assert set(s.tags.tolist()) == {112}

    def test_rectangle(self, rectangle):
        s = tagged_midpoints(rectangle)
        assert s.tags.tolist() == [53, 112, 53, 112]

    def test_scale_invariance(self, rectangle):
        rng = np.random.default_rng(3)
        base = tagged_midpoints(rectangle).tags
        for _ in range(10):
            k = float(rng.uniform(0.01, 100.0))
            scaled = rectangle.with_positions(
                {v.id: k * np.asarray(v.p) for v in rectangle.vertices})
            assert tagged_midpoints(scaled).tags.tolist() == base.tolist()

    def test_order_matches_edge_ids(self, cube):
        s = tagged_midpoints(cube)
        assert len(s) == len(cube.internal_edge_ids)


class TestEdgeSymmetry:
    def test_square(self, square):
        g, part = edge_symmetry(square)
        assert (g.schoenflies, g.order) == ("D4h", 16)
        assert part.orbits == ((0, 1, 2, 3),)

    def test_rectangle(self, rectangle):
        g, part = edge_symmetry(rectangle)
        assert (g.schoenflies, g.order) == ("D2h", 8)
        assert part.orbits == ((0, 2), (1, 3))

    def test_double_tetrahedron(self, double_tetrahedron):
        g, part = edge_symmetry(double_tetrahedron)
        assert (g.schoenflies, g.order) == ("Ci", 2)
        assert len(part.orbits) == 6
        assert all(len(orb) == 2 for orb in part.orbits)

    def test_orbit_mates_share_tag_and_length(self, double_tetrahedron):
        d = double_tetrahedron
        s = tagged_midpoints(d)
        _, part = edge_symmetry(d)
        ids = d.internal_edge_ids
        tag_of = dict(zip(ids, s.tags.tolist()))
        for orb in part.orbits:
            assert len({tag_of[e] for e in orb}) == 1
            lengths = [d.edge_length(e) for e in orb]
            assert max(lengths) - min(lengths) < 1e-9


class TestVertexSymmetry:
    def test_square_corners(self, square):
        g = vertex_symmetry(square)
        assert (g.schoenflies, g.order) == ("D4h", 16)

    def test_cube_corners(self, cube):
        g = vertex_symmetry(cube)
        assert (g.schoenflies, g.order) == ("Oh", 48)

    def test_generic_tetrahedron_c1(self):
        verts = (Vertex(0, (0.0, 0.0, 0.0)), Vertex(1, (1.9, 0.2, 0.1)),
                 Vertex(2, (0.3, 1.4, 0.2)), Vertex(3, (0.5, 0.3, 2.2)))
        edges = (Edge(0, 0, 1), Edge(1, 1, 2), Edge(2, 2, 0),
                 Edge(3, 0, 3), Edge(4, 1, 3), Edge(5, 2, 3))
        faces = (Face(0, ((0, 1), (1, 1), (2, 1))),
                 Face(1, ((0, 1), (4, 1), (3, -1))),
                 Face(2, ((1, 1), (5, 1), (4, -1))),
                 Face(3, ((2, 1), (3, 1), (5, -1))))
        g = vertex_symmetry(Diagram(verts, edges, faces))
        assert (g.schoenflies, g.order) == ("C1", 1)


class TestHierarchy:
    @pytest.mark.parametrize("fixture", ["square", "rectangle", "cube",
                                         "double_tetrahedron", "triangle"])
    def test_edge_group_maps_vertices(self, fixture, request):
        d = request.getfixturevalue(fixture)
        g, _ = edge_symmetry(d)
        vset = TaggedPointSet(d.positions,
                              np.ones(len(d.vertices), dtype=np.int64))
        for op in g.operations:
            assert operation_matches(op, vset, TOL.geom_eps) is not None
