import json

import numpy as np
import pytest

from polysym.closing import build_closing, gdof
from polysym.errors import PolysymError
from polysym.fingerprint import edge_symmetry
from polysym.pipeline import gdof_report
from polysym.pointgroup import TaggedPointSet
from polysym.report import build_report, input_digest, serialize_report


class TestReportDocument:
    def _doc(self, d):
        group, orbs = edge_symmetry(d)
        sys = build_closing(d)
        rep = gdof_report(d, sys, group, orbs)
        return build_report(d, group, orbs, rep, input_digest("x"), [], 1.5)

    def test_round_trips_losslessly(self, cube):
        doc = self._doc(cube)
        assert json.loads(serialize_report(doc)) == doc

    def test_orbit_colors_consecutive(self, rectangle):
        doc = self._doc(rectangle)
        assert [o["color"] for o in doc["orbits"]] == [0, 1]

    def test_orbit_length_ranges(self, rectangle):
        doc = self._doc(rectangle)
        ranges = {tuple(o["edges"]): o["length_range"] for o in doc["orbits"]}
        assert ranges[(0, 2)] == [2.0, 2.0]
        assert ranges[(1, 3)] == [1.0, 1.0]

    def test_digest_stable(self):
        assert input_digest("abc") == input_digest("abc")
        assert input_digest("abc") != input_digest("abd")
        assert input_digest("abc").startswith("sha256:")


class TestRowMonotonicity:
    def test_gdof_never_increases_with_added_rows(self, cube):
        # stacking any rows onto the system can only shrink the solution
        # space
        sys = build_closing(cube)
        rng = np.random.default_rng(19)
        m_prev, _ = gdof(sys.A, sys.edge_ids)
        mat = sys.A
        for _ in range(6):
            extra = rng.normal(size=(1, mat.shape[1]))
            mat = np.vstack([mat, extra])
            m_now, _ = gdof(mat, sys.edge_ids)
            assert m_now <= m_prev
            m_prev = m_now


class TestTagDomain:
    def test_tags_outside_range_rejected(self):
        pts = np.zeros((2, 3))
        pts[1, 0] = 1.0
        with pytest.raises(PolysymError, match=r"\[1, 113\]"):
            TaggedPointSet(pts, np.array([0, 5], dtype=np.int64))
        with pytest.raises(PolysymError, match=r"\[1, 113\]"):
            TaggedPointSet(pts, np.array([1, 114], dtype=np.int64))

    def test_fingerprints_stay_in_domain(self, cube, rectangle):
        from polysym.fingerprint import tagged_midpoints
        for d in (cube, rectangle):
            tags = tagged_midpoints(d).tags
            assert tags.min() >= 1 and tags.max() <= 113
