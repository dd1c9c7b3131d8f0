import numpy as np
import pytest

from polysym.diagram import Cell, Diagram, Edge, Face, Vertex


def make_square(w: float = 1.0, h: float = 1.0) -> Diagram:
    """Quad face in the xy plane; unit square by default."""
    pts = [(0, 0, 0), (w, 0, 0), (w, h, 0), (0, h, 0)]
    return Diagram(
        tuple(Vertex(i, tuple(map(float, p))) for i, p in enumerate(pts)),
        tuple(Edge(i, i, (i + 1) % 4, "internal") for i in range(4)),
        (Face(0, ((0, 1), (1, 1), (2, 1), (3, 1))),),
    )


def make_triangle() -> Diagram:
    """Single equilateral-triangle face."""
    pts = [(np.cos(a), np.sin(a), 0.0)
           for a in (0.0, 2 * np.pi / 3, 4 * np.pi / 3)]
    return Diagram(
        tuple(Vertex(i, tuple(map(float, p))) for i, p in enumerate(pts)),
        tuple(Edge(i, i, (i + 1) % 3, "internal") for i in range(3)),
        (Face(0, ((0, 1), (1, 1), (2, 1))),),
    )


CUBE_VERTS = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
              (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
CUBE_EDGES = [(0, 1), (1, 2), (2, 3), (3, 0),
              (4, 5), (5, 6), (6, 7), (7, 4),
              (0, 4), (1, 5), (2, 6), (3, 7)]
CUBE_FACES = [
    [(0, 1), (1, 1), (2, 1), (3, 1)],
    [(4, 1), (5, 1), (6, 1), (7, 1)],
    [(0, 1), (9, 1), (4, -1), (8, -1)],
    [(1, 1), (10, 1), (5, -1), (9, -1)],
    [(2, 1), (11, 1), (6, -1), (10, -1)],
    [(3, 1), (8, 1), (7, -1), (11, -1)],
]


def make_cube() -> Diagram:
    return Diagram(
        tuple(Vertex(i, tuple(map(float, p))) for i, p in enumerate(CUBE_VERTS)),
        tuple(Edge(i, t, h, "internal") for i, (t, h) in enumerate(CUBE_EDGES)),
        tuple(Face(i, tuple(loop)) for i, loop in enumerate(CUBE_FACES)),
        (Cell(0, tuple(range(6))),),
    )


def make_double_tetrahedron() -> Diagram:
    """Two congruent generic tetrahedra sharing an apex at the inversion
    center; the footnote-5 configuration with |G| = 2."""
    base = [np.array(p, dtype=float) for p in [(3, 1, 5), (1, 4, 6), (4, 5, 7)]]
    verts = [np.zeros(3)] + base + [-p for p in base]
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1),
             (0, 4), (0, 5), (0, 6), (4, 5), (5, 6), (6, 4)]
    vcycles = [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 2, 3],
               [0, 4, 5], [0, 5, 6], [0, 6, 4], [4, 5, 6]]
    index = {(t, h): i for i, (t, h) in enumerate(edges)}

    def loop(cyc):
        out = []
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if (a, b) in index:
                out.append((index[(a, b)], 1))
            else:
                out.append((index[(b, a)], -1))
        return tuple(out)

    return Diagram(
        tuple(Vertex(i, tuple(map(float, p))) for i, p in enumerate(verts)),
        tuple(Edge(i, t, h, "internal") for i, (t, h) in enumerate(edges)),
        tuple(Face(i, loop(c)) for i, c in enumerate(vcycles)),
        (Cell(0, (0, 1, 2, 3)), Cell(1, (4, 5, 6, 7))),
    )


@pytest.fixture
def square() -> Diagram:
    return make_square()


@pytest.fixture
def rectangle() -> Diagram:
    return make_square(w=2.0, h=1.0)


@pytest.fixture
def cube() -> Diagram:
    return make_cube()


@pytest.fixture
def triangle() -> Diagram:
    return make_triangle()


@pytest.fixture
def double_tetrahedron() -> Diagram:
    return make_double_tetrahedron()
