"""Point-group symmetry identification and preservation for polyhedral
diagrams in algebraic 3D graphic statics."""

from .closing import (ClosingSystem, RrefResult, add_fixed_edges,
                      build_closing, gdof, reconstruct_geometry, rref,
                      solve_lengths)
from .diagram import (Diagram, Edge, Face, Cell, ToleranceConfig, Vec3,
                      Vertex, edge_directions, edge_midpoints,
                      geometric_center, parse_diagram, serialize_diagram,
                      validate, vertex_degrees)
from .errors import (DegenerateInputError, InconsistentSystemError,
                     ManipulationError, NotSymmetricError, ParseError,
                     PolysymError, SymmetryAssemblyError)
from .fingerprint import (FingerprintConfig, edge_symmetry, fingerprint_edge,
                          reference_length, tagged_midpoints, vertex_symmetry)
from .generate import generate_diagram, named_group_operations
from .pipeline import (AnalysisResult, GdofReport, ManipulationSpec,
                       PreservationReport, SymmetryConstraintMatrix,
                       build_symmetry_matrix, full_pipeline, gdof_report,
                       manipulate, stack_symmetric, verify_preservation)
from .pointgroup import (OrbitPartition, PointGroup, SymmetryOperation,
                         TaggedPointSet, apply_operation,
                         classify_schoenflies, compose, detect_point_group,
                         operation_matches, orbits)

__version__ = "0.1.0"
