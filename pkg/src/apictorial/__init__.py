"""Apictorial jigsaw puzzle assembly from piece boundaries alone.

Pieces are compared through an integral area invariant of their boundary
curves, matched by epsilon-fits, registered by Procrustes alignment and
assembled as a minimum spanning tree of fit qualities, optionally
reweighted by consistent cycles.
"""

from .alignment import EpsilonAlignment, EpsilonFit, epsilon_fit, max_epsilon_alignment
from .assembly import (
    AssemblyConfig,
    AssemblyTree,
    ComparisonGraph,
    build_comparison_graph,
    compare_pair,
    fit_quality,
    minimum_spanning_tree,
    placement_errors,
)
from .boolean import polygon_intersection_area
from .cycles import (
    CycleGraphRecord,
    apply_cycle_reweighting,
    enumerate_cycle_graphs,
    overlap_consistency_check,
    transformation_consistency_check,
)
from .errors import (
    ApictorialError,
    CycleLimitError,
    DegenerateConfigurationError,
    InvalidInputError,
    InvalidPolygonError,
    MalformedFileError,
    NoAssemblyError,
    RadiusTooLargeError,
    ResolutionError,
    UnderdeterminedFitError,
)
from .formats import load_config, load_pieces, read_piece_file, save_pieces
from .geometry import (
    ClosedPolyline,
    RigidMotion2D,
    apply_motion,
    compose_motions,
    perimeter,
    resample_closed,
    shoelace_area,
)
from .invariant import Signature, compute_signature, invariant_at, reverse_signature
from .pipeline import AssemblyResult, assemble_full
from .puzzlegen import GroundTruthPuzzle, TabProfile, generate_rectangular_puzzle, scatter_pieces
from .registration import FitRecord, procrustes_fit, rigid_align
from .render import render_svg

__version__ = "0.1.0"
