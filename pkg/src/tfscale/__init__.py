"""Tight scaling of finite frames via diagram vectors."""
from .config import DEFAULT, Config
from .cones import (
    ViolationReport,
    cone_violation_r2,
    cone_violation_search,
    export_cone_samples,
    perturbed_frame,
    two_bases_frame,
    violation_certificate,
)
from .diagram import (
    DiagramVector,
    diagram_gramian,
    diagram_inner,
    diagram_matrix,
    diagram_sum,
    diagram_vector,
    is_tight_by_diagram,
)
from .errors import FrameError
from .frames import Field, Frame, check_tight, frame_operator, gramian, scale_frame
from .io import emit_frame, parse_frame
from .kernel import hull_membership, null_space, perceptron_witness, sym_eigen
from .planar import PlanarDecomposition, planar_scaling, property_q, rotate_j, solve_triple
from .scaling import (
    Certificate,
    CertificateKind,
    ScalingResult,
    Verdict,
    decide_scaling,
    normalize_scalars,
    solution_region,
    validate_certificate,
    verify_scaling,
)

__all__ = [name for name in dir() if not name.startswith("_")]
