"""Certified finite-spectrum approximation of Hermitian matrix paths on [0, 1]."""

from .algebra import (
    CertifiedBound,
    MatPath,
    add,
    adjoint,
    constant_path,
    element_digest,
    identity_path,
    load_element,
    make_path,
    mul,
    path_from_dict,
    path_to_dict,
    refine,
    save_element,
    scalar_mul,
    shift,
    sub,
    sup_norm,
)
from .calculus import (
    PiecewiseFn,
    ResolutionReport,
    apply_fn,
    projection_continuity,
    resolution_check,
    spectral_projection,
)
from .eig import EigCurves, eig_curves, eig_hermitian, make_curves, segment_enclosure
from .errors import (
    CertificationError,
    ConvergenceError,
    DigestMismatchError,
    DomainViolationError,
    FsaError,
    InconclusiveGridError,
    NonHermitianError,
    NormTooLargeError,
    ObstructionError,
    ShapeError,
    VerificationError,
)
from .instances import (
    avoided_crossing,
    constant_diag,
    named_instance,
    random_trig,
    scalar_line,
)
from .pipeline import (
    ApproximantReport,
    ObstructionReport,
    budget_schedule,
    eigenvalue_clusters,
    finite_spectrum_approximate,
    make_partition,
    verify_report,
)
from .spectral import (
    GapCert,
    Hit,
    ObstructionCert,
    SpectrumReport,
    check_removability,
    level_gap,
    spectrum_bands,
)
from .surgery import SurgeryPlan, clip_curves, plan_surgery, reassemble, remove_level

__version__ = "0.1.0"
