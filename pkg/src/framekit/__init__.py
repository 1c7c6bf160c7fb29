"""Frames, canonical duals and Riesz-type classification of vector sequences.

Finite sequences are handled numerically through their synthesis matrix.
Structured infinite families (weighted orthonormal families and the anchored
family) are classified exactly from their per-index masses and probed by
finite-section studies.
"""

__version__ = "0.1.0"

__all__ = [
    "AnchoredONB",
    "ConsistencyError",
    "DEFAULT_TOL",
    "DegenerateFrameError",
    "FiniteSequence",
    "FramekitError",
    "InputError",
    "NotMinimalError",
    "ResourceError",
    "Tolerance",
    "TruncationPlan",
    "UnsupportedFamilyError",
    "ValidationError",
    "WeightedONB",
    "assemble",
    "canonical_dual",
    "classify_finite",
    "classify_structured",
    "domain_profile",
    "exactness_probe",
    "invertibility",
    "load_spec",
    "loads_spec",
    "minimal_norm_coefficients",
    "reconcile",
    "restricted_bundle",
    "run_study",
    "trend",
    "truncate",
]

from .errors import (  # noqa: E402
    ConsistencyError,
    DegenerateFrameError,
    FramekitError,
    InputError,
    NotMinimalError,
    ResourceError,
    UnsupportedFamilyError,
    ValidationError,
)
from .numkernel import DEFAULT_TOL, Tolerance  # noqa: E402
from .sequences import (  # noqa: E402
    AnchoredONB,
    FiniteSequence,
    TruncationPlan,
    WeightedONB,
    load_spec,
    loads_spec,
    truncate,
)
from .frameops import assemble, domain_profile, restricted_bundle  # noqa: E402
from .classify import classify_finite, classify_structured, invertibility  # noqa: E402
from .duality import canonical_dual, exactness_probe, minimal_norm_coefficients  # noqa: E402
from .truncation import reconcile, run_study, trend  # noqa: E402
