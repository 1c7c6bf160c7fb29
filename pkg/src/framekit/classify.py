"""Frame bounds, sequence classifications and the invertibility taxonomy.

Bounds are reported in squared form: ``A`` and ``B`` are the lower and upper
frame bounds, ``A_prime`` the Riesz-Fischer constant in
``A' ||c||^2 <= ||D c||^2``. An unbounded quantity is ``math.inf`` internally
and the string ``"inf"`` in serialized reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import numkernel as nk
from .frameops import domain_profile, weight_extrema
from .errors import UnsupportedFamilyError
from .sequences import AnchoredONB, WeightedONB

FLAG_NAMES = (
    "is_bessel",
    "is_frame",
    "is_lower_frame",
    "is_riesz_fischer",
    "is_riesz_basis",
    "is_complete",
    "is_minimal",
    "is_omega_independent",
    "is_exact",
)


@dataclass(frozen=True)
class ClassificationReport:
    bessel_bound: Optional[float]
    lower_frame_bound: Optional[float]
    riesz_fischer_bound: Optional[float]
    is_bessel: Optional[bool]
    is_frame: Optional[bool]
    is_lower_frame: Optional[bool]
    is_riesz_fischer: Optional[bool]
    is_riesz_basis: Optional[bool]
    is_complete: Optional[bool]
    is_minimal: Optional[bool]
    is_omega_independent: Optional[bool]
    is_exact: Optional[bool]
    provenance: str
    tol: nk.Tolerance
    truncation: Optional[int] = None
    notes: Tuple[str, ...] = ()

    @property
    def flags(self):
        return {name: getattr(self, name) for name in FLAG_NAMES}

    @property
    def resolved(self):
        return self.provenance != "analytic: unresolved"

    def as_dict(self):
        return {
            "provenance": self.provenance,
            "truncation": self.truncation,
            "bounds": {
                "A": self.lower_frame_bound,
                "B": self.bessel_bound,
                "A_prime": self.riesz_fischer_bound,
            },
            "flags": self.flags,
            "tol": self.tol.as_dict(),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class InvertibilityVerdict:
    bb: bool
    bb_constant: float
    injective: bool
    surjective: bool
    closed_range: bool
    BIR: bool
    BI: bool
    rank: int

    def as_dict(self):
        return {
            "bb": self.bb,
            "bb_constant": self.bb_constant,
            "injective": self.injective,
            "surjective": self.surjective,
            "closed_range": self.closed_range,
            "BIR": self.BIR,
            "BI": self.BI,
            "rank": self.rank,
        }


def invertibility(m, tol=nk.DEFAULT_TOL):
    """Finite-scale (bb), (BIR) and (BI) for the map ``x -> M x``.

    Every finite-dimensional range is closed, so (BIR) reduces to injectivity
    and (BI) to bijectivity.
    """
    a = nk.as_cmatrix(m)
    rows, cols = a.shape
    r = nk.numeric_rank(a, tol)
    c = nk.sigma_min_full(a, tol)
    injective = r == cols
    surjective = r == rows
    closed_range = True
    return InvertibilityVerdict(
        bb=c > 0,
        bb_constant=c,
        injective=injective,
        surjective=surjective,
        closed_range=closed_range,
        BIR=injective and closed_range,
        BI=injective and surjective,
        rank=r,
    )


def _distance_to_span_of_others(D, j, tol):
    others = np.delete(D, j, axis=1)
    v = D[:, j]
    if others.shape[1] == 0:
        return float(np.linalg.norm(v))
    Q, _ = nk.range_basis(others, tol)
    return float(np.linalg.norm(v - Q @ (Q.conj().T @ v)))


def dependent_column(bundle):
    """First 1-based element lying in the span of the others, or None."""
    D = bundle.D
    cut = bundle.tol.cutoff(nk.sigma_max(D)) if D.size else bundle.tol.abs_floor
    for j in range(bundle.length):
        if _distance_to_span_of_others(D, j, bundle.tol) <= cut:
            return j + 1
    return None


def is_exact_finite(bundle):
    """Removing any element shrinks the span."""
    D, tol, r = bundle.D, bundle.tol, bundle.rank
    for j in range(bundle.length):
        if nk.numeric_rank(np.delete(D, j, axis=1), tol) >= r:
            return False
    return True


def classify_finite(bundle, truncation=None):
    n, m, tol = bundle.space_dim, bundle.length, bundle.tol
    s = bundle.singular_values
    B = float(s[0]) ** 2 if s.size else 0.0
    a_lo = nk.sigma_min_full(bundle.C, tol)
    A = a_lo**2
    A_prime = nk.sigma_min_full(bundle.D, tol) ** 2
    r = bundle.rank
    complete = r == n
    minimal = dependent_column(bundle) is None
    lower = A > 0
    rf = A_prime > 0
    return ClassificationReport(
        bessel_bound=B,
        lower_frame_bound=A,
        riesz_fischer_bound=A_prime,
        is_bessel=True,
        is_frame=lower,
        is_lower_frame=lower,
        is_riesz_fischer=rf,
        is_riesz_basis=complete and rf,
        is_complete=complete,
        is_minimal=minimal,
        is_omega_independent=r == m,
        is_exact=is_exact_finite(bundle),
        provenance="numeric" if truncation is None else f"numeric-at-truncation N={truncation}",
        tol=tol,
        truncation=truncation,
        notes=(
            "finite scale: every sequence is Bessel and every range is closed",
            "finite scale: minimal, omega-independent and exact coincide with a trivial kernel of D",
            f"numerical rank {r} of D ({n} x {m}) under cutoff rule rank_rel={tol.rank_rel:g}, "
            f"abs_floor={tol.abs_floor:g}",
        ),
    )


def classify_structured(s, profile=None, tol=nk.DEFAULT_TOL):
    if isinstance(s, AnchoredONB):
        return ClassificationReport(
            None, None, None, *([None] * len(FLAG_NAMES)),
            provenance="analytic: unresolved",
            tol=tol,
            notes=("anchored family: classification is empirical only, see the truncation study",),
        )
    if not isinstance(s, WeightedONB):
        raise UnsupportedFamilyError(f"no analytic classification for {type(s).__name__}")
    if profile is None:
        profile = domain_profile(s)
    ext = profile.extrema
    A = ext.inf_finite
    B = ext.sup
    injective = s.sigma.is_injective()
    wext = weight_extrema(s.weights)
    A_prime = wext.inf_finite if injective else 0.0
    no_zero_weight = wext.all_positive
    complete = ext.all_positive
    lower = A > 0
    bessel = math.isfinite(B)
    rf = injective and A_prime > 0
    minimal = injective and no_zero_weight
    notes = [
        "lower bound: infimum of the finite masses W_k (indices with W_k = inf lie outside dom C)",
        "upper bound: supremum of all masses W_k",
        f"index map injective: {injective}; Riesz-Fischer constant is inf |w_i|^2 when injective",
    ]
    if math.isinf(A):
        notes.append("no basis index has finite mass: dom C = {0} and the lower bound holds vacuously")
    return ClassificationReport(
        bessel_bound=B,
        lower_frame_bound=A,
        riesz_fischer_bound=A_prime,
        is_bessel=bessel,
        is_frame=bessel and lower,
        is_lower_frame=lower,
        is_riesz_fischer=rf,
        is_riesz_basis=complete and rf and bessel,
        is_complete=complete,
        is_minimal=minimal,
        is_omega_independent=minimal,
        is_exact=minimal,
        provenance="analytic",
        tol=tol,
        notes=tuple(notes),
    )
