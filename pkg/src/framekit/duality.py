"""Canonical duals, reconstruction, pseudo-inverses and biorthogonal systems.

Every inverse is taken in coordinates of an orthonormal basis ``Q`` of the
span of the sequence, where the generalized frame operator ``Q^H S Q`` is
positive definite. Lifting back gives ``Gamma^{-1} = Q (Q^H S Q)^{-1} Q^H``.
At finite scale the domain of the analysis operator is the whole space, so
the projection onto ``H_psi`` is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import numkernel as nk
from .classify import dependent_column
from .errors import ConsistencyError, DegenerateFrameError, InputError, NotMinimalError
from .sequences import FiniteSequence

RECONSTRUCTION_RTOL = 1e-9
PSEUDO_INVERSE_RTOL = 1e-10
PYTHAGORAS_RTOL = 1e-9
BIORTHOGONAL_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class DualSystem:
    duals: FiniteSequence
    gamma_inv_on_span: np.ndarray
    span_basis: np.ndarray
    lower_bound_on_span: float
    residual: float

    @property
    def matrix(self):
        return self.duals.matrix

    def gamma_inv(self):
        """``Gamma^{-1}`` as an ``n x n`` matrix vanishing on the orthogonal complement of the span."""
        Q = self.span_basis
        return Q @ self.gamma_inv_on_span @ Q.conj().T

    def as_dict(self):
        return {
            "duals": self.duals.matrix,
            "lower_bound_on_span": self.lower_bound_on_span,
            "residual": self.residual,
        }


def _scale(*arrays):
    return max([1.0] + [float(np.max(np.abs(a))) for a in arrays if np.size(a)])


def canonical_dual(bundle):
    """``psi~_i = Gamma^{-1} psi_i``, computed from the span-coordinate frame operator.

    With ``R = Q^H D`` the span-coordinate operator is ``R R^H``. Its inverse
    is applied through the SVD ``R = U diag(s) V^H``, giving
    ``(R R^H)^{-1} R = U diag(1/s) V^H`` without squaring the condition number.
    """
    Q = bundle.span_basis
    s_full = bundle.singular_values
    threshold = bundle.tol.cutoff(s_full[0]) ** 2 if s_full.size else bundle.tol.abs_floor**2
    if Q.shape[1] == 0:
        raise DegenerateFrameError(0.0, threshold)
    R = Q.conj().T @ bundle.D
    U, s, Vh = np.linalg.svd(R, full_matrices=False)
    a_span = float(s[-1]) ** 2
    if a_span <= threshold:
        raise DegenerateFrameError(a_span, threshold)
    G_inv = (U / s**2) @ U.conj().T
    G_inv = 0.5 * (G_inv + G_inv.conj().T)
    duals = Q @ ((U / s) @ Vh)
    # reconstruction f = sum <f, psi_i> psi~_i on a probe basis of the span
    recon = duals @ (bundle.C @ Q)
    residual = float(np.max(np.abs(recon - Q)))
    G_inv.setflags(write=False)
    return DualSystem(FiniteSequence(duals), G_inv, Q, a_span, residual)


def reconstruct(bundle, dual, f):
    """``sum_i <f, psi_i> psi~_i`` (equals ``f`` for ``f`` in the span)."""
    f = np.asarray(f, dtype=np.complex128)
    return dual.matrix @ (bundle.C @ f)


def dual_reconstruction_inverse(bundle, dual, f):
    """``sum_i <f, psi~_i> psi~_i``, checked against ``Gamma^{-1} f``."""
    f = np.asarray(f, dtype=np.complex128)
    if f.shape != (bundle.space_dim,):
        raise InputError(f"vector must have dim {bundle.space_dim}")
    Dt = dual.matrix
    out = Dt @ (Dt.conj().T @ f)
    direct = dual.gamma_inv() @ f
    err = float(np.linalg.norm(out - direct))
    if err > RECONSTRUCTION_RTOL * _scale(direct, f):
        raise ConsistencyError(f"dual series differs from Gamma^-1 f by {err:.3e}")
    return out


def pseudo_inverse_analysis(bundle, dual):
    """``C^dagger`` computed as ``Gamma^{-1} D`` and checked against the dual synthesis matrix.

    A third route, the SVD pseudo-inverse of ``C``, serves as an independent
    oracle.
    """
    via_gamma = dual.gamma_inv() @ bundle.D
    via_duals = dual.matrix
    oracle = nk.pinv(bundle.C, bundle.tol)
    scale = _scale(oracle)
    for name, other in (("dual synthesis", via_duals), ("SVD pseudo-inverse", oracle)):
        err = float(np.max(np.abs(via_gamma - other))) if via_gamma.size else 0.0
        if err > PSEUDO_INVERSE_RTOL * scale:
            raise ConsistencyError(f"Gamma^-1 D differs from the {name} by {err:.3e}")
    return via_gamma


@dataclass(frozen=True, eq=False)
class MinimalNormResult:
    coefficients: np.ndarray
    norm_sq: float
    representable: bool
    projection_residual: float
    alternative_norm_sq: Optional[float] = None
    correction_norm_sq: Optional[float] = None
    identity_residual: Optional[float] = None

    def as_dict(self):
        return {
            "coefficients": self.coefficients,
            "norm_sq": self.norm_sq,
            "representable": self.representable,
            "projection_residual": self.projection_residual,
            "alternative_norm_sq": self.alternative_norm_sq,
            "correction_norm_sq": self.correction_norm_sq,
            "identity_residual": self.identity_residual,
        }


def minimal_norm_coefficients(bundle, dual, h, alternative=None):
    """Canonical coefficients ``c~_i = <h, psi~_i>`` and the Pythagorean split of an alternative.

    For any ``c`` with ``D c = h``:
    ``||c||^2 = ||c~||^2 + ||c - c~||^2``.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.shape != (bundle.space_dim,):
        raise InputError(f"vector must have dim {bundle.space_dim}")
    Q = bundle.span_basis
    proj = Q @ (Q.conj().T @ h)
    proj_res = float(np.linalg.norm(h - proj))
    cut = bundle.tol.cutoff(max(1.0, float(np.linalg.norm(h))))
    representable = proj_res <= cut
    target = h if representable else proj
    coeffs = dual.matrix.conj().T @ target
    norm_sq = float(np.vdot(coeffs, coeffs).real)
    if alternative is None:
        return MinimalNormResult(coeffs, norm_sq, representable, proj_res)
    c = np.asarray(alternative, dtype=np.complex128)
    if c.shape != (bundle.length,):
        raise InputError(f"alternative coefficients must have length {bundle.length}")
    miss = float(np.linalg.norm(bundle.D @ c - target))
    d_norm = float(bundle.singular_values[0]) if bundle.singular_values.size else 0.0
    if miss > 1e-9 * max(1.0, d_norm * float(np.linalg.norm(c)), float(np.linalg.norm(target))):
        raise InputError(f"alternative coefficients do not synthesize h (miss {miss:.3e})")
    alt = float(np.vdot(c, c).real)
    corr = float(np.vdot(c - coeffs, c - coeffs).real)
    ident = abs(alt - (norm_sq + corr))
    if ident > PYTHAGORAS_RTOL * max(1.0, alt):
        raise ConsistencyError(f"minimal-norm identity violated by {ident:.3e}")
    return MinimalNormResult(coeffs, norm_sq, representable, proj_res, alt, corr, ident)


class ExactnessVerdict(Enum):
    REMOVABLE = "removable"
    CRITICAL = "critical"


@dataclass(frozen=True)
class ExactnessProbe:
    index: int
    a_j: complex
    verdict: ExactnessVerdict
    # removable: lower bound of the reduced sequence on the original span and the a-priori bound
    reduced_lower_bound: Optional[float] = None
    predicted_lower_bound: Optional[float] = None
    # critical: rank before and after deletion
    rank_before: Optional[int] = None
    rank_after: Optional[int] = None

    def as_dict(self):
        return {
            "index": self.index,
            "a_j": self.a_j,
            "verdict": self.verdict.value,
            "reduced_lower_bound": self.reduced_lower_bound,
            "predicted_lower_bound": self.predicted_lower_bound,
            "rank_before": self.rank_before,
            "rank_after": self.rank_after,
        }


def exactness_probe(bundle, dual, j):
    """Decide whether element ``j`` (1-based) can be dropped without losing the lower bound.

    ``a_j = <psi_j, psi~_j>``. If ``a_j != 1`` the reduced sequence keeps a
    lower bound on the span, at least ``A / (1 + M)`` with
    ``M = sum_{k != j} |a_k|^2 / |1 - a_j|^2`` and ``a_k = <psi_j, psi~_k>``.
    If ``a_j = 1`` the reduced sequence no longer spans.
    """
    m = bundle.length
    if not 1 <= j <= m:
        raise InputError(f"index {j} out of range 1..{m}")
    D, Dt, tol = bundle.D, dual.matrix, bundle.tol
    psi_j = D[:, j - 1]
    a = Dt.conj().T @ psi_j  # a_k = <psi_j, psi~_k>
    a_j = complex(a[j - 1])
    r = bundle.rank
    reduced = np.delete(D, j - 1, axis=1)
    r_after = nk.numeric_rank(reduced, tol) if reduced.shape[1] else 0
    if abs(a_j - 1) <= tol.rank_rel:
        if r_after >= r:
            raise ConsistencyError(f"a_{j} = 1 but removing element {j} keeps the rank at {r}")
        return ExactnessProbe(j, a_j, ExactnessVerdict.CRITICAL, rank_before=r, rank_after=r_after)
    Q = bundle.span_basis
    # lower frame bound of the reduced sequence restricted to the original span
    R = Q.conj().T @ reduced
    low = nk.sigma_min_full(R.conj().T, tol) ** 2
    M = (float(np.vdot(a, a).real) - abs(a_j) ** 2) / abs(1 - a_j) ** 2
    predicted = dual.lower_bound_on_span / (1 + M)
    if not low > 0 or r_after != r:
        raise ConsistencyError(f"a_{j} != 1 but removing element {j} loses the lower bound")
    if low < predicted * (1 - 1e-8):
        raise ConsistencyError(
            f"reduced lower bound {low:.6g} below the guaranteed {predicted:.6g} at index {j}"
        )
    return ExactnessProbe(
        j, a_j, ExactnessVerdict.REMOVABLE, reduced_lower_bound=low, predicted_lower_bound=predicted
    )


@dataclass(frozen=True, eq=False)
class BiorthogonalSystem:
    sequence: FiniteSequence
    cross_gram: np.ndarray  # entry (i, j) = <psi_i, psi~_j>
    max_deviation: float


def biorthogonal_system(bundle, dual):
    """The canonical dual as biorthogonal partner of a minimal sequence."""
    col = dependent_column(bundle)
    if col is not None:
        raise NotMinimalError(col)
    cross = dual.matrix.conj().T @ bundle.D  # (j, i) = <psi_i, psi~_j>
    cross = cross.T
    dev = float(np.max(np.abs(cross - np.eye(bundle.length))))
    if dev > BIORTHOGONAL_ATOL:
        raise ConsistencyError(f"biorthogonality off by {dev:.3e}")
    return BiorthogonalSystem(dual.duals, cross, dev)


def weak_representation_check(bundle, dual, h, g):
    """``|<h, g> - sum_i <h, psi~_i> <psi_i, g>|`` for ``g`` in the span."""
    h = np.asarray(h, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    Q = bundle.span_basis
    if float(np.linalg.norm(g - Q @ (Q.conj().T @ g))) > bundle.tol.cutoff(max(1.0, float(np.linalg.norm(g)))):
        raise InputError("g must lie in the span of the sequence")
    lhs = np.vdot(g, h)
    rhs = np.vdot(bundle.C @ g, dual.matrix.conj().T @ h)
    return float(abs(lhs - rhs))
