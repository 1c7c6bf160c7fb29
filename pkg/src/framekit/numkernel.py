"""Dense complex linear algebra with an explicit tolerance policy.

Every rank, span and closed-range decision in framekit goes through
:class:`Tolerance`, so one pair of numbers controls all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class Tolerance:
    """Singular values at or below ``max(rank_rel * sigma_max, abs_floor)`` count as zero."""

    rank_rel: float = 1e-10
    abs_floor: float = 1e-14

    def __post_init__(self):
        if not (self.rank_rel > 0 and self.abs_floor > 0):
            raise InputError("tolerance values must be strictly positive")
        if not (math.isfinite(self.rank_rel) and math.isfinite(self.abs_floor)):
            raise InputError("tolerance values must be finite")

    def cutoff(self, sigma_max):
        return max(self.rank_rel * float(sigma_max), self.abs_floor)

    def as_dict(self):
        return {"rank_rel": self.rank_rel, "abs_floor": self.abs_floor}


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class SvdResult:
    """Full SVD ``M = U[:, :k] @ diag(s) @ V[:, :k].conj().T`` with ``k = min(rows, cols)``."""

    singular_values: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    def reconstruct(self):
        k = self.singular_values.size
        u = self.left_basis[:, :k]
        v = self.right_basis[:, :k]
        return (u * self.singular_values) @ v.conj().T


def as_cmatrix(m):
    """Return ``m`` as a finite complex128 2-D array (a copy, never a view)."""
    a = np.array(m, dtype=np.complex128, copy=True)
    if a.ndim != 2:
        raise InputError(f"expected a 2-D matrix, got {a.ndim} dimension(s)")
    if not np.all(np.isfinite(a)):
        raise InputError("matrix has non-finite entries")
    a.setflags(write=False)
    return a


def svd(m):
    """Deterministic full SVD via LAPACK ``gesdd`` (no randomized methods)."""
    a = as_cmatrix(m)
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return SvdResult(
            np.zeros(0), np.eye(rows, dtype=np.complex128), np.eye(cols, dtype=np.complex128)
        )
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    return SvdResult(s, u, vh.conj().T)


def singular_values(m):
    a = as_cmatrix(m)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def numeric_rank(m, tol=DEFAULT_TOL):
    s = singular_values(m)
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > tol.cutoff(s[0])))


def pinv(m, tol=DEFAULT_TOL):
    """Moore-Penrose pseudo-inverse; singular values below the cutoff are dropped."""
    a = as_cmatrix(m)
    rows, cols = a.shape
    if a.size == 0:
        return np.zeros((cols, rows), dtype=np.complex128)
    res = svd(a)
    s = res.singular_values
    r = int(np.count_nonzero(s > tol.cutoff(s[0])))
    u = res.left_basis[:, :r]
    v = res.right_basis[:, :r]
    return (v / s[:r]) @ u.conj().T


def sigma_min_full(m, tol=DEFAULT_TOL):
    """Best constant ``c`` with ``||M x|| >= c ||x||`` for every ``x`` in the column space domain.

    This is the injectivity constant of ``x -> M x``: it is 0 when there are
    more columns than rows or when the smallest of the ``cols`` singular values
    falls under the rank cutoff. For a matrix with no columns the bound holds
    vacuously and ``inf`` is returned.
    """
    a = as_cmatrix(m)
    rows, cols = a.shape
    if cols == 0:
        return math.inf
    if cols > rows:
        return 0.0
    s = singular_values(a)
    smin = float(s[cols - 1])
    if smin <= tol.cutoff(s[0]):
        return 0.0
    return smin


def sigma_max(m):
    s = singular_values(m)
    return float(s[0]) if s.size else 0.0


def range_basis(m, tol=DEFAULT_TOL):
    """Orthonormal basis (as columns) of the numerical range of ``m``."""
    a = as_cmatrix(m)
    rows, _ = a.shape
    res = svd(a)
    s = res.singular_values
    if s.size == 0:
        return np.zeros((rows, 0), dtype=np.complex128), s
    r = int(np.count_nonzero(s > tol.cutoff(s[0])))
    return res.left_basis[:, :r].copy(), s


def solve(a, b):
    """Solve ``a x = b`` for square nonsingular ``a``."""
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise InputError("solve needs a square matrix")
    return np.linalg.solve(a, np.asarray(b, dtype=np.complex128))


def inner(x, y):
    """Inner product linear in the first argument: ``<x, y> = sum x_k conj(y_k)``."""
    return complex(np.vdot(np.asarray(y), np.asarray(x)))
