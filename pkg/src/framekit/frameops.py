"""Frame-related operators of a sequence, numerically and analytically.

Finite scale
    :func:`assemble` turns ``m`` vectors in ``C^n`` into the synthesis matrix
    ``D`` (columns are the elements), the analysis matrix ``C = D^H``, the
    frame operator ``S = D C``, the Gram matrix ``C D`` and the generalized
    frame operator written in coordinates of an orthonormal basis of the span.

Structured families
    :func:`domain_profile` decides, for every basis index ``k``, the total
    squared weight ``W_k`` that the family puts on ``e_k``. The analysis
    operator of a weighted orthonormal family acts as
    ``||C f||^2 = sum_k W_k |f_k|^2``, so ``W_k`` settles the domain of ``C``,
    its closure ``H_psi`` and the bounds used by :mod:`framekit.classify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import numkernel as nk
from .errors import InputError, UnsupportedFamilyError
from .sequences import (
    AnchoredONB,
    ConstWeight,
    EmptyLaw,
    ExpWeight,
    PolyWeight,
    SingleLaw,
    TriangularLaw,
    WeightedONB,
    _tri,
    project_onto,
)

# ---------------------------------------------------------------------------
# Finite-scale operators


@dataclass(frozen=True, eq=False)
class OperatorBundle:
    D: np.ndarray
    C: np.ndarray
    S: np.ndarray
    gram: np.ndarray
    gamma_r: np.ndarray
    span_basis: np.ndarray
    singular_values: np.ndarray
    tol: nk.Tolerance
    # 1-based basis indices kept by a restricted bundle; None means the full space
    support: Optional[Tuple[int, ...]] = None

    @property
    def space_dim(self):
        return self.D.shape[0]

    @property
    def length(self):
        return self.D.shape[1]

    @property
    def rank(self):
        return self.span_basis.shape[1]

    def as_dict(self):
        return {
            "space_dim": self.space_dim,
            "length": self.length,
            "rank": self.rank,
            "support": list(self.support) if self.support is not None else None,
            "singular_values": [float(s) for s in self.singular_values],
            "D": self.D,
            "S": self.S,
            "gram": self.gram,
            "tol": self.tol.as_dict(),
        }


def assemble_matrix(D, tol=nk.DEFAULT_TOL, support=None):
    """Bundle for a synthesis matrix; a zero-row ``D`` gives the 0-dimensional bundle."""
    D = nk.as_cmatrix(D)
    C = D.conj().T
    S = D @ C
    gram = C @ D
    # exact Hermitian symmetry; the products agree with their adjoints up to rounding
    S = 0.5 * (S + S.conj().T)
    gram = 0.5 * (gram + gram.conj().T)
    basis, s = nk.range_basis(D, tol)
    gamma_r = basis.conj().T @ S @ basis
    gamma_r = 0.5 * (gamma_r + gamma_r.conj().T)
    for a in (C, S, gram, gamma_r, basis):
        a.setflags(write=False)
    return OperatorBundle(D, C, S, gram, gamma_r, basis, s, tol, support)


def assemble(seq, tol=nk.DEFAULT_TOL):
    return assemble_matrix(seq.matrix, tol)


def _support_indices(n, support):
    if isinstance(support, DomainProfile):
        return tuple(k for k in range(1, n + 1) if support.hil_psi_support.contains(k))
    idx = tuple(sorted(set(int(k) for k in support)))
    for k in idx:
        if k < 1 or k > n:
            raise InputError(f"support index {k} out of range 1..{n}")
    return idx


def restricted_bundle(seq, support, tol=nk.DEFAULT_TOL):
    """Operators of the projected sequence, written inside the support subspace.

    ``support`` is either a set of 1-based basis indices or a
    :class:`DomainProfile`, whose ``H_psi`` support is intersected with the
    ambient dimension of ``seq``.
    """
    idx = _support_indices(seq.space_dim, support)
    rows = [k - 1 for k in idx]
    return assemble_matrix(seq.matrix[rows, :], tol, support=idx)


def projected_analysis(seq, support):
    """Analysis matrix of the projected sequence as an operator on the full space."""
    return assemble_matrix(project_onto(seq, support).matrix).C


def projector(n, support):
    P = np.zeros((n, n), dtype=np.complex128)
    for k in _support_indices(n, support):
        P[k - 1, k - 1] = 1
    return P


def gram_quadratic_form(bundle, c, d):
    """``<U c, d> = sum_{i,j} c_i conj(d_j) <psi_i, psi_j>``."""
    c = np.asarray(c, dtype=np.complex128)
    d = np.asarray(d, dtype=np.complex128)
    m = bundle.length
    if c.shape != (m,) or d.shape != (m,):
        raise InputError(f"coefficient vectors must have length {m}")
    return complex(np.vdot(d, bundle.gram @ c))


# ---------------------------------------------------------------------------
# Exact series analysis for structured families


@dataclass(frozen=True)
class IndexSet:
    """Either the finite set ``members`` or everything except ``members``."""

    kind: str
    members: frozenset = frozenset()

    def contains(self, k):
        return (k in self.members) if self.kind == "finite" else (k not in self.members)

    @property
    def is_everything(self):
        return self.kind == "cofinite" and not self.members

    @property
    def is_empty(self):
        return self.kind == "finite" and not self.members

    def describe(self):
        if self.is_everything:
            return "all"
        if self.is_empty:
            return "none"
        inner = ",".join(str(k) for k in sorted(self.members))
        if self.kind == "finite":
            return "{" + inner + "}"
        return "all except {" + inner + "}"

    def as_dict(self):
        return {"kind": self.kind, "members": sorted(self.members), "text": self.describe()}


def _abs2(z):
    return abs(complex(z)) ** 2


def _is_zero_law(base):
    if isinstance(base, ConstWeight):
        return complex(base.c) == 0
    if isinstance(base, PolyWeight):
        a, b = complex(base.a), complex(base.b)
        return (a == 0 and b == 0) or (base.p == 0 and a + b == 0)
    if isinstance(base, ExpWeight):
        return complex(base.a) == 0 or complex(base.r) == 0
    raise UnsupportedFamilyError(f"no closed-form analysis for {type(base).__name__}")


def _check_decidable(base):
    if isinstance(base, PolyWeight) and base.p < 0:
        raise UnsupportedFamilyError(
            "polynomial weights with negative exponent are outside the decidable class"
        )


def _tail_converges(base):
    """Whether ``sum |w_i|^2`` over an infinite set of positions is finite for this law."""
    _check_decidable(base)
    if _is_zero_law(base):
        return True
    if isinstance(base, ExpWeight):
        return abs(complex(base.r)) < 1
    # nonzero constants and polynomials with p >= 0 never decay
    return False


def _progression_tail(base, start, step):
    if _is_zero_law(base):
        return 0.0
    if not _tail_converges(base):
        return math.inf
    rho = _abs2(base.r)
    return _abs2(base.a) * rho**start / (1.0 - rho**step)


def _triangular_tail(base, offset, j, b_start):
    """``sum_{b >= b_start} |w(offset + T(b) + j)|^2`` (only exp laws can converge)."""
    if _is_zero_law(base):
        return 0.0
    if not _tail_converges(base):
        return math.inf
    rho = _abs2(base.r)
    a2 = _abs2(base.a)
    total = 0.0
    b = b_start
    while True:
        term = a2 * rho ** (offset + _tri(b) + j)
        total += term
        # successive ratios are rho**b and shrink, so the remainder is below a geometric tail
        q = rho**b
        if term * q / (1.0 - q) <= 1e-17 * total or term == 0.0:
            return total
        b += 1


def preimage_mass(weights, pre):
    """Exact ``sum_{i in pre} |w_i|^2`` (``math.inf`` when the series diverges)."""
    base = weights.base()
    L = weights.prefix_len()
    total = sum(_abs2(weights(i)) for i in pre.finite)
    for start, step in pre.progressions:
        i = start
        while i <= L:
            total += _abs2(weights(i))
            i += step
        total += _progression_tail(base, i, step)
    for offset, j in pre.triangular:
        b = j
        while offset + _tri(b) + j <= L:
            total += _abs2(weights(offset + _tri(b) + j))
            b += 1
        total += _triangular_tail(base, offset, j, b)
    return total


@dataclass(frozen=True)
class TailBehaviour:
    """Range of ``W_k`` (or ``|w_i|^2``) over an infinite tail of indices."""

    inf: float
    sup: float
    has_zero: bool
    all_infinite: bool = False


def _root_position(base):
    """Positive integer ``i`` with ``a i^p + b = 0``, if any."""
    a, b = complex(base.a), complex(base.b)
    if a == 0 or base.p <= 0:
        return None
    ratio = -b / a
    if abs(ratio.imag) > 1e-15 * max(1.0, abs(ratio)) or ratio.real <= 0:
        return None
    x = ratio.real ** (1.0 / base.p)
    i = round(x)
    if i >= 1 and abs(x - i) <= 1e-12 * max(1.0, x):
        return i
    return None


def _single_tail(base, K1, alpha, beta):
    """``g(k) = |w(alpha k + beta)|^2`` over ``k >= K1``; positions already past any prefix."""
    _check_decidable(base)

    def g(k):
        return _abs2(base(alpha * k + beta))

    if isinstance(base, ConstWeight):
        v = _abs2(base.c)
        return TailBehaviour(v, v, v == 0)
    if isinstance(base, PolyWeight):
        a, b = complex(base.a), complex(base.b)
        if a == 0 or base.p == 0:
            v = _abs2(b if a == 0 else a + b)
            return TailBehaviour(v, v, v == 0)
        # |a x + b|^2 is a convex quadratic in x = i**p with vertex x_star
        x_star = -(a * b.conjugate()).real / _abs2(a)
        cands = {K1}
        i_start = alpha * K1 + beta
        if x_star > i_start**base.p:
            k_star = (x_star ** (1.0 / base.p) - beta) / alpha
            cands.update(k for k in (math.floor(k_star), math.ceil(k_star)) if k >= K1)
        root = _root_position(base)
        has_zero = root is not None and (root - beta) % alpha == 0 and (root - beta) // alpha >= K1
        low = 0.0 if has_zero else min(g(k) for k in cands)
        return TailBehaviour(low, math.inf, has_zero)
    if isinstance(base, ExpWeight):
        if _is_zero_law(base):
            return TailBehaviour(0.0, 0.0, True)
        rho = _abs2(base.r)
        if rho < 1:
            return TailBehaviour(0.0, g(K1), False)
        if rho > 1:
            return TailBehaviour(g(K1), math.inf, False)
        v = _abs2(base.a)
        return TailBehaviour(v, v, False)
    raise UnsupportedFamilyError(f"no closed-form analysis for {type(base).__name__}")


@dataclass(frozen=True)
class MassExtrema:
    explicit: Tuple[float, ...]  # W_1 .. W_{K1-1}
    tail: TailBehaviour
    K1: int

    @property
    def inf_finite(self):
        """Infimum over the finite masses; ``inf`` when no mass is finite."""
        vals = [w for w in self.explicit if math.isfinite(w)]
        if not self.tail.all_infinite:
            vals.append(self.tail.inf)
        return min(vals) if vals else math.inf

    @property
    def sup(self):
        vals = list(self.explicit)
        vals.append(math.inf if self.tail.all_infinite else self.tail.sup)
        return max(vals)

    @property
    def sup_finite(self):
        vals = [w for w in self.explicit if math.isfinite(w)]
        if not self.tail.all_infinite:
            vals.append(self.tail.sup)
        return max(vals) if vals else 0.0

    @property
    def all_positive(self):
        return all(w > 0 for w in self.explicit) and not self.tail.has_zero


def mass_extrema(s):
    """Exact infimum/supremum information for ``k -> W_k`` over all ``k >= 1``."""
    if not isinstance(s, WeightedONB):
        raise UnsupportedFamilyError(f"mass extrema need a weighted orthonormal family, got {s.kind}")
    base = s.weights.base()
    _check_decidable(base)
    L = s.weights.prefix_len()
    law = s.sigma.eventual_law()
    if isinstance(law, SingleLaw):
        K1 = max(law.k0, (L - law.beta) // law.alpha + 1)
        tail = _single_tail(base, K1, law.alpha, law.beta)
    elif isinstance(law, EmptyLaw):
        K1 = law.k0
        tail = TailBehaviour(0.0, 0.0, True)
    elif isinstance(law, TriangularLaw):
        K1 = max(law.k0, law.shift + 1)
        while law.offset + _tri(K1 - law.shift) + (K1 - law.shift) <= L:
            K1 += 1
        if _is_zero_law(base):
            tail = TailBehaviour(0.0, 0.0, True)
        elif not _tail_converges(base):
            tail = TailBehaviour(math.inf, math.inf, False, all_infinite=True)
        else:
            # W_k strictly decreases to 0 once every position lies in the exp tail
            tail = TailBehaviour(0.0, preimage_mass(s.weights, s.sigma.preimage(K1)), False)
    else:  # pragma: no cover - laws are closed
        raise UnsupportedFamilyError(f"unknown eventual law {law!r}")
    explicit = tuple(preimage_mass(s.weights, s.sigma.preimage(k)) for k in range(1, K1))
    return MassExtrema(explicit, tail, K1)


def weight_extrema(weights):
    """Same information for ``i -> |w_i|^2``."""
    base = weights.base()
    L = weights.prefix_len()
    explicit = tuple(_abs2(weights(i)) for i in range(1, L + 1))
    return MassExtrema(explicit, _single_tail(base, L + 1, 1, 0), L + 1)


@dataclass(frozen=True)
class DomainProfile:
    """Analytic description of the analysis-operator domain of a structured family."""

    family: object
    hil_psi_support: IndexSet
    analysis_densely_defined: bool
    synthesis_closable: bool
    frame_operator_closable_on_H: bool
    notes: Tuple[str, ...] = ()
    extrema: Optional[MassExtrema] = None

    def mass(self, k):
        """``W_k`` for basis index ``k`` (``math.inf`` when infinite)."""
        if k < 1:
            raise InputError("basis indices start at 1")
        s = self.family
        if isinstance(s, AnchoredONB):
            return math.inf if k == s.anchor else 1.0
        return preimage_mass(s.weights, s.sigma.preimage(k))

    def masses(self, K):
        return [self.mass(k) for k in range(1, K + 1)]

    def as_dict(self, K=8):
        return {
            "masses": self.masses(K),
            "hil_psi_support": self.hil_psi_support.as_dict(),
            "analysis_densely_defined": self.analysis_densely_defined,
            "synthesis_closable": self.synthesis_closable,
            "frame_operator_closable_on_H": self.frame_operator_closable_on_H,
            "notes": list(self.notes),
        }


def _anchored_profile(s):
    a = s.anchor
    notes = (
        f"every element carries e_{a} with coefficient 1, so <f, psi_i> -> f_{a} and "
        f"the analysis series of f diverges unless f_{a} = 0",
        f"dom(C) = {{f : f_{a} = 0}}; its closure H_psi omits e_{a} only",
        "H_psi != H: analysis operator not densely defined, synthesis operator not closable",
        f"on H_psi, f_n = (e_b+1 + ... + e_b+n)/n with b != {a} tends to 0 while S f_n -> e_{a}: "
        "frame operator not closable on H_psi",
        "bounds are not derived analytically for this family; see the truncation study",
    )
    return DomainProfile(
        s,
        IndexSet("cofinite", frozenset({a})),
        analysis_densely_defined=False,
        synthesis_closable=False,
        frame_operator_closable_on_H=False,
        notes=notes,
    )


def domain_profile(s):
    """Decide ``W_k`` and the domain flags exactly; never guesses."""
    if isinstance(s, AnchoredONB):
        return _anchored_profile(s)
    if not isinstance(s, WeightedONB):
        raise UnsupportedFamilyError(f"no domain analysis for {type(s).__name__}")
    base = s.weights.base()
    _check_decidable(base)
    converges = _tail_converges(base)
    kind, ks = s.sigma.infinite_preimage()
    if converges:
        support = IndexSet("cofinite", frozenset())
    elif kind == "finite":
        support = IndexSet("cofinite", ks)
    elif kind == "all":
        support = IndexSet("finite", frozenset())
    else:  # cofinite infinite-preimage set: only the excluded ks keep finite mass
        support = IndexSet("finite", ks)
    ext = mass_extrema(s)
    dense = support.is_everything
    bounded_on_H = math.isfinite(ext.sup_finite)
    notes = [
        f"weight law past position {s.weights.prefix_len()}: {base.kind}; "
        f"infinite sums of it {'converge' if converges else 'diverge'}",
        f"basis indices hit infinitely often: {kind} {sorted(ks)}",
        f"H_psi support (W_k < inf): {support.describe()}",
        f"analysis densely defined: {dense}; synthesis closable: {dense}",
        f"frame operator on H_psi acts as f_k -> W_k f_k; sup of finite W_k = {ext.sup_finite!r}; "
        "null-sequence test (x_n -> 0 in dom S with ||S x_n|| bounded away from 0 exists iff "
        f"that sup is infinite): closable flag = {bounded_on_H}",
    ]
    return DomainProfile(
        s,
        support,
        analysis_densely_defined=dense,
        synthesis_closable=dense,
        frame_operator_closable_on_H=bounded_on_H,
        notes=tuple(notes),
        extrema=ext,
    )


def truncated_mass(s, N, k):
    """``sum_{i <= N} |<psi_i, e_k>|^2`` for the first ``N`` elements."""
    if isinstance(s, AnchoredONB):
        count = sum(1 for i in range(1, N + 1) if i != s.anchor)
        if k == s.anchor:
            return 4.0 * (N >= s.anchor) + count
        return 1.0 if k <= N else 0.0
    return float(sum(_abs2(s.weights(i)) for i in range(1, N + 1) if s.sigma(i) == k))
