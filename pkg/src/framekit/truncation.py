"""Finite-section studies of structured families.

A study evaluates the finite-scale bounds for a list of truncation sizes and
labels each series with a trend. It never extrapolates: only
:func:`reconcile` puts a trend next to an analytic claim, and disagreements
are reported, not resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from . import numkernel as nk
from .classify import classify_finite, classify_structured
from .errors import ConsistencyError
from .frameops import assemble, domain_profile, restricted_bundle, truncated_mass
from .sequences import truncate

TRACKED_MASSES = (1, 2, 3)

QUANTITIES = (
    "A",
    "B",
    "A_prime",
    "A_restricted",
    "B_restricted",
    "sigma_min_D",
    "sigma_min_C",
) + tuple(f"W_{k}" for k in TRACKED_MASSES)

CSV_COLUMNS = ("N", "space_dim", "rank", "span_dim") + QUANTITIES


@dataclass(frozen=True)
class TrendRules:
    converge_rtol: float = 1e-6
    converge_window: int = 3
    diverge_factor: float = 1e6
    growth_ratio: float = 2.0
    growth_window: int = 3

    def as_dict(self):
        return {
            "converge_rtol": self.converge_rtol,
            "converge_window": self.converge_window,
            "diverge_factor": self.diverge_factor,
            "growth_ratio": self.growth_ratio,
            "growth_window": self.growth_window,
        }


@dataclass(frozen=True)
class Trend:
    kind: str  # converged | diverging | inconclusive | undefined
    value: Optional[float] = None

    def as_dict(self):
        return {"kind": self.kind, "value": self.value}


def trend(values, rules=TrendRules()):
    """Classify a series of nonnegative values by the configured rules."""
    if not values or any(v is None for v in values):
        return Trend("undefined")
    vals = [float(v) for v in values]
    last = vals[-1]
    w = rules.converge_window
    if len(vals) >= w:
        window = vals[-w:]
        if all(abs(v - last) <= rules.converge_rtol * max(abs(v), abs(last)) for v in window):
            return Trend("converged", last)
    if last > rules.diverge_factor * (vals[0] + 1):
        return Trend("diverging")
    steps = min(rules.growth_window, len(vals) - 1)
    if steps >= 2:
        tail = vals[-(steps + 1):]
        if all(a > 0 and b >= rules.growth_ratio * a for a, b in zip(tail, tail[1:])):
            return Trend("diverging")
    return Trend("inconclusive")


@dataclass(frozen=True)
class StudySeries:
    family: object
    sizes: Tuple[int, ...]
    rows: Tuple[Dict[str, object], ...]
    verdicts: Dict[str, Trend]
    rules: TrendRules
    tol: nk.Tolerance

    def column(self, name):
        return [row[name] for row in self.rows]

    def as_dict(self):
        return {
            "sizes": list(self.sizes),
            "rows": [dict(r) for r in self.rows],
            "verdicts": {k: v.as_dict() for k, v in self.verdicts.items()},
            "rules": self.rules.as_dict(),
            "tol": self.tol.as_dict(),
        }


def _evaluate(s, N, profile, plan, tol, max_dim):
    seq = truncate(s, N, plan.space_dim, max_dim)
    bundle = assemble(seq, tol)
    rep = classify_finite(bundle, truncation=N)
    rb = restricted_bundle(seq, profile, tol)
    rrep = classify_finite(rb, truncation=N)
    row = {
        "N": N,
        "space_dim": seq.space_dim,
        "rank": bundle.rank,
        "span_dim": rb.space_dim,
        "A": rep.lower_frame_bound,
        "B": rep.bessel_bound,
        "A_prime": rep.riesz_fischer_bound,
        # a 0-dimensional restricted space has no meaningful lower bound
        "A_restricted": rrep.lower_frame_bound if rb.space_dim else None,
        "B_restricted": rrep.bessel_bound,
        "sigma_min_D": math.sqrt(rep.riesz_fischer_bound),
        "sigma_min_C": math.sqrt(rep.lower_frame_bound),
    }
    for k in TRACKED_MASSES:
        row[f"W_{k}"] = truncated_mass(s, N, k)
    return row


def _check_monotone(rows):
    for prev, cur in zip(rows, rows[1:]):
        if cur["B"] < prev["B"] * (1 - 1e-9):
            raise ConsistencyError(f"B(N) decreased between N={prev['N']} and N={cur['N']}")
        if cur["A_prime"] > prev["A_prime"] * (1 + 1e-9) + 1e-300:
            raise ConsistencyError(f"A'(N) increased between N={prev['N']} and N={cur['N']}")


def run_study(s, plan, tol=nk.DEFAULT_TOL, rules=TrendRules(), max_dim=None):
    """Truncate, assemble and classify at every plan size."""
    profile = domain_profile(s)
    rows = [_evaluate(s, N, profile, plan, tol, max_dim) for N in plan.sizes]
    _check_monotone(rows)
    verdicts = {q: trend([r[q] for r in rows], rules) for q in QUANTITIES}
    return StudySeries(s, plan.sizes, tuple(rows), verdicts, rules, tol)


@dataclass(frozen=True)
class Claim:
    quantity: str
    analytic: Optional[float]
    trend: Trend
    status: str  # agree | mismatch | inconclusive | empirical-only

    def as_dict(self):
        return {
            "quantity": self.quantity,
            "analytic": self.analytic,
            "numeric": self.trend.as_dict(),
            "status": self.status,
        }


@dataclass(frozen=True)
class Reconciliation:
    claims: Tuple[Claim, ...]

    @property
    def mismatches(self):
        return [c for c in self.claims if c.status == "mismatch"]

    @property
    def has_mismatch(self):
        return bool(self.mismatches)

    def as_dict(self):
        return {
            "claims": [c.as_dict() for c in self.claims],
            "mismatches": len(self.mismatches),
        }


def compare(analytic, tr):
    if analytic is None:
        return "empirical-only"
    if math.isinf(analytic):
        if tr.kind in ("diverging", "undefined"):
            return "agree"
        if tr.kind == "converged":
            return "mismatch"
        return "inconclusive"
    if tr.kind == "converged":
        return "agree" if abs(tr.value - analytic) <= 1e-6 * max(1.0, abs(analytic)) else "mismatch"
    if tr.kind == "diverging":
        return "mismatch"
    return "inconclusive"


def reconcile(series, analytic=None, profile=None):
    """Pair each analytic claim with the matching numeric trend."""
    s = series.family
    if profile is None:
        profile = domain_profile(s)
    if analytic is None:
        analytic = classify_structured(s, profile, series.tol)
    sup_finite = profile.extrema.sup_finite if profile.extrema is not None else None
    pairs = [
        ("A_restricted", analytic.lower_frame_bound),
        ("B", analytic.bessel_bound),
        ("B_restricted", sup_finite if analytic.resolved else None),
        ("A_prime", analytic.riesz_fischer_bound),
    ]
    pairs += [(f"W_{k}", profile.mass(k)) for k in TRACKED_MASSES]
    claims = tuple(
        Claim(q, value, series.verdicts[q], compare(value, series.verdicts[q])) for q, value in pairs
    )
    return Reconciliation(claims)
