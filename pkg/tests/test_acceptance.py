"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line (visible with ``pytest -s``
or in verbose runs, where it bypasses capture) and then asserts. Run this file
directly with ``python tests/test_acceptance.py`` for the summary alone.
"""

import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from framekit import classify as cl
from framekit import duality as du
from framekit import frameops as fo
from framekit import numkernel as nk
from framekit import sequences as sq
from framekit import truncation as tr

sys.path.insert(0, str(Path(__file__).parent))
from oracles import equivalence_conditions  # noqa: E402
from population import population, random_matrices, square_population  # noqa: E402

FIX = Path(__file__).parent / "fixtures"
SEED = 2024
N_INSTANCES = 500


def emit(label, failures, detail, capsys=None):
    status = "PASS" if not failures else "FAIL"
    line = f"[{status}] criterion {label}: {detail}"
    if failures:
        line += f" | first failure: {failures[0]}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return not failures


def instances():
    """``N_INSTANCES`` seeded draws with nonzero rank (rank-zero draws are skipped)."""
    out = []
    for D in population(SEED, 2 * N_INSTANCES):
        b = fo.assemble_matrix(D)
        if b.rank:
            out.append(b)
        if len(out) == N_INSTANCES:
            return out
    raise RuntimeError("population too degenerate")


def _unit(rng, k):
    v = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------


def criterion_1():
    fails = []
    load = lambda name: sq.load_spec(FIX / name)  # noqa: E731

    ex = load("ex_weighted.json")
    rep = cl.classify_structured(ex)
    prof = fo.domain_profile(ex)
    ser = tr.run_study(ex, sq.TruncationPlan((4, 8, 16, 32)))
    if not (rep.is_lower_frame and abs(rep.lower_frame_bound - 4) <= 1e-9):
        fails.append(f"(a) A = {rep.lower_frame_bound}")
    if any(abs(a - 4) > 1e-9 for a in ser.column("A")):
        fails.append(f"(a) truncated A = {ser.column('A')}")
    if rep.is_bessel or ser.verdicts["B"].kind != "diverging":
        fails.append(f"(a) B trend {ser.verdicts['B']}")
    if not (rep.is_riesz_fischer and abs(rep.riesz_fischer_bound - 4) <= 1e-9):
        fails.append(f"(a) A' = {rep.riesz_fischer_bound}")
    if prof.frame_operator_closable_on_H:
        fails.append("(a) frame-operator flag not set")

    rr = load("round_robin.json")
    prof = fo.domain_profile(rr)
    if prof.hil_psi_support.describe() != "all except {1}":
        fails.append(f"(b) support {prof.hil_psi_support.describe()}")
    ser = tr.run_study(rr, sq.TruncationPlan((4, 8, 16)))
    for row in ser.rows:
        if abs(row["A_restricted"] - 1) > 1e-9 or abs(row["B_restricted"] - 1) > 1e-9:
            fails.append(f"(b) N={row['N']}: A={row['A_restricted']} B={row['B_restricted']}")

    ar = load("all_repeats.json")
    prof = fo.domain_profile(ar)
    if not prof.hil_psi_support.is_empty:
        fails.append(f"(c) support {prof.hil_psi_support.describe()}")
    ser = tr.run_study(ar, sq.TruncationPlan((4, 8, 16)))
    if any(r["span_dim"] != 0 for r in ser.rows):
        fails.append("(c) truncated restricted space not 0-dimensional")
    return fails, "weighted / round-robin / all-repeats fixtures"


def criterion_2():
    fails = []
    rng = np.random.default_rng(SEED + 1)
    worst = [0.0, 0.0, 0.0]
    bundles = instances()
    for idx, b in enumerate(bundles):
        d = du.canonical_dual(b)
        f = b.span_basis @ _unit(rng, b.rank)
        e_rec = float(np.linalg.norm(du.reconstruct(b, d, f) - f))
        e_pinv = float(np.max(np.abs(nk.pinv(b.C, b.tol) - d.matrix)))
        e_gam = float(np.max(np.abs(d.matrix @ d.matrix.conj().T - d.gamma_inv())))
        worst = [max(w, e) for w, e in zip(worst, (e_rec, e_pinv, e_gam))]
        if e_rec > 1e-9 or e_pinv > 1e-10 or e_gam > 1e-9:
            fails.append(f"instance {idx}: rec {e_rec:.2e} pinv {e_pinv:.2e} gamma {e_gam:.2e}")
    return fails, (
        f"{len(bundles)} instances; worst reconstruction {worst[0]:.1e} (tol 1e-9), "
        f"C^+ vs dual {worst[1]:.1e} (tol 1e-10), dual frame op vs Gamma^-1 {worst[2]:.1e} (tol 1e-9)"
    )


def criterion_3():
    fails = []
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    count = 0
    bundles = instances()
    for idx, b in enumerate(bundles):
        d = du.canonical_dual(b)
        c = _unit(rng, b.length)
        r = du.minimal_norm_coefficients(b, d, b.D @ c, alternative=c)
        count += 1
        worst = max(worst, r.identity_residual)
        if r.identity_residual > 1e-9:
            fails.append(f"instance {idx}: identity off by {r.identity_residual:.2e}")
        if r.norm_sq > r.alternative_norm_sq + 1e-12:
            fails.append(f"instance {idx}: canonical {r.norm_sq} beaten by {r.alternative_norm_sq}")
    return fails, f"{count} pairs; worst Pythagorean residual {worst:.1e} (tol 1e-9)"


def criterion_4():
    fails = []
    both = set()
    complete = 0
    mats = population(SEED, N_INSTANCES) + square_population(SEED + 3, 200)
    for idx, D in enumerate(mats):
        conds, rep = equivalence_conditions(D)
        if rep.is_riesz_fischer != rep.is_minimal:
            fails.append(f"instance {idx}: Riesz-Fischer {rep.is_riesz_fischer} vs minimal {rep.is_minimal}")
        if rep.is_minimal and rep.is_lower_frame and rep.is_complete and not rep.is_riesz_fischer:
            fails.append(f"instance {idx}: minimal complete lower frame but not Riesz-Fischer")
        if rep.is_lower_frame and rep.is_complete:
            complete += 1
            if len(set(conds.values())) != 1:
                fails.append(f"instance {idx}: {conds}")
            both |= set(conds.values())
    if both != {True, False}:
        fails.append(f"only {both} observed among complete lower-frame instances")
    return fails, f"{len(mats)} instances, {complete} complete lower-frame; seven conditions, minimal<=>RF, minimal lower => complete RF"


def criterion_5():
    fails = []
    probes = 0
    for idx, b in enumerate(instances()):
        d = du.canonical_dual(b)
        for j in range(1, b.length + 1):
            try:
                p = du.exactness_probe(b, d, j)
            except Exception as exc:  # the probe asserts its own consequence
                fails.append(f"instance {idx} index {j}: {exc}")
                continue
            probes += 1
            crit = p.verdict is du.ExactnessVerdict.CRITICAL
            if crit and not p.rank_after < p.rank_before:
                fails.append(f"instance {idx} index {j}: critical without rank drop")
            if not crit and not p.reduced_lower_bound > 0:
                fails.append(f"instance {idx} index {j}: removable without lower bound")
    hand = [([[1, 0], [0, 1], [1, 1]], 2 / 3, du.ExactnessVerdict.REMOVABLE),
            ([[1, 0], [1, 1]], 1.0, du.ExactnessVerdict.CRITICAL)]
    for vecs, a1, verdict in hand:
        b = fo.assemble(sq.FiniteSequence.from_vectors(vecs))
        p = du.exactness_probe(b, du.canonical_dual(b), 1)
        if abs(p.a_j - a1) > 1e-12 or p.verdict is not verdict:
            fails.append(f"hand fixture {vecs}: a_1={p.a_j} {p.verdict}")
    return fails, f"{probes} probes on the population plus 2 hand fixtures"


def criterion_6():
    fails = []
    shift = sq.load_spec(FIX / "shift.json")
    v = cl.invertibility(shift.matrix)
    if not (v.bb and abs(v.bb_constant - 1) <= 1e-12 and v.injective and not v.surjective and not v.BI):
        fails.append(f"shift fixture: {v.as_dict()}")
    mats = random_matrices(SEED + 4, N_INSTANCES)
    for idx, M in enumerate(mats):
        v = cl.invertibility(M)
        if v.bb != v.injective or v.BIR != (v.injective and v.closed_range):
            fails.append(f"matrix {idx}: {v.as_dict()}")
    return fails, f"shift fixture plus {len(mats)} random matrices"


def criterion_7():
    fails = []
    worst_mp = 0.0
    worst_svd = 0.0
    mats = random_matrices(SEED + 5, 1000)
    for idx, M in enumerate(mats):
        P = nk.pinv(M)
        fro = np.linalg.norm(M, "fro")
        res = max(
            np.linalg.norm(M @ P @ M - M),
            np.linalg.norm(P @ M @ P - P),
            np.linalg.norm((M @ P).conj().T - M @ P),
            np.linalg.norm((P @ M).conj().T - P @ M),
        )
        rec = np.linalg.norm(nk.svd(M).reconstruct() - M) / fro
        worst_mp = max(worst_mp, res / fro)
        worst_svd = max(worst_svd, rec)
        if res > 1e-9 * fro or rec > 1e-10:
            fails.append(f"matrix {idx}: penrose {res / fro:.2e} svd {rec:.2e}")
    return fails, f"{len(mats)} matrices; worst Penrose {worst_mp:.1e}*||M||_F, worst SVD {worst_svd:.1e} rel"


def _cli(*args):
    env = dict(os.environ)
    env.pop("FRAMEKIT_MAX_DIM", None)
    r = subprocess.run([sys.executable, "-m", "framekit", *map(str, args)], capture_output=True, env=env)
    return r.returncode, r.stdout


def criterion_8():
    fails = []
    runs = [
        ("analyze", FIX / "ex_weighted.json", "--sizes", "4,8,16"),
        ("analyze", FIX / "dependent.json"),
        ("study", FIX / "anchored.json", "--sizes", "4,8,16,32"),
        ("dual", FIX / "two_vec.json"),
    ]
    for args in runs:
        for fmt in ("json", "csv"):
            first = _cli(*args, "--format", fmt)
            second = _cli(*args, "--format", fmt)
            if first != second:
                fails.append(f"{args[0]} {Path(args[1]).name} {fmt} differs between runs")
            if first[0] != 0:
                fails.append(f"{args[0]} {Path(args[1]).name} exited {first[0]}")
    return fails, f"{len(runs) * 2} configurations run twice, byte-compared"


CRITERIA = {
    "1 worked-example fixtures": criterion_1,
    "2 duality suite": criterion_2,
    "3 minimal-norm suite": criterion_3,
    "4 equivalence suite": criterion_4,
    "5 exactness dichotomy": criterion_5,
    "6 invertibility taxonomy": criterion_6,
    "7 numeric substrate": criterion_7,
    "8 determinism": criterion_8,
}


@pytest.mark.parametrize("label", list(CRITERIA))
def test_criterion(label, capsys):
    fails, detail = CRITERIA[label]()
    assert emit(label, fails, detail, capsys), fails[:5]


if __name__ == "__main__":
    ok = [emit(label, *fn()) for label, fn in CRITERIA.items()]
    print(f"{sum(ok)}/{len(ok)} criteria passed")
    sys.exit(0 if all(ok) else 1)
