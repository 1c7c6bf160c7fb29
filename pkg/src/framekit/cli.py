"""``framekit`` command-line front end.

Exit codes: 0 success, 1 internal consistency failure, 2 invalid input
(parse/validation errors, degenerate frame, non-minimal sequence when a
biorthogonal system is required, resource limits), 3 analytic/numeric
mismatch found by the truncation reconciliation.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from . import numkernel as nk
from .classify import classify_finite, classify_structured, invertibility
from .duality import biorthogonal_system, canonical_dual, exactness_probe, pseudo_inverse_analysis
from .errors import ConsistencyError, DegenerateFrameError, FramekitError, NotMinimalError, ResourceError
from .frameops import assemble, domain_profile
from .report import csv_cell, dumps, to_csv, to_plain
from .sequences import FiniteSequence, TruncationPlan, load_spec, max_dim_from_env, spec_to_dict, truncate
from .truncation import CSV_COLUMNS, reconcile, run_study

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(FramekitError):
    pass


def _parse_sizes(text):
    if text is None:
        return None
    try:
        sizes = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--sizes expects comma-separated integers, got {text!r}") from None
    return TruncationPlan(sizes).sizes


def build_parser():
    p = argparse.ArgumentParser(prog="framekit", description="Frame, dual and Riesz analysis of vector sequences.")
    p.add_argument("--version", action="version", version=f"framekit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, multi=False):
        if multi:
            sp.add_argument("specs", nargs="+", metavar="spec", help="sequence spec files (JSON)")
        else:
            sp.add_argument("spec", help="sequence spec file (JSON)")
        sp.add_argument("--sizes", help="truncation sizes for structured specs, e.g. 8,16,32")
        sp.add_argument("--tol", type=float, default=nk.DEFAULT_TOL.rank_rel, help="relative rank cutoff")
        sp.add_argument("--abs-floor", type=float, default=nk.DEFAULT_TOL.abs_floor, help="absolute rank cutoff")
        sp.add_argument("--format", choices=("json", "text", "csv"), default="json")
        sp.add_argument("--out", help="write the report here instead of stdout")

    common(sub.add_parser("analyze", help="full pipeline: operators, classification, dual, study"))
    d = sub.add_parser("dual", help="canonical dual and biorthogonality")
    common(d)
    d.add_argument("--require-biorthogonal", action="store_true", help="fail unless the sequence is minimal")
    common(sub.add_parser("classify", help="bounds and classification flags"))
    common(sub.add_parser("study", help="truncation study of a structured family"))
    common(sub.add_parser("report", help="one summary row per spec"), multi=True)
    return p


# ---------------------------------------------------------------------------
# sections


def _header(cmd, spec, tol, sizes=None):
    return {
        "framekit": __version__,
        "command": cmd,
        "spec": spec_to_dict(spec),
        "tol": tol.as_dict(),
        "sizes": list(sizes) if sizes is not None else None,
    }


def _check_dim(seq):
    cap = max_dim_from_env()
    if seq.space_dim > cap:
        raise ResourceError(f"ambient dimension {seq.space_dim} exceeds FRAMEKIT_MAX_DIM={cap}")


def _bundle_section(b):
    return {
        "space_dim": b.space_dim,
        "length": b.length,
        "rank": b.rank,
        "singular_values": [float(x) for x in b.singular_values],
    }


def _invertibility_section(b):
    return {
        "synthesis": invertibility(b.D, b.tol).as_dict(),
        "analysis": invertibility(b.C, b.tol).as_dict(),
    }


def _dual_section(b, require_biorthogonal=False, require_dual=False):
    """Dual, pseudo-inverse check, exactness probes and biorthogonal partner."""
    try:
        dual = canonical_dual(b)
    except DegenerateFrameError as exc:
        if require_dual or require_biorthogonal:
            raise
        return {"available": False, "reason": str(exc)}, None
    pseudo_inverse_analysis(b, dual)
    try:
        bio = biorthogonal_system(b, dual)
        bio_out = {"cross_gram": bio.cross_gram, "max_deviation": bio.max_deviation}
    except NotMinimalError as exc:
        if require_biorthogonal:
            raise
        bio_out = {"available": False, "reason": str(exc)}
    out = {
        "available": True,
        "duals": dual.matrix.T,  # one row per dual element
        "lower_bound_on_span": dual.lower_bound_on_span,
        "reconstruction_residual": dual.residual,
        "biorthogonal": bio_out,
    }
    probes = [exactness_probe(b, dual, j).as_dict() for j in range(1, b.length + 1)]
    return out, probes


def _explicit_analysis(seq, tol, with_dual=True):
    _check_dim(seq)
    b = assemble(seq, tol)
    doc = {
        "bundle": _bundle_section(b),
        "classification": classify_finite(b).as_dict(),
        "invertibility": _invertibility_section(b),
    }
    if with_dual:
        dual, probes = _dual_section(b)
        doc["dual"] = dual
        doc["exactness"] = probes
    return doc


def _require_sizes(cmd, sizes):
    if sizes is None:
        raise UsageError(f"{cmd}: structured specs need --sizes")


def _structured_study(spec, tol, sizes):
    profile = domain_profile(spec)
    analytic = classify_structured(spec, profile, tol)
    series = run_study(spec, TruncationPlan(sizes), tol)
    rec = reconcile(series, analytic, profile)
    return profile, analytic, series, rec


# ---------------------------------------------------------------------------
# commands; each returns (document, csv_text or None, exit code)


def cmd_analyze(spec, tol, sizes, args):
    doc = _header("analyze", spec, tol, sizes)
    if isinstance(spec, FiniteSequence):
        doc.update(_explicit_analysis(spec, tol))
        return doc, None, EXIT_OK
    _require_sizes("analyze", sizes)
    profile, analytic, series, rec = _structured_study(spec, tol, sizes)
    doc["domain"] = profile.as_dict()
    doc["classification"] = analytic.as_dict()
    doc["study"] = series.as_dict()
    doc["reconciliation"] = rec.as_dict()
    code = EXIT_MISMATCH if rec.has_mismatch else EXIT_OK
    return doc, _study_csv(series, rec), code


def cmd_classify(spec, tol, sizes, args):
    doc = _header("classify", spec, tol, sizes)
    if isinstance(spec, FiniteSequence):
        doc.update(_explicit_analysis(spec, tol, with_dual=False))
        return doc, None, EXIT_OK
    _require_sizes("classify", sizes)
    profile = domain_profile(spec)
    doc["domain"] = profile.as_dict()
    doc["classification"] = classify_structured(spec, profile, tol).as_dict()
    doc["truncated"] = [
        classify_finite(assemble(truncate(spec, N), tol), truncation=N).as_dict() for N in sizes
    ]
    return doc, None, EXIT_OK


def cmd_dual(spec, tol, sizes, args):
    doc = _header("dual", spec, tol, sizes)
    if not isinstance(spec, FiniteSequence):
        if sizes is None or len(sizes) != 1:
            raise UsageError("dual: structured specs need exactly one size, e.g. --sizes 8")
        seq = truncate(spec, sizes[0])
    else:
        seq = spec
    _check_dim(seq)
    b = assemble(seq, tol)
    dual, probes = _dual_section(b, args.require_biorthogonal, require_dual=True)
    doc["bundle"] = _bundle_section(b)
    doc["dual"] = dual
    doc["exactness"] = probes
    return doc, None, EXIT_OK


def cmd_study(spec, tol, sizes, args):
    if isinstance(spec, FiniteSequence):
        raise UsageError("study: needs a structured spec")
    _require_sizes("study", sizes)
    doc = _header("study", spec, tol, sizes)
    _, analytic, series, rec = _structured_study(spec, tol, sizes)
    doc["study"] = series.as_dict()
    doc["reconciliation"] = rec.as_dict()
    code = EXIT_MISMATCH if rec.has_mismatch else EXIT_OK
    return doc, _study_csv(series, rec), code


REPORT_COLUMNS = ("spec", "kind", "provenance", "A", "B", "A_prime", "is_frame", "is_riesz_basis", "is_minimal")


def cmd_report(specs, tol, sizes, args):
    rows = []
    for path, spec in specs:
        if isinstance(spec, FiniteSequence):
            _check_dim(spec)
            rep = classify_finite(assemble(spec, tol))
        else:
            rep = classify_structured(spec, tol=tol)
        d = rep.as_dict()
        rows.append({
            "spec": path,
            "kind": spec_to_dict(spec)["kind"],
            "provenance": rep.provenance,
            "A": d["bounds"]["A"],
            "B": d["bounds"]["B"],
            "A_prime": d["bounds"]["A_prime"],
            "is_frame": rep.is_frame,
            "is_riesz_basis": rep.is_riesz_basis,
            "is_minimal": rep.is_minimal,
        })
    doc = {"framekit": __version__, "command": "report", "tol": tol.as_dict(), "rows": rows}
    return doc, to_csv(REPORT_COLUMNS, rows), EXIT_OK


def _study_csv(series, rec):
    text = to_csv(CSV_COLUMNS, series.rows)
    lines = [f"# rules {','.join(f'{k}={v}' for k, v in series.rules.as_dict().items())}"]
    lines += [f"# tol rank_rel={series.tol.rank_rel!r},abs_floor={series.tol.abs_floor!r}"]
    for c in rec.claims:
        numeric = c.trend.kind if c.trend.value is None else f"{c.trend.kind}({c.trend.value!r})"
        lines.append(f"# reconcile {c.quantity}: analytic={c.analytic!r} numeric={numeric} status={c.status}")
    return text + "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# rendering


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list) and any(isinstance(v, (list, dict)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _scalar_text(v):
    if isinstance(v, list):
        return " ".join(_scalar_text(x) for x in v)
    if v is None:
        return "null"
    return csv_cell(v)


def render(doc, fmt, csv_text=None):
    if fmt == "json":
        return dumps(doc)
    plain = to_plain(doc)
    pairs = list(_flatten(plain))
    if fmt == "csv":
        if csv_text is not None:
            return csv_text
        return to_csv(("key", "value"), [(k, _scalar_text(v)) for k, v in pairs])
    return "".join(f"{k}: {_scalar_text(v)}\n" for k, v in pairs)


COMMANDS = {
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "dual": cmd_dual,
    "study": cmd_study,
    "report": cmd_report,
}


def run(argv=None):
    """Parse ``argv`` and execute; returns ``(exit_code, output_text, out_path)``."""
    args = build_parser().parse_args(argv)
    tol = nk.Tolerance(args.tol, args.abs_floor)
    sizes = _parse_sizes(args.sizes)
    if args.command == "report":
        specs = [(p, load_spec(p)) for p in args.specs]
        doc, csv_text, code = cmd_report(specs, tol, sizes, args)
    else:
        spec = load_spec(args.spec)
        doc, csv_text, code = COMMANDS[args.command](spec, tol, sizes, args)
    return code, render(doc, args.format, csv_text), args.out


def main(argv=None):
    try:
        code, text, out = run(argv)
    except (FramekitError, OSError) as exc:
        kind = EXIT_INTERNAL if isinstance(exc, ConsistencyError) else EXIT_INVALID
        print(f"framekit: error: {exc}", file=sys.stderr)
        return kind
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_MISMATCH:
        print("framekit: analytic/numeric mismatch, see the reconciliation section", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
