"""Command-line entry points.

Exit codes: 0 success, 2 parse/validation failure, 3 not standard,
4 undetermined, 5 non-generic or non-transverse scenario, 6 tracking
assertion failure, 7 handle-slide identity violation.  Every failing exit
prints a machine-readable witness JSON on stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .annulus import AnnulusScenario, Tolerances, evolve, scenario_from_json
from .barannikov import (
    barannikov_reduce,
    barcode_of,
    barcode_standard,
    barcode_to_csv,
    barcode_to_svg,
    standardness_test,
)
from .bifurcation import (
    event_to_json,
    handle_slide_map,
    timeline_to_csv,
    track_family,
    verify_birth_identities,
)
from .complexes import F2, complex_from_json, validate
from .errors import (
    FloerbarError,
    HoleOnCurveError,
    InputError,
    NonGenericError,
    NonTransverseError,
    SamplingError,
    SlideError,
    TrackingError,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_STANDARD = 3
EXIT_UNDETERMINED = 4
EXIT_NON_GENERIC = 5
EXIT_ASSERTION = 6
EXIT_SLIDE = 7

_TOL_FLAGS = {
    "tie_tolerance": ("FLOERBAR_TIE_TOLERANCE", Tolerances().tie),
    "death_gap": ("FLOERBAR_DEATH_GAP", Tolerances().death_gap),
    "root_tolerance": ("FLOERBAR_ROOT_TOLERANCE", Tolerances().root),
    "bifurcation_tolerance": ("FLOERBAR_BIFURCATION_TOLERANCE", Tolerances().bifurcation),
}


def _witness(kind: str, **payload) -> None:
    out = {"error": kind}
    out.update(payload)
    print(json.dumps(out, sort_keys=True))


def _tolerance(args, name: str) -> float:
    value = getattr(args, name, None)
    if value is not None:
        if value <= 0:
            raise InputError(f"--{name.replace('_', '-')} must be positive")
        return value
    env, default = _TOL_FLAGS[name]
    raw = os.environ.get(env)
    if raw is not None:
        try:
            value = float(raw)
        except ValueError:
            raise InputError(f"environment variable {env} is not a number: {raw!r}")
        if value <= 0:
            raise InputError(f"environment variable {env} must be positive")
        return value
    return default


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path!r}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path!r} is not valid JSON: {exc}")


def _load_complex(path: str, tie_tol: float):
    C = complex_from_json(_load_json(path))
    report = validate(C, tie_tol)
    if not report.ok:
        raise InputError(f"{path!r} fails validation: {report}")
    return C, report


def cmd_validate(args) -> int:
    tie = _tolerance(args, "tie_tolerance")
    try:
        C = complex_from_json(_load_json(args.file))
    except InputError as exc:
        _witness("parse", detail=str(exc))
        return EXIT_PARSE
    report = validate(C, tie)
    if not report.ok:
        _witness("validation", violations=[{"kind": k, "detail": d} for k, d in report.errors],
                 notes=list(report.notes))
        return EXIT_PARSE
    print(json.dumps({"status": "valid", "generators": len(C),
                      "notes": list(report.notes)}, sort_keys=True))
    return EXIT_OK


def _certificate_json(cert) -> dict:
    return {"window": cert.window,
            "cycle": {g: p.to_json() for g, p in sorted(cert.cycle.items())},
            "multiplier": cert.multiplier.to_json()}


def cmd_barcode(args) -> int:
    tie = _tolerance(args, "tie_tolerance")
    try:
        C, _ = _load_complex(args.file, tie)
    except InputError as exc:
        _witness("parse", detail=str(exc))
        return EXIT_PARSE
    if C.ring == F2:
        barcode = barcode_of(barannikov_reduce(C))
    else:
        verdict = standardness_test(C, tie)
        if verdict.status == "not_standard":
            _witness("not_standard", certificate=_certificate_json(verdict.certificate),
                     detail=verdict.detail)
            return EXIT_NOT_STANDARD
        if verdict.status == "undetermined":
            _witness("undetermined", detail=verdict.detail)
            return EXIT_UNDETERMINED
        barcode = barcode_standard(C, verdict.witness)
    csv = barcode_to_csv(barcode)
    if args.csv:
        Path(args.csv).write_text(csv, encoding="utf-8")
    else:
        sys.stdout.write(csv)
    if args.svg:
        Path(args.svg).write_text(barcode_to_svg(barcode), encoding="utf-8")
    return EXIT_OK


def cmd_standardness(args) -> int:
    tie = _tolerance(args, "tie_tolerance")
    try:
        C, _ = _load_complex(args.file, tie)
        if C.ring == F2:
            raise InputError("standardness applies to F2T complexes")
        verdict = standardness_test(C, tie)
    except InputError as exc:
        _witness("parse", detail=str(exc))
        return EXIT_PARSE
    out = {"status": verdict.status, "detail": verdict.detail}
    if verdict.certificate is not None:
        out["certificate"] = _certificate_json(verdict.certificate)
    if verdict.witness is not None:
        out["bars"] = len(verdict.witness.pairs) + len(verdict.witness.cycles)
    print(json.dumps(out, sort_keys=True))
    if verdict.status == "not_standard":
        return EXIT_NOT_STANDARD
    if verdict.status == "undetermined":
        return EXIT_UNDETERMINED
    return EXIT_OK


def cmd_evolve(args) -> int:
    if args.samples < 2:
        _witness("parse", detail="--samples must be at least 2")
        return EXIT_PARSE
    try:
        scenario = scenario_from_json(_load_json(args.scenario))
    except InputError as exc:
        _witness("parse", detail=str(exc))
        return EXIT_PARSE
    tols = Tolerances(
        root=_tolerance(args, "root_tolerance") if args.root_tolerance is not None
        else scenario.tolerances.root,
        bifurcation=_tolerance(args, "bifurcation_tolerance") if args.bifurcation_tolerance is not None
        else scenario.tolerances.bifurcation,
        tie=_tolerance(args, "tie_tolerance") if args.tie_tolerance is not None
        else scenario.tolerances.tie,
        death_gap=_tolerance(args, "death_gap") if args.death_gap is not None
        else scenario.tolerances.death_gap,
    )
    scenario = AnnulusScenario(scenario.harmonics, scenario.t_range, scenario.hole, tols)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        family = evolve(scenario, args.samples)
        timeline = track_family(family, tie_tol=tols.tie, death_gap=tols.death_gap)
    except (NonGenericError, NonTransverseError, HoleOnCurveError, SamplingError) as exc:
        payload = {"detail": str(exc)}
        if hasattr(exc, "t"):
            payload["time"] = exc.t
        _witness("non_generic", **payload)
        (outdir / "witness.json").write_text(
            json.dumps({"error": "non_generic", **payload}, sort_keys=True), encoding="utf-8")
        return EXIT_NON_GENERIC
    except (TrackingError, SlideError) as exc:
        payload = {"detail": str(exc)}
        if isinstance(exc, TrackingError):
            payload["time"] = exc.t
            payload["witness"] = exc.witness
        _witness("assertion", **payload)
        (outdir / "witness.json").write_text(
            json.dumps({"error": "assertion", **payload}, sort_keys=True), encoding="utf-8")
        return EXIT_ASSERTION
    except InputError as exc:
        _witness("parse", detail=str(exc))
        return EXIT_PARSE

    (outdir / "timeline.csv").write_text(timeline_to_csv(timeline), encoding="utf-8")
    (outdir / "events.json").write_text(
        json.dumps([event_to_json(e) for e in timeline.events], sort_keys=True, indent=2) + "\n",
        encoding="utf-8")
    bdir = outdir / "barcodes"
    bdir.mkdir(exist_ok=True)
    for i, point in enumerate(timeline.points):
        (bdir / f"sample_{i:04d}.csv").write_text(barcode_to_csv(point.barcode),
                                                  encoding="utf-8")
    print(json.dumps({"status": "ok", "samples": len(timeline.points),
                      "events": len(timeline.events), "out": str(outdir)}, sort_keys=True))
    return EXIT_OK


def cmd_slide(args) -> int:
    tie = _tolerance(args, "tie_tolerance")
    try:
        D0, _ = _load_complex(args.d0, tie)
        D1, _ = _load_complex(args.d1, tie)
    except InputError as exc:
        _witness("parse", detail=str(exc))
        return EXIT_PARSE
    report = verify_birth_identities(D0, D1, args.c, args.d, tie)
    if not report.ok:
        _witness("identities",
                 violations=[{"equation": tag, "detail": msg} for tag, msg in report.violations])
        return EXIT_SLIDE
    try:
        H = handle_slide_map(D0, D1, args.c, args.d, tie)
    except SlideError as exc:
        _witness("identities", violations=[{"equation": "chain_map", "detail": str(exc)}])
        return EXIT_SLIDE
    matrix = []
    for x in D0.names:
        row = H.matrix.get(x, {})
        for y in sorted(row, key=D1.index):
            matrix.append({"from": x, "to": y, "poly": row[y].to_json()})
    payload = {"c": args.c, "d": args.d, "matrix": matrix, "identities": "ok"}
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(json.dumps({"status": "ok", "out": args.out}, sort_keys=True))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _add_tolerance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tie-tolerance", dest="tie_tolerance", type=float, default=None)
    p.add_argument("--death-gap", dest="death_gap", type=float, default=None)
    p.add_argument("--root-tolerance", dest="root_tolerance", type=float, default=None)
    p.add_argument("--bifurcation-tolerance", dest="bifurcation_tolerance",
                   type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="floerbar",
                                 description="Barcodes of hole-counting complexes over GF(2)[T]")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a complex JSON file")
    p.add_argument("file")
    _add_tolerance_flags(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("barcode", help="barcode of a complex (standardness-gated for F2T)")
    p.add_argument("file")
    p.add_argument("--csv", default=None)
    p.add_argument("--svg", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(fn=cmd_barcode)

    p = sub.add_parser("standardness", help="torsion scan plus lift attempt")
    p.add_argument("file")
    _add_tolerance_flags(p)
    p.set_defaults(fn=cmd_standardness)

    p = sub.add_parser("evolve", help="sample a scenario and track its barcode")
    p.add_argument("scenario")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_tolerance_flags(p)
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("slide", help="handle-slide chain isomorphism between two complexes")
    p.add_argument("d0")
    p.add_argument("d1")
    p.add_argument("--c", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--out", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(fn=cmd_slide)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        _witness("parse", detail=str(exc))
        return EXIT_PARSE
    except FloerbarError as exc:
        _witness("error", detail=str(exc))
        return EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
