"""Command line front end.

Exit codes: 0 success, 1 invalid input (or ambiguous point), 2 not
surface-like, 3 search bound exhausted, 4 hypothesis unmet.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg as la
from . import models
from .errors import (
    AmbiguousPoint,
    DefectNonzero,
    HypothesisError,
    NotExceptional,
    NotSurfaceLike,
)
from .exceptional import (
    ExceptionalBasis,
    MutationWord,
    apply_word,
    is_exceptional_sequence,
    norm,
    reduce_ranks,
)
from .lattice import (
    Pseudolattice,
    SurfaceStructure,
    detect_surface_like,
    invariants_report,
    is_point_like,
)
from .mmp import STATUS_MINIMAL, classify_minimal, minimal_model, vial_criterion
from .toric import fan_of, fan_svg, polygon_report, toric_system_of, verify_fan, verify_toric_system

EXIT_OK, EXIT_INPUT, EXIT_NOT_SURFACE, EXIT_BOUND, EXIT_HYPOTHESIS = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class CommandError(Exception):
    def __init__(self, message: str, code: int, result=None):
        super().__init__(message)
        self.code = code
        self.result = result


@dataclass(frozen=True)
class LatticeFile:
    gram: tuple
    name: Optional[str] = None
    point: Optional[tuple] = None
    basis: Optional[tuple] = None

    def to_dict(self) -> dict:
        d: dict = {"gram": [list(r) for r in self.gram]}
        if self.name is not None:
            d["name"] = self.name
        if self.point is not None:
            d["point"] = list(self.point)
        if self.basis is not None:
            d["basis"] = [list(v) for v in self.basis]
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True) + "\n"


_FIELDS = {"name", "gram", "point", "basis"}


def _int_vector(x, path: str, length: Optional[int] = None) -> tuple:
    if not isinstance(x, list):
        raise InputError(f"{path}: expected an array")
    for i, v in enumerate(x):
        if type(v) is not int:
            raise InputError(f"{path}[{i}]: expected an integer, got {json.dumps(v)}")
    if length is not None and len(x) != length:
        raise InputError(f"{path}: expected length {length}, got {len(x)}")
    return tuple(x)


def parse_input(text: str) -> LatticeFile:
    """Strict parse of a lattice file (JSON object with gram/name/point/basis)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError("top level must be a JSON object")
    extra = sorted(set(data) - _FIELDS)
    if extra:
        raise InputError(f"unknown field(s): {', '.join(extra)}")
    if "gram" not in data:
        raise InputError("missing field: gram")
    g = data["gram"]
    if not isinstance(g, list) or not g:
        raise InputError("gram: expected a nonempty array of rows")
    n = len(g)
    gram = tuple(_int_vector(row, f"gram[{i}]") for i, row in enumerate(g))
    for i, row in enumerate(gram):
        if len(row) != n:
            raise InputError(f"gram[{i}]: ragged or non-square (length {len(row)}, expected {n})")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise InputError("name: expected a string")
    point = data.get("point")
    if point is not None:
        point = _int_vector(point, "point", n)
    basis = data.get("basis")
    if basis is not None:
        if not isinstance(basis, list):
            raise InputError("basis: expected an array of vectors")
        basis = tuple(_int_vector(v, f"basis[{i}]", n) for i, v in enumerate(basis))
    return LatticeFile(gram, name, point, basis)


def _jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def _human(obj, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_human(v, indent + 1))
        elif isinstance(v, list) and v and all(isinstance(t, dict) for t in v):
            lines.append(f"{pad}{k}:")
            for i, t in enumerate(v):
                lines.append(f"{pad}  [{i + 1}]")
                lines.extend(_human(t, indent + 2))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v)}")
    return lines


# --- helpers turning a LatticeFile into library objects ---------------------

def _lattice(lf: LatticeFile) -> Pseudolattice:
    try:
        return Pseudolattice(lf.gram, name=lf.name)
    except ValueError as exc:
        raise CommandError(f"invalid lattice: {exc}", EXIT_INPUT) from None


def _structure(lf: LatticeFile, bound: int) -> tuple[SurfaceStructure, dict]:
    L = _lattice(lf)
    info: dict = {}
    if lf.point is not None:
        ok, why = is_point_like(L, lf.point)
        if not ok:
            raise CommandError(f"point {list(lf.point)} is not point-like: {why}", EXIT_NOT_SURFACE)
        info["point_source"] = "input"
        return SurfaceStructure(L, lf.point), info
    try:
        det = detect_surface_like(L, bound)
    except NotSurfaceLike as exc:
        raise CommandError(str(exc), EXIT_NOT_SURFACE) from None
    info["detection"] = {"case": det.case, "candidates": det.candidates, "family": det.family}
    if det.family or len(det.candidates) != 1:
        raise CommandError(
            "point-like element is not unique; pass one with the 'point' field",
            EXIT_INPUT,
            {"detection": info["detection"]},
        )
    info["point_source"] = "detected"
    return SurfaceStructure(L, det.candidates[0]), info


def _basis(lf: LatticeFile, L: Pseudolattice) -> ExceptionalBasis:
    vecs = lf.basis
    if vecs is None:
        vecs = la.identity(L.rank)
    try:
        return ExceptionalBasis(L, vecs)
    except NotExceptional as exc:
        src = "basis" if lf.basis is not None else "coordinate basis (no 'basis' field given)"
        raise CommandError(f"{src} is not exceptional: {exc}", EXIT_INPUT) from None


def _ranks(S, vecs):
    return [S.rank_of(v) for v in vecs]


# --- subcommands ------------------------------------------------------------

def cmd_analyze(lf: LatticeFile, args) -> dict:
    S, info = _structure(lf, args.bound)
    rep = invariants_report(S, args.bound)
    L = S.lattice
    out = dict(info)
    out.update(
        {
            "rank": L.rank,
            "point": S.point,
            "symmetric": L.is_symmetric,
            "unimodular": rep.unimodular,
            "ns_rank": rep.ns_rank,
            "ns_gram": rep.ns_gram,
            "ns_basis": S.ns_basis,
            "ns_signature": rep.signature,
            "ns_even": S.ns_even,
            "canonical": rep.canonical,
            "canonical_integral": rep.canonical_integral,
            "k_squared": rep.k_squared,
            "geometric": rep.geometric,
            "minimal": rep.minimal,
            "minimal_witness": rep.minimal_witness,
            "defect": None if rep.defect is None else rep.defect.defect,
            "serre": L.serre,
        }
    )
    return out


def cmd_mutate(lf: LatticeFile, args) -> tuple[dict, Optional[LatticeFile]]:
    L = _lattice(lf)
    B = _basis(lf, L)
    try:
        word = MutationWord.parse(args.word)
        out_b = apply_word(B, word)
    except (ValueError, IndexError) as exc:
        raise CommandError(f"bad mutation word: {exc}", EXIT_INPUT) from None
    res: dict = {"word": str(word), "basis": out_b.vectors, "gram": out_b.gram}
    point = lf.point
    if point is not None and is_point_like(L, point)[0]:
        S = SurfaceStructure(L, point)
        res["ranks"] = _ranks(S, out_b.vectors)
        res["norm"] = norm(S, out_b)
    emitted = LatticeFile(lf.gram, lf.name, lf.point, out_b.vectors)
    return res, emitted


def _report_dict(rep) -> dict:
    return {
        "k": rep.k,
        "nonzero": rep.nonzero,
        "pattern_ranks": rep.pattern_ranks,
        "pattern_word_length": rep.pattern_word_length,
        "stage4_ran": rep.stage4_ran,
        "final_ranks": rep.final_ranks,
        "certificate": rep.certificate,
    }


def cmd_reduce(lf: LatticeFile, args) -> tuple[dict, Optional[LatticeFile]]:
    S, info = _structure(lf, args.bound)
    B = _basis(lf, S.lattice)
    try:
        final, word, rep = reduce_ranks(S, B, args.depth)
    except DefectNonzero as exc:
        b01, word, rep = exc.partial
        res = {"word": str(word), "basis": b01.vectors, "report": _report_dict(rep), "stopped": str(exc)}
        raise CommandError(str(exc), EXIT_HYPOTHESIS, res) from None
    res = dict(info)
    res.update({"word": str(word), "basis": final.vectors, "ranks": _ranks(S, final.vectors),
                "report": _report_dict(rep)})
    return res, LatticeFile(lf.gram, lf.name, S.point, final.vectors)


def cmd_toric(lf: LatticeFile, args) -> dict:
    S, info = _structure(lf, args.bound)
    B = _basis(lf, S.lattice)
    ts = toric_system_of(S, B, check=False)
    rep = verify_toric_system(ts, S.canonical)
    res = dict(info)
    n = ts.n
    res.update(
        {
            "ranks": ts.ranks,
            "lambdas": ts.lambdas,
            "a": ts.a_adjacent(),
            "n": [[ts.nval(i, j) for j in range(i + 1, i + n)] for i in range(1, n + 1)],
            "axioms": {str(k): {"ok": v.ok, "failures": v.failures} for k, v in rep.axioms.items()},
            "gamma": rep.gamma,
            "chains_independent": rep.chains_independent,
            "extremal_pair": rep.extremal_pair,
            "locally_minimal": ts.locally_minimal,
        }
    )
    if not rep.ok:
        raise CommandError(f"axiom violation: {rep.failed()}", EXIT_HYPOTHESIS, res)
    fan = fan_of(ts)
    fr = verify_fan(fan)
    pr = polygon_report(fan)
    res["fan"] = {
        "ells": fan.ells,
        "h": fan.h,
        "ell_relation": fr.ell_relation,
        "det_relation": fr.det_relation,
        "generates": fr.generates,
    }
    res["polygon"] = {
        "vertices": pr.vertices,
        "extremal": pr.extremal,
        "zero_interior": pr.zero_interior,
        "negatives": [
            {"index": c.index, "a": c.a, "contained": c.contained, "guaranteed": c.guaranteed}
            for c in pr.negatives
        ],
    }
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(fan_svg(fan))
        res["svg"] = args.svg
    return res


def cmd_mmp(lf: LatticeFile, args) -> dict:
    S, info = _structure(lf, args.bound)
    B = None
    res = dict(info)
    if lf.basis is not None:
        B = _basis(lf, S.lattice)
        res["basis_source"] = "input"
    elif is_exceptional_sequence(S.lattice, la.identity(S.n)).ok:
        B = ExceptionalBasis(S.lattice, la.identity(S.n))
        res["basis_source"] = "coordinates"
    r = minimal_model(S, B, args.bound)
    res["chain"] = [
        {
            "e": st.e,
            "k_dot_e": st.k_dot_e,
            "defect_before": st.defect_before,
            "defect_after": st.defect_after,
            "gram_after": st.gram_after,
        }
        for st in r.steps
    ]
    res["contractions"] = len(r.steps)
    res["final_gram"] = r.final.lattice.gram
    res["final_point"] = r.final.point
    res["final_k_squared"] = r.final.k_squared
    res["status"] = r.status
    if r.status != STATUS_MINIMAL:
        raise CommandError(r.status, EXIT_BOUND, res)
    cls = None
    if r.basis is not None and r.final.geometric:
        try:
            c = classify_minimal(r.final, r.basis)
            cls = {"kind": c.kind, "c": c.c, "k_squared": c.k_squared, "diagnostics": c.diagnostics}
        except HypothesisError as exc:
            cls = {"kind": "unknown", "diagnostics": str(exc)}
    res["classification"] = cls
    return res


def cmd_criterion(lf: LatticeFile, args) -> dict:
    S, info = _structure(lf, args.bound)
    v = vial_criterion(S, args.bound)
    res = dict(info)
    res.update({"case": v.case, "number": v.number, "witnesses": v.witnesses})
    return res


def cmd_model(args) -> LatticeFile:
    try:
        m = models.build(args.name, c=args.c, k=args.k, genus=args.genus)
    except ValueError as exc:
        raise CommandError(str(exc), EXIT_INPUT) from None
    return LatticeFile(m.lattice.gram, m.lattice.name, m.point, m.basis)


# --- driver -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", help="structured JSON output")
    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("input", nargs="?", default="-", help="lattice file (default: stdin)")
    inp.add_argument("--bound", type=int, default=10, help="search bound (default 10)")

    p = argparse.ArgumentParser(prog="pseudolattice", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common, inp], help="detection and invariants")
    m = sub.add_parser("mutate", parents=[common, inp], help="apply a mutation word")
    m.add_argument("--word", required=True, help="e.g. L2,R1,F3 (1-based)")
    m.add_argument("--emit", action="store_true", help="print the mutated lattice file")
    r = sub.add_parser("reduce", parents=[common, inp], help="reduce ranks to 0/1, then to 1")
    r.add_argument("--depth", type=int, default=3, help="plateau search depth")
    r.add_argument("--emit", action="store_true", help="print the reduced lattice file")
    t = sub.add_parser("toric", parents=[common, inp], help="toric system, fan and polygon")
    t.add_argument("--svg", metavar="PATH", help="write a picture of the fan")
    sub.add_parser("mmp", parents=[common, inp], help="minimal model and classification")
    sub.add_parser("criterion", parents=[common, inp], help="numerical criterion for exceptional bases")
    md = sub.add_parser("model", help="emit a built-in model as a lattice file")
    md.add_argument("name", help=", ".join(models.MODEL_NAMES))
    md.add_argument("--c", type=int, default=0)
    md.add_argument("--k", type=int, default=1)
    md.add_argument("--genus", type=int, default=0)
    md.add_argument("--machine", action="store_true", help="accepted for symmetry; output is always JSON")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(report: dict, machine: bool, out) -> None:
    if machine:
        out.write(json.dumps(_jsonable(report), sort_keys=True) + "\n")
    else:
        out.write("\n".join(_human(_jsonable(report))) + "\n")


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors, which is reserved here
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if args.command == "model":
        try:
            out.write(cmd_model(args).dumps())
        except CommandError as exc:
            err.write(f"error: {exc}\n")
            return exc.code
        return EXIT_OK
    report: dict = {"command": args.command}
    try:
        if stdin is not None and args.input == "-":
            text = stdin.read()
        else:
            text = _read(args.input)
        lf = parse_input(text)
        emitted = None
        if args.command == "analyze":
            result = cmd_analyze(lf, args)
        elif args.command == "mutate":
            result, emitted = cmd_mutate(lf, args)
        elif args.command == "reduce":
            result, emitted = cmd_reduce(lf, args)
        elif args.command == "toric":
            result = cmd_toric(lf, args)
        elif args.command == "mmp":
            result = cmd_mmp(lf, args)
        else:
            result = cmd_criterion(lf, args)
    except (InputError, OSError) as exc:
        return _fail(report, f"invalid input: {exc}", EXIT_INPUT, None, args, out, err)
    except CommandError as exc:
        return _fail(report, str(exc), exc.code, exc.result, args, out, err)
    except AmbiguousPoint as exc:
        return _fail(report, str(exc), EXIT_INPUT, None, args, out, err)
    except NotSurfaceLike as exc:
        return _fail(report, str(exc), EXIT_NOT_SURFACE, None, args, out, err)
    except HypothesisError as exc:
        return _fail(report, str(exc), EXIT_HYPOTHESIS, None, args, out, err)
    except NotExceptional as exc:
        return _fail(report, str(exc), EXIT_INPUT, None, args, out, err)
    if getattr(args, "emit", False) and emitted is not None:
        out.write(emitted.dumps())
        return EXIT_OK
    report.update({"status": "ok", "exit_code": EXIT_OK, "result": result})
    _emit(report, args.machine, out)
    return EXIT_OK


def _fail(report, message, code, result, args, out, err) -> int:
    err.write(f"error: {message}\n")
    if args.machine:
        report.update({"status": "error", "exit_code": code, "error": message, "result": result})
        _emit(report, True, out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
