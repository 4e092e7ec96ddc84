"""Command-line front end. Every subcommand prints one JSON document.

Exit status: 0 on success, 2 on invalid input, 3 when an enumeration would
exceed the budget. Errors go to stderr as ``{"error": ..., "message": ...}``
and nothing is written to stdout in that case.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import Sequence

from . import classify, covering, elm, surface
from .bundles import PushforwardTwist, descriptor_from_json
from .errors import BudgetExceeded, SymstabError, ValidationError
from .torsion import TorsionVector, budget

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _ell(text: str | None, genus: int, degree: int = 2) -> TorsionVector:
    if text is None:
        return covering.standard_ell(genus, degree)
    return TorsionVector.from_json(text)


def cmd_classify(args) -> dict:
    E = descriptor_from_json(_read_json(args.bundle))
    report = {
        "descriptor": E.to_json(),
        "k": args.k,
        "verdict": classify.power_status(E, args.k).to_json(),
        "s2": classify.s2_status(E).to_json(),
        "s3_line": classify.s3_line_subbundle_status(E).to_json(),
        "s3_rank2": classify.s3_rank2_status(E).to_json(),
        "etale": classify.etale_trivial(E),
    }
    if isinstance(E, PushforwardTwist) and classify.as_split(E) is None:
        report["minimal_line_k"] = classify.minimal_line_destabilized_k(E).to_json()
    return report


def cmd_count(args) -> dict:
    ell = None if args.ell is None else TorsionVector.from_json(args.ell)
    return classify.count_exceptional(args.genus, args.family, n=args.n, ell=ell)


def cmd_gate(args) -> dict:
    data = _read_json(args.statuses)
    if not isinstance(data, dict):
        raise ValidationError("statuses must be an object mapping k to a verdict")
    return classify.higher_gate(data)


def cmd_prym(args) -> dict:
    cov = covering.make_double_cover(args.genus, _ell(args.ell, args.genus))
    report = {"cover": cov.to_json(), "n": args.n, "count": covering.prym_torsion_count(cov, args.n)}
    if args.list:
        report["classes"] = [
            {**x.to_json(), "location": covering.prym_location(cov, x).value}
            for x in covering.prym_torsion_classes(cov, args.n)
        ]
    return report


def cmd_covering(args) -> dict:
    cov = covering.make_cyclic_cover(args.genus, _ell(args.ell, args.genus, args.degree), args.degree)
    return {
        **cov.to_json(),
        "cover_genus": cov.cover_genus,
        "prym_rank": cov.prym_rank,
        "gluing": [{"base": d.to_json(), "prym": p.to_json()} for d, p in cov.gluing()],
    }


def cmd_surf(args) -> dict:
    if args.surf_cmd == "intersect":
        ctx = surface.SurfaceContext(args.genus, args.e)
        d1, d2 = surface.NumClass(args.s1, args.b1), surface.NumClass(args.s2, args.b2)
        return {"e": args.e, "D1": [d1.s, d1.b], "D2": [d2.s, d2.b], "intersection": surface.intersect(ctx, d1, d2)}
    if args.surf_cmd == "genus":
        return {"genus": args.genus, "k": args.k, "ksection_genus": surface.ksection_genus(args.genus, args.k)}
    ctx = surface.SurfaceContext(args.genus, args.e)
    return {"e": args.e, "k": args.k, "b": args.b, "selfint": surface.selfint(ctx, surface.NumClass(args.k, args.b))}


def cmd_elm(args) -> dict:
    data = _read_json(args.pattern)
    if not isinstance(data, dict) or "n" not in data or "points" not in data:
        raise ValidationError('pattern file must look like {"n": ..., "points": [...]}')
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValidationError("pattern 'n' must be an integer")
    if args.mode == "split":
        return elm.double_section_split_run(args.genus, n, data["points"])
    return elm.run_generation(args.genus, _ell(args.ell, args.genus), n, data["points"])


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="symstab", description=__doc__.splitlines()[0])
    p.add_argument("--budget", type=int, default=None, help="maximum elements any enumeration may visit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="stability verdicts for a bundle descriptor")
    c.add_argument("--bundle", required=True, help="descriptor JSON file, or - for stdin")
    c.add_argument("--k", type=int, default=3)
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("count", help="torsion-level counts of exceptional data")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--family", required=True, choices=[f.value for f in classify.Family])
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--ell", default=None, help='defining class, e.g. "1/2,0,0,0"')
    c.set_defaults(func=cmd_count)

    c = sub.add_parser("gate", help="combine verdicts for k = 2..6")
    c.add_argument("--statuses", required=True)
    c.set_defaults(func=cmd_gate)

    c = sub.add_parser("prym", help="n-torsion of the Norm kernel of a double cover")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--ell", default=None)
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--list", action="store_true", help="also list the classes with their component")
    c.set_defaults(func=cmd_prym)

    c = sub.add_parser("covering", help="describe the torsion model of a cyclic cover")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--ell", default=None)
    c.add_argument("--degree", type=int, default=2)
    c.set_defaults(func=cmd_covering)

    c = sub.add_parser("surf", help="intersection numbers on a ruled surface")
    ss = c.add_subparsers(dest="surf_cmd", required=True, parser_class=_Parser)
    s = ss.add_parser("intersect")
    s.add_argument("--genus", type=int, default=2)
    s.add_argument("--e", type=int, required=True)
    for name in ("s1", "b1", "s2", "b2"):
        s.add_argument(f"--{name}", type=int, required=True)
    s = ss.add_parser("genus")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s = ss.add_parser("selfint")
    s.add_argument("--genus", type=int, default=2)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--e", type=int, required=True)
    c.set_defaults(func=cmd_surf)

    c = sub.add_parser("elm", help="elementary transformation runs")
    es = c.add_subparsers(dest="elm_cmd", required=True, parser_class=_Parser)
    r = es.add_parser("run")
    r.add_argument("--genus", type=int, required=True)
    r.add_argument("--ell", default=None)
    r.add_argument("--pattern", required=True)
    r.add_argument("--mode", choices=["generation", "split"], default="generation")
    c.set_defaults(func=cmd_elm)
    return p


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Execute a command; returns (exit status, stdout text, stderr text)."""
    try:
        args = build_parser().parse_args(argv)
        scope = budget(args.budget) if args.budget is not None else contextlib.nullcontext()
        with scope:
            report = args.func(args)
    except BudgetExceeded as exc:
        err = {"error": "BudgetExceeded", "message": str(exc), "requested": exc.requested, "budget": exc.budget}
        return EXIT_BUDGET, "", json.dumps(err, sort_keys=True) + "\n"
    except SymstabError as exc:
        return EXIT_INVALID, "", json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True) + "\n"
    return EXIT_OK, json.dumps(report, indent=2, sort_keys=True) + "\n", ""


def main(argv: Sequence[str] | None = None) -> int:
    status, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
