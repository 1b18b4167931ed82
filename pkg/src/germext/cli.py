"""Command-line front end: ``germext <command> ...``.

Exit codes for ``check``: 0 necessary condition holds, 1 obstructed over Z,
2 unknown, 64 input error. Other commands exit 0 or 64.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .barannikov import FieldSpec, canonical_form, fmc_from_germ, reduce_to_trivial
from .errors import (
    GermFormatError,
    InvalidGermError,
    MatrixFormatError,
    NotApplicableError,
    ShapeError,
)
from .generate import gen
from .germio import dumps_germ, load_germ
from .intmat import format_matrix, hnf, parse_matrix, snf
from .morse import homology_Z, require_valid
from .omega import OmegaInstance, omega_construct
from .propertyp import SATISFIED, UNKNOWN, VIOLATED, check_property_P, two_index_check

EXIT_HOLDS, EXIT_OBSTRUCTED, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 64

CONCLUSION = {
    VIOLATED: "ObstructedOverZ",
    SATISFIED: "NecessaryConditionHolds",
    UNKNOWN: "Unknown",
}
EXIT_FOR = {VIOLATED: EXIT_OBSTRUCTED, SATISFIED: EXIT_HOLDS, UNKNOWN: EXIT_UNKNOWN}


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _germ(path: str):
    try:
        if path == "-":
            from .germio import loads_germ
            G = loads_germ(sys.stdin.read())
        else:
            G = load_germ(path)
        require_valid(G)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except (GermFormatError, InvalidGermError) as exc:
        raise InputError(f"{path}: {exc}") from None
    return G


def _fields(args):
    try:
        return [FieldSpec(c) for c in (args.field or [0])]
    except ValueError as exc:
        raise InputError(str(exc)) from None


# -- check -----------------------------------------------------------------

def build_report(G, fields, bound: int, trace: bool = False) -> dict:
    try:
        verdict = two_index_check(G)
    except NotApplicableError:
        verdict = check_property_P(G, bound)
    field_verdicts = []
    for f in fields:
        reducible, moves = reduce_to_trivial(fmc_from_germ(G, f), f)
        entry = {"characteristic": f.characteristic, "reducible": reducible,
                 "canonical_form": canonical_form(G, f).to_json()}
        if trace:
            entry["trace"] = moves
        field_verdicts.append(entry)
    return {
        "germ": G.summary(),
        "z_verdict": verdict.to_json(),
        "field_verdicts": field_verdicts,
        "conclusion": CONCLUSION[verdict.status],
    }


def _report_text(path: str, rep: dict) -> str:
    z = rep["z_verdict"]
    lines = [f"{path}: {rep['conclusion']} ({z['method']})"]
    if z["obstruction"]:
        lines.append("  obstruction: " + _dump(z["obstruction"]))
    if z["witness"] is not None:
        lines.append("  gauge witness: " + (_dump(z["witness"]) if z["witness"] else "identity"))
    if z["search_bound"] is not None:
        lines.append(f"  search bound: {z['search_bound']}")
    for fv in rep["field_verdicts"]:
        word = "reducible" if fv["reducible"] else "not reducible"
        lines.append(f"  char {fv['characteristic']}: canonical FMC {word} to the trivial one")
    return "\n".join(lines)


def cmd_check(args) -> int:
    fields = _fields(args)
    if args.batch:
        try:
            names = sorted(f for f in os.listdir(args.batch) if f.endswith(".json"))
        except OSError as exc:
            raise InputError(f"{args.batch}: {exc.strerror}") from None
        paths = [os.path.join(args.batch, f) for f in names]
    else:
        paths = args.germs
    if not paths:
        raise InputError("no germ files given")
    codes = []
    for path in paths:
        try:
            rep = build_report(_germ(path), fields, args.bound, args.trace)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            codes.append(EXIT_INPUT)
            continue
        if args.json:
            print(_dump({"file": path, **rep}) if args.batch else _dump(rep))
        else:
            print(_report_text(path, rep))
        codes.append(EXIT_FOR[rep["z_verdict"]["status"]])
    for code in (EXIT_INPUT, EXIT_OBSTRUCTED, EXIT_UNKNOWN):
        if code in codes:
            return code
    return EXIT_HOLDS


# -- matrix commands -------------------------------------------------------

def _matrix(path: str):
    try:
        return parse_matrix(_read(path))
    except MatrixFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_snf(args) -> int:
    r = snf(_matrix(args.matrix))
    if args.json:
        print(_dump({"S": r.S.to_list(), "U": r.U.to_list(), "V": r.V.to_list(),
                     "elementary_divisors": r.elementary_divisors,
                     "determinantal_divisors": r.determinantal_divisors}))
    else:
        for name, M in (("S", r.S), ("U", r.U), ("V", r.V)):
            print(f"{name}:\n{format_matrix(M)}")
        print("elementary divisors:", " ".join(map(str, r.elementary_divisors)))
    return 0


def cmd_hnf(args) -> int:
    try:
        r = hnf(_matrix(args.matrix))
    except ShapeError as exc:
        raise InputError(str(exc)) from None
    if args.json:
        print(_dump({"H": r.H.to_list(), "U": r.U.to_list()}))
    else:
        print(f"H:\n{format_matrix(r.H)}\nU:\n{format_matrix(r.U)}")
    return 0


def _split_sections(text: str):
    lines = text.splitlines()
    for i, line in enumerate(lines):
        if not line.strip() and any(l.strip() for l in lines[:i]) and any(l.strip() for l in lines[i:]):
            return "\n".join(lines[:i]), 1, "\n".join(lines[i + 1:]), i + 2
    raise InputError("expected B and C separated by a blank line")


def cmd_omega(args) -> int:
    try:
        if args.C is not None:
            B, C = parse_matrix(_read(args.B)), parse_matrix(_read(args.C))
        else:
            b_text, b_line, c_text, c_line = _split_sections(_read(args.B))
            B, C = parse_matrix(b_text, b_line), parse_matrix(c_text, c_line)
        inst = OmegaInstance(B, C)
    except (MatrixFormatError, ShapeError) as exc:
        raise InputError(str(exc)) from None
    print(_dump(omega_construct(inst).to_json()))
    return 0


# -- germ commands ---------------------------------------------------------

def cmd_homology(args) -> int:
    G = _germ(args.germ)
    H = homology_Z(G)
    if args.json:
        print(_dump([{"degree": k, "betti": b, "torsion": list(t)} for k, (b, t) in enumerate(H)]))
    else:
        for k, (b, t) in enumerate(H):
            parts = (["Z^%d" % b] if b > 1 else ["Z"] if b == 1 else []) + [f"Z/{d}" for d in t]
            print(f"H_{k} = {' + '.join(parts) or '0'}")
    return 0


def cmd_barannikov(args) -> int:
    G = _germ(args.germ)
    for f in _fields(args):
        form = canonical_form(G, f)
        reducible, moves = reduce_to_trivial(fmc_from_germ(G, f), f)
        out = {"characteristic": f.characteristic, "reducible": reducible, **form.to_json()}
        if args.json or args.trace:
            print(_dump(out))
        else:
            pairs = ", ".join(f"{s}->{t}" for s, t in form.pairs) or "none"
            print(f"char {f.characteristic}: pairs {pairs}; unpaired {', '.join(form.unpaired)}; "
                  f"{'reducible' if reducible else 'not reducible'}")
        if args.trace:
            for m in moves:
                print(_dump(m))
    return 0


def cmd_gen(args) -> int:
    try:
        G = gen(args.seed, args.n, args.k, args.pairs, args.slides, args.separated)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    sys.stdout.write(dumps_germ(G))
    return 0


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    parser = argparse.ArgumentParser(prog="germext", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test the integral necessary condition")
    p.add_argument("germs", nargs="*")
    p.add_argument("--field", type=int, action="append", help="characteristic (repeatable, default 0)")
    p.add_argument("--bound", type=int, default=3, help="gauge search bound (default 3)")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--batch", metavar="DIR")
    p.set_defaults(func=cmd_check)

    for name, func in (("snf", cmd_snf), ("hnf", cmd_hnf)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("matrix", nargs="?", default="-")
        p.set_defaults(func=func)

    p = sub.add_parser("omega", parents=[common], help="find N with B + C N unimodular")
    p.add_argument("B", nargs="?", default="-", help="B file, or both matrices split by a blank line")
    p.add_argument("C", nargs="?")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("homology", parents=[common])
    p.add_argument("germ")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("barannikov", parents=[common])
    p.add_argument("germ")
    p.add_argument("--field", type=int, action="append")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_barannikov)

    p = sub.add_parser("gen", parents=[common], help="emit a random two-index germ")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--pairs", type=int, default=2)
    p.add_argument("--slides", type=int, default=4)
    p.add_argument("--separated", action="store_true", help="plus points above minus points")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    if getattr(args, "bound", 0) is not None and getattr(args, "bound", 0) < 0:
        print("error: --bound must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
