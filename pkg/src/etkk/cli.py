"""``etkk`` command line.

Exit codes: 0 success (or "yes"), 1 a well-formed negative answer (not stably
homotopic, certificate rejected, padding or ``L`` too small), 2 invalid input.
Every document argument is a file path, or a name registered in the
workspace given by ``--workspace``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .algebra import (
    AlgebraPresentation,
    InvalidPresentation,
    circle_matrix,
    figure_eight,
    interval,
    k_theory,
    matrix_algebra,
    two_by_two_bridge,
)
from .diagram import KKClass, NotADiagram, diagram_group, kk_class
from .hom import (
    InvalidHom,
    MStandardHom,
    NotRealizable,
    induced_diagram,
    minimal_padding,
    realize_diagram,
    validate_any,
)
from .homotopy import (
    LTooSmall,
    MalformedCertificate,
    decide_stable_homotopy,
    explain_certificate,
    property_h_witness,
    reduce_to_1_standard,
)
from .paths import InvalidPath, NotNormalizable, normalize, pl_from_json
from .serialize import (
    DocumentError,
    algebra_from_json,
    algebra_to_json,
    certificate_from_json,
    certificate_to_json,
    diagram_from_json,
    diagram_to_json,
    dumps,
    enc_matrix,
    enc_vec,
    hom_from_json,
    hom_to_json,
)
from .workspace import KINDS, Workspace, WorkspaceError, detect_kind, load_json
from .zlinalg import AbelianGroupPresentation, DimensionError

EXIT_OK, EXIT_NO, EXIT_INVALID = 0, 1, 2

INPUT_ERRORS = (DocumentError, InvalidPresentation, InvalidHom, NotADiagram, DimensionError,
                MalformedCertificate, WorkspaceError, NotNormalizable, InvalidPath)

BUILTIN = {
    "point": lambda: matrix_algebra(1),
    "m2": lambda: matrix_algebra(2),
    "circle": lambda: circle_matrix(1),
    "m2-circle": lambda: circle_matrix(2),
    "interval": interval,
    "figure-eight": figure_eight,
    "bridge": two_by_two_bridge,
}


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class Context:
    def __init__(self, args):
        self.json = args.json
        self.ws = Workspace(args.workspace) if args.workspace else None
        self.out = sys.stdout

    def path(self, ref: str) -> Path:
        return self.ws.resolve(ref) if self.ws else Path(ref)

    def doc(self, ref: str):
        return load_json(self.path(ref))

    def algebra(self, ref: str) -> AlgebraPresentation:
        return algebra_from_json(self.doc(ref))

    def hom(self, ref: str, A, B):
        h = hom_from_json(self.doc(ref), A, B)
        validate_any(A, B, h)
        return h

    def emit(self, doc) -> None:
        self.out.write(dumps(doc))

    def say(self, line: str = "") -> None:
        self.out.write(line + "\n")


def _write(path: Optional[str], doc) -> None:
    if path:
        Path(path).write_text(dumps(doc), encoding="utf-8")


def _group_json(g: AbelianGroupPresentation) -> dict:
    return {"free_rank": g.free_rank, "torsion": enc_vec(g.torsion), "text": str(g)}


def _class_json(c: KKClass) -> dict:
    return {"free": enc_vec(c.free_part), "torsion": enc_vec(c.torsion_part),
            "moduli": enc_vec(c.torsion_moduli)}


def _rows(M) -> str:
    return str(M.to_rows())


# commands -------------------------------------------------------------------------

def cmd_k(ctx: Context, args) -> int:
    A = ctx.algebra(args.A)
    kt = k_theory(A)
    if ctx.json:
        ctx.emit({"k0_rank": kt.k0_rank, "k0_basis": enc_matrix(kt.k0_basis),
                  "k1": _group_json(kt.k1), "scale": enc_vec(kt.scale)})
        return EXIT_OK
    ctx.say(kt.summary())
    ctx.say(f"K0 basis (columns): {_rows(kt.k0_basis)}")
    ctx.say(f"scale: {list(kt.scale)}")
    return EXIT_OK


def cmd_kk(ctx: Context, args) -> int:
    A, B = ctx.algebra(args.A), ctx.algebra(args.B)
    P = diagram_group(A, B)
    gens = P.generator_diagrams()
    if ctx.json:
        ctx.emit({"group": _group_json(P.group),
                  "generators": [{"order": o, "diagram": diagram_to_json(d)} for o, d in gens]})
        return EXIT_OK
    ctx.say(f"KK(A,B) {'= 0' if str(P.group) == '0' else '≅ ' + str(P.group)}")
    for n, (order, d) in enumerate(gens, 1):
        label = "infinite order" if order == 0 else f"order {order}"
        ctx.say(f"  generator {n} ({label}): lambda0={_rows(d.lambda0)} lambda1={_rows(d.lambda1)}")
    return EXIT_OK


def cmd_class(ctx: Context, args) -> int:
    A, B = ctx.algebra(args.A), ctx.algebra(args.B)
    h = ctx.hom(args.h, A, B)
    d = induced_diagram(A, B, h)
    c = kk_class(diagram_group(A, B), d)
    if ctx.json:
        ctx.emit({"class": _class_json(c), "diagram": diagram_to_json(d)})
        return EXIT_OK
    ctx.say(f"diagram: lambda0={_rows(d.lambda0)} lambda1={_rows(d.lambda1)}")
    ctx.say(f"KK class: {c}")
    return EXIT_OK


def cmd_decide(ctx: Context, args) -> int:
    A, B = ctx.algebra(args.A), ctx.algebra(args.B)
    h1, h2 = ctx.hom(args.h1, A, B), ctx.hom(args.h2, A, B)
    dec = decide_stable_homotopy(A, B, h1, h2)
    if dec.verdict:
        _write(args.certificate, certificate_to_json(dec.certificate))
    if ctx.json:
        ctx.emit({"stably_homotopic": dec.verdict, "kk_difference": _class_json(dec.kk_difference),
                  "stabilizer": None if dec.stabilizer is None else hom_to_json(dec.stabilizer)})
    elif dec.verdict:
        ctx.say("stably homotopic")
        st = dec.stabilizer
        ctx.say(f"stabilizer: finite-dimensional image, r={st.r}, lambda0={_rows(st.lambda0)}")
        ctx.say(f"certificate: {len(dec.certificate.steps)} steps"
                + (f", written to {args.certificate}" if args.certificate else ""))
    else:
        ctx.say("not stably homotopic")
        ctx.say(f"KK difference: {dec.kk_difference}")
    return EXIT_OK if dec.verdict else EXIT_NO


def cmd_verify(ctx: Context, args) -> int:
    A, B = ctx.algebra(args.A), ctx.algebra(args.B)
    h1 = ctx.hom(args.h1, A, B)
    cert = certificate_from_json(ctx.doc(args.cert), A, B)
    if cert.kind == "reduction":
        h2 = None
    elif args.h2 == "-":
        raise DocumentError("a stable homotopy certificate needs both homomorphisms")
    else:
        h2 = ctx.hom(args.h2, A, B)
    ok, reason = explain_certificate(A, B, h1, h2, cert)
    if ctx.json:
        ctx.emit({"valid": ok, "reason": reason})
    else:
        ctx.say("certificate valid" if ok else f"certificate rejected: {reason}")
    return EXIT_OK if ok else EXIT_NO


def cmd_realize(ctx: Context, args) -> int:
    A, B = ctx.algebra(args.A), ctx.algebra(args.B)
    d = diagram_from_json(ctx.doc(args.d), A, B)
    try:
        c = minimal_padding(A, B, d) if args.auto else args.c
        h = realize_diagram(A, B, d, c)
    except NotRealizable as e:
        hint = f"; c = {e.needed_c} suffices" if e.needed_c is not None else ""
        raise _Fail(EXIT_NO, f"not realizable: {e}{hint}") from None
    doc = hom_to_json(h)
    _write(args.out, doc)
    if ctx.json:
        ctx.emit({"c": c, "hom": doc})
    else:
        ctx.say(f"realized at c={c}: r={h.r}, lambda0={_rows(h.lambda0)}")
        for jp, b in enumerate(h.blocks, 1):
            ctx.say(f"  block {jp}: ntheta={list(b.ntheta)} nplus={list(b.nplus)} nminus={list(b.nminus)}")
        if not args.out:
            ctx.out.write(dumps(doc))
    return EXIT_OK


def cmd_reduce(ctx: Context, args) -> int:
    A, B = ctx.algebra(args.A), ctx.algebra(args.B)
    psi = ctx.hom(args.mh, A, B)
    if not isinstance(psi, MStandardHom):
        raise DocumentError("reduce expects an m-standard homomorphism (with 'm' and 'cells')")
    eta, rho, cert = reduce_to_1_standard(A, B, psi)
    docs = {"stabilizer": hom_to_json(eta), "result": hom_to_json(rho),
            "certificate": certificate_to_json(cert)}
    _write(args.stabilizer, docs["stabilizer"])
    _write(args.result, docs["result"])
    _write(args.certificate, docs["certificate"])
    if ctx.json:
        ctx.emit(docs)
        return EXIT_OK
    ctx.say(f"m={psi.m}: stabilizer r={eta.r} lambda0={_rows(eta.lambda0)}")
    ctx.say(f"1-standard result r={rho.r} lambda0={_rows(rho.lambda0)}")
    for jp, b in enumerate(rho.blocks, 1):
        ctx.say(f"  block {jp}: ntheta={list(b.ntheta)} nplus={list(b.nplus)} nminus={list(b.nminus)}")
    return EXIT_OK


def cmd_normalize(ctx: Context, args) -> int:
    A, B = ctx.algebra(args.A), ctx.algebra(args.B)
    pl = pl_from_json(ctx.doc(args.pl), A, B)
    ms = normalize(A, B, pl)
    doc = hom_to_json(ms)
    _write(args.out, doc)
    if ctx.json or not args.out:
        ctx.emit(doc)
    else:
        d = induced_diagram(A, B, ms)
        ctx.say(f"{ms.m}-standard, net winding lambda1={_rows(d.lambda1)}, written to {args.out}")
    return EXIT_OK


def cmd_property_h(ctx: Context, args) -> int:
    A = ctx.algebra(args.A)
    try:
        w = property_h_witness(A, args.L, decide=False)
    except LTooSmall as e:
        raise _Fail(EXIT_NO, str(e)) from None
    phi, psi = hom_to_json(w.phi_hom), hom_to_json(w.psi_hom)
    _write(args.phi, phi)
    _write(args.psi, psi)
    if ctx.json:
        ctx.emit({"L": args.L, "phi_diagram": diagram_to_json(w.phi_diagram), "phi": phi,
                  "psi": psi, "check": w.check})
    else:
        ctx.say(f"L={args.L}: phi lambda0={_rows(w.phi_diagram.lambda0)} lambda1={_rows(w.phi_diagram.lambda1)}")
        ctx.say(f"phi: r={w.phi_hom.r}; psi: r={w.psi_hom.r}, finite-dimensional image")
        ctx.say(f"KK(id + phi) = KK(psi): {'yes' if w.check else 'no'}")
    return EXIT_OK if w.check else EXIT_NO


def cmd_example(ctx: Context, args) -> int:
    ctx.emit(algebra_to_json(BUILTIN[args.name]()))
    return EXIT_OK


def cmd_ws(ctx: Context, args) -> int:
    if ctx.ws is None:
        raise _Fail(EXIT_INVALID, "ws commands need --workspace DIR")
    ws = ctx.ws
    if args.ws_cmd == "init":
        ws.init()
        return EXIT_OK
    if args.ws_cmd == "add":
        doc = load_json(args.file)
        kind = args.kind or detect_kind(doc)
        over = [args.over[0], args.over[1]] if args.over else None
        ws.add(args.name, doc, kind, over)
        return EXIT_OK
    if args.ws_cmd == "list":
        entries = ws.entries()
        if ctx.json:
            ctx.emit({"documents": dict(sorted(entries.items()))})
        else:
            for name in sorted(entries):
                e = entries[name]
                over = f" over {e['over'][0]} -> {e['over'][1]}" if e.get("over") else ""
                ctx.say(f"{name}\t{e['kind']}{over}")
        return EXIT_OK
    problems = ws.check()
    if ctx.json:
        ctx.emit({"ok": not problems, "problems": problems})
    else:
        for p in problems:
            ctx.say(p)
        ctx.say("workspace ok" if not problems else f"{len(problems)} problem(s)")
    return EXIT_OK if not problems else EXIT_NO


# parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--workspace", metavar="DIR", default=argparse.SUPPRESS,
                        help="resolve document names through DIR/manifest.json")

    parser = argparse.ArgumentParser(prog="etkk", parents=[common],
                                     description="K-theory, KK-groups and stable homotopy for "
                                                 "one-dimensional NCCW complexes.")
    parser.add_argument("--version", action="version", version=f"etkk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("k", cmd_k, "K0, K1 and scale of an algebra")
    p.add_argument("A")
    p = add("kk", cmd_kk, "KK(A,B) with generator diagrams")
    p.add_argument("A")
    p.add_argument("B")
    p = add("class", cmd_class, "KK class of a homomorphism")
    p.add_argument("A")
    p.add_argument("B")
    p.add_argument("h")
    p = add("decide", cmd_decide, "decide stable homotopy of two homomorphisms")
    for a in ("A", "B", "h1", "h2"):
        p.add_argument(a)
    p.add_argument("--certificate", metavar="FILE", help="write the certificate here when homotopic")
    p = add("verify", cmd_verify, "check a certificate")
    for a in ("A", "B", "h1", "h2", "cert"):
        p.add_argument(a)
    p = add("realize", cmd_realize, "realize a diagram as a 1-standard homomorphism")
    for a in ("A", "B", "d"):
        p.add_argument(a)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--c", type=int, default=0, metavar="N", help="copies of the padding diagram to add (default 0)")
    g.add_argument("--auto", action="store_true", help="use the least padding that works")
    p.add_argument("--out", metavar="FILE")
    p = add("reduce", cmd_reduce, "reduce an m-standard homomorphism to 1-standard form")
    for a in ("A", "B", "mh"):
        p.add_argument(a)
    p.add_argument("--stabilizer", metavar="FILE")
    p.add_argument("--result", metavar="FILE")
    p.add_argument("--certificate", metavar="FILE")
    p = add("normalize", cmd_normalize, "normalize a piecewise-linear homomorphism")
    for a in ("A", "B", "pl"):
        p.add_argument(a)
    p.add_argument("--out", metavar="FILE")
    p = add("property-h", cmd_property_h, "Property (H) witness for an algebra")
    p.add_argument("A")
    p.add_argument("--L", type=int, required=True, metavar="N")
    p.add_argument("--phi", metavar="FILE")
    p.add_argument("--psi", metavar="FILE")
    p = add("example", cmd_example, "print a built-in algebra presentation")
    p.add_argument("name", choices=sorted(BUILTIN))

    p = add("ws", cmd_ws, "workspace management")
    wsub = p.add_subparsers(dest="ws_cmd", required=True, metavar="ACTION")
    wsub.add_parser("init", parents=[common], help="create DIR and an empty manifest")
    a = wsub.add_parser("add", parents=[common], help="copy a document into the workspace")
    a.add_argument("name")
    a.add_argument("file")
    a.add_argument("--kind", choices=KINDS)
    a.add_argument("--over", nargs=2, metavar=("SOURCE", "TARGET"))
    wsub.add_parser("list", parents=[common], help="list registered documents")
    wsub.add_parser("check", parents=[common], help="validate every registered document")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code not in (0, None) else EXIT_OK
    args.json = getattr(args, "json", False)
    args.workspace = getattr(args, "workspace", None)
    ctx = Context(args)
    try:
        return args.func(ctx, args)
    except _Fail as e:
        print(f"etkk: {e}", file=sys.stderr)
        return e.code
    except INPUT_ERRORS as e:
        print(f"etkk: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except NotRealizable as e:
        print(f"etkk: {e}", file=sys.stderr)
        return EXIT_NO
    except (OSError, ValueError) as e:
        print(f"etkk: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
