"""JSON documents for algebras, diagrams, homomorphisms, PL homs and certificates.

Integers beyond the 53-bit safe range are written as decimal strings.  Matrices
with a zero dimension are written as ``{"rows": r, "cols": c, "data": []}``;
a bare ``[]`` is also accepted on input wherever the shape is known from
context.  Index fields (``block``, ``source``, ``unit``) are 1-based.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

from .algebra import AlgebraPresentation, validate as validate_algebra
from .diagram import DiagramPair
from .hom import Cell, HomBlock, MStandardHom, StandardHom
from .homotopy import HomotopyCertificate, Step
from .zlinalg import IntMatrix

SAFE_INT = 2 ** 53 - 1


class DocumentError(ValueError):
    """A JSON document does not match its schema."""


def dumps(doc: Any) -> str:
    """Indented JSON with lists of scalars (vectors, matrix rows) kept on one line."""
    return _encode(doc, 0) + "\n"


def _encode(x: Any, depth: int) -> str:
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, depth + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in x):
            return "[" + ", ".join(json.dumps(v, ensure_ascii=False) for v in x) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, depth + 1) for v in x) + "\n" + pad + "]"
    return json.dumps(x, ensure_ascii=False)


def enc_int(x: int):
    return str(x) if abs(x) > SAFE_INT else x


def dec_int(x, what: str = "integer") -> int:
    if isinstance(x, bool):
        raise DocumentError(f"{what}: expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip(), 10)
        except ValueError:
            pass
    raise DocumentError(f"{what}: expected an integer, got {x!r}")


def enc_vec(v) -> list:
    return [enc_int(x) for x in v]


def dec_vec(v, n: Optional[int] = None, what: str = "vector") -> tuple[int, ...]:
    if not isinstance(v, list):
        raise DocumentError(f"{what}: expected a list")
    out = tuple(dec_int(x, what) for x in v)
    if n is not None and len(out) != n:
        raise DocumentError(f"{what}: expected {n} entries, got {len(out)}")
    return out


def enc_matrix(M: IntMatrix):
    if M.rows == 0 or M.cols == 0:
        return {"rows": M.rows, "cols": M.cols, "data": []}
    return [enc_vec(r) for r in M.to_rows()]


def dec_matrix(obj, shape: Optional[tuple[int, int]] = None, what: str = "matrix") -> IntMatrix:
    if isinstance(obj, dict):
        try:
            rows, cols = dec_int(obj["rows"]), dec_int(obj["cols"])
            data = obj.get("data", [])
        except KeyError as e:
            raise DocumentError(f"{what}: missing {e}") from None
        if data:
            M = IntMatrix.from_rows([dec_vec(r, cols, what) for r in data], cols=cols)
            if M.rows != rows:
                raise DocumentError(f"{what}: declared {rows} rows, found {M.rows}")
        else:
            if rows and cols:
                raise DocumentError(f"{what}: empty data for a {rows}x{cols} matrix")
            M = IntMatrix.zeros(rows, cols)
    elif isinstance(obj, list):
        if not obj:
            if shape is None:
                raise DocumentError(f"{what}: empty matrix needs explicit rows/cols")
            if shape[0] and shape[1]:
                raise DocumentError(f"{what}: empty list for a {shape[0]}x{shape[1]} matrix")
            M = IntMatrix.zeros(*shape)
        else:
            rows = [dec_vec(r, what=what) for r in obj]
            try:
                M = IntMatrix.from_rows(rows)
            except ValueError as e:
                raise DocumentError(f"{what}: {e}") from None
    else:
        raise DocumentError(f"{what}: expected a list of rows")
    if shape is not None and M.shape != tuple(shape):
        raise DocumentError(f"{what}: shape {M.shape}, expected {tuple(shape)}")
    return M


def _get(obj: dict, key: str, what: str):
    if not isinstance(obj, dict):
        raise DocumentError(f"{what}: expected an object")
    if key not in obj:
        raise DocumentError(f"{what}: missing field {key!r}")
    return obj[key]


# algebras -----------------------------------------------------------------------

def algebra_to_json(A: AlgebraPresentation) -> dict:
    return {"p": A.p, "k": enc_vec(A.k), "l": A.l, "h": enc_vec(A.h),
            "alpha": enc_matrix(A.alpha), "beta": enc_matrix(A.beta)}


def algebra_from_json(obj) -> AlgebraPresentation:
    what = "algebra"
    p, l = dec_int(_get(obj, "p", what)), dec_int(_get(obj, "l", what))
    k = dec_vec(_get(obj, "k", what), what="k")
    h = dec_vec(_get(obj, "h", what), what="h")
    alpha = dec_matrix(_get(obj, "alpha", what), (l, p), "alpha")
    beta = dec_matrix(_get(obj, "beta", what), (l, p), "beta")
    A = AlgebraPresentation(p, k, l, h, alpha, beta)
    validate_algebra(A)
    return A


# diagrams -----------------------------------------------------------------------

def diagram_to_json(d: DiagramPair) -> dict:
    return {"lambda0": enc_matrix(d.lambda0), "lambda1": enc_matrix(d.lambda1)}


def diagram_from_json(obj, A: Optional[AlgebraPresentation] = None,
                      B: Optional[AlgebraPresentation] = None) -> DiagramPair:
    s0 = (B.p, A.p) if A and B else None
    s1 = (B.l, A.l) if A and B else None
    return DiagramPair(dec_matrix(_get(obj, "lambda0", "diagram"), s0, "lambda0"),
                       dec_matrix(_get(obj, "lambda1", "diagram"), s1, "lambda1"))


# homomorphisms -----------------------------------------------------------------

def hom_to_json(h) -> dict:
    if isinstance(h, MStandardHom):
        return {
            "m": h.m, "r": enc_int(h.r), "lambda0": enc_matrix(h.lambda0),
            "cells": [[{"ntheta": enc_vec(c.ntheta), "nplus": enc_vec(c.nplus), "nminus": enc_vec(c.nminus),
                        "left": enc_vec(c.left), "right": enc_vec(c.right)} for c in row]
                      for row in h.cells],
        }
    return {
        "r": enc_int(h.r), "lambda0": enc_matrix(h.lambda0),
        "blocks": [{"ntheta": enc_vec(b.ntheta), "nplus": enc_vec(b.nplus), "nminus": enc_vec(b.nminus)}
                   for b in h.blocks],
    }


def hom_from_json(obj, A: AlgebraPresentation, B: AlgebraPresentation):
    """Decode a standard or m-standard hom (shape-checked, not validated)."""
    what = "homomorphism"
    r = dec_int(_get(obj, "r", what), "r")
    lam = dec_matrix(_get(obj, "lambda0", what), (B.p, A.p), "lambda0")
    if "cells" in obj:
        m = dec_int(_get(obj, "m", what), "m")
        rows = _get(obj, "cells", what)
        if not isinstance(rows, list) or len(rows) != B.l:
            raise DocumentError(f"cells: expected one list per interval block ({B.l})")
        cells = []
        for jp, row in enumerate(rows):
            if not isinstance(row, list):
                raise DocumentError(f"cells[{jp + 1}]: expected a list")
            cells.append(tuple(
                Cell(dec_vec(_get(c, "ntheta", "cell"), A.p, "ntheta"),
                     dec_vec(_get(c, "nplus", "cell"), A.l, "nplus"),
                     dec_vec(_get(c, "nminus", "cell"), A.l, "nminus"),
                     dec_vec(_get(c, "left", "cell"), A.p, "left"),
                     dec_vec(_get(c, "right", "cell"), A.p, "right"))
                for c in row))
        return MStandardHom(m, r, lam, tuple(cells))
    blocks = _get(obj, "blocks", what)
    if not isinstance(blocks, list) or len(blocks) != B.l:
        raise DocumentError(f"blocks: expected {B.l} interval blocks")
    return StandardHom(r, lam, tuple(
        HomBlock(dec_vec(_get(b, "ntheta", "block"), A.p, "ntheta"),
                 dec_vec(_get(b, "nplus", "block"), A.l, "nplus"),
                 dec_vec(_get(b, "nminus", "block"), A.l, "nminus"))
        for b in blocks))


# certificates --------------------------------------------------------------------

def _pair_to_json(pair):
    return {"left": None if pair[0] is None else diagram_to_json(pair[0]),
            "right": None if pair[1] is None else diagram_to_json(pair[1])}


def _pair_from_json(obj, A, B):
    if not isinstance(obj, dict):
        raise DocumentError("diagram pair: expected an object")
    return tuple(None if obj.get(s) is None else diagram_from_json(obj[s], A, B) for s in ("left", "right"))


def certificate_to_json(cert: HomotopyCertificate) -> dict:
    steps = []
    for st in cert.steps:
        d = {"lemma": st.lemma}
        if st.side is not None:
            d["side"] = st.side
        d["params"] = dict(st.params)
        if st.stabilizer is not None:
            d["stabilizer"] = hom_to_json(st.stabilizer)
        if st.replacement is not None:
            d["replacement"] = hom_to_json(st.replacement)
        d["pre"] = _pair_to_json(st.pre)
        d["post"] = _pair_to_json(st.post)
        steps.append(d)
    return {"kind": cert.kind, "stabilizer": hom_to_json(cert.stabilizer), "steps": steps}


def certificate_from_json(obj, A: AlgebraPresentation, B: AlgebraPresentation) -> HomotopyCertificate:
    what = "certificate"
    kind = _get(obj, "kind", what)
    steps_obj = _get(obj, "steps", what)
    if not isinstance(steps_obj, list):
        raise DocumentError("steps: expected a list")
    steps = []
    for n, s in enumerate(steps_obj):
        w = f"step {n + 1}"
        lemma = _get(s, "lemma", w)
        params = s.get("params", {})
        if not isinstance(params, dict):
            raise DocumentError(f"{w}: params must be an object")
        stab = hom_from_json(s["stabilizer"], A, B) if s.get("stabilizer") is not None else None
        repl = hom_from_json(s["replacement"], A, B) if s.get("replacement") is not None else None
        steps.append(Step(lemma, s.get("side"), params, stab, repl,
                          _pair_from_json(_get(s, "pre", w), A, B),
                          _pair_from_json(_get(s, "post", w), A, B)))
    stab = hom_from_json(_get(obj, "stabilizer", what), A, B)
    if isinstance(stab, MStandardHom):
        raise DocumentError("certificate stabilizer must be a standard hom")
    return HomotopyCertificate(kind, tuple(steps), stab)


def fraction_from_json(x) -> Fraction:
    if isinstance(x, bool):
        raise DocumentError("expected a rational number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise DocumentError(f"expected a rational number (int or 'a/b' string), got {x!r}")


def fraction_to_json(q: Fraction):
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
