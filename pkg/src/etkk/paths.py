"""Piecewise-linear spectrum paths and their reduction to basic forms.

Within one cell of an m-partition a spectrum function either sits at a point
``theta_i`` of Sp(F1) or moves along an interval block ``j``.  An interval
path is given by rational breakpoints ``(t, v)`` with ``t`` running from 0 to 1
and ``v`` in ``[0, 1]`` the position inside block ``j``; ``v = 0`` and ``v = 1``
are the boundary points ``0_j`` and ``1_j``, which may only be reached at the
ends of the cell.

Each path falls into one of ten cases by its endpoint pattern and is homotopic
to a basic form: a constant ``0_j`` or ``1_j``, the forward traversal
``(t, j)`` or the backward traversal ``(1-t, j)``.  Constants at boundary
points are then split into ``theta`` multiplicities through the rows of
``alpha`` (at 0) and ``beta`` (at 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import AlgebraPresentation
from .hom import Cell, InvalidHom, MStandardHom, validate_mstandard
from .zlinalg import IntMatrix


class NotNormalizable(ValueError):
    """A path (or cell) is outside the ten endpoint cases, or traces disagree."""


class InvalidPath(ValueError):
    """Malformed breakpoint data."""


THETA = "theta"
INTERVAL = "interval"

# basic forms
ZERO, ONE, PLUS, MINUS = "zero", "one", "plus", "minus"


@dataclass(frozen=True)
class PLPath:
    kind: str           # THETA or INTERVAL
    index: int          # 0-based theta point or interval block
    breakpoints: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        if self.kind not in (THETA, INTERVAL):
            raise InvalidPath(f"unknown source kind {self.kind!r}")
        if self.index < 0:
            raise InvalidPath("negative source index")
        if self.kind == THETA:
            if self.breakpoints:
                raise InvalidPath("a theta path is constant and takes no breakpoints")
            return
        bp = self.breakpoints
        if len(bp) < 2:
            raise InvalidPath("an interval path needs at least two breakpoints")
        if bp[0][0] != 0 or bp[-1][0] != 1:
            raise InvalidPath("breakpoint times must start at 0 and end at 1")
        for (t0, _), (t1, _) in zip(bp, bp[1:]):
            if not t0 < t1:
                raise InvalidPath("breakpoint times must be strictly increasing")
        for _, v in bp:
            if not 0 <= v <= 1:
                raise InvalidPath(f"value {v} outside [0, 1]")

    @classmethod
    def theta(cls, i: int) -> "PLPath":
        return cls(THETA, i)

    @classmethod
    def interval(cls, j: int, points: Sequence[tuple]) -> "PLPath":
        return cls(INTERVAL, j, tuple((Fraction(t), Fraction(v)) for t, v in points))

    def value_at(self, t) -> Fraction:
        """Position inside the interval block at time ``t`` (linear interpolation)."""
        t = Fraction(t)
        bp = self.breakpoints
        for (t0, v0), (t1, v1) in zip(bp, bp[1:]):
            if t0 <= t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        raise ValueError(f"time {t} outside [0, 1]")


@dataclass(frozen=True)
class PLCell:
    paths: tuple[tuple[PLPath, int], ...]   # (path, multiplicity)
    left: Optional[tuple[int, ...]] = None   # declared traces; computed when absent
    right: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class PLHom:
    m: int
    r: int
    lambda0: IntMatrix
    cells: tuple[tuple[PLCell, ...], ...]    # cells[j'][s]


def _symbol(v: Fraction) -> str:
    if v == 0:
        return "0"
    if v == 1:
        return "1"
    return "int"


_CASES = {
    ("int", "int"): 2, ("int", "0"): 3, ("int", "1"): 4, ("0", "int"): 5, ("1", "int"): 6,
    ("0", "0"): 7, ("1", "1"): 8, ("0", "1"): 9, ("1", "0"): 10,
}


def classify(path: PLPath) -> int:
    """Case number 1..10 of ``path`` by its endpoint pattern."""
    if path.kind == THETA:
        return 1
    bp = path.breakpoints
    for t, v in bp[1:-1]:
        if v in (0, 1):
            raise NotNormalizable(f"path reaches the boundary point {v} at interior time {t}")
    if len(bp) == 2 and bp[0][1] == bp[1][1] and bp[0][1] in (0, 1):
        raise NotNormalizable("path rests on a boundary point; encode it as theta points instead")
    return _CASES[(_symbol(bp[0][1]), _symbol(bp[-1][1]))]


def apply_move(path: PLPath) -> tuple[str, int]:
    """The basic form ``path`` is homotopic to: ``(form, index)``."""
    case = classify(path)
    if case == 1:
        return (THETA, path.index)
    if case in (2, 3, 5, 7):
        return (ZERO, path.index)
    if case in (4, 6, 8):
        return (ONE, path.index)
    if case == 9:
        return (PLUS, path.index)
    return (MINUS, path.index)


def winding(path: PLPath) -> int:
    """Signed full crossings: +1 for 0 -> 1, -1 for 1 -> 0."""
    case = classify(path)
    return 1 if case == 9 else -1 if case == 10 else 0


def form_contribution(A: AlgebraPresentation, form: tuple[str, int]):
    """``(ntheta, nplus, nminus, left, right)`` of one basic form."""
    kind, idx = form
    zp, zl = [0] * A.p, [0] * A.l
    ntheta, nplus, nminus = list(zp), list(zl), list(zl)
    if kind == THETA:
        if idx >= A.p:
            raise NotNormalizable(f"theta_{idx + 1} does not exist (p = {A.p})")
        ntheta[idx] = 1
        return ntheta, nplus, nminus, list(ntheta), list(ntheta)
    if idx >= A.l:
        raise NotNormalizable(f"interval block {idx + 1} does not exist (l = {A.l})")
    at0, at1 = A.alpha.row(idx), A.beta.row(idx)
    if kind == ZERO:
        return at0, nplus, nminus, at0, at0
    if kind == ONE:
        return at1, nplus, nminus, at1, at1
    if kind == PLUS:
        nplus[idx] = 1
        return ntheta, nplus, nminus, at0, at1
    nminus[idx] = 1
    return ntheta, nplus, nminus, at1, at0


def _normalize_cell(A: AlgebraPresentation, cell: PLCell) -> Cell:
    acc = [[0] * A.p, [0] * A.l, [0] * A.l, [0] * A.p, [0] * A.p]
    for path, mult in cell.paths:
        if mult < 0:
            raise NotNormalizable("negative path multiplicity")
        for slot, vec in zip(acc, form_contribution(A, apply_move(path))):
            for i, x in enumerate(vec):
                slot[i] += mult * x
    ntheta, nplus, nminus, left, right = (tuple(v) for v in acc)
    if cell.left is not None and tuple(cell.left) != left:
        raise NotNormalizable(f"declared left trace {list(cell.left)} differs from {list(left)}")
    if cell.right is not None and tuple(cell.right) != right:
        raise NotNormalizable(f"declared right trace {list(cell.right)} differs from {list(right)}")
    return Cell(ntheta, nplus, nminus, left, right)


def normalize(A: AlgebraPresentation, B: AlgebraPresentation, pl: PLHom) -> MStandardHom:
    """Replace every path by its basic form; the result is m-standard."""
    if len(pl.cells) != B.l:
        raise NotNormalizable(f"{len(pl.cells)} blocks of cells given, target has l' = {B.l}")
    rows = []
    for jp, row in enumerate(pl.cells):
        if len(row) != pl.m:
            raise NotNormalizable(f"block {jp + 1} has {len(row)} cells, expected m = {pl.m}")
        rows.append(tuple(_normalize_cell(A, c) for c in row))
    out = MStandardHom(pl.m, pl.r, pl.lambda0, tuple(rows))
    try:
        validate_mstandard(A, B, out)
    except InvalidHom as e:
        raise NotNormalizable(str(e)) from None
    return out


def net_winding(A: AlgebraPresentation, pl: PLHom) -> IntMatrix:
    """``W[j', j]``: signed full crossings of block ``j`` summed over cells of block ``j'``."""
    rows = []
    for row in pl.cells:
        w = [0] * A.l
        for cell in row:
            for path, mult in cell.paths:
                if path.kind == INTERVAL:
                    w[path.index] += mult * winding(path)
        rows.append(w)
    return IntMatrix.from_rows(rows, cols=A.l)


_LINE_UP = ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(1)))
_LINE_DOWN = ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))


def to_pl(h: MStandardHom) -> PLHom:
    """Write an m-standard hom back as basic-form PL paths (inverse of :func:`normalize`)."""
    rows = []
    for row in h.cells:
        out = []
        for c in row:
            paths = []
            paths += [(PLPath.theta(i), n) for i, n in enumerate(c.ntheta) if n]
            paths += [(PLPath(INTERVAL, j, _LINE_UP), n) for j, n in enumerate(c.nplus) if n]
            paths += [(PLPath(INTERVAL, j, _LINE_DOWN), n) for j, n in enumerate(c.nminus) if n]
            out.append(PLCell(tuple(paths), c.left, c.right))
        rows.append(tuple(out))
    return PLHom(h.m, h.r, h.lambda0, tuple(rows))


# JSON ------------------------------------------------------------------------------

def pl_from_json(obj, A: AlgebraPresentation, B: AlgebraPresentation) -> PLHom:
    from .serialize import DocumentError, _get, dec_int, dec_matrix, dec_vec, fraction_from_json

    what = "PL hom"
    m = dec_int(_get(obj, "m", what), "m")
    r = dec_int(_get(obj, "r", what), "r")
    lam = dec_matrix(_get(obj, "lambda0", what), (B.p, A.p), "lambda0")
    raw = _get(obj, "cells", what)
    if not isinstance(raw, list):
        raise DocumentError("cells: expected a list")
    grid: list[list] = [[None] * m for _ in range(B.l)]
    counters = [0] * B.l
    for n, c in enumerate(raw):
        w = f"cells[{n}]"
        jp = dec_int(_get(c, "block", w), "block") - 1
        if not 0 <= jp < B.l:
            raise DocumentError(f"{w}: block {jp + 1} out of range 1..{B.l}")
        s = dec_int(c["index"], "index") - 1 if "index" in c else counters[jp]
        counters[jp] += 1
        if not 0 <= s < m or grid[jp][s] is not None:
            raise DocumentError(f"{w}: cell index {s + 1} out of range or repeated for block {jp + 1}")
        paths = []
        for pth in _get(c, "paths", w):
            src = _get(pth, "source", "path")
            if not (isinstance(src, list) and len(src) == 2 and src[0] in (THETA, INTERVAL)):
                raise DocumentError('path source must be ["theta", i] or ["interval", j]')
            idx = dec_int(src[1], "source index") - 1
            bps = tuple((fraction_from_json(t), fraction_from_json(v)) for t, v in pth.get("breakpoints", []))
            try:
                path = PLPath(src[0], idx, bps)
            except InvalidPath as e:
                raise DocumentError(str(e)) from None
            paths.append((path, dec_int(pth.get("mult", 1), "mult")))
        left = dec_vec(c["left"], A.p, "left") if "left" in c else None
        right = dec_vec(c["right"], A.p, "right") if "right" in c else None
        grid[jp][s] = PLCell(tuple(paths), left, right)
    for jp, row in enumerate(grid):
        if any(x is None for x in row):
            raise DocumentError(f"block {jp + 1}: expected {m} cells")
    return PLHom(m, r, lam, tuple(tuple(row) for row in grid))


def pl_to_json(pl: PLHom) -> dict:
    from .serialize import enc_int, enc_matrix, enc_vec, fraction_to_json

    cells = []
    for jp, row in enumerate(pl.cells):
        for s, c in enumerate(row):
            d = {"block": jp + 1, "index": s + 1, "paths": []}
            for path, mult in c.paths:
                p = {"source": [path.kind, path.index + 1]}
                if path.kind == INTERVAL:
                    p["breakpoints"] = [[fraction_to_json(t), fraction_to_json(v)] for t, v in path.breakpoints]
                p["mult"] = enc_int(mult)
                d["paths"].append(p)
            if c.left is not None:
                d["left"] = enc_vec(c.left)
            if c.right is not None:
                d["right"] = enc_vec(c.right)
            cells.append(d)
    return {"m": pl.m, "r": enc_int(pl.r), "lambda0": enc_matrix(pl.lambda0), "cells": cells}
