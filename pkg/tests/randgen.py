"""Random small presentations, diagrams and homomorphisms for property tests."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from etkk.algebra import AlgebraPresentation
from etkk.diagram import DiagramPair, diagram_group, unit_diagram
from etkk.hom import (
    Cell,
    HomBlock,
    MStandardHom,
    NotRealizable,
    StandardHom,
    direct_sum,
    fibre_hom,
    induced_diagram,
    minimal_padding,
    realize_diagram,
    validate_any,
)
from etkk.paths import INTERVAL, PLCell, PLHom, PLPath, to_pl
from etkk.zlinalg import IntMatrix


def random_matrix(rng: random.Random, rows: int, cols: int, lo: int = -5, hi: int = 5) -> IntMatrix:
    return IntMatrix(rows, cols, tuple(rng.randint(lo, hi) for _ in range(rows * cols)))


def random_algebra(rng: random.Random, max_p: int = 3, max_l: int = 3, max_entry: int = 2,
                   allow_l0: bool = True) -> AlgebraPresentation:
    """A valid presentation with p, l <= 3 and entries <= ``max_entry``."""
    p = rng.randint(1, max_p)
    l = rng.randint(0 if allow_l0 else 1, max_l)
    k = [rng.randint(1, max_entry) for _ in range(p)]
    alpha, beta = [], []
    for _ in range(l):
        row_a = [rng.randint(0, max_entry) for _ in range(p)]
        if not any(row_a):
            row_a[rng.randrange(p)] = 1
        h = sum(a * b for a, b in zip(row_a, k))
        for _ in range(40):
            row_b = [rng.randint(0, max_entry) for _ in range(p)]
            if sum(a * b for a, b in zip(row_b, k)) == h:
                break
        else:
            row_b = list(row_a)
        alpha.append(row_a)
        beta.append(row_b)
    return AlgebraPresentation.build(k, [sum(a * b for a, b in zip(r, k)) for r in alpha],
                                     IntMatrix.from_rows(alpha, cols=p),
                                     IntMatrix.from_rows(beta, cols=p))


def random_diagram(rng: random.Random, A, B, P=None, spread: int = 2) -> DiagramPair:
    P = P or diagram_group(A, B)
    coeffs = [rng.randint(-spread, spread) for _ in range(P.c_basis.cols)]
    v = P.c_basis.apply(coeffs)
    n0 = B.p * A.p
    return DiagramPair(IntMatrix(B.p, A.p, tuple(v[:n0])), IntMatrix(B.l, A.l, tuple(v[n0:])))


def swap_in_loops(rng: random.Random, A, h: StandardHom, tries: int = 3) -> StandardHom:
    """Trade constant points for a forward/backward traversal pair (same diagram)."""
    blocks = list(h.blocks)
    for _ in range(tries):
        if not blocks or not A.l:
            break
        jp, j = rng.randrange(len(blocks)), rng.randrange(A.l)
        b = blocks[jp]
        need = [a + c for a, c in zip(A.alpha.row(j), A.beta.row(j))]
        if all(x >= y for x, y in zip(b.ntheta, need)):
            nplus, nminus = list(b.nplus), list(b.nminus)
            nplus[j] += 1
            nminus[j] += 1
            blocks[jp] = HomBlock(tuple(x - y for x, y in zip(b.ntheta, need)), tuple(nplus), tuple(nminus))
    return StandardHom(h.r, h.lambda0, tuple(blocks))


def realize_padded(A, B, d: DiagramPair, extra: int = 0) -> Optional[StandardHom]:
    try:
        c = minimal_padding(A, B, d)
    except NotRealizable:
        return None
    return realize_diagram(A, B, d, c + extra)


def random_standard_hom(rng: random.Random, A, B, P=None) -> Optional[StandardHom]:
    """A valid 1-standard hom or ``None`` when unitality cannot be met for the drawn diagram."""
    for _ in range(10):
        h = realize_padded(A, B, random_diagram(rng, A, B, P), rng.randint(0, 1))
        if h is None:
            continue
        if rng.random() < 0.5:
            tau = [rng.randint(0, 1) for _ in range(A.p)]
            if any(tau):
                h = direct_sum(h, fibre_hom(A, B, tau))
        h = swap_in_loops(rng, A, h)
        validate_any(A, B, h)
        return h
    return None


def split_into_cells(rng: random.Random, A, B, h: StandardHom, m: int) -> Optional[MStandardHom]:
    """Distribute the traversals of ``h`` over ``m`` cells, or ``None`` if a cell goes negative."""
    lam = h.lambda0
    start = B.alpha @ lam
    rows = []
    for jp, blk in enumerate(h.blocks):
        assign = [[[0] * A.l, [0] * A.l] for _ in range(m)]
        for j in range(A.l):
            for _ in range(blk.nplus[j]):
                assign[rng.randrange(m)][0][j] += 1
            for _ in range(blk.nminus[j]):
                assign[rng.randrange(m)][1][j] += 1
        trace = start.row(jp)
        row = []
        for np_, nm in assign:
            out = [trace[i] - sum(np_[j] * A.alpha[j, i] + nm[j] * A.beta[j, i] for j in range(A.l))
                   for i in range(A.p)]
            if any(x < 0 for x in out):
                return None
            right = [out[i] + sum(np_[j] * A.beta[j, i] + nm[j] * A.alpha[j, i] for j in range(A.l))
                     for i in range(A.p)]
            row.append(Cell(tuple(out), tuple(np_), tuple(nm), tuple(trace), tuple(right)))
            trace = right
        rows.append(tuple(row))
    ms = MStandardHom(m, h.r, lam, tuple(rows))
    validate_any(A, B, ms)
    return ms


def random_any_hom(rng: random.Random, A, B, P=None):
    h = random_standard_hom(rng, A, B, P)
    if h is None or rng.random() < 0.5:
        return h
    ms = split_into_cells(rng, A, B, h, rng.randint(1, 3))
    return ms if ms is not None else h


def _level(rng: random.Random) -> Fraction:
    # never exactly 1/2, so level-crossing counts are unambiguous
    while True:
        v = Fraction(rng.randint(1, 19), 20)
        if v != Fraction(1, 2):
            return v


def zigzag(rng: random.Random, j: int, v0, v1) -> PLPath:
    n = rng.randint(1 if v0 == v1 else 0, 3)
    times = sorted({Fraction(rng.randint(1, 99), 100) for _ in range(n)})
    pts = [(Fraction(0), Fraction(v0))] + [(t, _level(rng)) for t in times] + [(Fraction(1), Fraction(v1))]
    return PLPath(INTERVAL, j, tuple(pts))


def scramble_pl(rng: random.Random, A, pl: PLHom) -> PLHom:
    """Replace basic traversals by zigzags and trade theta points for boundary bumps."""
    rows = []
    for row in pl.cells:
        out = []
        for cell in row:
            paths = []
            theta = [0] * A.p
            for path, mult in cell.paths:
                if path.kind == INTERVAL:
                    v0, v1 = path.breakpoints[0][1], path.breakpoints[-1][1]
                    paths.extend((zigzag(rng, path.index, v0, v1), 1) for _ in range(mult))
                else:
                    theta[path.index] += mult
            for j in range(A.l):
                for end, vec in ((0, A.alpha.row(j)), (1, A.beta.row(j))):
                    if rng.random() < 0.5 and all(t >= v for t, v in zip(theta, vec)):
                        theta = [t - v for t, v in zip(theta, vec)]
                        paths.append((zigzag(rng, j, end, end), 1))
            paths.extend((PLPath.theta(i), n) for i, n in enumerate(theta) if n)
            rng.shuffle(paths)
            out.append(PLCell(tuple(paths), cell.left, cell.right))
        rows.append(tuple(out))
    return PLHom(pl.m, pl.r, pl.lambda0, tuple(rows))


def random_pl(rng: random.Random, A, B, P=None) -> Optional[PLHom]:
    h = random_standard_hom(rng, A, B, P)
    if h is None:
        return None
    ms = split_into_cells(rng, A, B, h, rng.randint(1, 3))
    if ms is None:
        return None
    return scramble_pl(rng, A, to_pl(ms))


def equivalent_pair(rng: random.Random, A, B, P=None):
    """Two homs with equal KK class but (usually) different diagrams."""
    P = P or diagram_group(A, B)
    d = random_diagram(rng, A, B, P)
    mu = random_matrix(rng, B.p, A.l, -1, 1)
    e = d
    for ip in range(B.p):
        for j in range(A.l):
            if mu[ip, j]:
                e = e + unit_diagram(A, B, ip, j).scale(mu[ip, j])
    try:
        c = max(minimal_padding(A, B, d), minimal_padding(A, B, e))
    except NotRealizable:
        return None
    h1, h2 = realize_diagram(A, B, d, c), realize_diagram(A, B, e, c)
    h1, h2 = swap_in_loops(rng, A, h1), swap_in_loops(rng, A, h2)
    return h1, h2
