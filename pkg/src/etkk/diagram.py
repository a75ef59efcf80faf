"""The diagram group C(A,B), its subgroup M(A,B) and the quotient KK(A,B).

A commuting diagram between the six-term sequences of ``A`` and ``B`` is fixed
by its two middle maps: ``lambda0 : Z^p -> Z^p'`` and ``lambda1 : Z^l -> Z^l'``
subject to ``(alpha' - beta') lambda0 = lambda1 (alpha - beta)``.  The outer maps
on K0(A) and K1(A) are then forced, because ``K0(B) -> Z^p'`` is injective and
``Z^l -> K1(A)`` is surjective, so they are never stored.

Diagrams are flattened to vectors in ``Z^(p'p + l'l)``: ``lambda0`` row-major
first, then ``lambda1`` row-major.  KK coordinates are computed in the lattice
basis of C(A,B) returned by :func:`etkk.zlinalg.kernel_basis`, then pushed
through the row transform of the Smith form of the M(A,B) relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import AlgebraPresentation
from .zlinalg import (
    AbelianGroupPresentation,
    DimensionError,
    IntMatrix,
    kernel_basis,
    snf,
    solve_linear,
)


class NotADiagram(ValueError):
    """The pair does not satisfy the commuting condition."""


@dataclass(frozen=True)
class DiagramPair:
    lambda0: IntMatrix
    lambda1: IntMatrix

    def __add__(self, other: "DiagramPair") -> "DiagramPair":
        return diagram_add(self, other)

    def __neg__(self) -> "DiagramPair":
        return diagram_neg(self)

    def __sub__(self, other: "DiagramPair") -> "DiagramPair":
        return diagram_add(self, diagram_neg(other))

    def scale(self, c: int) -> "DiagramPair":
        return DiagramPair(self.lambda0.scale(c), self.lambda1.scale(c))

    def flatten(self) -> list[int]:
        return list(self.lambda0.entries) + list(self.lambda1.entries)


def diagram_add(d: DiagramPair, e: DiagramPair) -> DiagramPair:
    if d.lambda0.shape != e.lambda0.shape or d.lambda1.shape != e.lambda1.shape:
        raise DimensionError("diagram shapes differ")
    return DiagramPair(d.lambda0 + e.lambda0, d.lambda1 + e.lambda1)


def diagram_neg(d: DiagramPair) -> DiagramPair:
    return DiagramPair(-d.lambda0, -d.lambda1)


def zero_diagram(A: AlgebraPresentation, B: AlgebraPresentation) -> DiagramPair:
    return DiagramPair(IntMatrix.zeros(B.p, A.p), IntMatrix.zeros(B.l, A.l))


def unflatten(A: AlgebraPresentation, B: AlgebraPresentation, v) -> DiagramPair:
    n0 = B.p * A.p
    v = list(v)
    if len(v) != n0 + B.l * A.l:
        raise DimensionError("flat diagram has the wrong length")
    return DiagramPair(IntMatrix(B.p, A.p, tuple(v[:n0])), IntMatrix(B.l, A.l, tuple(v[n0:])))


def _check_shapes(A: AlgebraPresentation, B: AlgebraPresentation, d: DiagramPair):
    if d.lambda0.shape != (B.p, A.p):
        raise DimensionError(f"lambda0 has shape {d.lambda0.shape}, expected {(B.p, A.p)}")
    if d.lambda1.shape != (B.l, A.l):
        raise DimensionError(f"lambda1 has shape {d.lambda1.shape}, expected {(B.l, A.l)}")


def check_diagram(A: AlgebraPresentation, B: AlgebraPresentation, d: DiagramPair) -> bool:
    _check_shapes(A, B, d)
    return B.boundary @ d.lambda0 == d.lambda1 @ A.boundary


def constraint_matrix(A: AlgebraPresentation, B: AlgebraPresentation) -> IntMatrix:
    """Matrix of ``(lambda0, lambda1) -> (a'-b') lambda0 - lambda1 (a-b)`` on flat vectors."""
    p, l, pp, lp = A.p, A.l, B.p, B.l
    dA, dB = A.boundary, B.boundary
    ncols = pp * p + lp * l
    rows = []
    for jp in range(lp):
        for i in range(p):
            row = [0] * ncols
            for ip in range(pp):
                row[ip * p + i] += dB[jp, ip]
            for j in range(l):
                row[pp * p + jp * l + j] -= dA[j, i]
            rows.append(row)
    return IntMatrix.from_rows(rows, cols=ncols)


def unit_diagram(A: AlgebraPresentation, B: AlgebraPresentation, ip: int, j: int) -> DiagramPair:
    """``lambda_mu`` for the matrix unit ``mu = e_{ip, j}`` (0-based)."""
    mu = IntMatrix(B.p, A.l, tuple(int(a == ip and b == j) for a in range(B.p) for b in range(A.l)))
    return relation_diagram(A, B, mu)


def relation_diagram(A: AlgebraPresentation, B: AlgebraPresentation, mu: IntMatrix) -> DiagramPair:
    if mu.shape != (B.p, A.l):
        raise DimensionError(f"mu has shape {mu.shape}, expected {(B.p, A.l)}")
    return DiagramPair(mu @ A.boundary, B.boundary @ mu)


def m_generator_matrix(A: AlgebraPresentation, B: AlgebraPresentation) -> IntMatrix:
    """Columns: flattened ``lambda_mu`` for the matrix units, in row-major unit order."""
    cols = [unit_diagram(A, B, ip, j).flatten() for ip in range(B.p) for j in range(A.l)]
    return IntMatrix.from_columns(cols, B.p * A.p + B.l * A.l)


@dataclass(frozen=True)
class KKClass:
    free_part: tuple[int, ...]
    torsion_part: tuple[int, ...]
    torsion_moduli: tuple[int, ...] = field(default=(), compare=False)

    def is_zero(self) -> bool:
        return not any(self.free_part) and not any(self.torsion_part)

    def __str__(self) -> str:
        return f"free={list(self.free_part)} torsion={list(self.torsion_part)}"


@dataclass(frozen=True)
class KKPresentation:
    A: AlgebraPresentation
    B: AlgebraPresentation
    group: AbelianGroupPresentation
    c_basis: IntMatrix
    m_generators: IntMatrix
    relations: IntMatrix        # M generators in c_basis coordinates
    transform: IntMatrix        # row transform U of the Smith form of ``relations``
    transform_inv: IntMatrix
    invariants: tuple[int, ...]  # Smith diagonal of ``relations`` (nonzero part)

    def generator_diagrams(self) -> list[tuple[int, DiagramPair]]:
        """One diagram per cyclic summand, with its order (0 for infinite)."""
        out = []
        n = self.c_basis.cols
        for i in range(n):
            order = self.invariants[i] if i < len(self.invariants) else 0
            if order == 1:
                continue
            coords = self.transform_inv.col(i)
            out.append((order, unflatten(self.A, self.B, self.c_basis.apply(coords))))
        return out


def diagram_group(A: AlgebraPresentation, B: AlgebraPresentation) -> KKPresentation:
    C = kernel_basis(constraint_matrix(A, B))
    G = m_generator_matrix(A, B)
    rel_cols = []
    for col in G.columns():
        x = solve_linear(C, col)
        if x is None:
            raise ArithmeticError("an M(A,B) generator is outside C(A,B)")
        rel_cols.append(x)
    R = IntMatrix.from_columns(rel_cols, C.cols)
    S = snf(R)
    diag = tuple(d for d in S.diagonal if d)
    group = AbelianGroupPresentation(C.cols - len(diag), tuple(d for d in diag if d > 1))
    return KKPresentation(A, B, group, C, G, R, S.U, S.U_inv, diag)


def c_coordinates(P: KKPresentation, d: DiagramPair) -> list[int]:
    _check_shapes(P.A, P.B, d)
    x = solve_linear(P.c_basis, d.flatten())
    if x is None:
        raise NotADiagram("pair does not commute with the boundary maps")
    return x


def kk_class(P: KKPresentation, d: DiagramPair) -> KKClass:
    y = P.transform.apply(c_coordinates(P, d))
    r = len(P.invariants)
    torsion, moduli = [], []
    for i, dv in enumerate(P.invariants):
        if dv > 1:
            torsion.append(y[i] % dv)
            moduli.append(dv)
    return KKClass(tuple(y[r:]), tuple(torsion), tuple(moduli))


def kk_sub(P: KKPresentation, x: KKClass, y: KKClass) -> KKClass:
    return KKClass(
        tuple(a - b for a, b in zip(x.free_part, y.free_part)),
        tuple((a - b) % m for a, b, m in zip(x.torsion_part, y.torsion_part, x.torsion_moduli)),
        x.torsion_moduli,
    )


def m_membership(A: AlgebraPresentation, B: AlgebraPresentation, d: DiagramPair) -> Optional[IntMatrix]:
    """A ``mu`` with ``mu (a-b) = lambda0`` and ``(a'-b') mu = lambda1``, or ``None``."""
    if not check_diagram(A, B, d):
        raise NotADiagram("pair does not commute with the boundary maps")
    G = m_generator_matrix(A, B)
    x = solve_linear(G, d.flatten())
    if x is None:
        return None
    mu = IntMatrix(B.p, A.l, tuple(x))
    if relation_diagram(A, B, mu) != d:
        raise ArithmeticError("membership witness failed substitution")
    return mu
