"""Finite presentations of unital one-dimensional NCCW complexes and their K-theory.

An algebra is given by ``F1 = M_k1 + ... + M_kp``, ``F2 = M_h1 + ... + M_hl`` and
the multiplicity matrices ``alpha``, ``beta`` (each ``l x p``) of the two
boundary maps ``F1 -> F2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .zlinalg import AbelianGroupPresentation, IntMatrix, cokernel, kernel_basis, solve_linear


class InvalidPresentation(ValueError):
    """The presentation data does not describe a unital algebra of the class."""


@dataclass(frozen=True)
class AlgebraPresentation:
    p: int
    k: tuple[int, ...]
    l: int
    h: tuple[int, ...]
    alpha: IntMatrix
    beta: IntMatrix

    @classmethod
    def build(cls, k: Sequence[int], h: Sequence[int], alpha, beta) -> "AlgebraPresentation":
        """Convenience constructor from nested lists; validates."""
        p, l = len(k), len(h)
        a = alpha if isinstance(alpha, IntMatrix) else IntMatrix.from_rows(alpha, cols=p)
        b = beta if isinstance(beta, IntMatrix) else IntMatrix.from_rows(beta, cols=p)
        A = cls(p, tuple(k), l, tuple(h), a, b)
        validate(A)
        return A

    @property
    def boundary(self) -> IntMatrix:
        """``alpha - beta``: the map K0(F1) -> K1(SF2)."""
        return self.alpha - self.beta

    @property
    def scale(self) -> list[int]:
        return list(self.k)


def validate(A: AlgebraPresentation) -> None:
    """Raise :class:`InvalidPresentation` naming the first violated condition."""
    if A.p < 1:
        raise InvalidPresentation("p must be at least 1")
    if A.l < 0:
        raise InvalidPresentation("l must be non-negative")
    if len(A.k) != A.p:
        raise InvalidPresentation(f"k has {len(A.k)} entries, expected p={A.p}")
    if len(A.h) != A.l:
        raise InvalidPresentation(f"h has {len(A.h)} entries, expected l={A.l}")
    for name, vec in (("k", A.k), ("h", A.h)):
        for i, x in enumerate(vec):
            if x < 1:
                raise InvalidPresentation(f"{name}[{i + 1}] = {x} is not positive")
    for name, M in (("alpha", A.alpha), ("beta", A.beta)):
        if M.shape != (A.l, A.p):
            raise InvalidPresentation(f"{name} has shape {M.shape}, expected {(A.l, A.p)}")
        for i in range(M.rows):
            for j in range(M.cols):
                if M[i, j] < 0:
                    raise InvalidPresentation(f"{name}[{i + 1},{j + 1}] = {M[i, j]} is negative")
    for name, M, endpoint in (("alpha", A.alpha, 0), ("beta", A.beta, 1)):
        got = M.apply(A.k)
        for j, (g, want) in enumerate(zip(got, A.h)):
            if g != want:
                raise InvalidPresentation(
                    f"boundary map at {endpoint} is not unital on block {j + 1}: "
                    f"({name} k)[{j + 1}] = {g} but h[{j + 1}] = {want}"
                )


@dataclass(frozen=True)
class KTheoryResult:
    k0_basis: IntMatrix
    k0_rank: int
    k1: AbelianGroupPresentation
    scale: tuple[int, ...]

    def summary(self) -> str:
        k0 = "Z" if self.k0_rank == 1 else ("0" if self.k0_rank == 0 else f"Z^{self.k0_rank}")
        return f"K0 {_rel(k0)}, K1 {_rel(str(self.k1))}"


def _rel(group: str) -> str:
    return "= 0" if group == "0" else f"≅ {group}"


def k_theory(A: AlgebraPresentation) -> KTheoryResult:
    validate(A)
    K = kernel_basis(A.boundary)
    return KTheoryResult(k0_basis=K, k0_rank=K.cols, k1=cokernel(A.boundary), scale=A.k)


def scale_coordinates(A: AlgebraPresentation, kt: KTheoryResult | None = None) -> list[int]:
    """Coordinates of the unit class in the K0 basis."""
    kt = kt or k_theory(A)
    x = solve_linear(kt.k0_basis, list(A.k))
    if x is None:
        raise ArithmeticError("scale is not in ker(alpha - beta)")
    return x


def k0_positive(A: AlgebraPresentation, x: Sequence[int], kt: KTheoryResult | None = None) -> bool:
    kt = kt or k_theory(A)
    if len(x) != kt.k0_rank:
        raise ValueError(f"{len(x)} coordinates given, K0 has rank {kt.k0_rank}")
    return all(v >= 0 for v in kt.k0_basis.apply(list(x)))


# small named presentations -------------------------------------------------

def matrix_algebra(n: int = 1) -> AlgebraPresentation:
    """``M_n`` (no interval part); ``n = 1`` is the point."""
    return AlgebraPresentation.build([n], [], IntMatrix.zeros(0, 1), IntMatrix.zeros(0, 1))


def point() -> AlgebraPresentation:
    return matrix_algebra(1)


def circle_matrix(n: int = 1) -> AlgebraPresentation:
    """``M_n(C(S^1))``: one interval with both ends glued to the same ``M_n``."""
    return AlgebraPresentation.build([n], [n], [[1]], [[1]])


def circle() -> AlgebraPresentation:
    return circle_matrix(1)


def interval() -> AlgebraPresentation:
    """``C[0,1]``: endpoint 0 is the first point of F1, endpoint 1 the second."""
    return AlgebraPresentation.build([1, 1], [1], [[1, 0]], [[0, 1]])


def figure_eight() -> AlgebraPresentation:
    """Two circles sharing one point."""
    return AlgebraPresentation.build([1], [1, 1], [[1], [1]], [[1], [1]])


def two_by_two_bridge() -> AlgebraPresentation:
    """``F1 = C^3``, ``F2 = M_2``; ``f(0) = diag(a, c)``, ``f(1) = diag(b, c)``."""
    return AlgebraPresentation.build([1, 1, 1], [2], [[1, 0, 1]], [[0, 1, 1]])
