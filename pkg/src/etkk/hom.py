"""Standard-form homomorphisms as multiplicity data.

A 1-standard homomorphism ``A -> M_r(B)`` is described by

* ``lambda0`` (``p' x p``): multiplicity of each F1 block inside each F1' fibre;
* for every interval block ``j'`` of ``B``: how many spectrum functions are the
  constant point ``theta_i`` (``ntheta``), the forward traversal ``(t, j)``
  (``nplus``) and the backward traversal ``(1-t, j)`` (``nminus``).

The data comes from an actual homomorphism exactly when the unitality, size
and endpoint equations hold; the conjugating unitary is then supplied by the
gluing lemma for this class and is never represented here.

An m-standard homomorphism carries the same tables per cell of an m-partition
of every interval block, plus the fibre decomposition (``left``/``right``
traces, vectors in N^p) at both ends of each cell.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence, Union

from .algebra import AlgebraPresentation
from .diagram import DiagramPair, check_diagram, unit_diagram, NotADiagram
from .zlinalg import DimensionError, IntMatrix


class InvalidHom(ValueError):
    """Standard-form data violates one of its defining equations."""


class NotRealizable(ValueError):
    """``realize_diagram`` cannot produce non-negative tables at this padding."""

    def __init__(self, message: str, most_negative: int = 0, needed_c: Optional[int] = None):
        super().__init__(message)
        self.most_negative = most_negative
        self.needed_c = needed_c


Vec = tuple[int, ...]


def _vec(xs) -> Vec:
    return tuple(int(x) for x in xs)


def _add(u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def _sub(u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def _mul(c: int, u: Sequence[int]) -> Vec:
    return tuple(c * a for a in u)


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v, strict=True))


@dataclass(frozen=True)
class HomBlock:
    ntheta: Vec
    nplus: Vec
    nminus: Vec

    @property
    def winding(self) -> Vec:
        return _sub(self.nplus, self.nminus)

    def __add__(self, other: "HomBlock") -> "HomBlock":
        return HomBlock(_add(self.ntheta, other.ntheta), _add(self.nplus, other.nplus),
                        _add(self.nminus, other.nminus))


@dataclass(frozen=True)
class StandardHom:
    r: int
    lambda0: IntMatrix
    blocks: tuple[HomBlock, ...]

    def is_finite_dimensional(self) -> bool:
        return all(not any(b.nplus) and not any(b.nminus) for b in self.blocks)

    def is_empty(self) -> bool:
        return self.r == 0


@dataclass(frozen=True)
class Cell:
    ntheta: Vec
    nplus: Vec
    nminus: Vec
    left: Vec
    right: Vec


@dataclass(frozen=True)
class MStandardHom:
    m: int
    r: int
    lambda0: IntMatrix
    cells: tuple[tuple[Cell, ...], ...]  # cells[j'][s]

    def cut_points(self) -> list[Fraction]:
        return [Fraction(s, self.m) for s in range(1, self.m)]


AnyHom = Union[StandardHom, MStandardHom]


# endpoint arithmetic --------------------------------------------------------

def left_trace(A: AlgebraPresentation, ntheta, nplus, nminus) -> Vec:
    """Fibre at the start of a cell: ``ntheta + nplus.alpha + nminus.beta``."""
    return tuple(
        ntheta[i] + sum(nplus[j] * A.alpha[j, i] + nminus[j] * A.beta[j, i] for j in range(A.l))
        for i in range(A.p)
    )


def right_trace(A: AlgebraPresentation, ntheta, nplus, nminus) -> Vec:
    return tuple(
        ntheta[i] + sum(nplus[j] * A.beta[j, i] + nminus[j] * A.alpha[j, i] for j in range(A.l))
        for i in range(A.p)
    )


def cell_size(A: AlgebraPresentation, ntheta, nplus, nminus) -> int:
    return _dot(ntheta, A.k) + _dot(_add(nplus, nminus), A.h)


def fibre_targets(B: AlgebraPresentation, lambda0: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """``(alpha' lambda0, beta' lambda0)``: required fibres at 0 and 1 of each block."""
    return B.alpha @ lambda0, B.beta @ lambda0


# validation -----------------------------------------------------------------

def _check_vec(name: str, v, n: int, where: str):
    if len(v) != n:
        raise InvalidHom(f"{where}: {name} has length {len(v)}, expected {n}")
    for i, x in enumerate(v):
        if x < 0:
            raise InvalidHom(f"{where}: {name}[{i + 1}] = {x} is negative")


def _check_common(A: AlgebraPresentation, B: AlgebraPresentation, r: int, lambda0: IntMatrix,
                  nblocks: int, allow_empty: bool):
    if lambda0.shape != (B.p, A.p):
        raise InvalidHom(f"lambda0 has shape {lambda0.shape}, expected {(B.p, A.p)}")
    for ip in range(B.p):
        for i in range(A.p):
            if lambda0[ip, i] < 0:
                raise InvalidHom(f"lambda0[{ip + 1},{i + 1}] = {lambda0[ip, i]} is negative")
    if nblocks != B.l:
        raise InvalidHom(f"{nblocks} interval blocks given, target has l'={B.l}")
    if r < 0 or (r == 0 and not allow_empty):
        raise InvalidHom(f"amplification r = {r} must be at least 1")
    got = lambda0.apply(A.k)
    for ip in range(B.p):
        if got[ip] != r * B.k[ip]:
            raise InvalidHom(
                f"unitality fails at F1' block {ip + 1}: (lambda0 k)[{ip + 1}] = {got[ip]}, "
                f"r k'[{ip + 1}] = {r * B.k[ip]}"
            )


def _check_tables(A, B, jp, r, ntheta, nplus, nminus, left_want, right_want, where):
    _check_vec("ntheta", ntheta, A.p, where)
    _check_vec("nplus", nplus, A.l, where)
    _check_vec("nminus", nminus, A.l, where)
    size = cell_size(A, ntheta, nplus, nminus)
    if size != r * B.h[jp]:
        raise InvalidHom(f"{where}: size {size} != r h'[{jp + 1}] = {r * B.h[jp]}")
    left = left_trace(A, ntheta, nplus, nminus)
    for i in range(A.p):
        if left[i] != left_want[i]:
            raise InvalidHom(
                f"{where}: left endpoint equation fails at theta_{i + 1}: {left[i]} != {left_want[i]}"
            )
    right = right_trace(A, ntheta, nplus, nminus)
    for i in range(A.p):
        if right[i] != right_want[i]:
            raise InvalidHom(
                f"{where}: right endpoint equation fails at theta_{i + 1}: {right[i]} != {right_want[i]}"
            )


def validate_standard(A: AlgebraPresentation, B: AlgebraPresentation, h: StandardHom,
                      allow_empty: bool = False) -> None:
    _check_common(A, B, h.r, h.lambda0, len(h.blocks), allow_empty)
    L, R = fibre_targets(B, h.lambda0)
    for jp, blk in enumerate(h.blocks):
        _check_tables(A, B, jp, h.r, blk.ntheta, blk.nplus, blk.nminus,
                      L.row(jp), R.row(jp), f"block {jp + 1}")


def validate_mstandard(A: AlgebraPresentation, B: AlgebraPresentation, h: MStandardHom) -> None:
    if h.m < 1:
        raise InvalidHom(f"partition count m = {h.m} must be at least 1")
    _check_common(A, B, h.r, h.lambda0, len(h.cells), False)
    L, R = fibre_targets(B, h.lambda0)
    for jp, row in enumerate(h.cells):
        if len(row) != h.m:
            raise InvalidHom(f"block {jp + 1}: {len(row)} cells, expected m = {h.m}")
        for s, cell in enumerate(row):
            where = f"block {jp + 1} cell {s + 1}"
            _check_vec("left", cell.left, A.p, where)
            _check_vec("right", cell.right, A.p, where)
            _check_tables(A, B, jp, h.r, cell.ntheta, cell.nplus, cell.nminus,
                          cell.left, cell.right, where)
            if s + 1 < h.m and cell.right != row[s + 1].left:
                raise InvalidHom(f"{where}: right trace does not match the left trace of the next cell")
        if tuple(row[0].left) != tuple(L.row(jp)):
            raise InvalidHom(f"block {jp + 1}: left trace at 0 differs from (alpha' lambda0)")
        if tuple(row[-1].right) != tuple(R.row(jp)):
            raise InvalidHom(f"block {jp + 1}: right trace at 1 differs from (beta' lambda0)")


def validate_any(A, B, h: AnyHom, allow_empty: bool = False) -> None:
    if isinstance(h, MStandardHom):
        validate_mstandard(A, B, h)
    else:
        validate_standard(A, B, h, allow_empty=allow_empty)


# diagrams and sums ------------------------------------------------------------

def induced_diagram(A: AlgebraPresentation, B: AlgebraPresentation, h: AnyHom) -> DiagramPair:
    """``lambda1[j', j]`` is the net number of forward traversals of block ``j``."""
    if isinstance(h, MStandardHom):
        rows = []
        for row in h.cells:
            w = (0,) * A.l
            for cell in row:
                w = _add(w, _sub(cell.nplus, cell.nminus))
            rows.append(w)
    else:
        rows = [blk.winding for blk in h.blocks]
    return DiagramPair(h.lambda0, IntMatrix.from_rows(rows, cols=A.l))


def empty_hom(A: AlgebraPresentation, B: AlgebraPresentation) -> StandardHom:
    return StandardHom(0, IntMatrix.zeros(B.p, A.p),
                       tuple(HomBlock((0,) * A.p, (0,) * A.l, (0,) * A.l) for _ in range(B.l)))


def direct_sum(h1: AnyHom, h2: AnyHom) -> AnyHom:
    """Block-diagonal sum.  An m-standard summand may only meet a finite-dimensional one."""
    if h1.lambda0.shape != h2.lambda0.shape:
        raise DimensionError("summands have different source/target shapes")
    if isinstance(h1, StandardHom) and isinstance(h2, StandardHom):
        if len(h1.blocks) != len(h2.blocks):
            raise DimensionError("summands have different block counts")
        return StandardHom(h1.r + h2.r, h1.lambda0 + h2.lambda0,
                           tuple(a + b for a, b in zip(h1.blocks, h2.blocks)))
    if isinstance(h1, MStandardHom) and isinstance(h2, MStandardHom):
        if h1.m != h2.m:
            raise DimensionError("m-standard summands use different partitions")
        cells = tuple(
            tuple(Cell(_add(a.ntheta, b.ntheta), _add(a.nplus, b.nplus), _add(a.nminus, b.nminus),
                       _add(a.left, b.left), _add(a.right, b.right)) for a, b in zip(ra, rb))
            for ra, rb in zip(h1.cells, h2.cells)
        )
        return MStandardHom(h1.m, h1.r + h2.r, h1.lambda0 + h2.lambda0, cells)
    ms, fd = (h1, h2) if isinstance(h1, MStandardHom) else (h2, h1)
    if not fd.is_finite_dimensional():
        raise ValueError("an m-standard homomorphism can only be summed with a finite-dimensional one")
    return direct_sum(ms, constant_cells(fd, ms.m))


def constant_cells(h: StandardHom, m: int) -> MStandardHom:
    """A finite-dimensional standard hom written over an m-partition."""
    if not h.is_finite_dimensional():
        raise ValueError("only finite-dimensional homs are constant along the interval")
    cells = tuple(
        tuple(Cell(b.ntheta, b.nplus, b.nminus, b.ntheta, b.ntheta) for _ in range(m))
        for b in h.blocks
    )
    return MStandardHom(m, h.r, h.lambda0, cells)


def single_cell(A: AlgebraPresentation, h: StandardHom) -> MStandardHom:
    cells = tuple(
        (Cell(b.ntheta, b.nplus, b.nminus,
              left_trace(A, b.ntheta, b.nplus, b.nminus),
              right_trace(A, b.ntheta, b.nplus, b.nminus)),)
        for b in h.blocks
    )
    return MStandardHom(1, h.r, h.lambda0, cells)


def as_standard(h: MStandardHom) -> StandardHom:
    if h.m != 1 and h.cells:
        raise ValueError("only a 1-cell m-standard hom is already 1-standard")
    return StandardHom(h.r, h.lambda0,
                       tuple(HomBlock(row[0].ntheta, row[0].nplus, row[0].nminus) for row in h.cells))


def fibre_hom(A: AlgebraPresentation, B: AlgebraPresentation, tau: Sequence[int]) -> StandardHom:
    """The constant homomorphism ``(sum_i tau_i theta_i) (x) 1_B``.

    Its F1' fibre at block ``i'`` is ``k'_{i'}`` copies of the representation
    ``tau``, and each interval block ``j'`` carries ``h'_{j'}`` copies.
    """
    tau = _vec(tau)
    if len(tau) != A.p or any(x < 0 for x in tau):
        raise ValueError("fibre must be a non-negative vector of length p")
    lam = IntMatrix(B.p, A.p, tuple(B.k[ip] * tau[i] for ip in range(B.p) for i in range(A.p)))
    blocks = tuple(HomBlock(_mul(B.h[jp], tau), (0,) * A.l, (0,) * A.l) for jp in range(B.l))
    return StandardHom(_dot(tau, A.k), lam, blocks)


def padding_diagram(A: AlgebraPresentation, B: AlgebraPresentation) -> DiagramPair:
    """Diagram of the padding hom: every column of ``lambda0`` is the scale ``k'``, ``lambda1 = 0``."""
    return DiagramPair(IntMatrix(B.p, A.p, tuple(B.k[ip] for ip in range(B.p) for _ in range(A.p))),
                       IntMatrix.zeros(B.l, A.l))


def identity_hom(A: AlgebraPresentation) -> StandardHom:
    """``id : A -> A``; block ``j`` is the single traversal ``(t, j)``."""
    lam = IntMatrix.identity(A.p)
    blocks = tuple(HomBlock((0,) * A.p, tuple(int(j == jj) for jj in range(A.l)), (0,) * A.l)
                   for j in range(A.l))
    return StandardHom(1, lam, blocks)


# stabilizers and realization ---------------------------------------------------

def cut_traces(h: MStandardHom) -> list[list[Vec]]:
    """``out[k][j']``: fibre of block ``j'`` at the cut point ``(k+1)/m``."""
    return [[row[s].right for row in h.cells] for s in range(h.m - 1)]


def point_evaluation_stabilizer(A: AlgebraPresentation, B: AlgebraPresentation,
                                psi: MStandardHom) -> StandardHom:
    """Sum over the interior cut points of ``psi`` of (evaluation there) (x) 1_B."""
    tau = (0,) * A.p
    for fibres in cut_traces(psi):
        for t in fibres:
            tau = _add(tau, t)
    return fibre_hom(A, B, tau)


def _realize_tables(A, B, d: DiagramPair, c: int):
    kap = padding_diagram(A, B)
    lam = d.lambda0 + kap.lambda0.scale(c)
    L = B.alpha @ lam
    blocks = []
    for jp in range(B.l):
        w = d.lambda1.row(jp)
        nplus = tuple(max(x, 0) for x in w)
        nminus = tuple(max(-x, 0) for x in w)
        base = left_trace(A, (0,) * A.p, nplus, nminus)
        ntheta = _sub(L.row(jp), base)
        blocks.append((ntheta, nplus, nminus))
    return lam, blocks


def _unitality_r(A, B, lam: IntMatrix) -> Optional[int]:
    v = lam.apply(A.k)
    r = None
    for ip in range(B.p):
        if v[ip] % B.k[ip]:
            return None
        q = v[ip] // B.k[ip]
        if r is None:
            r = q
        elif r != q:
            return None
    return r


def realize_diagram(A: AlgebraPresentation, B: AlgebraPresentation, d: DiagramPair, c: int,
                    allow_empty: bool = False) -> StandardHom:
    """A 1-standard hom inducing ``d + c P`` where ``P`` is :func:`padding_diagram`.

    Traversals are minimal (``nplus = max(lambda1, 0)``, ``nminus = max(-lambda1, 0)``)
    and the constant points are solved from the left endpoint equations.
    """
    if c < 0:
        raise ValueError("padding must be non-negative")
    if not check_diagram(A, B, d):
        raise NotADiagram("pair does not commute with the boundary maps")
    lam, blocks = _realize_tables(A, B, d, c)
    r = _unitality_r(A, B, lam)
    if r is None:
        raise NotRealizable("lambda0 k is not a multiple of the scale k' for any padding",
                            needed_c=None)
    worst = min([0] + list(lam.entries) + [x for nt, _, _ in blocks for x in nt])
    if worst < 0:
        raise NotRealizable(f"negative multiplicity {worst} at padding c={c}",
                            most_negative=worst, needed_c=_padding_bound(A, B, d, allow_empty))
    if r < 0 or (r == 0 and not allow_empty):
        raise NotRealizable(f"realization at c={c} has amplification r={r}",
                            most_negative=min(r, 0), needed_c=_padding_bound(A, B, d, allow_empty))
    h = StandardHom(r, lam, tuple(HomBlock(nt, np_, nm) for nt, np_, nm in blocks))
    for jp, blk in enumerate(h.blocks):
        want = (B.beta @ lam).row(jp)
        got = right_trace(A, blk.ntheta, blk.nplus, blk.nminus)
        if tuple(got) != tuple(want):
            raise NotRealizable(f"right endpoint residual nonzero at block {jp + 1}")
    validate_standard(A, B, h, allow_empty=allow_empty)
    return h


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _padding_bound(A, B, d: DiagramPair, allow_empty: bool) -> Optional[int]:
    """Least ``c`` making every entry non-negative (and ``r >= 1`` unless empty allowed)."""
    lam, blocks = _realize_tables(A, B, d, 0)
    r0 = _unitality_r(A, B, lam)
    if r0 is None:
        return None
    c = 0
    for ip in range(B.p):
        for i in range(A.p):
            c = max(c, _ceil_div(-lam[ip, i], B.k[ip]))
    # each unit of padding adds h'_{j'} to every ntheta entry of block j'
    for jp, (nt, _, _) in enumerate(blocks):
        for x in nt:
            c = max(c, _ceil_div(-x, B.h[jp]))
    # each unit of padding adds sum(k) to r
    need_r = 0 if allow_empty else 1
    c = max(c, _ceil_div(need_r - r0, sum(A.k)))
    return c


def minimal_padding(A: AlgebraPresentation, B: AlgebraPresentation, d: DiagramPair,
                    allow_empty: bool = False) -> int:
    """Least ``c`` at which :func:`realize_diagram` succeeds."""
    if not check_diagram(A, B, d):
        raise NotADiagram("pair does not commute with the boundary maps")
    c = _padding_bound(A, B, d, allow_empty)
    if c is None:
        raise NotRealizable("lambda0 k is not a multiple of the scale k' for any padding")
    realize_diagram(A, B, d, c, allow_empty=allow_empty)
    return c


def correction_pair(A: AlgebraPresentation, B: AlgebraPresentation, ip: int, j: int, sign: int,
                    c: Optional[int] = None) -> tuple[int, StandardHom, StandardHom]:
    """For the unit ``sign * e_{ip, j}``: ``(c, eta, eta0)``.

    ``eta0`` is 1-standard and induces ``c P + sign lambda_e`` (``P`` the padding diagram); ``eta`` is the
    finite-dimensional hom inducing ``c P`` that ``eta0`` is homotopic to.
    """
    lam = unit_diagram(A, B, ip, j).scale(sign)
    if c is None:
        c = max(1, minimal_padding(A, B, lam))
    eta0 = realize_diagram(A, B, lam, c)
    eta = fibre_hom(A, B, (c,) * A.p)
    return c, eta, eta0


def concatenate_cells(A: AlgebraPresentation, B: AlgebraPresentation, psi: MStandardHom,
                      eta: Optional[StandardHom] = None) -> StandardHom:
    """The 1-standard hom homotopic to ``psi + stabilizer``.

    Each cell of ``psi`` is stretched over the whole interval; the stabilizer's
    fibres fill in the constant points the cut points no longer use.
    """
    if eta is None:
        eta = point_evaluation_stabilizer(A, B, psi)
    cuts = cut_traces(psi)
    blocks = []
    for jp, row in enumerate(psi.cells):
        ntheta = eta.blocks[jp].ntheta
        nplus = nminus = (0,) * A.l
        for cell in row:
            ntheta = _add(ntheta, cell.ntheta)
            nplus = _add(nplus, cell.nplus)
            nminus = _add(nminus, cell.nminus)
        for fibres in cuts:
            ntheta = _sub(ntheta, fibres[jp])
        blocks.append(HomBlock(ntheta, nplus, nminus))
    return StandardHom(psi.r + eta.r, psi.lambda0 + eta.lambda0, tuple(blocks))
