import random

import pytest

from etkk.algebra import circle, figure_eight, interval, point, two_by_two_bridge
from etkk.diagram import DiagramPair, check_diagram, diagram_group, unit_diagram, zero_diagram
from etkk.hom import (
    Cell,
    HomBlock,
    InvalidHom,
    MStandardHom,
    NotRealizable,
    StandardHom,
    direct_sum,
    fibre_hom,
    identity_hom,
    induced_diagram,
    padding_diagram,
    minimal_padding,
    point_evaluation_stabilizer,
    realize_diagram,
    validate_mstandard,
    validate_standard,
)
from etkk.zlinalg import IntMatrix

from randgen import random_algebra, random_any_hom, random_diagram, random_standard_hom

EMPTY = IntMatrix.zeros(0, 1)


def delta(i):
    return StandardHom(1, IntMatrix.from_rows([[int(j == i) for j in range(3)]]), ())


def fold_map():
    return MStandardHom(2, 1, IntMatrix.from_rows([[1, 0]]), ((
        Cell((0, 0), (1,), (0,), (1, 0), (0, 1)),
        Cell((0, 0), (0,), (1,), (0, 1), (1, 0)),
    ),))


def word_hom(cells):
    """figure-eight -> circle m-standard hom from a list of (block, sign) letters."""
    row = []
    for j, sign in cells:
        nplus = tuple(int(sign > 0 and jj == j) for jj in range(2))
        nminus = tuple(int(sign < 0 and jj == j) for jj in range(2))
        row.append(Cell((0,), nplus, nminus, (1,), (1,)))
    return MStandardHom(len(cells), 1, IntMatrix.from_rows([[1]]), (tuple(row),))


# validation ------------------------------------------------------------------------

def test_delta_valid():
    validate_standard(two_by_two_bridge(), point(), delta(0))


def test_figure_eight_word_as_one_standard():
    A, B = figure_eight(), circle()
    ok = StandardHom(2, IntMatrix.from_rows([[2]]), (HomBlock((0,), (0, 2), (0, 0)),))
    validate_standard(A, B, ok)
    too_small = StandardHom(1, IntMatrix.from_rows([[1]]), (HomBlock((0,), (0, 2), (0, 0)),))
    with pytest.raises(InvalidHom):
        validate_standard(A, B, too_small)


def test_tampered_traversal_names_block():
    A, B = figure_eight(), circle()
    bad = StandardHom(2, IntMatrix.from_rows([[2]]), (HomBlock((0,), (0, 3), (0, 0)),))
    with pytest.raises(InvalidHom, match="block 1"):
        validate_standard(A, B, bad)


def test_empty_hom_rejected_unless_allowed():
    A, B = two_by_two_bridge(), point()
    empty = StandardHom(0, IntMatrix.zeros(1, 3), ())
    with pytest.raises(InvalidHom):
        validate_standard(A, B, empty)
    validate_standard(A, B, empty, allow_empty=True)


def test_negative_entry_rejected():
    A, B = two_by_two_bridge(), point()
    with pytest.raises(InvalidHom):
        validate_standard(A, B, StandardHom(1, IntMatrix.from_rows([[2, -1, 0]]), ()))


def test_unitality_checked():
    A, B = two_by_two_bridge(), point()
    with pytest.raises(InvalidHom):
        validate_standard(A, B, StandardHom(1, IntMatrix.from_rows([[1, 1, 0]]), ()))


def test_mstandard_trace_matching():
    A, B = interval(), circle()
    validate_mstandard(A, B, fold_map())
    h = fold_map()
    broken = MStandardHom(2, 1, h.lambda0, ((h.cells[0][0], Cell((0, 0), (0,), (1,), (1, 0), (0, 1))),))
    with pytest.raises(InvalidHom):
        validate_mstandard(A, B, broken)


# diagrams and sums ----------------------------------------------------------------------

def test_induced_diagram_delta():
    d = induced_diagram(two_by_two_bridge(), point(), delta(0))
    assert d == DiagramPair(IntMatrix.from_rows([[1, 0, 0]]), EMPTY)


def test_induced_diagram_of_word():
    A, B = figure_eight(), circle()
    h = StandardHom(4, IntMatrix.from_rows([[4]]), (HomBlock((0,), (1, 2), (1, 0)),))
    validate_standard(A, B, h)
    assert induced_diagram(A, B, h).lambda1 == IntMatrix.from_rows([[0, 2]])
    psi1 = word_hom([(0, 1), (1, 1), (0, -1), (1, 1)])
    validate_mstandard(A, B, psi1)
    assert induced_diagram(A, B, psi1).lambda1 == IntMatrix.from_rows([[0, 2]])


def test_finite_dimensional_has_zero_lambda1():
    A, B = two_by_two_bridge(), two_by_two_bridge()
    h = fibre_hom(A, B, (1, 0, 2))
    validate_standard(A, B, h)
    assert h.is_finite_dimensional()
    assert induced_diagram(A, B, h).lambda1.is_zero()


def test_direct_sum_deltas():
    A, B = two_by_two_bridge(), point()
    s = direct_sum(delta(0), delta(2))
    assert s.r == 2 and s.lambda0 == IntMatrix.from_rows([[1, 0, 1]])
    validate_standard(A, B, s)
    assert direct_sum(delta(0), delta(0)).lambda0 == IntMatrix.from_rows([[2, 0, 0]])


def test_random_homs_commute_and_sums_add():
    rng = random.Random(21)
    checked = 0
    for _ in range(150):
        A, B = random_algebra(rng), random_algebra(rng)
        P = diagram_group(A, B)
        h1, h2 = random_any_hom(rng, A, B, P), random_standard_hom(rng, A, B, P)
        if h1 is None or h2 is None:
            continue
        checked += 1
        assert check_diagram(A, B, induced_diagram(A, B, h1))
        if isinstance(h1, StandardHom) or h2.is_finite_dimensional():
            s = direct_sum(h1, h2)
            assert induced_diagram(A, B, s) == induced_diagram(A, B, h1) + induced_diagram(A, B, h2)
    assert checked > 50


# stabilizers -------------------------------------------------------------------------

def test_stabilizer_trivial_for_one_cell():
    A, B = interval(), circle()
    h = MStandardHom(1, 1, IntMatrix.from_rows([[1, 0]]), ((Cell((1, 0), (0,), (0,), (1, 0), (1, 0)),),))
    assert point_evaluation_stabilizer(A, B, h).r == 0


def test_stabilizer_fold_map_is_evaluation_at_one():
    A, B = interval(), circle()
    eta = point_evaluation_stabilizer(A, B, fold_map())
    assert eta == fibre_hom(A, B, (0, 1))
    assert eta.r == 1 and eta.blocks[0].ntheta == (0, 1)
    assert eta.is_finite_dimensional()


def test_stabilizer_four_letter_word():
    A, B = figure_eight(), circle()
    psi1 = word_hom([(0, 1), (1, 1), (0, -1), (1, 1)])
    eta = point_evaluation_stabilizer(A, B, psi1)
    # three cut points, each fibre is the single point of the figure eight
    assert eta == fibre_hom(A, B, (3,))
    assert eta.r == (psi1.m - 1) * sum(B.h) * psi1.r


# realization -----------------------------------------------------------------------

def test_padding_hom():
    A, B = two_by_two_bridge(), two_by_two_bridge()
    h = realize_diagram(A, B, zero_diagram(A, B), 1)
    assert h.is_finite_dimensional()
    assert induced_diagram(A, B, h) == padding_diagram(A, B)


def test_realize_winding_circle():
    C = circle()
    d = DiagramPair(IntMatrix.zeros(1, 1), IntMatrix.from_rows([[1]]))
    with pytest.raises(NotRealizable) as err:
        realize_diagram(C, C, d, 0)
    assert err.value.needed_c == 1
    h = realize_diagram(C, C, d, 1)
    assert h.blocks[0].nplus == (1,) and h.blocks[0].nminus == (0,) and h.blocks[0].ntheta == (0,)
    assert induced_diagram(C, C, h) == d + padding_diagram(C, C)


def test_realize_delta_difference():
    A, B = two_by_two_bridge(), point()
    d = DiagramPair(IntMatrix.from_rows([[-1, 1, 0]]), EMPTY)
    assert minimal_padding(A, B, d) == 1
    h = realize_diagram(A, B, d, 1)
    assert h.lambda0 == IntMatrix.from_rows([[0, 2, 1]]) and h.r == 3


def test_realize_unit_correction_into_itself():
    A = two_by_two_bridge()
    d = unit_diagram(A, A, 0, 0)
    c = minimal_padding(A, A, d)
    h = realize_diagram(A, A, d, c)
    validate_standard(A, A, h)
    assert induced_diagram(A, A, h) == d + padding_diagram(A, A).scale(c)
    assert c == 1


def test_minimal_padding_zero_diagram_needs_one_copy():
    A, B = two_by_two_bridge(), point()
    assert minimal_padding(A, B, zero_diagram(A, B)) == 1


def test_unitality_obstruction_reported():
    A, B = point(), two_by_two_bridge()
    # (1,1,0) commutes with the boundary but is never a multiple of k' = (1,1,1)
    d = DiagramPair(IntMatrix.from_columns([[1, 1, 0]], 3), IntMatrix.zeros(1, 0))
    assert check_diagram(A, B, d)
    with pytest.raises(NotRealizable):
        minimal_padding(A, B, d)


def _linear_search(A, B, d, limit=40):
    for c in range(limit):
        try:
            realize_diagram(A, B, d, c)
            return c
        except NotRealizable:
            continue
    return None


def test_realization_soundness_and_monotone_padding():
    rng = random.Random(17)
    tried = 0
    for _ in range(200):
        A, B = random_algebra(rng), random_algebra(rng)
        P = diagram_group(A, B)
        d = random_diagram(rng, A, B, P)
        want = _linear_search(A, B, d)
        if want is None:
            with pytest.raises(NotRealizable):
                minimal_padding(A, B, d)
            continue
        tried += 1
        assert minimal_padding(A, B, d) == want
        for c in range(want, want + 3):
            h = realize_diagram(A, B, d, c)
            validate_standard(A, B, h)
            assert induced_diagram(A, B, h) == d + padding_diagram(A, B).scale(c)
            if d.lambda1.is_zero():
                assert h.is_finite_dimensional()
    assert tried > 50


def test_identity_hom():
    for A in (two_by_two_bridge(), figure_eight(), circle(), interval()):
        h = identity_hom(A)
        validate_standard(A, A, h)
        d = induced_diagram(A, A, h)
        assert d.lambda0 == IntMatrix.identity(A.p) and d.lambda1 == IntMatrix.identity(A.l)
