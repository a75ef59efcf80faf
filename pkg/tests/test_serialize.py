import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etkk.algebra import circle, figure_eight, interval, two_by_two_bridge
from etkk.diagram import DiagramPair, diagram_group
from etkk.hom import MStandardHom, StandardHom
from etkk.serialize import (
    SAFE_INT,
    DocumentError,
    algebra_from_json,
    algebra_to_json,
    dec_int,
    dec_matrix,
    diagram_from_json,
    diagram_to_json,
    dumps,
    enc_int,
    enc_matrix,
    fraction_from_json,
    fraction_to_json,
    hom_from_json,
    hom_to_json,
)
from etkk.zlinalg import IntMatrix

import fixtures
from randgen import random_algebra, random_any_hom


def test_big_integers_become_strings():
    assert enc_int(SAFE_INT) == SAFE_INT
    assert enc_int(SAFE_INT + 1) == str(SAFE_INT + 1)
    assert enc_int(-(SAFE_INT + 1)) == str(-(SAFE_INT + 1))
    assert dec_int(str(10 ** 40)) == 10 ** 40
    with pytest.raises(DocumentError):
        dec_int(True)
    with pytest.raises(DocumentError):
        dec_int("1.5")


@given(st.integers())
def test_integer_round_trip(n):
    assert dec_int(json.loads(json.dumps(enc_int(n)))) == n


def test_empty_matrix_shapes():
    M = IntMatrix.zeros(0, 3)
    assert enc_matrix(M) == {"rows": 0, "cols": 3, "data": []}
    assert dec_matrix(enc_matrix(M)) == M
    assert dec_matrix([], (2, 0)) == IntMatrix.zeros(2, 0)
    with pytest.raises(DocumentError):
        dec_matrix([])
    with pytest.raises(DocumentError):
        dec_matrix([], (1, 1))
    with pytest.raises(DocumentError):
        dec_matrix([[1, 2], [3]])
    with pytest.raises(DocumentError):
        dec_matrix([[1, 2]], (2, 1))


def test_fractions():
    assert fraction_from_json("3/4").denominator == 4
    assert fraction_to_json(fraction_from_json(2)) == 2
    assert fraction_to_json(fraction_from_json("6/8")) == "3/4"
    with pytest.raises(DocumentError):
        fraction_from_json("1/0")


def test_dumps_layout():
    text = dumps({"a": [1, 2], "b": [[1, 0], [0, 1]], "c": {}})
    assert text == '{\n  "a": [1, 2],\n  "b": [\n    [1, 0],\n    [0, 1]\n  ],\n  "c": {}\n}\n'
    assert json.loads(text) == {"a": [1, 2], "b": [[1, 0], [0, 1]], "c": {}}


def test_fixtures_are_canonical():
    # the certificate was typed by hand and keeps its own layout
    for path in sorted(fixtures.DATA.glob("*.json")):
        if path.stem == "fold_certificate":
            continue
        assert dumps(json.loads(path.read_text())) == path.read_text(), path.name


def test_algebra_round_trip():
    for A in (two_by_two_bridge(), figure_eight(), interval(), circle()):
        text = dumps(algebra_to_json(A))
        assert algebra_from_json(json.loads(text)) == A
        assert dumps(algebra_to_json(algebra_from_json(json.loads(text)))) == text


def test_algebra_document_errors():
    doc = algebra_to_json(two_by_two_bridge())
    del doc["alpha"]
    with pytest.raises(DocumentError):
        algebra_from_json(doc)


def test_hom_and_diagram_round_trip_random():
    rng = random.Random(61)
    seen = 0
    for _ in range(150):
        A, B = random_algebra(rng), random_algebra(rng)
        h = random_any_hom(rng, A, B, diagram_group(A, B))
        if h is None:
            continue
        seen += 1
        text = dumps(hom_to_json(h))
        back = hom_from_json(json.loads(text), A, B)
        assert back == h and type(back) is type(h)
        assert dumps(hom_to_json(back)) == text
    assert seen > 50


def test_huge_entries_survive_round_trip():
    A, B = two_by_two_bridge(), two_by_two_bridge()
    big = 10 ** 20
    d = DiagramPair(IntMatrix.from_rows([[big, 0, 0], [0, big, 0], [0, 0, 1]]), IntMatrix.from_rows([[-big]]))
    doc = json.loads(dumps(diagram_to_json(d)))
    assert doc["lambda0"][0][0] == str(big)
    assert diagram_from_json(doc, A, B) == d


def test_hom_shape_errors():
    A, B = interval(), circle()
    doc = fixtures.raw("fold")
    doc["cells"] = []
    with pytest.raises(DocumentError):
        hom_from_json(doc, A, B)
    doc = fixtures.raw("eval0")
    doc["lambda0"] = [[1, 0, 0]]
    with pytest.raises(DocumentError):
        hom_from_json(doc, A, B)
    assert isinstance(fixtures.hom("fold", A, B), MStandardHom)
    assert isinstance(fixtures.hom("eval0", A, B), StandardHom)
