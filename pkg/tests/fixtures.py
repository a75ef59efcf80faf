"""Loaders for the JSON documents under tests/data."""

import json
from pathlib import Path

from etkk.paths import pl_from_json
from etkk.serialize import algebra_from_json, certificate_from_json, hom_from_json

DATA = Path(__file__).parent / "data"


def raw(name: str):
    return json.loads((DATA / f"{name}.json").read_text())


def algebra(name: str):
    return algebra_from_json(raw(name))


def hom(name: str, A, B):
    return hom_from_json(raw(name), A, B)


def pl(name: str, A, B):
    return pl_from_json(raw(name), A, B)


def certificate(name: str, A, B):
    return certificate_from_json(raw(name), A, B)
