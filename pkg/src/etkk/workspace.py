"""A flat directory of named JSON documents with a ``manifest.json`` index.

Manifest layout::

    {"documents": {"A": {"kind": "algebra", "file": "A.json"},
                   "delta1": {"kind": "hom", "file": "delta1.json", "over": ["A", "pt"]}}}

``over`` names the source and target algebras of homs, PL homs, diagrams and
certificates so that :meth:`Workspace.check` can validate them fully.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Optional

from .algebra import InvalidPresentation
from .diagram import NotADiagram, check_diagram
from .hom import InvalidHom, validate_any
from .serialize import (
    DocumentError,
    algebra_from_json,
    certificate_from_json,
    diagram_from_json,
    dumps,
    hom_from_json,
)

MANIFEST = "manifest.json"
KINDS = ("algebra", "diagram", "hom", "pl", "certificate")
_NAME = re.compile(r"^[A-Za-z0-9_.-]+$")


class WorkspaceError(ValueError):
    pass


def detect_kind(doc) -> str:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if "alpha" in doc:
        return "algebra"
    if "steps" in doc:
        return "certificate"
    if "lambda1" in doc:
        return "diagram"
    cells = doc.get("cells")
    if isinstance(cells, list) and cells and isinstance(cells[0], dict):
        return "pl"
    if "blocks" in doc or "cells" in doc:
        return "hom"
    raise DocumentError("cannot tell what kind of document this is")


def load_json(path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise DocumentError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path}: not valid JSON ({e})") from None


class Workspace:
    def __init__(self, root):
        self.root = Path(root)

    @property
    def manifest_path(self) -> Path:
        return self.root / MANIFEST

    def init(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        if not self.manifest_path.exists():
            self._write_manifest({})

    def entries(self) -> dict:
        if not self.manifest_path.exists():
            raise WorkspaceError(f"{self.root} has no {MANIFEST}")
        doc = load_json(self.manifest_path)
        if not isinstance(doc, dict) or not isinstance(doc.get("documents"), dict):
            raise WorkspaceError(f"{self.manifest_path}: expected {{\"documents\": {{...}}}}")
        return doc["documents"]

    def _write_manifest(self, entries: dict) -> None:
        self.manifest_path.write_text(dumps({"documents": dict(sorted(entries.items()))}), encoding="utf-8")

    def add(self, name: str, doc, kind: Optional[str] = None, over: Optional[list[str]] = None) -> Path:
        if not _NAME.match(name):
            raise WorkspaceError(f"invalid document name {name!r}")
        kind = kind or detect_kind(doc)
        if kind not in KINDS:
            raise WorkspaceError(f"unknown kind {kind!r}")
        entries = self.entries()
        entry = {"kind": kind, "file": f"{name}.json"}
        if over:
            missing = [n for n in over if n not in entries]
            if missing:
                raise WorkspaceError(f"unknown algebra name(s): {', '.join(missing)}")
            entry["over"] = list(over)
        path = self.root / entry["file"]
        path.write_text(dumps(doc), encoding="utf-8")
        entries[name] = entry
        self._write_manifest(entries)
        return path

    def path_of(self, name: str) -> Optional[Path]:
        entry = self.entries().get(name)
        return None if entry is None else self.root / entry["file"]

    def get(self, name: str):
        path = self.path_of(name)
        if path is None:
            raise WorkspaceError(f"no document named {name!r}")
        return load_json(path)

    def resolve(self, ref: str) -> Path:
        """A workspace name if registered, otherwise ``ref`` as a file path."""
        path = self.path_of(ref) if self.manifest_path.exists() else None
        return path if path is not None else Path(ref)

    def check(self) -> list[str]:
        """Problems found; empty when every entry exists and validates."""
        problems = []
        entries = self.entries()
        algebras = {}
        order = sorted(entries, key=lambda n: entries[n].get("kind") != "algebra")
        for name in order:
            entry = entries[name]
            try:
                doc = load_json(self.root / entry["file"])
                kind = entry["kind"]
                if kind == "algebra":
                    algebras[name] = algebra_from_json(doc)
                    continue
                over = entry.get("over")
                if not over:
                    detect_kind(doc)
                    continue
                A, B = (algebras[n] for n in over)
                if kind == "diagram":
                    if not check_diagram(A, B, diagram_from_json(doc, A, B)):
                        raise NotADiagram("pair does not commute with the boundary maps")
                elif kind == "hom":
                    validate_any(A, B, hom_from_json(doc, A, B))
                elif kind == "pl":
                    from .paths import pl_from_json
                    pl_from_json(doc, A, B)
                else:
                    certificate_from_json(doc, A, B)
            except KeyError as e:
                problems.append(f"{name}: missing {e}")
            except (DocumentError, InvalidPresentation, InvalidHom, NotADiagram, ValueError) as e:
                problems.append(f"{name}: {e}")
        return problems
