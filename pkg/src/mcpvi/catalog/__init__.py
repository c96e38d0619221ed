"""Catalog of pseudo-reflection triples shipped as JSON files.

Each entry stores (e_i, alpha_i) pairs, so r_i = 1 + e_i (x) alpha_i is a
pseudo-reflection by construction.  The directory can be overridden with
the ``MCPVI_CATALOG`` environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..io import DocumentError, loads, parse_literal
from ..reflection import PseudoReflection
from ..tuples import MatrixTuple

ENV_VAR = "MCPVI_CATALOG"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    field_order: int
    reflections: tuple[PseudoReflection, ...]

    def triple(self) -> MatrixTuple:
        return MatrixTuple([r.matrix for r in self.reflections])

    def to_json(self) -> dict:
        from ..io import vector_to_json
        return {
            "name": self.name,
            "description": self.description,
            "field_order": self.field_order,
            "reflections": [{"index": k, "e": vector_to_json(r.e), "alpha": vector_to_json(r.alpha)}
                            for k, r in enumerate(self.reflections, 1)],
        }


def catalog_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files(__name__)))


def list_entries() -> list[str]:
    return sorted(p.stem for p in catalog_dir().glob("*.json"))


def parse_entry(text: str, name: str = "") -> CatalogEntry:
    doc = loads(text)
    if not isinstance(doc, dict) or "reflections" not in doc or "field_order" not in doc:
        raise DocumentError("catalog entry needs 'field_order' and 'reflections'")
    order = doc["field_order"]
    refl = sorted(doc["reflections"], key=lambda r: r.get("index", 0))
    if [r.get("index") for r in refl] != list(range(1, len(refl) + 1)):
        raise DocumentError("reflection index labels must be exactly 1..r")
    out = []
    for r in refl:
        k = r["index"]
        e = [parse_literal(x, order, f"reflection {k}, e", text) for x in r["e"]]
        alpha = [parse_literal(x, order, f"reflection {k}, alpha", text) for x in r["alpha"]]
        try:
            out.append(PseudoReflection(e, alpha, order))
        except ValueError as exc:
            raise DocumentError(f"reflection {k}: {exc}") from None
    return CatalogEntry(doc.get("name", name), doc.get("description", ""), order, tuple(out))


def load(name: str) -> CatalogEntry:
    path = catalog_dir() / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"no catalog entry {name!r} (available: {', '.join(list_entries())})")
    return parse_entry(path.read_text(), name)
