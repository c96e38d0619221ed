"""JSON documents for matrix tuples, vectors and seven-tuples.

Tuple document layout::

    {
      "format_version": "1",
      "field_order": 4,
      "dimension": 2,
      "length": 2,
      "matrices": [
        {"index": 1, "entries": [["1", "1"], ["0", "1"]]},
        {"index": 2, "entries": [["z", "0"], ["0", "-z"]]}
      ],
      "metadata": {}
    }

Entries use the cyclotomic literal grammar in the symbol ``z`` = zeta_n,
n = ``field_order``.  Index labels are 1-based and must be exactly 1..r.
"""

from __future__ import annotations

import json
from typing import Any

from .exact import CycloNum, CycloParseError, Matrix, parse, render
from .tuples import MatrixTuple

FORMAT_VERSION = "1"


class DocumentError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


def dumps(obj: Any) -> str:
    """Canonical JSON text (sorted keys, fixed indentation)."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None


def _locate(text: str | None, needle: str) -> tuple[int | None, int | None]:
    if not text:
        return None, None
    pos = text.find(json.dumps(needle))
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 2
    return line, col


def cyclo_to_json(x: CycloNum) -> str:
    return render(x)


def vector_to_json(v) -> list[str]:
    return [render(x) for x in v]


def matrix_to_json(m: Matrix) -> list[list[str]]:
    return [[render(x) for x in row] for row in m.entries]


def tuple_to_document(t: MatrixTuple, metadata: dict | None = None) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "field_order": t.order,
        "dimension": t.dimension,
        "length": t.length,
        "matrices": [{"index": k, "entries": matrix_to_json(m)} for k, m in enumerate(t, 1)],
        "metadata": dict(metadata or {}),
    }


def parse_literal(value: Any, order: int, where: str, text: str | None = None) -> CycloNum:
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return CycloNum.rational(value, order)
    if not isinstance(value, str):
        raise DocumentError(f"{where}: expected a literal string, got {value!r}")
    try:
        return parse(value, order)
    except CycloParseError as exc:
        line, col = _locate(text, value)
        if line is not None and exc.column is not None:
            col = col + exc.column - 1
        raise DocumentError(f"{where}: {exc}", line, col) from None


def document_to_tuple(doc: Any, text: str | None = None) -> tuple[MatrixTuple, dict]:
    """Validate a tuple document; returns the tuple and its metadata."""
    if not isinstance(doc, dict):
        raise DocumentError("tuple document must be a JSON object")
    for key in ("field_order", "matrices"):
        if key not in doc:
            raise DocumentError(f"missing key {key!r}")
    order = doc["field_order"]
    if not isinstance(order, int) or order < 1:
        raise DocumentError(f"field_order must be a positive integer, got {order!r}")
    mats = doc["matrices"]
    if not isinstance(mats, list) or not mats:
        raise DocumentError("matrices must be a nonempty list")
    indices = sorted(m.get("index") for m in mats if isinstance(m, dict))
    if indices != list(range(1, len(mats) + 1)):
        raise DocumentError(f"matrix index labels must be exactly 1..{len(mats)}, got {indices}")
    by_index = {m["index"]: m for m in mats}
    out = []
    for k in range(1, len(mats) + 1):
        entries = by_index[k].get("entries")
        if not isinstance(entries, list) or not entries:
            raise DocumentError(f"matrix {k}: entries must be a nonempty list of rows")
        rows = []
        for i, row in enumerate(entries):
            if not isinstance(row, list):
                raise DocumentError(f"matrix {k}, row {i + 1}: expected a list")
            rows.append([parse_literal(x, order, f"matrix {k}, entry ({i + 1},{j + 1})", text)
                         for j, x in enumerate(row)])
        try:
            out.append(Matrix(rows, order))
        except ValueError as exc:
            raise DocumentError(f"matrix {k}: {exc}") from None
    if "dimension" in doc and doc["dimension"] != out[0].rows:
        raise DocumentError(f"dimension {doc['dimension']} does not match matrices ({out[0].rows})")
    if "length" in doc and doc["length"] != len(out):
        raise DocumentError(f"length {doc['length']} does not match {len(out)} matrices")
    try:
        t = MatrixTuple(out)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    return t, dict(doc.get("metadata") or {})


def read_tuple(text: str) -> tuple[MatrixTuple, dict]:
    return document_to_tuple(loads(text), text)


def write_tuple(t: MatrixTuple, metadata: dict | None = None) -> str:
    return dumps(tuple_to_document(t, metadata))
