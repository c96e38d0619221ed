"""Trace coordinates of SL_2 triples and the Fricke relation.

For (M_1, M_2, M_3) in SL_2 the seven coordinates are

    m_i = Tr(M_i),  m_ij = Tr(M_i M_j) (i < j),  m321 = Tr(M_3 M_2 M_1),

in the order (m1, m2, m3, m12, m23, m13, m321).
"""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields

from .convolution import is_irreducible, module_isomorphic
from .exact import CycloNum, Matrix, as_cyclo, common_order, render
from .tuples import MatrixTuple

KEYS = ("m1", "m2", "m3", "m12", "m23", "m13", "m321")


@dataclass(frozen=True)
class TraceSeven:
    m1: CycloNum
    m2: CycloNum
    m3: CycloNum
    m12: CycloNum
    m23: CycloNum
    m13: CycloNum
    m321: CycloNum

    @classmethod
    def of(cls, *values) -> "TraceSeven":
        vals = [as_cyclo(v) for v in values]
        n = common_order(*(v.order for v in vals))
        return cls(*(v.embed(n) for v in vals))

    def values(self) -> tuple[CycloNum, ...]:
        return astuple(self)

    def to_json(self) -> dict[str, str]:
        return {f.name: render(getattr(self, f.name)) for f in fields(self)}

    def matches(self, other: "TraceSeven") -> tuple[bool, ...]:
        return tuple(a == b for a, b in zip(self.values(), other.values()))


def _check_sl2(t: MatrixTuple) -> None:
    if t.length != 3:
        raise ValueError(f"expected a triple, got {t.length} matrices")
    if t.dimension != 2:
        raise ValueError(f"expected 2x2 matrices, got dimension {t.dimension}")
    for k, m in enumerate(t, 1):
        if not m.det().is_one():
            raise ValueError(f"M_{k} is not in SL_2 (det = {render(m.det())})")


def trace_coordinates(t: MatrixTuple, check: bool = True) -> TraceSeven:
    if check:
        _check_sl2(t)
    m1, m2, m3 = t.matrices
    m21 = m2 @ m1
    return TraceSeven(
        m1.trace(), m2.trace(), m3.trace(),
        (m1 @ m2).trace(), (m2 @ m3).trace(), (m1 @ m3).trace(),
        (m3 @ m21).trace(),
    )


def fricke_residual(m: TraceSeven) -> CycloNum:
    """Value of the Fricke polynomial; zero on every SL_2 triple."""
    m1, m2, m3, m12, m23, m13, m321 = m.values()
    return (m12 * m23 * m13 + m12 * m12 + m23 * m23 + m13 * m13
            + m1 * m1 + m2 * m2 + m3 * m3 + m321 * m321
            - (m1 * m2 + m3 * m321) * m12
            - (m2 * m3 + m1 * m321) * m23
            - (m1 * m3 + m2 * m321) * m13
            + m1 * m2 * m3 * m321 - 4)


def triple_equivalent(a: MatrixTuple, b: MatrixTuple) -> bool:
    """Simultaneous conjugacy of SL_2 triples.

    Irreducible triples are compared by trace coordinates; otherwise the
    intertwiner search decides (an inconclusive search counts as False).
    """
    ta, tb = trace_coordinates(a), trace_coordinates(b)
    if ta != tb:
        return False
    if is_irreducible(a) and is_irreducible(b):
        return True
    return module_isomorphic(a, b).isomorphic is True
