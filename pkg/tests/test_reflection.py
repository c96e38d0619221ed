from __future__ import annotations

import json
import random
from collections import deque

import numpy as np
import pytest

from mcpvi.braid import apply_braid, orbit_enumerate
from mcpvi.catalog import list_entries, load
from mcpvi.exact import CycloNum, Matrix
from mcpvi.fricke import TraceSeven, fricke_residual, trace_coordinates
from mcpvi.reflection import (
    HypothesisError,
    PseudoReflection,
    TTuple,
    choose_roots,
    is_pseudo_reflection,
    phi,
    random_distinct_triple,
    scale_tuple,
    scaling_scalars,
    t_invariants,
    verify_theorem,
)
from mcpvi.samples import random_pseudo_reflection
from mcpvi.tuples import MatrixTuple

from conftest import GOLDEN
from oracles import to_complex


def one(n=1):
    return CycloNum.one(n)


def test_is_pseudo_reflection_examples():
    assert is_pseudo_reflection(Matrix.diag([1, 1, -1]))
    assert is_pseudo_reflection(Matrix([[1, 5, 0], [0, 1, 0], [0, 0, 1]]))  # transvection
    assert not is_pseudo_reflection(Matrix.identity(3))
    assert not is_pseudo_reflection(Matrix.diag([1, -1, -1]))
    assert not is_pseudo_reflection(Matrix.diag([1, 1, 0]))


def test_from_matrix_round_trip():
    rng = random.Random(3)
    for _ in range(10):
        m = random_pseudo_reflection(rng, 3, 4)
        r = PseudoReflection.from_matrix(m)
        assert r.matrix == m
        assert r.det == one() + sum((a * e for a, e in zip(r.alpha, r.e)), CycloNum.zero(4))


def test_bad_reflection_rejected():
    with pytest.raises(ValueError):
        PseudoReflection([0, 0, 0], [1, 0, 0])
    with pytest.raises(ValueError):
        PseudoReflection([1, 0, 0], [-1, 0, 0])  # 1 + e alpha singular


# -- invariants -----------------------------------------------------------------

def _complex(m: Matrix):
    return np.array([[to_complex(x) for x in row] for row in m.entries])


def test_klein_invariants_golden():
    t = load("klein").triple()
    inv = t_invariants(t)
    assert inv.to_json() == json.loads((GOLDEN / "klein_invariants.json").read_text())
    r1, r2, r3 = (_complex(m) for m in t)
    assert abs(np.trace(r1 @ r2) - 1 - to_complex(inv.t12)) < 1e-9
    assert abs(np.trace(r1 @ r3) - 1 - to_complex(inv.t13)) < 1e-9
    eig = np.linalg.eigvals(r3 @ r2 @ r1)
    for mu in inv.spectrum:
        assert min(abs(eig - to_complex(mu))) < 1e-9
    assert abs(np.linalg.det(r1) - to_complex(inv.t1sq)) < 1e-9


def test_degenerate_entry():
    inv = t_invariants(load("degenerate").triple())
    assert inv.degenerate
    with pytest.raises(HypothesisError):
        verify_theorem(load("degenerate").triple())


def test_non_reflection_rejected():
    t = MatrixTuple([Matrix.identity(3)] * 3)
    with pytest.raises(HypothesisError):
        t_invariants(t)


def test_choose_roots_properties():
    t = load("klein").triple()
    inv = t_invariants(t)
    roots = choose_roots(t, inv=inv)
    assert len(roots) == 6 * 32
    labels = {rt.label() for rt in roots}
    assert len(labels) == len(roots)
    for rt in roots:
        assert rt.t1 * rt.t2 * rt.t3 == rt.n1 * rt.n2 * rt.n3
        n = rt.order
        assert rt.t1 * rt.t1 == inv.t1sq.embed(n)
        for k, ni in zip(rt.labeling, (rt.n1, rt.n2, rt.n3)):
            assert ni * ni == inv.spectrum[k].embed(n)


def test_choose_roots_fixed_labeling():
    t = load("a3").triple()
    roots = choose_roots(t, labelings=[(0, 1, 2)])
    assert len(roots) == 32 and all(rt.labeling == (0, 1, 2) for rt in roots)


# -- phi and scaling ------------------------------------------------------------

def _ones() -> TTuple:
    return TTuple(*[one()] * 11)


def test_phi_all_ones():
    assert phi(_ones(), "displayed") == TraceSeven.of(1, 2, 2, 1, 1, 1, 2)
    assert phi(_ones(), "symmetric") == TraceSeven.of(2, 2, 2, 1, 1, 1, 2)


def test_phi_rejects_zero_and_unknown_reading():
    zero = TTuple(CycloNum.zero(1), *[one()] * 10)
    with pytest.raises(ZeroDivisionError):
        phi(zero)
    with pytest.raises(ValueError):
        phi(_ones(), "other")


def test_phi_formula_by_hand():
    q = lambda x: CycloNum.rational(x)
    t = TTuple(q(2), q(3), q(5), q(7), q(1), q(30), q(11), q(13), q(17), q(0), q(0))
    m = phi(t, "symmetric")
    assert m.m1 == q(2) / 7 + q(7) / 2
    assert m.m3 == q(5) / 7 + q(7) / 5
    assert m.m23 == q(13) / 15
    assert m.m321 == q(1) / 30 + 30


def test_scale_tuple():
    t = MatrixTuple([Matrix.identity(2)] * 3)
    out = scale_tuple(t, [1, 2, 3])
    assert [m.entries[0][0] for m in out] == [one(), one() * 2, one() * 3]
    with pytest.raises(ValueError):
        scale_tuple(t, [1, 2])
    with pytest.raises(ValueError):
        scale_tuple(t, [1, 0, 1])


def test_scaling_conventions():
    rt = choose_roots(load("klein").triple(), labelings=[(0, 1, 2)])[0]
    assert scaling_scalars(rt, "displayed") == (rt.n1, rt.n2, rt.n3)
    assert scaling_scalars(rt, "reversed") == (rt.n3, rt.n2, rt.n1)
    assert scaling_scalars(rt, "det_normalized")[1] == rt.n1 / rt.t2
    with pytest.raises(ValueError):
        scaling_scalars(rt, "nope")


# -- the Klein configuration -------------------------------------------------------

def test_klein_reflections_are_involutions():
    for m in load("klein").triple():
        assert m @ m == Matrix.identity(3, m.order)
        assert m.det() == -one(m.order)


def test_klein_group_order():
    gens = list(load("klein").triple())
    ident = Matrix.identity(3, gens[0].order)
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g @ s
            if h not in seen:
                seen.add(h)
                queue.append(h)
        assert len(seen) <= 336
    assert len(seen) == 336


def test_klein_orbit_is_finite():
    rep = orbit_enumerate(load("klein").triple())
    assert rep.finite and rep.size == 7


def test_catalog_entries_present():
    assert {"klein", "a3", "b3", "h3", "degenerate"} <= set(list_entries())


@pytest.fixture(scope="module")
def klein_report():
    return verify_theorem(load("klein").triple())


def test_klein_verdict(klein_report):
    assert klein_report.verdict
    conventions = klein_report.matched_conventions()
    assert conventions
    assert {c[1:] for c in conventions} == {("det_normalized", "symmetric")}
    assert all(c[0].startswith("inverse") for c in conventions)


def test_klein_only_inverse_eigenvalues_give_plane(klein_report):
    for a in klein_report.attempts:
        assert (a.dimension == 2) == a.source.startswith("inverse")


def test_klein_image_is_sl2_with_phi_traces(klein_report):
    image = klein_report.phi_image()
    assert image is not None
    for m in image:
        assert m.det().is_one()
    point = next(p for p in klein_report.matching() if p.sl2)
    traces = trace_coordinates(image)
    assert traces == phi(point.roots, point.reading)
    assert fricke_residual(traces).is_zero()


def test_displayed_scaling_never_in_sl2(klein_report):
    assert not any(p.sl2 for p in klein_report.grid if p.scaling == "displayed")


def test_report_json_and_table(klein_report):
    doc = klein_report.to_json()
    assert doc["verdict"] is True and doc["grid_size"] == len(klein_report.grid)
    assert klein_report.table().splitlines()[-1] == "verdict: verified"


@pytest.mark.parametrize("word", [[1], [-2, 1]])
def test_verdict_is_braid_invariant(word, klein_report):
    moved = apply_braid(load("klein").triple(), word)
    assert verify_theorem(moved, scalings=["det_normalized"], readings=["symmetric"]).verdict == klein_report.verdict


# -- random triples -----------------------------------------------------------------

def test_random_distinct_triple():
    rng = random.Random(12)
    t = random_distinct_triple(rng)
    assert all(is_pseudo_reflection(m) for m in t)
    inv = t_invariants(t)
    assert not inv.degenerate and len(inv.spectrum) == 3


def test_random_triple_verdict():
    t = random_distinct_triple(random.Random(2))
    rep = verify_theorem(t)
    assert rep.verdict
    assert {c[1:] for c in rep.matched_conventions()} == {("det_normalized", "symmetric")}
