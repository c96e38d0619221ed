from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from mcpvi.braid import apply_braid
from mcpvi.exact import CycloNum, Matrix, zeta
from mcpvi.fricke import KEYS, TraceSeven, fricke_residual, trace_coordinates, triple_equivalent
from mcpvi.samples import random_matrix, random_sl2, random_sl2_triple
from mcpvi.tuples import MatrixTuple

from oracles import to_complex

I2 = Matrix.identity(2)


def test_identity_triple():
    m = trace_coordinates(MatrixTuple([I2] * 3))
    assert m == TraceSeven.of(2, 2, 2, 2, 2, 2, 2)
    assert fricke_residual(m).is_zero()


def test_minus_identity_triple():
    m = trace_coordinates(MatrixTuple([I2.scale(-1)] * 3))
    assert m == TraceSeven.of(-2, -2, -2, 2, 2, 2, -2)
    assert fricke_residual(m).is_zero()


def test_zero_point():
    assert fricke_residual(TraceSeven.of(*[0] * 7)) == CycloNum.rational(-4)


def test_coordinates_by_hand():
    a = Matrix([[1, 1], [0, 1]])
    b = Matrix([[1, 0], [1, 1]])
    c = Matrix([[0, -1], [1, 0]])
    m = trace_coordinates(MatrixTuple([a, b, c]))
    # ab = [[2,1],[1,1]], bc = [[0,-1],[1,-1]], ac = [[1,-1],[1,0]], cba = [[-1,-2],[1,1]]
    assert m == TraceSeven.of(2, 2, 0, 3, -1, 1, 0)
    assert fricke_residual(m).is_zero()


def test_keys_and_json():
    m = trace_coordinates(MatrixTuple([I2] * 3))
    assert tuple(m.to_json()) == KEYS


def test_requires_sl2():
    with pytest.raises(ValueError):
        trace_coordinates(MatrixTuple([Matrix.diag([2, 1]), I2, I2]))
    with pytest.raises(ValueError):
        trace_coordinates(MatrixTuple([I2, I2]))


def test_residual_vanishes_on_random_sl2():
    rng = random.Random(77)
    for _ in range(200):
        t = random_sl2_triple(rng, 8)
        assert fricke_residual(trace_coordinates(t)).is_zero()


def test_residual_complex_oracle():
    # evaluate the same polynomial numerically from complex traces
    t = random_sl2_triple(random.Random(5), 8)
    m1, m2, m3 = [[[to_complex(x) for x in row] for row in mat.entries] for mat in t]

    def mul(p, q):
        return [[sum(p[i][k] * q[k][j] for k in range(2)) for j in range(2)] for i in range(2)]

    def tr(p):
        return p[0][0] + p[1][1]

    a, b, c = tr(m1), tr(m2), tr(m3)
    ab, bc, ac, abc = tr(mul(m1, m2)), tr(mul(m2, m3)), tr(mul(m1, m3)), tr(mul(m3, mul(m2, m1)))
    val = (ab * bc * ac + ab ** 2 + bc ** 2 + ac ** 2 + a ** 2 + b ** 2 + c ** 2 + abc ** 2
           - (a * b + c * abc) * ab - (b * c + a * abc) * bc - (a * c + b * abc) * ac
           + a * b * c * abc - 4)
    assert abs(val) < 1e-8
    assert abs(to_complex(trace_coordinates(t).m321) - abc) < 1e-9


@given(st.integers(0, 10**6), st.lists(st.sampled_from([1, 2, -1, -2]), max_size=4))
def test_residual_zero_along_braid_orbit(seed, word):
    t = apply_braid(random_sl2_triple(random.Random(seed), 8), word)
    assert fricke_residual(trace_coordinates(t)).is_zero()


@given(st.integers(0, 10**6))
def test_coordinates_conjugation_invariant(seed):
    rng = random.Random(seed)
    t = random_sl2_triple(rng, 8)
    g = random_matrix(rng, 2, 8)
    assert trace_coordinates(t.conjugate(g)) == trace_coordinates(t)


def test_triple_equivalent_examples():
    rng = random.Random(9)
    t = random_sl2_triple(rng, 8)
    g = random_matrix(rng, 2, 8)
    assert triple_equivalent(t, t.conjugate(g))
    other = random_sl2_triple(rng, 8)
    assert not triple_equivalent(t, other)
    # same traces, not conjugate: unipotent versus identity
    u = Matrix([[1, 1], [0, 1]])
    assert not triple_equivalent(MatrixTuple([u, I2, I2]), MatrixTuple([I2, I2, I2]))
    i = zeta(4)
    r = random_sl2(rng, 4)
    assert triple_equivalent(MatrixTuple([r, r, r]), MatrixTuple([r, r, r]).conjugate(Matrix([[1, i], [0, 1]])))
