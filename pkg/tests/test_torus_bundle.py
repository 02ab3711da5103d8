import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torusrank.intmat import IntMatrix, NotUnimodular, det, inverse, power, smith_normal_form
from torusrank.torus_bundle import (
    MappingTorus,
    TorusAutomorphism,
    is_orientable,
    is_torus,
    pi1,
    rank,
)

from oracles import cokernel, gl2_unimodular, reduce_to_diagonal

NEG_I2 = [[-1, 0], [0, -1]]
ORDER3 = [[0, 1], [-1, -1]]
GL2_2 = gl2_unimodular(2)


def test_automorphism_requires_unimodular():
    with pytest.raises(NotUnimodular):
        TorusAutomorphism(IntMatrix.from_rows([[2, 0], [0, 1]]))


def test_automorphism_caches_order():
    f = TorusAutomorphism(IntMatrix.from_rows(ORDER3))
    assert f.order is f.order
    assert f.order.value == 3
    assert (f**2).order.value == 3
    assert f.dim == 2 and f.det == 1


@pytest.mark.parametrize(
    "A, free, torsion",
    [
        ([[1, 0], [0, 1]], 3, ()),
        (ORDER3, 1, (3,)),
        (NEG_I2, 1, (2, 2)),
        ([[-1]], 1, (2,)),
        ([[1, 1], [0, 1]], 2, ()),
        ([[2, 1], [1, 1]], 1, ()),
    ],
)
def test_pi1_abelianization(A, free, torsion):
    data = pi1(A)
    assert data.abelianization == (free, torsion)
    assert data.fiber_rank == len(A)


def test_pi1_group_law_nonabelian():
    G = pi1(ORDER3)
    v, t = ((1, 0), 0), ((0, 0), 1)
    assert not G.is_abelian
    # commutator with the circle generator is (v - A v, 0) up to the A^-1 twist
    c = G.commutator(v, t)
    assert c != G.identity()
    assert c[1] == 0
    assert G.multiply(v, G.inverse(v)) == G.identity()
    assert G.multiply(G.inverse(t), t) == G.identity()


def test_pi1_group_law_associative():
    G = pi1([[2, 1], [1, 1]])
    rng = random.Random(3)
    for _ in range(50):
        a, b, c = [((rng.randint(-3, 3), rng.randint(-3, 3)), rng.randint(-3, 3)) for _ in range(3)]
        assert G.multiply(G.multiply(a, b), c) == G.multiply(a, G.multiply(b, c))


def test_pi1_abelian_for_identity():
    G = pi1([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert G.is_abelian
    a, b = ((1, 2, 3), 1), ((0, -1, 5), -2)
    assert G.commutator(a, b) == G.identity()


@pytest.mark.parametrize(
    "A, expected",
    [([[1, 0, 0], [0, 1, 0], [0, 0, 1]], True), (NEG_I2, False), (ORDER3, False), ([[1]], True)],
)
def test_is_torus(A, expected):
    assert is_torus(A) is expected


@pytest.mark.parametrize("A, expected", [(NEG_I2, True), ([[-1]], False), ([[1, 0], [0, 1]], True), ([[0, 1], [1, 0]], False)])
def test_is_orientable(A, expected):
    assert is_orientable(A) is expected


@pytest.mark.parametrize(
    "A, value, tag",
    [
        (NEG_I2, 2, {"lower": "commuting_frame", "upper": "torus_theorem"}),
        ([[-1]], 1, {"lower": "commuting_frame", "upper": "torus_theorem"}),
        ([[1, 0], [0, 1]], 3, {"exact": "is_torus"}),
        ([[2, 1], [1, 1]], 2, {"lower": "commuting_frame", "upper": "torus_theorem"}),
    ],
)
def test_rank(A, value, tag):
    r = rank(A)
    assert r.value == value
    assert r.justification == tag


@given(st.sampled_from(GL2_2))
def test_rank_bounds(A):
    M = MappingTorus.of(A)
    r = rank(M).value
    assert r <= M.dim == 3
    assert (r == M.dim) == is_torus(M)


@given(st.sampled_from(GL2_2))
def test_orientable_iff_det_plus_one(A):
    assert is_orientable(A) != (det(A) == -1)


@given(st.sampled_from(GL2_2), st.sampled_from(GL2_2))
def test_abelianization_conjugation_invariant(A, U):
    A, U = IntMatrix.from_rows(A), IntMatrix.from_rows(U)
    B = U @ A @ inverse(U)
    assert pi1(A).abelianization == pi1(B).abelianization


@given(st.sampled_from(GL2_2))
def test_abelianization_matches_independent_reduction(A):
    shifted = [[A[i][j] - (i == j) for j in range(2)] for i in range(2)]
    free, torsion = cokernel(reduce_to_diagonal(shifted))
    assert pi1(A).abelianization == (free + 1, torsion)


@given(st.sampled_from(GL2_2))
def test_snf_bookkeeping(A):
    A = IntMatrix.from_rows(A)
    diag = smith_normal_form(A - IntMatrix.identity(2)).diagonal
    data = pi1(A)
    nonzero = sum(1 for d in diag if d)
    assert data.free_rank - 1 + nonzero == A.dim
    assert len(data.torsion) <= nonzero


def test_descriptor_json_roundtrip():
    M = MappingTorus.of(ORDER3)
    obj = M.to_json()
    assert obj == {"k": 2, "A": ORDER3}
    assert MappingTorus.from_json(obj) == M
    with pytest.raises(ValueError):
        MappingTorus.from_json({"k": 3, "A": ORDER3})


def test_total_dimension():
    assert MappingTorus.of([[-1]]).dim == 2
    assert MappingTorus.of(power(ORDER3, 2)).dim == 3
