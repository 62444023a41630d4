import random
from fractions import Fraction

import pytest

from hkmono.linalg import IncrementalSpan, Matrix, commutator, rank
from hkmono.nilpotent import (
    NilpotentOperator,
    NormalFormTag,
    block_counts,
    check_rank_one_plane,
    graded_dims,
    jm_cocharacter,
    jordan_chains,
    normal_form,
    nu,
    primitive_normal_form,
    weight_filtration,
)
from hkmono.quadratic import QuadraticSpace, is_in_so, standard_bbf_gram

from oracles import random_skew_nilpotent

BLOCK3 = Matrix([[0, 0, 0], [1, 0, 0], [0, 1, 0]])


def in_span(vectors, v):
    span = IncrementalSpan(len(v))
    for x in vectors:
        span.add(x)
    return span.contains(v)


class TestNu:
    def test_examples(self):
        assert nu(Matrix.zeros(4)) == 0
        assert nu(normal_form(("II", 5))) == 1
        assert nu(normal_form(("III", 4))) == 2

    def test_identity_rejected(self):
        with pytest.raises(ValueError, match="not nilpotent"):
            NilpotentOperator(Matrix.identity(3))

    def test_non_skew_rejected(self):
        with pytest.raises(ValueError):
            NilpotentOperator(Matrix([[0, 1], [0, 0]]), standard_bbf_gram(1, False))


class TestNormalForms:
    def test_type_one_is_zero(self):
        assert normal_form(("I", 7)).matrix == Matrix.zeros(7)

    def test_type_two_images(self):
        n = normal_form(("II", 5)).matrix
        assert rank(n) == 2
        # e1 -> e'2, e2 -> -e'1 with basis e1, e2, e'1, e'2, e3
        assert n.column(0) == (0, 0, 0, 1, 0)
        assert n.column(1) == (0, 0, -1, 0, 0)

    def test_type_three_images(self):
        n = normal_form(("III", 4)).matrix
        assert (rank(n), rank(n @ n)) == (2, 1)
        assert n.column(0) == (0, 1, 0, 1)
        assert n.column(1) == (0, 0, -1, 0)
        assert n.column(3) == (0, 0, -1, 0)

    @pytest.mark.parametrize("t,b2", [("II", 4), ("III", 3), ("I", 2), ("IV", 6)])
    def test_bad_tags(self, t, b2):
        with pytest.raises(ValueError):
            NormalFormTag(t, b2)

    def test_always_skew(self):
        for t, lo in (("I", 3), ("II", 5), ("III", 4)):
            for b2 in range(lo, 14):
                n = normal_form((t, b2))
                assert is_in_so(n.matrix, n.space)

    def test_primitive_parts(self):
        for t, lo in (("I", 3), ("II", 5), ("III", 4)):
            for b2 in range(lo, 12):
                p = primitive_normal_form((t, b2))
                assert p.dim == b2 - 1
                assert is_in_so(p.matrix, p.space)
                full = graded_dims(normal_form((t, b2)))
                prim = graded_dims(p)
                full[0] -= 1
                assert {k: v for k, v in full.items() if v} == prim


class TestGradedDims:
    def test_examples(self):
        assert graded_dims(BLOCK3) == {-2: 1, 0: 1, 2: 1}
        assert graded_dims(normal_form(("II", 5))) == {-1: 2, 0: 1, 1: 2}
        assert graded_dims(normal_form(("III", 4))) == {-2: 1, 0: 2, 2: 1}

    def test_block_counts(self):
        assert block_counts(normal_form(("III", 6))) == {3: 1, 1: 3}
        assert block_counts(normal_form(("II", 7))) == {2: 2, 1: 3}


class TestFiltration:
    def test_zero(self):
        wf = weight_filtration(Matrix.zeros(3))
        assert wf.M(-1) == [] and len(wf.M(0)) == 3 and wf.graded == {0: 3}

    def test_single_block(self):
        wf = weight_filtration(BLOCK3)
        assert [len(wf.M(i)) for i in range(-3, 4)] == [0, 1, 1, 2, 2, 3, 3]

    def test_type_two(self):
        dims = weight_filtration(normal_form(("II", 5))).dims()
        assert [dims[i] for i in (-2, -1, 0, 1)] == [0, 2, 3, 5]

    def test_self_duality_on_normal_forms(self):
        for tag in (("II", 5), ("II", 8), ("III", 4), ("III", 7)):
            n = normal_form(tag)
            q = n.space
            wf = weight_filtration(n)
            for i in range(-wf.k - 1, wf.k + 1):
                mi, other = wf.M(i), wf.M(-i - 1)
                assert all(q.pair(x, y) == 0 for x in mi for y in other)
                assert len(mi) + len(other) == q.dim

    def test_chains_are_chains(self):
        n = normal_form(("III", 6)).matrix
        for chain in jordan_chains(n):
            for a, b in zip(chain, chain[1:]):
                assert n.apply(a) == b
            assert not any(n.apply(chain[-1]))


class TestCocharacter:
    def test_examples(self):
        assert jm_cocharacter(normal_form(("II", 9))).coordinates() == (1, 1, 0, 0)
        assert jm_cocharacter(normal_form(("III", 8))).coordinates() == (2, 0, 0, 0)
        h = jm_cocharacter(normal_form(("I", 5))).h
        assert h.is_zero()

    def test_multiset_and_relation(self):
        for tag in (("II", 6), ("III", 5), ("III", 9)):
            n = normal_form(tag)
            c = jm_cocharacter(n)
            assert c.eigenvalues == graded_dims(n)
            assert commutator(c.h, n.matrix) == n.matrix * 2
            assert is_in_so(c.h, n.space)

    def test_needs_space(self):
        with pytest.raises(ValueError):
            jm_cocharacter(NilpotentOperator(BLOCK3))


def test_plane_validator():
    q = QuadraticSpace.from_rows([[1, 0], [0, -1]])
    check_rank_one_plane(Matrix.zeros(2), q)
    with pytest.raises(ValueError):
        check_rank_one_plane(Matrix([[0, 1], [0, 0]]), q)


def test_random_filtration_properties():
    rng = random.Random(20240)
    for _ in range(60):
        n, q = random_skew_nilpotent(rng, rng.randint(2, 8))
        op = NilpotentOperator(n, q)
        gd = graded_dims(op)
        wf = weight_filtration(op)
        assert gd == wf.graded
        assert all(gd.get(i, 0) == gd.get(-i, 0) for i in gd)
        assert nu(op) == max(gd)
        for i in range(-wf.k, wf.k + 1):
            assert all(in_span(wf.M(i - 2), n.apply(v)) for v in wf.M(i))
        c = jm_cocharacter(op)
        assert commutator(c.h, n) == n * 2
