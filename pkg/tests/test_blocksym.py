"""Symmetrizers, shuffles, and the monomial-basis decomposition."""

from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsteinberg.blocksym import (
    BlockStructure,
    Composition,
    OverlappingBlocksError,
    NotSymmetricError,
    full_sym_monomial,
    monomial_decompose,
    monomial_recompose,
    monomial_sym,
    shuffle_permutations,
    shuffle_symmetrize,
    stabilizer_order,
    symmetrize_full,
)
from qsteinberg.exactpoly import LaurentPoly, RationalExpr, parse


def poly(text, d=3):
    return parse(text, d)


class TestComposition:
    def test_partial_sums(self):
        v = Composition((1, 0, 2))
        assert v.d == 3
        assert [v.partial(i) for i in range(4)] == [0, 1, 1, 3]
        assert v.render() == "1,0,2"
        assert Composition.parse("1,0,2") == v

    def test_blocks_with_empties(self):
        b = BlockStructure.from_composition((1, 0, 2))
        assert b.intervals == ((1, 1), (2, 1), (2, 3))
        assert b.block(3) == (2, 3)
        assert b.block(2) == ()


class TestSymmetrizeFull:
    def test_spec_examples(self):
        assert symmetrize_full(poly("x1", 2), [1, 2]) == poly("x1 + x2", 2)
        assert symmetrize_full(poly("x1*x2", 2), [1, 2]) == poly("2*x1*x2", 2)
        assert symmetrize_full(poly("x1^2*x2", 2), [1, 2]) == poly("x1^2*x2 + x1*x2^2", 2)

    @given(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)))
    @settings(max_examples=25, deadline=None)
    def test_idempotent_up_to_group_order(self, exps):
        f = LaurentPoly.monomial(3, exps + (0,))
        once = symmetrize_full(f, [1, 2, 3])
        twice = symmetrize_full(once, [1, 2, 3])
        assert twice == once * factorial(3)

    def test_stabilizer_bridge(self):
        # full sum of a monomial = |Stab(alpha)| * m_alpha, brute force a <= 4
        for a in range(1, 5):
            for alpha in {(2, 1, 0, -1)[:a], (1, 1, 0, 0)[:a], (2, 2, 2, 2)[:a], (1, 0, 0, 0)[:a]}:
                exps = alpha + (0,) * (a - len(alpha)) + (0,)
                f = LaurentPoly.monomial(a, exps)
                lhs = symmetrize_full(f, range(1, a + 1))
                rhs = monomial_sym(a, range(1, a + 1), sorted(alpha, reverse=True)) * stabilizer_order(alpha)
                assert lhs == rhs


class TestShuffles:
    def test_count(self):
        assert len(list(shuffle_permutations([1], [2, 3], 3))) == 3
        assert len(list(shuffle_permutations([1, 2], [3, 4], 4))) == 6

    def test_antisymmetry(self):
        e = RationalExpr(LaurentPoly.one(2), [(1, 2)])
        assert shuffle_symmetrize(e, [1], [2]).is_zero()

    def test_partial_fraction(self):
        e = RationalExpr(poly("x1", 2), [(1, 2)])
        assert shuffle_symmetrize(e, [1], [2]) == LaurentPoly.one(2)

    def test_empty_second_block_is_identity(self):
        f = poly("x1^2*x2 - q*x1", 2)
        assert shuffle_symmetrize(RationalExpr.from_poly(f), [1, 2], []) == f

    def test_overlap_rejected(self):
        with pytest.raises(OverlappingBlocksError):
            list(shuffle_permutations([1, 2], [2, 3], 3))

    def test_result_is_invariant(self):
        # kernel-style summand: symmetric in each part, poles cancel in the sum
        numerator = poly("x1*x3^-1 - q^2", 3) * poly("x2*x3^-1 - q^2", 3) * poly("x3^2", 3)
        e = RationalExpr(numerator, [(1, 3), (2, 3)])
        out = shuffle_symmetrize(e, [1, 2], [3])
        from qsteinberg.blocksym import is_block_symmetric
        assert is_block_symmetric(out, [1, 2, 3])


class TestMonomialDecompose:
    def test_spec_examples(self):
        d2 = lambda t: parse(t, 2)
        assert monomial_decompose(d2("x1^2 + x2^2"), [1, 2]) == {(2, 0): LaurentPoly.one(2)}
        assert monomial_decompose(d2("2*x1*x2"), [1, 2]) == {(1, 1): LaurentPoly.constant(2, 2)}
        # ring-ops oracle: (x1+x2)^2 = m_(2,0) + 2 m_(1,1)
        square = d2("x1 + x2") ** 2
        assert monomial_decompose(square, [1, 2]) == {
            (2, 0): LaurentPoly.one(2),
            (1, 1): LaurentPoly.constant(2, 2),
        }

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetricError):
            monomial_decompose(parse("x1", 2), [1, 2])

    def test_spectator_coefficients(self):
        f = parse("q*x1*x2 + q*x1*x3 + q*x2*x3", 3)
        decomp = monomial_decompose(f, [1, 2, 3])
        assert decomp == {(1, 1, 0): parse("q", 3)}

    @given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=3))
    @settings(max_examples=30, deadline=None)
    def test_round_trip(self, seeds):
        f = LaurentPoly.zero(4)
        for a, b in seeds:
            f = f + full_sym_monomial(4, [1, 2, 3, 4], sorted((a, b, 0, 1), reverse=True))
        decomp = monomial_decompose(f, [1, 2, 3, 4])
        assert monomial_recompose(decomp, 4, [1, 2, 3, 4]) == f
