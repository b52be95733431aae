"""Witness construction, evaluation, and the splitting-identity structure."""

from fractions import Fraction

import pytest

from qsteinberg.exactpoly import LaurentPoly, exact_divide, parse
from qsteinberg.kconv import DiagSupport, StepSupport
from qsteinberg.surject import (
    AddNode,
    DiagonalLeaf,
    NonDominantError,
    ScaleNode,
    alpha_norm,
    dominant_vectors,
    e6_expansion,
    evaluate_witness,
    express,
    express_power,
    verify_e6,
    verify_witness,
    witness_from_json,
    witness_to_json,
)


class TestAlphaNorm:
    @pytest.mark.parametrize("alpha,value", [((1, 1), 0), ((2, 0), 4), ((3, 1, 1), 4)])
    def test_values(self, alpha, value):
        assert alpha_norm(alpha) == value

    def test_invariances(self):
        assert alpha_norm((3, 1, 2)) == alpha_norm((1, 2, 3))
        assert alpha_norm((3, 1, 2)) == alpha_norm((8, 6, 7))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            alpha_norm(())


class TestE6Structure:
    def test_minimal_split(self):
        rep = verify_e6((1, 0))
        assert rep["ok"] and rep["remainders"] == []
        assert e6_expansion((1, 0)) == parse("x1 + x2", 2)

    def test_norm_four(self):
        rep = verify_e6((2, 0))
        assert rep["ok"]
        [(beta, coeff)] = [(r["beta"], r["coeff"]) for r in rep["remainders"]]
        assert beta == [1, 1] and coeff == "-q^2 + 1"

    def test_three_variables(self):
        rep = verify_e6((1, 1, 0), s=2)
        assert rep["ok"]
        assert all(r["norm"] < rep["alpha_norm"] for r in rep["remainders"])

    def test_constant_vector_trivial(self):
        rep = verify_e6((2, 2))
        assert rep["ok"]

    def test_norm_descent_identity(self):
        # (y_t^a y_u^(b+1) - y_t^(b+1) y_u^a)/(y_t - y_u) = y_t^(a-1) y_u^(b+1) + ... + y_t^(b+1) y_u^(a-1)
        yt = LaurentPoly.variable(2, 1)
        yu = LaurentPoly.variable(2, 2)
        for a in range(5):
            for b in range(a):
                lhs = exact_divide(yt ** a * yu ** (b + 1) - yt ** (b + 1) * yu ** a, yt - yu)
                rhs = LaurentPoly.zero(2)
                for t in range(a - b - 1):
                    rhs = rhs + yt ** (a - 1 - t) * yu ** (b + 1 + t)
                assert lhs == rhs


class TestExpressPower:
    def test_unit_power(self):
        value = evaluate_witness(express_power(0, 1))
        assert value.element == LaurentPoly.one(1)
        assert value.support == StepSupport(1, (0, 0), 1)

    def test_positive_and_negative_twists(self):
        assert evaluate_witness(express_power(1, 2)).element == parse("x1*x2", 2)
        assert evaluate_witness(express_power(-1, 2)).element == parse("x1^-1*x2^-1", 2)

    def test_nontrivial_prefix(self):
        # base (2, 0): block sits at positions 3, 4 and the prefix factors cancel
        value = evaluate_witness(express_power(2, 2, 1, (2, 0)))
        assert value.element == parse("x3^2*x4^2", 4)


class TestExpress:
    def test_printed_cases(self):
        assert evaluate_witness(express((1, 0))).element == parse("x1 + x2", 2)
        assert evaluate_witness(express((2, 0))).element == parse("x1^2 + x2^2", 2)

    def test_constant_routes_to_power(self):
        value = evaluate_witness(express((3, 3)))
        assert value.element == parse("2*x1^3*x2^3", 2)

    def test_non_dominant_rejected(self):
        with pytest.raises(NonDominantError):
            express((0, 1))

    def test_shift_covariance(self):
        for alpha, shift in [((2, 0), 1), ((2, 1, 0), -1)]:
            a = len(alpha)
            shifted = tuple(x + shift for x in alpha)
            base = evaluate_witness(express(alpha)).element
            moved = evaluate_witness(express(shifted)).element
            monomial = LaurentPoly.monomial(a, (shift,) * a + (0,))
            assert moved == base * monomial

    def test_strictly_decreasing_norms(self):
        trace: list = []
        express((2, 0, -2), trace=trace)
        by_depth: dict[int, list[int]] = {}
        for entry in trace:
            by_depth.setdefault(entry["depth"], []).append(entry["norm"])
        assert max(by_depth) < 40  # recursion terminates at sane depth

    def test_nonzero_base(self):
        rep = verify_witness((1, 0), i=1, v=(1, 1))
        assert rep["ok"]

    def test_three_block_base(self):
        rep = verify_witness((2, 0), i=2, v=(1, 0, 1))
        assert rep["ok"]


class TestEvaluate:
    def test_single_diagonal_leaf(self):
        leaf = DiagonalLeaf((1, 1), parse("x1 + x2", 2))
        value = evaluate_witness(leaf)
        assert value.support == DiagSupport((1, 1))
        assert value.element == parse("x1 + x2", 2)

    def test_scale_zero(self):
        leaf = DiagonalLeaf((1, 1), parse("x1 + x2", 2))
        assert evaluate_witness(ScaleNode(Fraction(0), 0, leaf)).is_zero()

    def test_add_requires_matching_supports(self):
        a = DiagonalLeaf((1, 1), parse("x1 + x2", 2))
        b = DiagonalLeaf((2, 0), parse("x1*x2", 2))
        with pytest.raises(ValueError):
            evaluate_witness(AddNode((a, b)))


class TestSerialization:
    def test_round_trip(self):
        witness = express((2, 1, 0))
        data = witness_to_json(witness)
        rebuilt = witness_from_json(data)
        assert evaluate_witness(rebuilt).element == evaluate_witness(witness).element

    def test_stable_encoding(self):
        import json
        witness = express((1, 0))
        a = json.dumps(witness_to_json(witness), sort_keys=True)
        b = json.dumps(witness_to_json(express((1, 0))), sort_keys=True)
        assert a == b


class TestSweeps:
    def test_dominant_vector_counts(self):
        assert sum(1 for _ in dominant_vectors(1)) == 5
        assert sum(1 for _ in dominant_vectors(2)) == 15
        assert sum(1 for _ in dominant_vectors(4)) == 70

    def test_witness_sweep_small(self):
        for a in (1, 2):
            for alpha in dominant_vectors(a, -1, 1):
                rep = verify_witness(alpha)
                assert rep["ok"], alpha
