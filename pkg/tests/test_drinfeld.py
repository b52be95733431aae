"""Generator images, divided powers, and the closed-form reproduction."""

from fractions import Fraction

from qsteinberg.drinfeld import (
    GeneratorLabel,
    chain_weights,
    expected_e05_unit,
    integrality_sweep,
    phi_divided_power,
    phi_generator,
    phi_power,
    raw_step_class,
    resolve_kernel_convention,
    verify_e05,
    weight_constant_check,
)
from qsteinberg.cyclo import specialize_at_root
from qsteinberg.exactpoly import LaurentPoly, exact_divide, parse, q_factorial, render
from qsteinberg.zseries import compositions


class TestGeneratorImages:
    def test_printed_raising_class(self):
        # base (1, 0): element x2^k * (x1/x2) with the new variable at position 2
        c = raw_step_class("E", 1, (1, 0), 3)
        assert c.element == parse("x1*x2^2", 2)
        assert c.support.step_interval() == (2, 2)

    def test_empty_prefix(self):
        c = raw_step_class("E", 1, (0, 0), 5)
        assert c.element == parse("x1^5", 1)

    def test_prefactor(self):
        g = phi_generator(GeneratorLabel("E", 1, 3, (1, 1)))
        assert g.element == parse("-x1*x2^2*q^-1", 2)

    def test_wrong_shape_is_zero(self):
        assert phi_generator(GeneratorLabel("E", 1, 0, (2, 0))).is_zero()
        assert phi_generator(GeneratorLabel("F", 1, 0, (0, 2))).is_zero()

    def test_weight_bookkeeping(self):
        # raising at weight v + e_(i+1) is supported on margins (v + e_i, v + e_(i+1))
        weight = (1, 2, 1)  # v = (1, 2, 0), step at i = 2
        g = phi_generator(GeneratorLabel("E", 2, 0, weight))
        assert g.support.row_comp == (1, 3, 0)
        assert g.support.col_comp == weight

    def test_spectator_prefix_participates(self):
        # n = 3, step at block 2: the product over the prefix includes block 1
        c = raw_step_class("E", 2, (1, 1, 0), 0)
        assert c.element == parse("x1*x2*x3^-2", 3)


class TestDividedPowers:
    def test_m_one_is_generator(self):
        label = GeneratorLabel("E", 1, 2, (1, 1))
        assert phi_divided_power(label, 1).element == phi_generator(label).element

    def test_m_two_pre_division_value(self):
        # pre-division chain with prefactors equals [2]! times a monomial
        label = GeneratorLabel("E", 1, 0, (0, 2))
        power = phi_power(label, 2)
        d = power.element.var_count
        ratio = exact_divide(power.element, q_factorial(2, d))
        unit = ratio.as_unit_monomial()
        assert unit is not None and abs(unit[0]) == 1

    def test_out_of_shape_chain_is_zero(self):
        label = GeneratorLabel("E", 1, 0, (0, 2))
        # the top factor of the length-3 chain sits at weight (2, 0) and dies
        assert phi_divided_power(label, 3).is_zero()
        # one step further the chain weights leave the cone entirely
        assert chain_weights(label, 4) is None
        assert phi_divided_power(label, 4).is_zero()

    def test_divided_power_top_formula_unit(self):
        # computed image vs the displayed closed form
        #   (-1)^a q^(a(a-1+v_i)) y^l * prod_(t<=P) x_t^a/(y_1...y_a)
        # differ by the unit (-1)^(a(v_i+a)) q^(-a(2 v_i + a - 1)), frozen from the
        # convolution oracle.
        for base in [(0, 0), (1, 0), (2, 1)]:
            for a in (1, 2, 3):
                for loop in (0, 1):
                    weight = (base[0], base[1] + a)
                    image = phi_divided_power(GeneratorLabel("E", 1, loop, weight), a)
                    prefix = base[0]
                    d = sum(base) + a
                    exps = [0] * (d + 1)
                    for t in range(1, prefix + 1):
                        exps[t - 1] = a
                    for j in range(prefix + 1, prefix + a + 1):
                        exps[j - 1] = loop - prefix
                    displayed = (LaurentPoly.monomial(d, exps)
                                 * Fraction(-1) ** a
                                 * LaurentPoly.q_power(d, a * (a - 1 + base[0])))
                    ratio = exact_divide(image.element, displayed)
                    expected = (Fraction(-1) ** (a * (base[0] + a))
                                * LaurentPoly.q_power(d, -a * (2 * base[0] + a - 1)))
                    assert ratio == expected

    def test_specialization_commutes_with_chain(self):
        # the specialized chain factors multiply to the specialized power
        label = GeneratorLabel("E", 1, 1, (0, 2))
        power = phi_power(label, 2)
        divided = phi_divided_power(label, 2)
        d = power.element.var_count
        for order in (3, 4):
            lhs = specialize_at_root(power.element, order)
            rhs = specialize_at_root(q_factorial(2, d), order) * specialize_at_root(divided.element, order)
            assert lhs == rhs


class TestClosedFormReproduction:
    def test_m_two(self):
        rep = verify_e05(1, 2, 0)
        assert rep["ok"] and rep["unit"] == "-1"
        assert rep["rhs"] == render(q_factorial(2, 2) * LaurentPoly.q_power(2, 1))

    def test_unit_constant_over_k(self):
        units = {verify_e05(1, 2, k)["unit"] for k in range(-2, 3)}
        assert units == {"-1"}

    def test_m_three_same_base_unit(self):
        assert verify_e05(2, 3, 0)["unit"] == verify_e05(1, 2, 0)["unit"]

    def test_trailing_product_case(self):
        rep = verify_e05(3, 3, 1)
        assert rep["ok"] and rep["unit"] == "-1"

    def test_m_one_trivial(self):
        rep = verify_e05(2, 1, 1)
        assert rep["unit"] == "1"

    def test_unit_law(self):
        for m in (1, 2, 3):
            expected = render(expected_e05_unit(m))
            assert verify_e05(3, m, 0)["unit"] == expected

    def test_mirror_side(self):
        for m in (2, 3):
            rep = verify_e05(2, m, 1, mirror=True)
            assert rep["ok"] and rep["unit"] == render(expected_e05_unit(m))

    def test_kernel_resolution_unique(self):
        rep = resolve_kernel_convention()
        assert rep["winners"] == ["ratio"]


class TestWeightCheck:
    def test_empty(self):
        rep = weight_constant_check((0,), 1)
        assert rep["ok"] and rep["constant"] == "1"

    def test_single_block(self):
        for d in range(2, 5):
            rep = weight_constant_check((d,), 1)
            assert rep["ok"]
            assert rep["constant"] == f"q^{d}"

    def test_sweep(self):
        for n in (1, 2, 3):
            for d in range(0, 4):
                for v in compositions(d, n):
                    for j in range(1, n + 1):
                        assert weight_constant_check(v, j)["ok"]


class TestIntegralitySweep:
    def test_small_sweep_clean(self):
        rep = integrality_sweep(n_max=2, d_max=3, m_max=3, k_max=1)
        assert rep["ok"] and rep["failures"] == []
        assert rep["nonzero"] > 0
