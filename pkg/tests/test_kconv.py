"""Classes, the diagonal action, and the single-step shuffle convolution."""

import pytest

from qsteinberg.blocksym import is_block_symmetric
from qsteinberg.exactpoly import LaurentPoly, parse
from qsteinberg.kconv import (
    DiagSupport,
    IncompatibleSupportsError,
    KClass,
    KernelConvention,
    KernelForm,
    NotBlockSymmetricError,
    NotComposableError,
    StepSupport,
    convolve_diag,
    convolve_estep,
    shuffle_kernel_product,
)
from qsteinberg.drinfeld import raw_step_class


def poly(text, d=2):
    return parse(text, d)


DIFFERENCE = KernelConvention(KernelForm.DIFFERENCE, False)
RATIO = KernelConvention(KernelForm.RATIO, False)


class TestKernels:
    def test_difference_kernel_two_terms(self):
        one = LaurentPoly.one(2)
        assert shuffle_kernel_product(one, one, [1], [2], DIFFERENCE) == poly("q^2 + 1")

    def test_ratio_kernel_two_terms(self):
        one = LaurentPoly.one(2)
        expected = poly("-x1*x2^-1*q^2 - q^2 + 1 - x1^-1*x2*q^2")
        assert shuffle_kernel_product(one, one, [1], [2], RATIO) == expected

    def test_single_step_pair(self):
        # x1 x2^(k-1) against x1^k with k = 2 reproduces the two-variable monomial
        f = poly("x1*x2")
        g = poly("x1^2")
        out = shuffle_kernel_product(f, g, [1], [2], RATIO)
        assert out == poly("-x1^2*x2^2*q^2 - x1^2*x2^2")


class TestKClassInvariants:
    def test_block_symmetry_enforced(self):
        support = StepSupport(1, (2, 0), 1)
        with pytest.raises(NotBlockSymmetricError):
            KClass(support, poly("x1", 3))
        KClass(support, parse("x1*x2", 3))  # symmetric in the (1,1)-block

    def test_zero_class_needs_zero_element(self):
        with pytest.raises(ValueError):
            KClass(None, poly("x1"))


class TestDiagAction:
    def test_unit_acts_trivially(self):
        c = raw_step_class("E", 1, (1, 0), 2)
        d = c.element.var_count
        unit = KClass(DiagSupport(c.support.row_comp), LaurentPoly.one(d))
        assert convolve_diag(unit, c).element == c.element

    def test_module_axiom(self):
        c = raw_step_class("E", 1, (1, 0), 2)
        d = c.element.var_count
        s = KClass(DiagSupport(c.support.row_comp), parse("x1 + x2", d))
        t = KClass(DiagSupport(c.support.row_comp), parse("q*x1*x2", d))
        st = KClass(DiagSupport(c.support.row_comp), s.element * t.element)
        assert convolve_diag(s, convolve_diag(t, c)).element == convolve_diag(st, c).element

    def test_right_action_uses_column_margin(self):
        c = raw_step_class("E", 1, (1, 0), 2)
        corrector = KClass(DiagSupport(c.support.col_comp),
                           parse("x1^-1", c.element.var_count))
        out = convolve_diag(c, corrector)
        assert out.element == c.element * parse("x1^-1", c.element.var_count)

    def test_margin_mismatch(self):
        c = raw_step_class("E", 1, (1, 0), 2)
        wrong = KClass(DiagSupport((1, 1)), LaurentPoly.one(c.element.var_count))
        with pytest.raises(IncompatibleSupportsError):
            convolve_diag(wrong, c)


class TestStepConvolution:
    def test_support_arithmetic(self):
        c1 = raw_step_class("E", 1, (2, 0), 0)
        c2 = raw_step_class("E", 1, (1, 1), 0)
        out = convolve_estep(c1, c2)
        assert out.support == StepSupport(1, (1, 0), 2)
        assert is_block_symmetric(out.element, [2, 3])

    def test_not_composable(self):
        c1 = raw_step_class("E", 1, (2, 0), 0)
        c3 = raw_step_class("E", 1, (2, 0), 0)
        with pytest.raises(NotComposableError):
            convolve_estep(c1, c3)

    def test_mixed_direction_rejected(self):
        e = raw_step_class("E", 1, (2, 0), 0)
        f = raw_step_class("F", 1, (1, 1), 0)
        with pytest.raises(NotComposableError):
            convolve_estep(e, f)

    def test_associativity(self):
        # triple chain product, d = 4
        c0 = raw_step_class("E", 1, (3, 0), 1)
        c1 = raw_step_class("E", 1, (2, 1), 1)
        c2 = raw_step_class("E", 1, (1, 2), 1)
        left = convolve_estep(convolve_estep(c0, c1), c2)
        right = convolve_estep(c0, convolve_estep(c1, c2))
        assert left.support == right.support
        assert left.element == right.element

    def test_associativity_lowering(self):
        c0 = raw_step_class("F", 1, (0, 3), -1)
        c1 = raw_step_class("F", 1, (1, 2), -1)
        c2 = raw_step_class("F", 1, (2, 1), -1)
        left = convolve_estep(convolve_estep(c0, c1), c2)
        right = convolve_estep(c0, convolve_estep(c1, c2))
        assert left.element == right.element
