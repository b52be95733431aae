"""Classes on graded pieces and the two convolution products they support.

A class is a pair (support, element): the support is either the diagonal
matrix of a composition or a single-step matrix diag(v) + a*E_(i,i?1), and
the element is a Laurent polynomial invariant under the support's
refinement blocks.  Diagonal classes act by plain multiplication; adjacent
single-step classes compose through a shuffle sum against a q-deformation
kernel attached to each (new variable, old variable) pair.

The printed sources for that kernel disagree by a per-pair unit, and the
variable bookkeeping for the right factor is implicit, so both choices are
kept as an explicit `KernelConvention` and pinned by reproducing the known
closed form of iterated single-variable products (see drinfeld.verify_e05).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .blocksym import is_block_symmetric, shuffle_symmetrize
from .exactpoly import LaurentPoly, RationalExpr, render
from .matcomb import CompMatrix, diag_matrix, e_matrix


class SupportError(Exception):
    pass


class NotComposableError(SupportError):
    """The two supports cannot be convolved."""


class IncompatibleSupportsError(SupportError):
    """The diagonal action does not match the class's margins."""


class NotBlockSymmetricError(SupportError):
    """A class element is not invariant under its refinement blocks."""


@dataclass(frozen=True)
class DiagSupport:
    comp: tuple[int, ...]

    @property
    def d(self) -> int:
        return sum(self.comp)

    @property
    def row_comp(self) -> tuple[int, ...]:
        return self.comp

    col_comp = row_comp

    def matrix(self) -> CompMatrix:
        return diag_matrix(self.comp)

    def blocks(self) -> list[tuple[int, int]]:
        return [iv for _, iv in self.matrix().refinement_intervals()]

    def label(self) -> str:
        return f"diag({','.join(map(str, self.comp))})"


@dataclass(frozen=True)
class StepSupport:
    """diag(base) + size * E_(i,i+1) when raising, or E_(i+1,i) when lowering."""

    i: int
    base: tuple[int, ...]
    size: int
    lowering: bool = False

    def __post_init__(self):
        if not 1 <= self.i < len(self.base):
            raise ValueError(f"step index {self.i} out of range for {self.base}")
        if self.size <= 0:
            raise ValueError("step size must be positive")
        if any(p < 0 for p in self.base):
            raise ValueError("base composition must be nonnegative")

    @property
    def d(self) -> int:
        return sum(self.base) + self.size

    @property
    def row_comp(self) -> tuple[int, ...]:
        shift = self.i + 1 if self.lowering else self.i
        return _bump(self.base, shift, self.size)

    @property
    def col_comp(self) -> tuple[int, ...]:
        shift = self.i if self.lowering else self.i + 1
        return _bump(self.base, shift, self.size)

    def matrix(self) -> CompMatrix:
        if self.lowering:
            return e_matrix(self.i + 1, self.i, self.base, self.size)
        return e_matrix(self.i, self.i + 1, self.base, self.size)

    def step_interval(self) -> tuple[int, int]:
        """Positions of the off-diagonal block; 1-indexed inclusive."""
        lo = sum(self.base[: self.i]) + 1
        return lo, lo + self.size - 1

    def blocks(self) -> list[tuple[int, int]]:
        return [iv for _, iv in self.matrix().refinement_intervals()]

    def label(self) -> str:
        kind = "F" if self.lowering else "E"
        return f"{kind}{self.i}({','.join(map(str, self.base))};{self.size})"


Support = DiagSupport | StepSupport


def _bump(parts: tuple[int, ...], index: int, amount: int) -> tuple[int, ...]:
    out = list(parts)
    out[index - 1] += amount
    return tuple(out)


@dataclass(frozen=True)
class KClass:
    """A block-symmetric Laurent polynomial attached to a support.

    The zero class carries support None so that out-of-shape generator
    images have somewhere to live.
    """

    support: Support | None
    element: LaurentPoly

    def __post_init__(self):
        if self.support is None:
            if not self.element.is_zero():
                raise ValueError("a class without support must be zero")
            return
        if self.support.d != self.element.var_count:
            raise ValueError("element has the wrong number of variables for the support")
        for lo, hi in self.support.blocks():
            if not is_block_symmetric(self.element, range(lo, hi + 1)):
                raise NotBlockSymmetricError(
                    f"element is not symmetric in positions {lo}..{hi} of {self.support.label()}"
                )

    def is_zero(self) -> bool:
        return self.element.is_zero()

    def scaled(self, factor) -> "KClass":
        return KClass(self.support, self.element * factor)

    def to_json(self) -> dict:
        return {
            "support": self.support.matrix().to_json() if self.support is not None else None,
            "element": render(self.element),
        }


def zero_class(var_count: int) -> KClass:
    return KClass(None, LaurentPoly.zero(var_count))


class KernelForm(enum.Enum):
    RATIO = "ratio"          # (1 - q^2 x_u / x_t) / (1 - x_t / x_u)
    DIFFERENCE = "difference"  # (x_t - q^2 x_u) / (x_t - x_u)


@dataclass(frozen=True)
class KernelConvention:
    form: KernelForm
    swap_pair: bool  # feed (u, t) instead of (t, u) into the kernel

    @property
    def name(self) -> str:
        return f"{self.form.value}{'|swapped' if self.swap_pair else ''}"


KERNEL_CONVENTIONS = (
    KernelConvention(KernelForm.RATIO, False),
    KernelConvention(KernelForm.RATIO, True),
    KernelConvention(KernelForm.DIFFERENCE, False),
    KernelConvention(KernelForm.DIFFERENCE, True),
)

RESOLVED_KERNEL = KernelConvention(KernelForm.RATIO, False)


def kernel_factor(var_count: int, t: int, u: int,
                  convention: KernelConvention = RESOLVED_KERNEL) -> RationalExpr:
    """The kernel attached to the pair (new variable t, old variable u)."""
    if convention.swap_pair:
        t, u = u, t
    xt = LaurentPoly.variable(var_count, t)
    xu = LaurentPoly.variable(var_count, u)
    q2 = LaurentPoly.q_power(var_count, 2)
    if convention.form is KernelForm.DIFFERENCE:
        return RationalExpr(xt - q2 * xu, [(t, u)])
    # (1 - q^2 xu/xt)/(1 - xt/xu) = -xu/xt * (xt - q^2 xu)/(xt - xu)
    numerator = -(xu * xt.inverse_unit()) * (xt - q2 * xu)
    return RationalExpr(numerator, [(t, u)])


def shuffle_kernel_product(f: LaurentPoly, g: LaurentPoly,
                           I: Sequence[int], J: Sequence[int],
                           convention: KernelConvention = RESOLVED_KERNEL) -> LaurentPoly:
    """Shuffle sum of f * g * prod kernel(t in I, u in J); I are the new positions."""
    expr = RationalExpr.from_poly(f * g)
    for t in I:
        for u in J:
            expr = expr * kernel_factor(f.var_count, t, u, convention)
    return shuffle_symmetrize(expr, list(I), list(J))


def convolve_diag(left: KClass, right: KClass) -> KClass:
    """Action of a diagonal class by multiplication, from either side.

    The diagonal composition must equal the row margin when acting on the
    left and the column margin when acting on the right.
    """
    if left.is_zero() or right.is_zero():
        return zero_class(left.element.var_count)
    if isinstance(left.support, DiagSupport):
        diag, other, margin = left, right, right.support.row_comp
    elif isinstance(right.support, DiagSupport):
        diag, other, margin = right, left, left.support.col_comp
    else:
        raise IncompatibleSupportsError("neither factor is a diagonal class")
    if diag.support.comp != margin:
        raise IncompatibleSupportsError(
            f"diagonal {diag.support.label()} does not match margin {margin}"
        )
    return KClass(other.support, other.element * diag.element)


def convolve_estep(c1: KClass, c2: KClass,
                   convention: KernelConvention = RESOLVED_KERNEL) -> KClass:
    """Compose two adjacent single-step classes of the same direction.

    The merged off-diagonal block is tiled by the two factors' blocks; the
    right factor contributes the new variables and each (new, old) pair
    multiplies the kernel into the product before the shuffle sum.
    """
    if c1.is_zero() or c2.is_zero():
        return zero_class(c1.element.var_count)
    s1, s2 = c1.support, c2.support
    if not (isinstance(s1, StepSupport) and isinstance(s2, StepSupport)):
        raise NotComposableError("both supports must be single-step")
    if s1.i != s2.i or s1.lowering != s2.lowering:
        raise NotComposableError(f"steps {s1.label()} and {s2.label()} do not chain")
    if s1.col_comp != s2.row_comp:
        raise NotComposableError(
            f"margins do not compose: {s1.label()} then {s2.label()}"
        )
    shift_index = s2.i + 1 if s2.lowering else s2.i
    merged_base = list(s1.base)
    merged_base[shift_index - 1] -= s2.size
    if merged_base[shift_index - 1] < 0:
        raise NotComposableError("merged base leaves the nonnegative cone")
    merged = StepSupport(s1.i, tuple(merged_base), s1.size + s2.size, s1.lowering)
    lo1, hi1 = s1.step_interval()
    lo2, hi2 = s2.step_interval()
    lo, hi = merged.step_interval()
    tiles = sorted([(lo1, hi1), (lo2, hi2)])
    if not (tiles[0][0] == lo and tiles[1][1] == hi and tiles[0][1] + 1 == tiles[1][0]):
        raise NotComposableError("step blocks do not tile the merged block")
    I = list(range(lo2, hi2 + 1))
    J = list(range(lo1, hi1 + 1))
    element = shuffle_kernel_product(c1.element, c2.element, I, J, convention)
    return KClass(merged, element)


def convolve(c1: KClass, c2: KClass,
             convention: KernelConvention = RESOLVED_KERNEL) -> KClass:
    """Dispatch between the diagonal action and the single-step composition."""
    if c1.is_zero() or c2.is_zero():
        return zero_class(c1.element.var_count)
    if isinstance(c1.support, DiagSupport) or isinstance(c2.support, DiagSupport):
        return convolve_diag(c1, c2)
    return convolve_estep(c1, c2, convention)
