"""Compositions, block structures, and symmetrization over blocks of variables.

Two symmetrizers appear throughout: the full group sum over a block's
symmetric group, and the shuffle sum over minimal-length coset
representatives of S_(I u J) / (S_I x S_J).  The full sum of a monomial
equals the orbit-sum monomial symmetric function times the stabiliser
order, and that bridge is what `monomial_decompose` inverts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, Iterator, Sequence

from .exactpoly import (
    LaurentPoly,
    RationalExpr,
    ResidualDenominatorError,
    permute_variables,
)


class OverlappingBlocksError(Exception):
    """The index sets of a shuffle symmetrization intersect."""


class NotSymmetricError(Exception):
    """Input is not invariant under the block's symmetric group."""


@dataclass(frozen=True)
class Composition:
    """A tuple of nonnegative integers (v_1, ..., v_n) with sum d."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 0 for p in self.parts):
            raise ValueError("composition parts must be nonnegative")

    @property
    def d(self) -> int:
        return sum(self.parts)

    @property
    def n(self) -> int:
        return len(self.parts)

    def partial(self, i: int) -> int:
        """The partial sum v_1 + ... + v_i (zero for i = 0)."""
        if not 0 <= i <= len(self.parts):
            raise ValueError(f"partial-sum index {i} out of range")
        return sum(self.parts[:i])

    def render(self) -> str:
        return ",".join(str(p) for p in self.parts)

    @classmethod
    def parse(cls, text: str) -> "Composition":
        return cls(tuple(int(p) for p in text.split(",")))


def as_parts(v) -> tuple[int, ...]:
    if isinstance(v, Composition):
        return v.parts
    return tuple(int(p) for p in v)


@dataclass(frozen=True)
class BlockStructure:
    """Ordered consecutive intervals covering {1..d}, induced by a composition.

    Block i occupies positions partial(i-1)+1 .. partial(i); empty blocks are
    kept as empty intervals.
    """

    intervals: tuple[tuple[int, int], ...]  # (lo, hi) inclusive, hi = lo - 1 when empty

    @classmethod
    def from_composition(cls, v) -> "BlockStructure":
        parts = as_parts(v)
        intervals = []
        pos = 0
        for p in parts:
            intervals.append((pos + 1, pos + p))
            pos += p
        return cls(tuple(intervals))

    @property
    def d(self) -> int:
        return self.intervals[-1][1] if self.intervals else 0

    def block(self, i: int) -> tuple[int, ...]:
        lo, hi = self.intervals[i - 1]
        return tuple(range(lo, hi + 1))


def block_permutations(block: Sequence[int], d: int) -> Iterator[tuple[int, ...]]:
    """All permutations of {1..d} fixing everything outside `block`."""
    block = sorted(block)
    for images in permutations(block):
        sigma = list(range(1, d + 1))
        for pos, image in zip(block, images):
            sigma[pos - 1] = image
        yield tuple(sigma)


def symmetrize_full(f: LaurentPoly, block: Iterable[int]) -> LaurentPoly:
    """The full group sum over the block's symmetric group (not the orbit sum)."""
    block = sorted(set(block))
    out = LaurentPoly.zero(f.var_count)
    for sigma in block_permutations(block, f.var_count):
        out = out + permute_variables(f, sigma)
    return out


def is_block_symmetric(f: LaurentPoly, block: Iterable[int]) -> bool:
    block = sorted(set(block))
    for a, b in zip(block, block[1:]):
        sigma = list(range(1, f.var_count + 1))
        sigma[a - 1], sigma[b - 1] = b, a
        if permute_variables(f, tuple(sigma)) != f:
            return False
    return True


def shuffle_permutations(I: Sequence[int], J: Sequence[int], d: int) -> Iterator[tuple[int, ...]]:
    """Minimal-length coset representatives of S_(I u J) / (S_I x S_J).

    Enumerated by choosing which positions of the merged set receive the
    I-elements, preserving relative order in each part; the enumeration
    order is the lexicographic order of those position choices.
    """
    I = sorted(I)
    J = sorted(J)
    if set(I) & set(J):
        raise OverlappingBlocksError(f"index sets overlap: {sorted(set(I) & set(J))}")
    union = sorted(I + J)
    size = len(union)
    for chosen in combinations(range(size), len(I)):
        rest = [t for t in range(size) if t not in chosen]
        sigma = list(range(1, d + 1))
        for source, slot in zip(I, chosen):
            sigma[source - 1] = union[slot]
        for source, slot in zip(J, rest):
            sigma[source - 1] = union[slot]
        yield tuple(sigma)


def shuffle_symmetrize(e: RationalExpr | LaurentPoly, I: Sequence[int], J: Sequence[int]) -> LaurentPoly:
    """Sum e over the shuffles of (I, J) and convert to a Laurent polynomial.

    Raises ResidualDenominatorError when the shuffle sum is not polynomial,
    which downstream callers treat as evidence of a wrong convention.
    """
    if isinstance(e, LaurentPoly):
        e = RationalExpr.from_poly(e)
    total: RationalExpr | None = None
    for sigma in shuffle_permutations(I, J, e.var_count):
        term = e.permuted(sigma)
        total = term if total is None else total + term
    if total is None:
        raise ValueError("empty index sets")
    return total.to_laurent()


def symmetrize_rational_full(e: RationalExpr, block: Sequence[int]) -> LaurentPoly:
    """Full group sum of a rational expression over a block, as a polynomial."""
    total: RationalExpr | None = None
    for sigma in block_permutations(sorted(block), e.var_count):
        term = e.permuted(sigma)
        total = term if total is None else total + term
    if total is None:
        raise ValueError("empty block")
    return total.to_laurent()


def stabilizer_order(alpha: Sequence[int]) -> int:
    """|Stab_{S_a}(alpha)| = product of multiplicities factorial."""
    order = 1
    for value in set(alpha):
        order *= factorial(list(alpha).count(value))
    return order


def monomial_sym(var_count: int, block: Sequence[int], alpha: Sequence[int]) -> LaurentPoly:
    """The orbit sum m_alpha on the block's variables (coefficient 1 per distinct monomial)."""
    block = sorted(block)
    if len(alpha) != len(block):
        raise ValueError("alpha length must match block size")
    out = LaurentPoly.zero(var_count)
    for arrangement in set(permutations(alpha)):
        exps = [0] * (var_count + 1)
        for pos, power in zip(block, arrangement):
            exps[pos - 1] = power
        out = out + LaurentPoly.monomial(var_count, exps)
    return out


def full_sym_monomial(var_count: int, block: Sequence[int], alpha: Sequence[int]) -> LaurentPoly:
    """The full group sum of y^alpha over the block; equals |Stab(alpha)| * m_alpha."""
    return monomial_sym(var_count, block, alpha) * stabilizer_order(alpha)


def monomial_decompose(f: LaurentPoly, block: Sequence[int]) -> dict[tuple[int, ...], LaurentPoly]:
    """Write a block-symmetric f as sum of coeff * m_alpha over dominant alpha.

    Keys are weakly decreasing exponent vectors on the block; values are the
    coefficients, polynomials in the remaining (spectator) variables and q.
    Raises NotSymmetricError when f is not invariant under the block.
    """
    block = sorted(set(block))
    if not is_block_symmetric(f, block):
        raise NotSymmetricError(f"input is not symmetric in block {block}")
    out: dict[tuple[int, ...], dict] = {}
    for exps, coeff in f.terms.items():
        values = tuple(exps[pos - 1] for pos in block)
        dominant = tuple(sorted(values, reverse=True))
        if values != dominant:
            continue  # only the dominant representative of each orbit is read off
        spectator = list(exps)
        for pos in block:
            spectator[pos - 1] = 0
        key = tuple(spectator)
        bucket = out.setdefault(dominant, {})
        bucket[key] = bucket.get(key, Fraction(0)) + coeff
    return {alpha: LaurentPoly(f.var_count, terms) for alpha, terms in sorted(out.items(), reverse=True)}


def monomial_recompose(decomp: dict[tuple[int, ...], LaurentPoly], var_count: int,
                       block: Sequence[int]) -> LaurentPoly:
    """Inverse of monomial_decompose."""
    out = LaurentPoly.zero(var_count)
    for alpha, coeff in decomp.items():
        out = out + coeff * monomial_sym(var_count, block, alpha)
    return out


def render_dominant(alpha: Sequence[int]) -> str:
    return "[" + ",".join(str(a) for a in alpha) + "]"
