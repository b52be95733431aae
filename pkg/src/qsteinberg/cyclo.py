"""Exact specialization of q at roots of unity.

Numbers live in Q(zeta_m), represented by their coordinates in the power
basis 1, zeta, ..., zeta^(phi(m)-1) modulo the m-th cyclotomic polynomial.
Zero testing is therefore exact, which is the whole point: the statements
being checked are precisely about which q-integral quantities vanish at a
given root while their divided counterparts survive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .blocksym import as_parts
from .exactpoly import LaurentPoly, q_factorial
from .drinfeld import GeneratorLabel, phi_divided_power
from .kconv import KClass


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_m, ascending degree, computed by iterated exact division."""
    if m < 1:
        raise ValueError("the order must be positive")
    if m == 1:
        return (Fraction(-1), Fraction(1))
    numerator = [Fraction(0)] * (m + 1)
    numerator[0] = Fraction(-1)
    numerator[m] = Fraction(1)
    for div in range(1, m):
        if m % div == 0:
            numerator = _poly_divide_exact(numerator, list(cyclotomic_polynomial(div)))
    return tuple(numerator)


def _poly_divide_exact(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    num = list(num)
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    for top in range(len(num) - 1, len(den) - 2, -1):
        coeff = num[top] / den[-1]
        shift = top - (len(den) - 1)
        out[shift] = coeff
        for k, c in enumerate(den):
            num[shift + k] -= coeff * c
    if any(c != 0 for c in num):
        raise ArithmeticError("division was not exact")
    return out


@dataclass(frozen=True)
class CyclotomicNumber:
    """An element of Q(zeta_m) in reduced power-basis coordinates."""

    order: int
    coords: tuple[Fraction, ...]

    @classmethod
    def from_coords(cls, order: int, coords: Sequence[Fraction]) -> "CyclotomicNumber":
        phi = cyclotomic_polynomial(order)
        deg = len(phi) - 1
        reduced = _reduce_mod(list(coords), phi)
        reduced += [Fraction(0)] * (deg - len(reduced))
        return cls(order, tuple(reduced[:deg]))

    @classmethod
    def zero(cls, order: int) -> "CyclotomicNumber":
        deg = len(cyclotomic_polynomial(order)) - 1
        return cls(order, (Fraction(0),) * deg)

    @classmethod
    def rational(cls, order: int, value) -> "CyclotomicNumber":
        return cls.from_coords(order, [Fraction(value)])

    @classmethod
    def zeta_power(cls, order: int, power: int) -> "CyclotomicNumber":
        power %= order
        coords = [Fraction(0)] * (power + 1)
        coords[power] = Fraction(1)
        return cls.from_coords(order, coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _check(self, other: "CyclotomicNumber") -> None:
        if self.order != other.order:
            raise ValueError("cyclotomic orders differ")

    def __add__(self, other: "CyclotomicNumber") -> "CyclotomicNumber":
        self._check(other)
        return CyclotomicNumber(self.order,
                                tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.order, tuple(-a for a in self.coords))

    def __sub__(self, other: "CyclotomicNumber") -> "CyclotomicNumber":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.order, tuple(a * other for a in self.coords))
        self._check(other)
        product = [Fraction(0)] * (2 * len(self.coords))
        for ia, ca in enumerate(self.coords):
            if ca == 0:
                continue
            for ib, cb in enumerate(other.coords):
                product[ia + ib] += ca * cb
        return CyclotomicNumber.from_coords(self.order, product)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"order": self.order, "coords": [str(c) for c in self.coords]}


def _reduce_mod(coords: list[Fraction], phi: tuple[Fraction, ...]) -> list[Fraction]:
    deg = len(phi) - 1
    coords = list(coords)
    for top in range(len(coords) - 1, deg - 1, -1):
        coeff = coords[top] / phi[-1]
        shift = top - deg
        for k, c in enumerate(phi):
            coords[shift + k] -= coeff * c
    return coords[:deg]


@dataclass(frozen=True)
class SpecializedLaurent:
    """A Laurent polynomial in the x's with coefficients in Q(zeta_m)."""

    var_count: int
    order: int
    terms: tuple[tuple[tuple[int, ...], CyclotomicNumber], ...]

    @classmethod
    def build(cls, var_count: int, order: int,
              raw: dict[tuple[int, ...], CyclotomicNumber]) -> "SpecializedLaurent":
        clean = tuple(sorted(((e, c) for e, c in raw.items() if not c.is_zero()),
                             key=lambda item: item[0], reverse=True))
        return cls(var_count, order, clean)

    def is_zero(self) -> bool:
        return not self.terms

    def _dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: "SpecializedLaurent") -> "SpecializedLaurent":
        out = self._dict()
        for exps, coeff in other.terms:
            acc = out.get(exps, CyclotomicNumber.zero(self.order)) + coeff
            out[exps] = acc
        return SpecializedLaurent.build(self.var_count, self.order, out)

    def __mul__(self, other: "SpecializedLaurent") -> "SpecializedLaurent":
        out: dict = {}
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                key = tuple(a + b for a, b in zip(ea, eb))
                acc = out.get(key, CyclotomicNumber.zero(self.order)) + ca * cb
                out[key] = acc
        return SpecializedLaurent.build(self.var_count, self.order, out)

    def __eq__(self, other):
        if not isinstance(other, SpecializedLaurent):
            return NotImplemented
        return (self.var_count, self.order, self.terms) == (other.var_count, other.order, other.terms)


def specialize_at_root(f: LaurentPoly, order: int) -> SpecializedLaurent:
    """Substitute q by a primitive root of unity of the given order, exactly."""
    raw: dict[tuple[int, ...], CyclotomicNumber] = {}
    for exps, coeff in f.terms.items():
        key = exps[:-1]
        value = CyclotomicNumber.zeta_power(order, exps[-1]) * coeff
        acc = raw.get(key, CyclotomicNumber.zero(order)) + value
        raw[key] = acc
    return SpecializedLaurent.build(f.var_count, order, raw)


def q_factorial_vanishes(m: int, order: int) -> bool:
    return specialize_at_root(q_factorial(m), order).is_zero()


def divided_power_nonvanishing(i: int, k: int, v, m_dp: int, m_root: int) -> dict:
    """Check that the divided power survives specialization where [m_dp]! dies.

    The base composition v starts the chain of m_dp single steps; the
    precondition is that [m_dp]! vanishes at the chosen root, and the check
    is that the divided image does not.
    """
    parts = as_parts(v)
    report = {"i": i, "k": k, "v": ",".join(map(str, parts)),
              "m_dp": m_dp, "m_root": m_root}
    factorial_image = specialize_at_root(q_factorial(m_dp), m_root)
    if not factorial_image.is_zero():
        report.update(status="precondition_rejected", ok=False,
                      note=f"[{m_dp}]! does not vanish at a primitive root of order {m_root}")
        return report
    weight = list(parts)
    weight[i] += m_dp  # chain top: base + m_dp * e_(i+1)
    label = GeneratorLabel("E", i, k, tuple(weight))
    image: KClass = phi_divided_power(label, m_dp)
    specialized = specialize_at_root(image.element, m_root)
    report.update(status="ok",
                  factorial_vanishes=True,
                  image_nonzero=not specialized.is_zero(),
                  ok=not specialized.is_zero())
    return report
