"""Truncated formal series in z and the Cartan current of the weight spaces.

A series is a finite list of Laurent polynomial coefficients for either the
z^-1 or the z^+1 expansion direction.  The Cartan current attached to a
weight composition is a product of factors (a*z - b*x_m)/(c*z - e*x_m) with
unit monomial constants a, b, c, e; each factor expands as a geometric
series in the chosen direction.

The printed form of the current is ambiguous in two ways: how the product
ranges split around block j, and how the logarithm that defines the loop
Cartan elements is normalised.  Both ambiguities are kept as explicit
enumerated parameters (`IndexVariant`, `NormVariant`) and resolved by
sweeping all candidates against the two checks that must pin them down: the
constant term must be the weight q-power, and the extracted loop elements
must match their closed form.  `resolve_conventions` performs the sweep.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .blocksym import as_parts
from .exactpoly import LaurentPoly, NotDivisibleError, exact_divide, q_int, render


class ZeroConstantTermError(Exception):
    """The series has no invertible constant term, so log is undefined."""


class Direction(enum.Enum):
    ZINV = "z^-1"
    ZPOS = "z^+1"


@dataclass(frozen=True)
class TruncatedSeries:
    """Sum of coeffs[k] * z^(-k) (ZINV) or coeffs[k] * z^(+k) (ZPOS), exact through the order."""

    var_count: int
    direction: Direction
    coeffs: tuple[LaurentPoly, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, var_count: int, value: LaurentPoly, direction: Direction, order: int) -> "TruncatedSeries":
        coeffs = [value] + [LaurentPoly.zero(var_count)] * order
        return cls(var_count, direction, tuple(coeffs))

    @classmethod
    def one(cls, var_count: int, direction: Direction, order: int) -> "TruncatedSeries":
        return cls.constant(var_count, LaurentPoly.one(var_count), direction, order)

    def _check(self, other: "TruncatedSeries") -> None:
        if self.var_count != other.var_count or self.direction != other.direction:
            raise ValueError("series are not compatible")

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.var_count, self.direction, self.coeffs[: order + 1])

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        n = min(self.order, other.order)
        return TruncatedSeries(self.var_count, self.direction,
                               tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        n = min(self.order, other.order)
        return TruncatedSeries(self.var_count, self.direction,
                               tuple(self.coeffs[k] - other.coeffs[k] for k in range(n + 1)))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return TruncatedSeries(self.var_count, self.direction,
                                   tuple(c * other for c in self.coeffs))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        n = min(self.order, other.order)
        zero = LaurentPoly.zero(self.var_count)
        out = [zero] * (n + 1)
        for ka, ca in enumerate(self.coeffs[: n + 1]):
            if ca.is_zero():
                continue
            for kb in range(n + 1 - ka):
                cb = other.coeffs[kb]
                if not cb.is_zero():
                    out[ka + kb] = out[ka + kb] + ca * cb
        return TruncatedSeries(self.var_count, self.direction, tuple(out))

    __rmul__ = __mul__

    def log(self) -> "TruncatedSeries":
        """Coefficientwise log(1 + u); the constant term must be exactly 1.

        A series whose constant term is any unit monomial can be normalised
        by `normalized()` first; the constant of the result is zero.
        """
        const = self.coeffs[0]
        if const.is_zero():
            raise ZeroConstantTermError("series has constant term 0")
        if not const.is_one():
            raise ValueError("log requires constant term 1; divide by the constant first")
        zero = LaurentPoly.zero(self.var_count)
        u = TruncatedSeries(self.var_count, self.direction, (zero,) + self.coeffs[1:])
        out = TruncatedSeries.constant(self.var_count, zero, self.direction, self.order)
        power = TruncatedSeries.one(self.var_count, self.direction, self.order)
        for k in range(1, self.order + 1):
            power = power * u
            sign = Fraction(1 if k % 2 == 1 else -1, k)
            out = out + power * sign
        return out

    def exp(self) -> "TruncatedSeries":
        """Coefficientwise exp(u) for a series with zero constant term."""
        if not self.coeffs[0].is_zero():
            raise ValueError("exp requires constant term 0")
        out = TruncatedSeries.one(self.var_count, self.direction, self.order)
        power = TruncatedSeries.one(self.var_count, self.direction, self.order)
        fact = 1
        for k in range(1, self.order + 1):
            power = power * self
            fact *= k
            out = out + power * Fraction(1, fact)
        return out

    def normalized(self) -> tuple[LaurentPoly, "TruncatedSeries"]:
        """Split off the constant term: returns (c0, series / c0) for a unit c0."""
        const = self.coeffs[0]
        if const.is_zero():
            raise ZeroConstantTermError("series has constant term 0")
        inv = const.inverse_unit()
        return const, self * inv

    def to_json(self) -> dict:
        return {"direction": self.direction.value,
                "coefficients": [render(c) for c in self.coeffs]}


def geometric_factor_series(num: tuple[LaurentPoly, LaurentPoly],
                            den: tuple[LaurentPoly, LaurentPoly],
                            var_index: int, var_count: int,
                            direction: Direction, order: int) -> TruncatedSeries:
    """Expansion of (a*z - b*x_m)/(c*z - e*x_m) with unit monomial a, b, c, e.

    In the z^-1 direction the leading z-coefficients a, c must be units; in
    the z^+1 direction the x-coefficients b, e must be.
    """
    a, b = num
    c, e = den
    x = LaurentPoly.variable(var_count, var_index)
    if direction is Direction.ZINV:
        lead = a * c.inverse_unit()
        linear = -(b * a.inverse_unit()) * x
        ratio = (e * c.inverse_unit()) * x
    else:
        lead = b * e.inverse_unit()
        linear = -(a * b.inverse_unit()) * x.inverse_unit()
        ratio = (c * e.inverse_unit()) * x.inverse_unit()
    zero = LaurentPoly.zero(var_count)
    geo = [LaurentPoly.one(var_count)]
    for _ in range(order):
        geo.append(geo[-1] * ratio)
    numerator = TruncatedSeries(var_count, direction,
                                (LaurentPoly.one(var_count), linear) + (zero,) * (order - 1)
                                if order >= 1 else (LaurentPoly.one(var_count),))
    series = TruncatedSeries(var_count, direction, tuple(geo)) * numerator
    return series * lead


class IndexVariant(enum.Enum):
    """Candidate readings of how the current's product ranges sit around block j.

    The six SPLIT_* variants partition 1..d at a single boundary position
    (the partial sum through block j-1 or through block j), with the
    boundary variable joining the first product, the second, or neither.
    BLOCK_GAP leaves the whole of block j out of both products, normalises
    each factor to constant limit 1, and carries the weight as an explicit
    q-power prefactor.
    """

    SPLIT_PREV_FIRST = "split_prev_first"
    SPLIT_PREV_SECOND = "split_prev_second"
    SPLIT_PREV_GAP = "split_prev_gap"
    SPLIT_CUR_FIRST = "split_cur_first"
    SPLIT_CUR_SECOND = "split_cur_second"
    SPLIT_CUR_GAP = "split_cur_gap"
    BLOCK_GAP = "block_gap"


@dataclass(frozen=True)
class NormVariant:
    """Sign and placement of the (q - q^-1) factor in the loop-element extraction."""

    sign: int  # +1 or -1
    inverse: bool  # True: divide the log by (q - q^-1); False: multiply by it

    @property
    def name(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}(q-q^-1)^{-1 if self.inverse else 1}"


NORM_VARIANTS = (
    NormVariant(+1, True),
    NormVariant(-1, True),
    NormVariant(+1, False),
    NormVariant(-1, False),
)

RESOLVED_INDEX_VARIANT = IndexVariant.BLOCK_GAP
RESOLVED_NORM_VARIANT = NormVariant(+1, True)


def series_ranges(v, j: int, variant: IndexVariant) -> tuple[range, range]:
    """The two product ranges (1-indexed variable positions) for a variant."""
    parts = as_parts(v)
    d = sum(parts)
    prev = sum(parts[: j - 1])
    cur = prev + parts[j - 1]
    if variant is IndexVariant.BLOCK_GAP:
        return range(1, prev + 1), range(cur + 1, d + 1)
    t = prev if variant.value.startswith("split_prev") else cur
    if variant.value.endswith("first"):
        return range(1, t + 1), range(t + 1, d + 1)
    if variant.value.endswith("second"):
        return range(1, t), range(max(t, 1), d + 1)
    return range(1, t), range(t + 1, d + 1)  # gap readings


def _qp(d: int, e: int, coeff=1) -> LaurentPoly:
    return LaurentPoly.q_power(d, e, coeff)


def cartan_series(v, j: int, direction: Direction, order: int,
                  variant: IndexVariant = RESOLVED_INDEX_VARIANT) -> TruncatedSeries:
    """The current of weight v at block j, expanded exactly through the order."""
    parts = as_parts(v)
    d = sum(parts)
    if not 1 <= j <= len(parts):
        raise ValueError(f"block index {j} out of range 1..{len(parts)}")
    first, second = series_ranges(parts, j, variant)
    one = LaurentPoly.one(d)
    if variant is IndexVariant.BLOCK_GAP:
        weight = parts[j - 1] if direction is Direction.ZINV else -parts[j - 1]
        series = TruncatedSeries.constant(d, _qp(d, weight), direction, order)
        if direction is Direction.ZINV:
            spec_first = ((one, one), (one, _qp(d, -2)))            # (z - x)/(z - q^-2 x)
            spec_second = ((one, _qp(d, 2)), (one, one))            # (z - q^2 x)/(z - x)
        else:
            spec_first = ((-one, -one), (_qp(d, 2, -1), -one))      # (x - z)/(x - q^2 z)
            spec_second = ((_qp(d, -2, -1), -one), (-one, -one))    # (x - q^-2 z)/(x - z)
    else:
        series = TruncatedSeries.one(d, direction, order)
        spec_first = ((_qp(d, 2), one), (_qp(d, 1), _qp(d, 1)))     # (q^2 z - x)/(q z - q x)
        spec_second = ((one, _qp(d, 2)), (_qp(d, 1), _qp(d, 1)))    # (z - q^2 x)/(q z - q x)
    for m in first:
        series = series * geometric_factor_series(spec_first[0], spec_first[1], m, d, direction, order)
    for m in second:
        series = series * geometric_factor_series(spec_second[0], spec_second[1], m, d, direction, order)
    return series


def cartan_constant(v, j: int, direction: Direction,
                    variant: IndexVariant = RESOLVED_INDEX_VARIANT) -> LaurentPoly:
    return cartan_series(v, j, direction, 0, variant).coeffs[0]


def series_log(s: TruncatedSeries) -> TruncatedSeries:
    """Log of a series after normalising its unit constant term to 1."""
    _, normalized = s.normalized()
    return normalized.log()


def h_image(v, j: int, r: int,
            variant: IndexVariant = RESOLVED_INDEX_VARIANT,
            norm: NormVariant = RESOLVED_NORM_VARIANT) -> LaurentPoly:
    """The degree-r loop Cartan element divided by [r], extracted from the current.

    The division by [r] must be exact; NotDivisibleError is allowed to
    propagate because a failure falsifies the integrality claim the caller
    is checking.
    """
    if r == 0:
        raise ValueError("r must be nonzero")
    parts = as_parts(v)
    d = sum(parts)
    if d == 0:
        return LaurentPoly.zero(0)
    direction = Direction.ZINV if r > 0 else Direction.ZPOS
    series = cartan_series(parts, j, direction, abs(r), variant)
    logseries = series_log(series)
    coeff = logseries.coeffs[abs(r)] * norm.sign
    if norm.inverse:
        divisor = _qp(d, r) - _qp(d, -r)  # (q - q^-1) * [r]
        return exact_divide(coeff, divisor)
    qdiff = _qp(d, 1) - _qp(d, -1)
    return exact_divide(coeff * qdiff, q_int(r, d))


def h_closed(v, j: int, r: int,
             variant: IndexVariant = RESOLVED_INDEX_VARIANT) -> LaurentPoly:
    """Closed form of the divided loop element: -(1/|r|)(q^-r S1(x^r) + q^r S2(x^r)).

    The two power sums run over the same variable ranges as the series
    products of the variant; the signed exponent r handles both directions.
    """
    if r == 0:
        raise ValueError("r must be nonzero")
    parts = as_parts(v)
    d = sum(parts)
    if d == 0:
        return LaurentPoly.zero(0)
    first, second = series_ranges(parts, j, variant)
    out = LaurentPoly.zero(d)
    for m in first:
        out = out + _qp(d, -r) * LaurentPoly.variable(d, m, r)
    for m in second:
        out = out + _qp(d, r) * LaurentPoly.variable(d, m, r)
    return out * Fraction(-1, abs(r))


def only_denominators_dividing(f: LaurentPoly, r: int) -> bool:
    return all(abs(r) % den == 0 for den in f.coefficient_denominators())


def compositions(d: int, n: int) -> Iterator[tuple[int, ...]]:
    """All n-part compositions of d, lexicographically."""
    if n == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in compositions(d - first, n - 1):
            yield (first,) + rest


def weight_cases(n_max: int, d_max: int) -> Iterator[tuple[tuple[int, ...], int]]:
    for n in range(1, n_max + 1):
        for d in range(0, d_max + 1):
            for v in compositions(d, n):
                for j in range(1, n + 1):
                    yield v, j


def resolve_conventions(n_max: int = 3, d_max: int = 4, r_max: int = 3) -> dict:
    """Sweep every candidate variant pair against the two resolving checks.

    Returns a report with the surviving variants.  Exactly one index
    variant passes the weight-constant check and exactly one (index, norm)
    pair makes the extracted loop elements equal their closed form on every
    case; q-integrality is recorded for every candidate.
    """
    weight_ok: dict[str, bool] = {}
    for variant in IndexVariant:
        ok = True
        for v, j in weight_cases(n_max, d_max):
            d = sum(v)
            expected = _qp(d, v[j - 1])
            if cartan_constant(v, j, Direction.ZINV, variant) != expected:
                ok = False
                break
        weight_ok[variant.value] = ok
    weight_winners = [name for name, ok in weight_ok.items() if ok]

    h_ok: dict[str, bool] = {}
    integrality_ok: dict[str, bool] = {}
    cases = [(v, j, r)
             for v, j in weight_cases(n_max, d_max) if sum(v) > 0
             for r in range(-r_max, r_max + 1) if r != 0]
    for variant in IndexVariant:
        state = {norm.name: {"match": True, "integral": True} for norm in NORM_VARIANTS}
        for v, j, r in cases:
            if all(not s["match"] and not s["integral"] for s in state.values()):
                break
            d = sum(v)
            direction = Direction.ZINV if r > 0 else Direction.ZPOS
            logseries = series_log(cartan_series(v, j, direction, abs(r), variant))
            base = logseries.coeffs[abs(r)]
            closed = h_closed(v, j, r, variant)
            for norm in NORM_VARIANTS:
                s = state[norm.name]
                if not s["match"] and not s["integral"]:
                    continue
                try:
                    if norm.inverse:
                        image = exact_divide(base, _qp(d, r) - _qp(d, -r)) * norm.sign
                    else:
                        image = exact_divide(base * (_qp(d, 1) - _qp(d, -1)), q_int(r, d)) * norm.sign
                except NotDivisibleError:
                    s["match"] = s["integral"] = False
                    continue
                if not only_denominators_dividing(image, r):
                    s["integral"] = False
                if image != closed:
                    s["match"] = False
        for norm in NORM_VARIANTS:
            key = f"{variant.value}|{norm.name}"
            h_ok[key] = state[norm.name]["match"]
            integrality_ok[key] = state[norm.name]["integral"]
    h_winners = [key for key, ok in h_ok.items() if ok]

    return {
        "weight_check": weight_ok,
        "weight_winners": weight_winners,
        "h_match": h_ok,
        "h_winners": h_winners,
        "q_integrality": integrality_ok,
        "resolved": {
            "index_variant": weight_winners[0] if len(weight_winners) == 1 else None,
            "h_pair": h_winners[0] if len(h_winners) == 1 else None,
        },
    }
