"""Exact Laurent polynomial arithmetic over the rationals.

A polynomial lives in Q[x1^?1, ..., xd^?1, q^?1] and is stored as a sparse
map from exponent vectors to Fraction coefficients.  The exponent vector has
``var_count + 1`` integer entries: one per x-variable and the q-exponent last.
Zero coefficients are never stored, so two values are equal exactly when
their term maps are equal.

The module also provides :class:`RationalExpr`, a Laurent polynomial
numerator together with a multiset of tracked difference factors
``(x_i - x_j)`` in the denominator.  These are the only denominators the
symmetrization kernels ever produce, and cancelling them reduces to exact
multivariate division.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class ExactPolyError(Exception):
    """Base class for errors raised by this module."""


class MismatchedVariablesError(ExactPolyError):
    """Operands live in rings with a different number of x-variables."""


class NotDivisibleError(ExactPolyError):
    """No exact Laurent polynomial quotient exists."""


class ResidualDenominatorError(ExactPolyError):
    """A tracked difference factor does not cancel; the value is not a polynomial."""


Exponents = tuple  # (a_1, ..., a_d, e_q)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an int or Fraction coefficient, got {type(value).__name__}")


class LaurentPoly:
    """Element of Q[x1^?1,...,xd^?1,q^?1] in canonical sparse form."""

    __slots__ = ("var_count", "terms", "_hash")

    def __init__(self, var_count: int, terms: Mapping[Exponents, Fraction] | None = None):
        if var_count < 0:
            raise ValueError("var_count must be nonnegative")
        width = var_count + 1
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != width:
                    raise ValueError(f"exponent vector {exps} has length {len(exps)}, expected {width}")
                coeff = _as_fraction(coeff)
                if coeff != 0:
                    key = tuple(int(e) for e in exps)
                    clean[key] = clean.get(key, Fraction(0)) + coeff
                    if clean[key] == 0:
                        del clean[key]
        object.__setattr__(self, "var_count", var_count)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # values are immutable once built
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, var_count: int) -> "LaurentPoly":
        return cls(var_count)

    @classmethod
    def one(cls, var_count: int) -> "LaurentPoly":
        return cls.constant(var_count, 1)

    @classmethod
    def constant(cls, var_count: int, value) -> "LaurentPoly":
        return cls(var_count, {(0,) * (var_count + 1): _as_fraction(value)})

    @classmethod
    def variable(cls, var_count: int, index: int, power: int = 1) -> "LaurentPoly":
        """The monomial x_index^power; variables are 1-indexed."""
        if not 1 <= index <= var_count:
            raise ValueError(f"variable index {index} out of range 1..{var_count}")
        exps = [0] * (var_count + 1)
        exps[index - 1] = power
        return cls(var_count, {tuple(exps): Fraction(1)})

    @classmethod
    def q_power(cls, var_count: int, power: int = 1, coeff=1) -> "LaurentPoly":
        exps = [0] * (var_count + 1)
        exps[-1] = power
        return cls(var_count, {tuple(exps): _as_fraction(coeff)})

    @classmethod
    def monomial(cls, var_count: int, exps: Sequence[int], coeff=1) -> "LaurentPoly":
        return cls(var_count, {tuple(exps): _as_fraction(coeff)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0,) * (self.var_count + 1): Fraction(1)}

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_coeff(self) -> Fraction:
        return self.coeff((0,) * (self.var_count + 1))

    def as_unit_monomial(self) -> tuple[Fraction, Exponents] | None:
        """Return (coeff, exps) when the value is a single nonzero term, else None."""
        if len(self.terms) != 1:
            return None
        [(exps, coeff)] = self.terms.items()
        return coeff, exps

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in the canonical order: exponent vectors descending lexicographically."""
        return sorted(self.terms.items(), key=lambda item: item[0], reverse=True)

    def leading(self) -> tuple[Exponents, Fraction]:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        exps = max(self.terms)
        return exps, self.terms[exps]

    def min_exponents(self) -> Exponents:
        if not self.terms:
            raise ValueError("the zero polynomial has no exponent range")
        width = self.var_count + 1
        return tuple(min(e[i] for e in self.terms) for i in range(width))

    # -- ring operations ---------------------------------------------------

    def _check_compatible(self, other: "LaurentPoly") -> None:
        if self.var_count != other.var_count:
            raise MismatchedVariablesError(
                f"operands have {self.var_count} and {other.var_count} x-variables"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.var_count, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps, Fraction(0)) + coeff
            if acc == 0:
                out.pop(exps, None)
            else:
                out[exps] = acc
        return LaurentPoly(self.var_count, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.var_count, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LaurentPoly(self.var_count, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            scale = _as_fraction(other)
            if scale == 0:
                return LaurentPoly.zero(self.var_count)
            return LaurentPoly(self.var_count, {e: c * scale for e, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check_compatible(other)
        out: dict[Exponents, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(a + b for a, b in zip(ea, eb))
                acc = out.get(key, Fraction(0)) + ca * cb
                if acc == 0:
                    out.pop(key, None)
                else:
                    out[key] = acc
        return LaurentPoly(self.var_count, out)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if not isinstance(power, int):
            return NotImplemented
        if power < 0:
            return self.inverse_unit() ** (-power)
        result = LaurentPoly.one(self.var_count)
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse_unit(self) -> "LaurentPoly":
        """Invert a single-term polynomial (the units of the Laurent ring)."""
        unit = self.as_unit_monomial()
        if unit is None:
            raise NotDivisibleError("only single-term polynomials are invertible")
        coeff, exps = unit
        return LaurentPoly(self.var_count, {tuple(-e for e in exps): 1 / coeff})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.var_count, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.var_count == other.var_count and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.var_count, frozenset(self.terms.items()))))
        return self._hash

    # -- structural helpers --------------------------------------------------

    def lift(self, var_count: int) -> "LaurentPoly":
        """Embed into a ring with more x-variables (new trailing variables unused)."""
        if var_count < self.var_count:
            raise MismatchedVariablesError("cannot drop variables in lift")
        pad = var_count - self.var_count
        if pad == 0:
            return self
        out = {e[:-1] + (0,) * pad + e[-1:]: c for e, c in self.terms.items()}
        return LaurentPoly(var_count, out)

    def q_at_one(self) -> "LaurentPoly":
        """Substitute q = 1 (the q-exponent is dropped)."""
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            key = exps[:-1] + (0,)
            acc = out.get(key, Fraction(0)) + coeff
            if acc == 0:
                out.pop(key, None)
            else:
                out[key] = acc
        return LaurentPoly(self.var_count, out)

    def invert_all(self) -> "LaurentPoly":
        """Apply x_l -> x_l^-1 and q -> q^-1 to every term."""
        return LaurentPoly(self.var_count, {tuple(-v for v in e): c for e, c in self.terms.items()})

    def coefficient_denominators(self) -> set[int]:
        return {c.denominator for c in self.terms.values()}

    def __repr__(self):
        return f"LaurentPoly({self.var_count}, {render(self)!r})"

    def __str__(self):
        return render(self)


def permute_variables(f: LaurentPoly, sigma: Sequence[int]) -> LaurentPoly:
    """Substitute x_i -> x_sigma(i); sigma is a bijection of {1..d} given by its images.

    With this convention the map is a left group action:
    ``permute(f, sigma o tau) == permute(permute(f, tau), sigma)``.
    """
    d = f.var_count
    if len(sigma) != d or sorted(sigma) != list(range(1, d + 1)):
        raise ValueError(f"{sigma} is not a bijection of 1..{d}")
    out: dict[Exponents, Fraction] = {}
    for exps, coeff in f.terms.items():
        new = [0] * (d + 1)
        new[-1] = exps[-1]
        for pos in range(d):
            new[sigma[pos] - 1] = exps[pos]
        out[tuple(new)] = coeff
    return LaurentPoly(d, out)


def exact_divide(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Return h with h*g == f, raising NotDivisibleError when none exists.

    Both operands are shifted into the ordinary polynomial range, where a
    greedy leading-term reduction with respect to the lexicographic order is
    a complete decision procedure for divisibility by a single divisor.
    """
    if not isinstance(g, LaurentPoly):
        g = LaurentPoly.constant(f.var_count, g)
    f._check_compatible(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return LaurentPoly.zero(f.var_count)
    width = f.var_count + 1
    mf = f.min_exponents()
    mg = g.min_exponents()
    fshift = {tuple(e[i] - mf[i] for i in range(width)): c for e, c in f.terms.items()}
    gshift = {tuple(e[i] - mg[i] for i in range(width)): c for e, c in g.terms.items()}
    lead_g = max(gshift)
    inv_lead_coeff = 1 / gshift[lead_g]
    quotient: dict[Exponents, Fraction] = {}
    remainder = dict(fshift)
    while remainder:
        lead_r = max(remainder)
        step = tuple(a - b for a, b in zip(lead_r, lead_g))
        if any(e < 0 for e in step):
            raise NotDivisibleError("remainder term cannot be reduced")
        factor = remainder[lead_r] * inv_lead_coeff
        quotient[step] = factor
        for eg, cg in gshift.items():
            key = tuple(a + b for a, b in zip(step, eg))
            acc = remainder.get(key, Fraction(0)) - factor * cg
            if acc == 0:
                remainder.pop(key, None)
            else:
                remainder[key] = acc
    shift_back = tuple(a - b for a, b in zip(mf, mg))
    out = {tuple(a + b for a, b in zip(e, shift_back)): c for e, c in quotient.items()}
    return LaurentPoly(f.var_count, out)


def q_int(k: int, var_count: int = 0) -> LaurentPoly:
    """The balanced q-integer [k] = (q^k - q^-k)/(q - q^-1) = q^(k-1) + q^(k-3) + ...

    [0] = 0 and [-k] = -[k].
    """
    if k == 0:
        return LaurentPoly.zero(var_count)
    sign = 1 if k > 0 else -1
    k = abs(k)
    terms = {(0,) * var_count + (k - 1 - 2 * t,): Fraction(sign) for t in range(k)}
    return LaurentPoly(var_count, terms)


def q_factorial(m: int, var_count: int = 0) -> LaurentPoly:
    """[m]! = [1][2]...[m]; [0]! = 1."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = LaurentPoly.one(var_count)
    for k in range(2, m + 1):
        out = out * q_int(k, var_count)
    return out


def difference_factor(var_count: int, i: int, j: int) -> LaurentPoly:
    """The factor x_i - x_j."""
    return LaurentPoly.variable(var_count, i) - LaurentPoly.variable(var_count, j)


class RationalExpr:
    """A Laurent polynomial numerator over a multiset of (x_i - x_j) factors.

    Factors are normalised to i < j; flipping a factor negates the numerator.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: LaurentPoly, denominator: Iterable[tuple[int, int]] = ()):
        pairs: list[tuple[int, int]] = []
        sign = 1
        for i, j in denominator:
            if i == j:
                raise ValueError(f"difference factor requires i != j, got ({i}, {j})")
            if not (1 <= i <= numerator.var_count and 1 <= j <= numerator.var_count):
                raise ValueError(f"factor indices ({i}, {j}) out of range")
            if i > j:
                i, j = j, i
                sign = -sign
            pairs.append((i, j))
        object.__setattr__(self, "numerator", numerator if sign == 1 else -numerator)
        object.__setattr__(self, "denominator", tuple(sorted(pairs)))

    def __setattr__(self, name, value):
        raise AttributeError("RationalExpr is immutable")

    @property
    def var_count(self) -> int:
        return self.numerator.var_count

    @classmethod
    def from_poly(cls, f: LaurentPoly) -> "RationalExpr":
        return cls(f, ())

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return RationalExpr(self.numerator * other, self.denominator)
        if isinstance(other, RationalExpr):
            return RationalExpr(self.numerator * other.numerator,
                                self.denominator + other.denominator)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return RationalExpr(-self.numerator, self.denominator)

    def __add__(self, other):
        if isinstance(other, LaurentPoly):
            other = RationalExpr.from_poly(other)
        if not isinstance(other, RationalExpr):
            return NotImplemented
        common = _multiset_max(self.denominator, other.denominator)
        left = self.numerator * _factor_product(self.var_count,
                                                _multiset_sub(common, self.denominator))
        right = other.numerator * _factor_product(self.var_count,
                                                  _multiset_sub(common, other.denominator))
        return RationalExpr(left + right, common)

    def permuted(self, sigma: Sequence[int]) -> "RationalExpr":
        num = permute_variables(self.numerator, sigma)
        den = [(sigma[i - 1], sigma[j - 1]) for i, j in self.denominator]
        return RationalExpr(num, den)

    def reduced(self) -> "RationalExpr":
        """Cancel every tracked factor that exactly divides the numerator."""
        num = self.numerator
        remaining: list[tuple[int, int]] = []
        for i, j in self.denominator:
            try:
                num = exact_divide(num, difference_factor(self.var_count, i, j))
            except NotDivisibleError:
                remaining.append((i, j))
        return RationalExpr(num, remaining)

    def to_laurent(self) -> LaurentPoly:
        """The represented value as a Laurent polynomial, if it is one."""
        num = self.numerator
        for i, j in self.denominator:
            try:
                num = exact_divide(num, difference_factor(self.var_count, i, j))
            except NotDivisibleError as exc:
                raise ResidualDenominatorError(
                    f"factor (x{i} - x{j}) does not cancel"
                ) from exc
        return num

    def __repr__(self):
        return f"RationalExpr({self.numerator!r}, {self.denominator!r})"


def _multiset_max(a: tuple, b: tuple) -> tuple:
    out = []
    for key in sorted(set(a) | set(b)):
        out.extend([key] * max(a.count(key), b.count(key)))
    return tuple(out)


def _multiset_sub(a: tuple, b: tuple) -> tuple:
    out = list(a)
    for key in b:
        out.remove(key)
    return tuple(out)


def _factor_product(var_count: int, pairs: Iterable[tuple[int, int]]) -> LaurentPoly:
    out = LaurentPoly.one(var_count)
    for i, j in pairs:
        out = out * difference_factor(var_count, i, j)
    return out


# -- canonical text format -------------------------------------------------
#
# Terms are sorted by descending exponent vector (q last) and rendered as
# ``c*x1^a1*...*xd^ad*q^e`` with zero exponents omitted, exponent 1 written
# bare, and rational coefficients as ``p`` or ``p/r``.

_FACTOR_RE = re.compile(r"^(x(\d+)|q)(\^(-?\d+))?$")
_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def render(f: LaurentPoly) -> str:
    if f.is_zero():
        return "0"
    parts: list[str] = []
    for exps, coeff in f.sorted_terms():
        factors = []
        for pos in range(f.var_count):
            e = exps[pos]
            if e == 1:
                factors.append(f"x{pos + 1}")
            elif e != 0:
                factors.append(f"x{pos + 1}^{e}")
        eq = exps[-1]
        if eq == 1:
            factors.append("q")
        elif eq != 0:
            factors.append(f"q^{eq}")
        if not factors:
            term = str(coeff)
        elif coeff == 1:
            term = "*".join(factors)
        elif coeff == -1:
            term = "-" + "*".join(factors)
        else:
            term = str(coeff) + "*" + "*".join(factors)
        parts.append(term)
    text = parts[0]
    for term in parts[1:]:
        if term.startswith("-"):
            text += " - " + term[1:]
        else:
            text += " + " + term
    return text


def parse(text: str, var_count: int) -> LaurentPoly:
    """Parse the canonical text format back into a polynomial."""
    text = text.strip()
    if text in ("0", "-0", ""):
        return LaurentPoly.zero(var_count)
    normalized = text.replace(" - ", " + -")
    terms: dict[Exponents, Fraction] = {}
    for chunk in normalized.split(" + "):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError("empty term")
        sign = Fraction(1)
        if chunk.startswith("-"):
            sign = Fraction(-1)
            chunk = chunk[1:]
        coeff = sign
        exps = [0] * (var_count + 1)
        for factor in chunk.split("*"):
            factor = factor.strip()
            match = _FACTOR_RE.match(factor)
            if match:
                power = int(match.group(4)) if match.group(4) is not None else 1
                if match.group(1) == "q":
                    exps[-1] += power
                else:
                    idx = int(match.group(2))
                    if not 1 <= idx <= var_count:
                        raise ValueError(f"variable x{idx} out of range 1..{var_count}")
                    exps[idx - 1] += power
            elif _RATIONAL_RE.match(factor):
                coeff *= Fraction(factor)
            else:
                raise ValueError(f"cannot parse factor {factor!r}")
        key = tuple(exps)
        acc = terms.get(key, Fraction(0)) + coeff
        if acc == 0:
            terms.pop(key, None)
        else:
            terms[key] = acc
    return LaurentPoly(var_count, terms)
