"""Constructive membership witnesses for symmetric classes on step supports.

Every full symmetrization of a monomial y^alpha on the merged step block can
be built from diagonal classes and divided-power images.  The recursion
splits alpha at the multiplicity s of its maximal entry, convolves a
witness for the small block of size a-s against a pure power witness on the
other s positions, and subtracts the remainder, whose terms all have
strictly smaller spread norm |alpha| = sum (alpha_t - min alpha)^2.

Because the resolved convolution kernel differs from the kernel the
remainder analysis is stated for by the per-pair unit -y_new/y_old, the two
convolved leaves carry compensating monomial twists: the small-block leaf
is built for alpha_J - s and the power leaf for alpha_1 + a - s.  With
those twists the convolution reproduces the analysed expansion exactly, and
a witness evaluates to the target class with unit 1.

Witnesses are first-class values: serializable to JSON and re-checkable by
`evaluate_witness`, which interprets leaves through the generator images
and the convolution algebra only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .blocksym import (
    as_parts,
    full_sym_monomial,
    monomial_decompose,
    stabilizer_order,
    symmetrize_rational_full,
)
from .exactpoly import (
    LaurentPoly,
    RationalExpr,
    ResidualDenominatorError,
    exact_divide,
    parse,
    render,
)
from .kconv import DiagSupport, KClass, StepSupport, convolve, zero_class
from .drinfeld import GeneratorLabel, phi_divided_power


class NonDominantError(Exception):
    """The exponent vector is not weakly decreasing."""


def alpha_norm(alpha: Sequence[int]) -> int:
    """Spread norm: sum of (alpha_t - min alpha)^2; shift and permutation invariant."""
    values = tuple(alpha)
    if not values:
        raise ValueError("alpha must be nonempty")
    base = min(values)
    return sum((a - base) ** 2 for a in values)


# -- witness expression trees ------------------------------------------------


@dataclass(frozen=True)
class DiagonalLeaf:
    comp: tuple[int, ...]
    element: LaurentPoly


@dataclass(frozen=True)
class DividedPowerLeaf:
    i: int
    loop: int
    size: int
    weight: tuple[int, ...]


@dataclass(frozen=True)
class ConvolveNode:
    left: "Witness"
    right: "Witness"


@dataclass(frozen=True)
class ScaleNode:
    coeff: Fraction
    qexp: int
    child: "Witness"


@dataclass(frozen=True)
class AddNode:
    children: tuple["Witness", ...]


Witness = DiagonalLeaf | DividedPowerLeaf | ConvolveNode | ScaleNode | AddNode


def evaluate_witness(w: Witness) -> KClass:
    """Deterministic bottom-up evaluation of a witness tree."""
    if isinstance(w, DiagonalLeaf):
        return KClass(DiagSupport(w.comp), w.element)
    if isinstance(w, DividedPowerLeaf):
        label = GeneratorLabel("E", w.i, w.loop, w.weight)
        return phi_divided_power(label, w.size)
    if isinstance(w, ConvolveNode):
        return convolve(evaluate_witness(w.left), evaluate_witness(w.right))
    if isinstance(w, ScaleNode):
        child = evaluate_witness(w.child)
        d = child.element.var_count
        scale = LaurentPoly.q_power(d, w.qexp, w.coeff)
        if w.coeff == 0:
            return zero_class(d)
        return child.scaled(scale)
    if isinstance(w, AddNode):
        if not w.children:
            raise ValueError("empty sum")
        parts = [evaluate_witness(c) for c in w.children]
        supports = {p.support for p in parts if not p.is_zero()}
        if len(supports) > 1:
            raise ValueError("summands live on different supports")
        support = supports.pop() if supports else None
        total = parts[0].element
        for p in parts[1:]:
            total = total + p.element
        if support is None:
            return zero_class(total.var_count)
        return KClass(support, total)
    raise TypeError(f"not a witness node: {w!r}")


def witness_to_json(w: Witness) -> dict:
    if isinstance(w, DiagonalLeaf):
        return {"kind": "diagonal", "comp": list(w.comp), "element": render(w.element)}
    if isinstance(w, DividedPowerLeaf):
        return {"kind": "divided_power", "i": w.i, "loop": w.loop,
                "size": w.size, "weight": list(w.weight)}
    if isinstance(w, ConvolveNode):
        return {"kind": "convolve", "left": witness_to_json(w.left),
                "right": witness_to_json(w.right)}
    if isinstance(w, ScaleNode):
        return {"kind": "scale", "coeff": str(w.coeff), "qexp": w.qexp,
                "child": witness_to_json(w.child)}
    if isinstance(w, AddNode):
        return {"kind": "add", "children": [witness_to_json(c) for c in w.children]}
    raise TypeError(f"not a witness node: {w!r}")


def witness_from_json(data: dict) -> Witness:
    kind = data["kind"]
    if kind == "diagonal":
        comp = tuple(data["comp"])
        return DiagonalLeaf(comp, parse(data["element"], sum(comp)))
    if kind == "divided_power":
        return DividedPowerLeaf(data["i"], data["loop"], data["size"], tuple(data["weight"]))
    if kind == "convolve":
        return ConvolveNode(witness_from_json(data["left"]), witness_from_json(data["right"]))
    if kind == "scale":
        return ScaleNode(Fraction(data["coeff"]), data["qexp"], witness_from_json(data["child"]))
    if kind == "add":
        return AddNode(tuple(witness_from_json(c) for c in data["children"]))
    raise ValueError(f"unknown witness kind {kind!r}")


# -- construction -------------------------------------------------------------


def _step_block(v, i: int, a: int) -> tuple[int, ...]:
    prefix = sum(as_parts(v)[:i])
    return tuple(range(prefix + 1, prefix + a + 1))


def express_power(k: int, a: int, i: int = 1, v=None) -> Witness:
    """Witness for the power class (y_1 ... y_a)^k on the step block of size a.

    Built from one divided-power leaf whose loop degree absorbs k, right
    multiplied by the diagonal monomial that cancels the prefix factors;
    the leftover unit is read off by one evaluation and cancelled by a
    scale node, so the witness evaluates to the power exactly.
    """
    if a < 1:
        raise ValueError("block size must be positive")
    parts = as_parts(v) if v is not None else (0, 0)
    if not 1 <= i < len(parts):
        raise ValueError(f"step index {i} out of range for {parts}")
    d = sum(parts) + a
    prefix = sum(parts[:i])
    weight = _bump(parts, i + 1, a)
    leaf = DividedPowerLeaf(i=i, loop=k + prefix, size=a, weight=weight)
    corrector_exps = [0] * (d + 1)
    for t in range(1, prefix + 1):
        corrector_exps[t - 1] = -a
    corrector = DiagonalLeaf(weight, LaurentPoly.monomial(d, corrector_exps))
    node: Witness = ConvolveNode(leaf, corrector)
    value = evaluate_witness(node)
    target_exps = [0] * (d + 1)
    for pos in _step_block(parts, i, a):
        target_exps[pos - 1] = k
    target = LaurentPoly.monomial(d, target_exps)
    unit = exact_divide(value.element, target).as_unit_monomial()
    if unit is None or any(e != 0 for e in unit[1][:-1]):
        raise RuntimeError("power witness did not evaluate to a unit multiple of the target")
    coeff, exps = unit
    if coeff == 1 and exps[-1] == 0:
        return node
    return ScaleNode(1 / coeff, -exps[-1], node)


def _bump(parts: tuple[int, ...], index: int, amount: int) -> tuple[int, ...]:
    out = list(parts)
    out[index - 1] += amount
    return tuple(out)


def express(alpha: Sequence[int], i: int = 1, v=None,
            trace: list | None = None, _depth: int = 0) -> Witness:
    """Witness whose evaluation is the full symmetrization of y^alpha, exactly.

    alpha must be weakly decreasing.  Recursion is on (block size, spread
    norm): the splitting step strictly reduces the block size of one leaf
    and every remainder term strictly reduces the norm.
    """
    alpha = tuple(int(x) for x in alpha)
    if any(a < b for a, b in zip(alpha, alpha[1:])):
        raise NonDominantError(f"{alpha} is not weakly decreasing")
    a = len(alpha)
    parts = as_parts(v) if v is not None else (0, 0)
    if trace is not None:
        trace.append({"depth": _depth, "alpha": list(alpha), "norm": alpha_norm(alpha)})
    if alpha_norm(alpha) == 0:
        # the full group sum of a constant vector is a! copies of the power
        return ScaleNode(Fraction(factorial(a)), 0, express_power(alpha[0], a, i, parts))
    s = sum(1 for x in alpha if x == alpha[0])
    d = sum(parts) + a
    block = _step_block(parts, i, a)

    small_block = express(tuple(x - s for x in alpha[s:]), i, _bump(parts, i, s),
                          trace=trace, _depth=_depth + 1)
    power = express_power(alpha[0] + a - s, s, i, _bump(parts, i + 1, a - s))
    sign = Fraction(-1) ** (s * (a - s))
    main = ScaleNode(sign * factorial(s) * factorial(a - s), 0, ConvolveNode(small_block, power))

    expansion = evaluate_witness(main).element
    lead = full_sym_monomial(d, block, alpha) * factorial(a - s)
    remainder = expansion - lead
    children: list[Witness] = [main]
    for beta, coeff in monomial_decompose(remainder, block).items():
        if alpha_norm(beta) >= alpha_norm(alpha):
            raise RuntimeError(
                f"remainder term {beta} does not drop the norm below {alpha_norm(alpha)}"
            )
        scale = Fraction(1, stabilizer_order(beta))
        beta_witness = express(beta, i, parts, trace=trace, _depth=_depth + 1)
        for exps, c in coeff.sorted_terms():
            if any(e != 0 for e in exps[:-1]):
                raise RuntimeError("remainder coefficient involves x-variables")
            children.append(ScaleNode(-c * scale, exps[-1], beta_witness))
    return ScaleNode(Fraction(1, factorial(a - s)), 0, AddNode(tuple(children)))


def target_class(alpha: Sequence[int], i: int = 1, v=None) -> KClass:
    """The class express(alpha) must evaluate to."""
    alpha = tuple(alpha)
    parts = as_parts(v) if v is not None else (0, 0)
    a = len(alpha)
    d = sum(parts) + a
    element = full_sym_monomial(d, _step_block(parts, i, a), alpha)
    return KClass(StepSupport(i, parts, a), element)


# -- the displayed splitting identity -----------------------------------------


def e6_expansion(alpha: Sequence[int], s: int | None = None) -> LaurentPoly:
    """Full symmetrization of y^alpha_I * sym'(y^alpha_J) * prod (y_t - q^2 y_u)/(y_t - y_u).

    This is the displayed form of the split product, computed literally with
    the difference kernel on pairs (t <= s < u), on a minimal block (no
    spectator variables).
    """
    alpha = tuple(int(x) for x in alpha)
    if any(x < y for x, y in zip(alpha, alpha[1:])):
        raise NonDominantError(f"{alpha} is not weakly decreasing")
    a = len(alpha)
    if s is None:
        s = sum(1 for x in alpha if x == alpha[0])
    if not 1 <= s <= a:
        raise ValueError("s out of range")
    d = a
    head_exps = [0] * (d + 1)
    for t in range(1, s + 1):
        head_exps[t - 1] = alpha[t - 1]
    head = LaurentPoly.monomial(d, head_exps)
    tail = full_sym_monomial(d, range(s + 1, a + 1), alpha[s:]) if s < a else LaurentPoly.one(d)
    expr = RationalExpr.from_poly(head * tail)
    q2 = LaurentPoly.q_power(d, 2)
    for t in range(1, s + 1):
        for u in range(s + 1, a + 1):
            yt = LaurentPoly.variable(d, t)
            yu = LaurentPoly.variable(d, u)
            expr = expr * RationalExpr(yt - q2 * yu, [(t, u)])
    return symmetrize_rational_full(expr, range(1, a + 1))


def verify_e6(alpha: Sequence[int], s: int | None = None) -> dict:
    """Check the splitting identity: polynomiality, lead coefficient, norm descent."""
    alpha = tuple(int(x) for x in alpha)
    a = len(alpha)
    if s is None:
        s = sum(1 for x in alpha if x == alpha[0])
    report: dict = {"alpha": list(alpha), "s": s, "a": a}
    try:
        expansion = e6_expansion(alpha, s)
    except ResidualDenominatorError as exc:
        report.update(ok=False, note=f"not a Laurent polynomial: {exc}")
        return report
    report["is_laurent"] = True
    decomp = monomial_decompose(expansion, range(1, a + 1))
    expected_lead = LaurentPoly.constant(a, factorial(a - s) * stabilizer_order(alpha))
    lead = decomp.get(alpha, LaurentPoly.zero(a))
    report["lead"] = render(lead)
    report["lead_expected"] = render(expected_lead)
    lead_ok = lead == expected_lead
    remainders = []
    norms_ok = True
    for beta, coeff in decomp.items():
        if beta == alpha:
            continue
        drop = alpha_norm(beta) < alpha_norm(alpha)
        norms_ok = norms_ok and drop
        remainders.append({"beta": list(beta), "coeff": render(coeff),
                           "norm": alpha_norm(beta), "drops": drop})
    report["alpha_norm"] = alpha_norm(alpha)
    report["remainders"] = remainders
    report["ok"] = lead_ok and norms_ok
    return report


def dominant_vectors(a: int, lo: int = -2, hi: int = 2):
    """All weakly decreasing vectors of length a with entries in [lo, hi]."""
    def rec(prefix: tuple[int, ...], ceiling: int):
        if len(prefix) == a:
            yield prefix
            return
        for value in range(ceiling, lo - 1, -1):
            yield from rec(prefix + (value,), value)

    yield from rec((), hi)


def verify_witness(alpha: Sequence[int], i: int = 1, v=None) -> dict:
    """Build, evaluate, and check one witness; the report carries the JSON tree."""
    trace: list = []
    witness = express(alpha, i, v, trace=trace)
    value = evaluate_witness(witness)
    target = target_class(alpha, i, v)
    ok = value.support == target.support and value.element == target.element
    return {
        "alpha": list(alpha),
        "ok": ok,
        "value": value.to_json(),
        "target": target.to_json(),
        "trace": trace,
        "witness": witness_to_json(witness),
    }
