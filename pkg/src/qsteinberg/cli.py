"""Batch verification harness.

Every check is a subcommand that emits a machine-readable JSON report and
sets the exit status; `suite` runs them all in order, starting with the
convention resolution, whose outcome is embedded in the report so that any
downstream failure is attributable to a case rather than to an ambient
ambiguity.  With --outdir the suite also writes the case table as CSV and
renders summary figures next to it.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .blocksym import Composition
from .cyclo import divided_power_nonvanishing, specialize_at_root
from .drinfeld import (
    expected_e05_unit,
    integrality_sweep,
    resolve_kernel_convention,
    verify_e05,
    weight_constant_check,
)
from .exactpoly import LaurentPoly, render
from .matcomb import double_coset_count, enumerate_matrices
from .surject import dominant_vectors, verify_e6, verify_witness
from .zseries import (
    RESOLVED_INDEX_VARIANT,
    RESOLVED_NORM_VARIANT,
    compositions,
    resolve_conventions,
)

SMALL = {"n": 3, "d": 4, "m": 3, "a": 4, "k": 2, "r": 2, "m_root": 12, "entry": 2}
FULL = {"n": 3, "d": 5, "m": 3, "a": 4, "k": 2, "r": 3, "m_root": 12, "entry": 2}


def _dump(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_range(text: str) -> list[int]:
    """Accept '2', '0..2', or '-1..3'."""
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def resolved_conventions() -> dict:
    return {
        "index_variant": RESOLVED_INDEX_VARIANT.value,
        "norm_variant": RESOLVED_NORM_VARIANT.name,
        "kernel_convention": "ratio",
        "e05_unit": "-1",
        "e05_unit_exponent": "m*(m-1)/2",
    }


# -- individual commands -------------------------------------------------------


def cmd_enum_matrices(args) -> int:
    v = Composition.parse(args.v).parts
    w = Composition.parse(args.w).parts
    matrices = enumerate_matrices(v, w)
    report = {
        "command": "enum matrices",
        "v": args.v,
        "w": args.w,
        "count": len(matrices),
        "matrices": [m.to_json() for m in matrices],
    }
    if sum(v) <= 7:
        report["double_cosets"] = double_coset_count(v, w)
        report["pass"] = report["double_cosets"] == len(matrices)
    else:
        report["pass"] = True
    _dump(report, args.out)
    return 0 if report["pass"] else 1


def weights_cases(n_max: int, d_max: int) -> list[dict]:
    cases = []
    for n in range(1, n_max + 1):
        for d in range(0, d_max + 1):
            for v in compositions(d, n):
                for j in range(1, n + 1):
                    rep = weight_constant_check(v, j)
                    rep["id"] = f"weights:{','.join(map(str, v))}:j{j}"
                    cases.append(rep)
    return cases


def cmd_verify_weights(args) -> int:
    resolution = resolve_conventions(args.nmax, args.dmax, 1)
    cases = weights_cases(args.nmax, args.dmax)
    report = {
        "command": "verify weights",
        "conventions": resolved_conventions(),
        "resolution": {"weight_check": resolution["weight_check"],
                       "winners": resolution["weight_winners"]},
        "cases": cases,
        "pass": all(c["ok"] for c in cases) and resolution["weight_winners"] == [RESOLVED_INDEX_VARIANT.value],
    }
    _dump(report, args.out)
    return 0 if report["pass"] else 1


def cmd_verify_hseries(args) -> int:
    resolution = resolve_conventions(args.nmax, args.dmax, args.rmax)
    expected = f"{RESOLVED_INDEX_VARIANT.value}|{RESOLVED_NORM_VARIANT.name}"
    report = {
        "command": "verify hseries",
        "conventions": resolved_conventions(),
        "h_match": resolution["h_match"],
        "h_winners": resolution["h_winners"],
        "q_integrality": resolution["q_integrality"],
        "pass": resolution["h_winners"] == [expected] and all(resolution["q_integrality"].values()),
    }
    _dump(report, args.out)
    return 0 if report["pass"] else 1


def e05_cases(v1_values, m_values, k_values, sides=("E", "F")) -> list[dict]:
    cases = []
    for side in sides:
        for v1 in v1_values:
            for m in m_values:
                if m > v1 + 1:
                    continue
                for k in k_values:
                    rep = verify_e05(v1, m, k, mirror=(side == "F"))
                    rep["id"] = f"e05:{side}:v1={v1}:m={m}:k={k}"
                    expected = expected_e05_unit(m)
                    rep["unit_expected"] = render(expected)
                    rep["pass"] = bool(rep["ok"]) and rep["unit"] == render(expected)
                    cases.append(rep)
    return cases


def cmd_verify_e05(args) -> int:
    sides = ("E", "F") if args.side == "both" else (args.side,)
    cases = e05_cases(_parse_range(args.v1), _parse_range(args.m), _parse_range(args.k), sides)
    report = {
        "command": "verify e05",
        "conventions": resolved_conventions(),
        "kernel_resolution": resolve_kernel_convention(),
        "cases": cases,
        "pass": all(c["pass"] for c in cases)
        and resolve_kernel_convention()["resolved"] == "ratio",
    }
    _dump(report, args.out)
    return 0 if report["pass"] else 1


def e6_cases(a_max: int, entry: int) -> list[dict]:
    cases = []
    for a in range(1, a_max + 1):
        for alpha in dominant_vectors(a, -entry, entry):
            rep = verify_e6(alpha)
            rep["id"] = f"e6:{','.join(map(str, alpha))}"
            rep["pass"] = rep["ok"]
            cases.append(rep)
    return cases


def cmd_verify_e6(args) -> int:
    if args.alpha:
        alpha = tuple(int(x) for x in args.alpha.split(","))
        rep = verify_e6(alpha, args.s)
        rep["pass"] = rep["ok"]
        cases = [rep]
    else:
        cases = e6_cases(args.amax, args.entry)
    report = {
        "command": "verify e6",
        "conventions": resolved_conventions(),
        "cases": cases,
        "pass": all(c["pass"] for c in cases),
    }
    _dump(report, args.out)
    return 0 if report["pass"] else 1


def witness_cases(a_max: int, entry: int) -> list[dict]:
    cases = []
    for a in range(1, a_max + 1):
        for alpha in dominant_vectors(a, -entry, entry):
            rep = verify_witness(alpha)
            rep["id"] = f"witness:{','.join(map(str, alpha))}"
            rep["pass"] = rep["ok"]
            norms = [t["norm"] for t in rep["trace"]]
            rep["max_depth"] = max((t["depth"] for t in rep["trace"]), default=0)
            rep["norms"] = norms
            cases.append(rep)
    return cases


def cmd_verify_witness(args) -> int:
    if args.alpha:
        alpha = tuple(int(x) for x in args.alpha.split(","))
        if args.a is not None and args.a != len(alpha):
            raise SystemExit(f"--a {args.a} disagrees with --alpha of length {len(alpha)}")
        rep = verify_witness(alpha)
        rep["pass"] = rep["ok"]
        cases = [rep]
    else:
        cases = witness_cases(args.amax, args.entry)
    report = {
        "command": "verify witness",
        "conventions": resolved_conventions(),
        "cases": cases,
        "pass": all(c["pass"] for c in cases),
    }
    _dump(report, args.out)
    return 0 if report["pass"] else 1


def root_of_unity_cases(m_root_max: int, pairs: int = 100) -> list[dict]:
    cases = []
    headline = divided_power_nonvanishing(1, 0, (1, 0), 2, 4)
    headline["id"] = "root:divided-power:2:4"
    headline["pass"] = headline["ok"]
    cases.append(headline)
    rejected = divided_power_nonvanishing(1, 0, (1, 0), 2, 3)
    rejected["id"] = "root:precondition:2:3"
    rejected["pass"] = rejected["status"] == "precondition_rejected"
    cases.append(rejected)
    rng = random.Random(96274201)
    failures = 0
    for _ in range(pairs):
        order = rng.randint(1, m_root_max)
        f = _random_poly(rng, 2)
        g = _random_poly(rng, 2)
        lhs = specialize_at_root(f * g, order)
        rhs = specialize_at_root(f, order) * specialize_at_root(g, order)
        add_lhs = specialize_at_root(f + g, order)
        add_rhs = specialize_at_root(f, order) + specialize_at_root(g, order)
        if lhs != rhs or add_lhs != add_rhs:
            failures += 1
    cases.append({"id": "root:homomorphism", "pairs": pairs,
                  "failures": failures, "pass": failures == 0})
    return cases


def _random_poly(rng: random.Random, var_count: int) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(1, 4)):
        exps = tuple(rng.randint(-2, 2) for _ in range(var_count + 1))
        terms[exps] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return LaurentPoly(var_count, terms)


def cmd_verify_root(args) -> int:
    if args.mdp is not None:
        rep = divided_power_nonvanishing(1, 0, (args.mdp - 1, 0), args.mdp, args.mroot)
        rep["pass"] = rep["ok"] if rep["status"] == "ok" else False
        cases = [rep]
    else:
        cases = root_of_unity_cases(args.m_root_max)
    report = {
        "command": "verify root-of-unity",
        "conventions": resolved_conventions(),
        "cases": cases,
        "pass": all(c["pass"] for c in cases),
    }
    _dump(report, args.out)
    return 0 if report["pass"] else 1


# -- the suite ------------------------------------------------------------------


def matrices_cases(n_max: int, d_max: int) -> list[dict]:
    cases = []
    for n in range(1, n_max + 1):
        for d in range(0, d_max + 1):
            for v in compositions(d, n):
                for w in compositions(d, n):
                    count = len(enumerate_matrices(v, w))
                    cosets = double_coset_count(v, w)
                    cases.append({
                        "id": f"matrices:{','.join(map(str, v))}|{','.join(map(str, w))}",
                        "count": count, "double_cosets": cosets,
                        "pass": count == cosets,
                    })
    return cases


def run_suite(bounds: dict) -> dict:
    resolution = resolve_conventions(bounds["n"], min(bounds["d"], 4), bounds["r"])
    kernel = resolve_kernel_convention()
    expected_pair = f"{RESOLVED_INDEX_VARIANT.value}|{RESOLVED_NORM_VARIANT.name}"
    conventions = resolved_conventions()
    conventions["resolution"] = {
        "weight_winners": resolution["weight_winners"],
        "h_winners": resolution["h_winners"],
        "kernel_winners": kernel["winners"],
        "q_integrality_all_variants": all(resolution["q_integrality"].values()),
    }
    families: dict[str, list[dict]] = {}
    families["matrices"] = matrices_cases(bounds["n"], bounds["d"])
    weight_list = weights_cases(bounds["n"], min(bounds["d"], 4))
    for case in weight_list:
        case["pass"] = case["ok"]
    families["weights"] = weight_list
    families["hseries"] = [{
        "id": "hseries:resolution",
        "winners": resolution["h_winners"],
        "pass": resolution["h_winners"] == [expected_pair]
        and all(resolution["q_integrality"].values()),
    }]
    families["e05"] = e05_cases(range(0, 4), range(1, bounds["m"] + 1),
                                range(-bounds["k"], bounds["k"] + 1))
    families["e6"] = [
        {k: v for k, v in case.items() if k != "remainders"}
        for case in e6_cases(bounds["a"], bounds["entry"])
    ]
    families["witness"] = [
        {k: v for k, v in case.items() if k not in ("witness", "trace", "value", "target")}
        for case in witness_cases(bounds["a"], bounds["entry"])
    ]
    families["root_of_unity"] = root_of_unity_cases(bounds["m_root"])
    sweep = integrality_sweep(bounds["n"], bounds["d"], bounds["m"], bounds["k"])
    families["integrality"] = [{"id": "integrality:sweep", **sweep, "pass": sweep["ok"]}]
    cases = [case for family in sorted(families) for case in families[family]]
    report = {
        "conventions": conventions,
        "bounds": bounds,
        "cases": cases,
        "families": {name: {"cases": len(items), "pass": all(c["pass"] for c in items)}
                     for name, items in sorted(families.items())},
        "pass": all(c["pass"] for c in cases)
        and resolution["weight_winners"] == [RESOLVED_INDEX_VARIANT.value]
        and resolution["h_winners"] == [expected_pair]
        and kernel["winners"] == ["ratio"],
    }
    return report


def _print_summary(report: dict) -> None:
    print(f"{'family':<16}{'cases':>8}{'status':>10}")
    for name, info in report["families"].items():
        print(f"{name:<16}{info['cases']:>8}{'pass' if info['pass'] else 'FAIL':>10}")
    print(f"{'overall':<16}{len(report['cases']):>8}{'pass' if report['pass'] else 'FAIL':>10}")


def _write_csv(report: dict, path: Path) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["id", "pass", "unit", "note"])
        for case in report["cases"]:
            writer.writerow([case.get("id", ""), case.get("pass", ""),
                             case.get("unit", ""), case.get("note", "")])


def _write_figures(report: dict, outdir: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = list(report["families"])
    passed = [sum(1 for c in report["cases"] if c.get("id", "").startswith(n) and c["pass"])
              for n in names]
    failed = [sum(1 for c in report["cases"] if c.get("id", "").startswith(n) and not c["pass"])
              for n in names]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.bar(names, passed, label="pass", color="#2a9d8f")
    ax.bar(names, failed, bottom=passed, label="fail", color="#e76f51")
    ax.set_ylabel("cases")
    ax.set_title("verification cases by family")
    ax.legend()
    plt.setp(ax.get_xticklabels(), rotation=30, ha="right")
    fig.tight_layout()
    fig.savefig(outdir / "fig_summary.png", metadata={"Software": None})
    plt.close(fig)

    traces = [(c["id"], c["norms"]) for c in report["cases"]
              if c.get("id", "").startswith("witness") and c.get("norms")]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    for _, norms in traces:
        ax.plot(range(len(norms)), norms, alpha=0.25, color="#264653")
    ax.set_xlabel("recursion step")
    ax.set_ylabel("spread norm")
    ax.set_title("witness recursion norm descent")
    fig.tight_layout()
    fig.savefig(outdir / "fig_norm_descent.png", metadata={"Software": None})
    plt.close(fig)


def cmd_suite(args) -> int:
    bounds = dict(SMALL if args.size == "small" else FULL)
    report = run_suite(bounds)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.outdir:
        outdir = Path(args.outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.json").write_text(text)
        _write_csv(report, outdir / "cases.csv")
        _write_figures(report, outdir)
        _print_summary(report)
    elif args.out:
        Path(args.out).write_text(text)
        _print_summary(report)
    else:
        sys.stdout.write(text)
    return 0 if report["pass"] else 1


# -- argument wiring -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsteinberg",
                                     description="exact verification harness")
    sub = parser.add_subparsers(dest="command", required=True)

    enum = sub.add_parser("enum", help="enumeration commands")
    enum_sub = enum.add_subparsers(dest="what", required=True)
    matrices = enum_sub.add_parser("matrices", help="margin-constrained matrices")
    matrices.add_argument("--v", required=True)
    matrices.add_argument("--w", required=True)
    matrices.add_argument("--out")
    matrices.set_defaults(func=cmd_enum_matrices)

    verify = sub.add_parser("verify", help="verification commands")
    verify_sub = verify.add_subparsers(dest="what", required=True)

    weights = verify_sub.add_parser("weights")
    weights.add_argument("--nmax", type=int, default=3)
    weights.add_argument("--dmax", type=int, default=4)
    weights.add_argument("--out")
    weights.set_defaults(func=cmd_verify_weights)

    hseries = verify_sub.add_parser("hseries")
    hseries.add_argument("--nmax", type=int, default=3)
    hseries.add_argument("--dmax", type=int, default=4)
    hseries.add_argument("--rmax", type=int, default=3)
    hseries.add_argument("--out")
    hseries.set_defaults(func=cmd_verify_hseries)

    e05 = verify_sub.add_parser("e05")
    e05.add_argument("--v1", default="0..3")
    e05.add_argument("--m", default="1..3")
    e05.add_argument("--k", default="-2..2")
    e05.add_argument("--side", choices=["E", "F", "both"], default="both")
    e05.add_argument("--out")
    e05.set_defaults(func=cmd_verify_e05)

    e6 = verify_sub.add_parser("e6")
    e6.add_argument("--alpha")
    e6.add_argument("--s", type=int)
    e6.add_argument("--amax", type=int, default=4)
    e6.add_argument("--entry", type=int, default=2)
    e6.add_argument("--out")
    e6.set_defaults(func=cmd_verify_e6)

    witness = verify_sub.add_parser("witness")
    witness.add_argument("--alpha")
    witness.add_argument("--a", type=int)
    witness.add_argument("--amax", type=int, default=4)
    witness.add_argument("--entry", type=int, default=2)
    witness.add_argument("--out")
    witness.set_defaults(func=cmd_verify_witness)

    root = verify_sub.add_parser("root-of-unity")
    root.add_argument("--mdp", type=int)
    root.add_argument("--mroot", type=int, default=4)
    root.add_argument("--m-root-max", type=int, default=12)
    root.add_argument("--out")
    root.set_defaults(func=cmd_verify_root)

    suite = sub.add_parser("suite", help="run the full battery")
    suite.add_argument("size", choices=["small", "full"])
    suite.add_argument("--out")
    suite.add_argument("--outdir")
    suite.set_defaults(func=cmd_suite)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
