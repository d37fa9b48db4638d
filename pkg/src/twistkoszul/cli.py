"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace

from .clifford import CliffordElt
from .koszul import (
    KoszulCochain,
    coboundary_solve,
    default_bound,
    is_cocycle,
    koszul_diff,
    parse_cochain,
    parse_twisted,
)
from .lgmodel import ModelError, OrbifoldLG, example_model, load_model
from .mf import check_mf, is_closed
from .parsing import CliffordRing, ParseError, parse_expression
from .poly import NotDivisible
from .product import cup_class, cup_twisted, twisted_class_equal
from .invariant import invariant_monomial_basis, is_invariant
from .twist import TableIdentityError, TwistTables, check_identities, exp_eta, twist_tables

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path: str) -> OrbifoldLG:
    try:
        return load_model(path)
    except OSError as exc:
        raise UsageError(f"cannot read model file: {exc}") from exc
    except ParseError as exc:
        raise UsageError(f"parse error in W: {exc}") from exc


def _emit(args, text_lines: list[str], payload: dict):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


# -- validate ---------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        model = _load(args.model)
    except ModelError as exc:
        kind = type(exc).__name__
        msg = str(exc)
        if kind == "ModelError" and msg.startswith("parse error"):
            _emit(args, [f"FAIL {msg}"], {"ok": False, "error": msg})
            return EXIT_USAGE
        text = msg if msg.startswith(kind) else f"{kind}: {msg}"
        _emit(args, [f"FAIL {text}"], {"ok": False, "error": text})
        return EXIT_FAIL
    lines, sectors = [], []
    for h in model.elements:
        tag = model.tag(h)
        mf_ok = check_mf(model, h)
        try:
            t = twist_tables(model, h)
            problems = check_identities(model, t)
            reading = t.reading
        except (TableIdentityError, NotDivisible) as exc:
            problems, reading = [str(exc)], None
        ok = mf_ok and not problems
        sectors.append({"sector": tag, "mf": mf_ok, "tables": not problems, "reading": reading, "problems": problems})
        lines.append(f"  [{tag}] d^2 {'ok' if mf_ok else 'FAILED'}, tables {'ok' if not problems else 'FAILED'}")
        if not ok:
            first = "d^2 != (W(y)-W(x))*id" if not mf_ok else problems[0]
            _emit(args, [f"FAIL sector [{tag}]: {first}"] + lines, {"ok": False, "error": first, "sectors": sectors})
            return EXIT_FAIL
    head = f"PASS, {len(model.elements)} sector{'s' if len(model.elements) != 1 else ''}"
    _emit(args, [head] + lines, {"ok": True, "model": model.canonical(), "sectors": sectors})
    return EXIT_OK


# -- g-table ----------------------------------------------------------------


def table_rows(model: OrbifoldLG, t: TwistTables) -> list[tuple[str, str]]:
    n = model.n
    rows = []
    for j in range(1, n + 1):
        for i in range(j, n + 1):
            rows.append((f"g[{j},{i}]", str(t.g_at(j, i))))
    for j in range(1, n + 1):
        for i in range(j + 1, n + 1):
            rows.append((f"f[{j},{i}]", str(t.f_at(j, i))))
    return rows


def cmd_g_table(args) -> int:
    model = _load(args.model)
    h = _sector(model, args.sector)
    t = twist_tables(model, h)
    rows = table_rows(model, t)
    _emit(
        args,
        [f"sector [{model.tag(h)}]"] + [f"{k} = {v}" for k, v in rows],
        {"sector": model.tag(h), "reading": t.reading, "entries": dict(rows)},
    )
    return EXIT_OK


def _sector(model, tag):
    try:
        return model.lookup(tag)
    except ModelError as exc:
        raise UsageError(str(exc)) from exc


# -- exp-eta ----------------------------------------------------------------


def cmd_exp_eta(args) -> int:
    model = _load(args.model)
    h = _sector(model, args.sector)
    c = parse_cochain(model, args.cochain, h)
    if c.sector != h:
        raise UsageError(f"cochain is tagged [{model.tag(c.sector)}] but --sector is [{model.tag(h)}]")
    if not is_cocycle(model, c):
        _emit(args, [f"FAIL {c.format(model)} is not a cocycle"], {"ok": False, "error": "not a cocycle"})
        return EXIT_FAIL
    phi = exp_eta(model, h, c)
    closed = is_closed(model, phi)
    _emit(args, [str(phi)], {"sector": model.tag(h), "cochain": c.format(model), "value": str(phi), "closed": closed})
    return EXIT_OK if closed else EXIT_FAIL


# -- cup --------------------------------------------------------------------


def cmd_cup(args) -> int:
    model = _load(args.model)
    left = parse_twisted(model, args.left)
    right = parse_twisted(model, args.right)
    expected = parse_twisted(model, args.class_eq) if args.class_eq is not None else None
    bound = args.max_degree if args.max_degree is not None else default_bound(model)
    for c in (left, right):
        for part in c.parts.values():
            if not is_cocycle(model, part):
                msg = f"{part.format(model)} is not a cocycle"
                _emit(args, [f"FAIL {msg}"], {"ok": False, "error": msg})
                return EXIT_FAIL
    rep = cup_class(model, left, right, expected, bound)
    lines = [rep.product.format(model)]
    payload = {"product": rep.product.format(model), "max_degree": bound}
    if expected is None:
        _emit(args, lines, payload)
        return EXIT_OK
    wit = {}
    for h, w in rep.witnesses.items():
        tag = model.tag(h)
        if w is None:
            lines.append(f"[{tag}] no witness up to degree {bound}")
            wit[tag] = None
        else:
            verified = koszul_diff(model, w) == (rep.product - rep.expected).parts.get(h, KoszulCochain.zero(model.n, h))
            lines.append(f"[{tag}] witness {w.format(model)} (re-verified: {'yes' if verified else 'NO'})")
            wit[tag] = w.format(model)
    ok = bool(rep.equal)
    lines.append(f"class-eq: {'PASS' if ok else 'FAIL'}")
    payload.update(expected=rep.expected.format(model), witnesses=wit, ok=ok)
    _emit(args, lines, payload)
    return EXIT_OK if ok else EXIT_FAIL


# -- invariants -------------------------------------------------------------


def cmd_invariants(args) -> int:
    model = _load(args.model)
    out, lines = {}, []
    for h in model.elements:
        tag = model.tag(h)
        basis = [c.format(model) for c in invariant_monomial_basis(model, h, args.degree)]
        out[tag] = basis
        lines.append(f"[{tag}] {len(basis)} invariant monomial(s) up to degree {args.degree}")
        lines.extend(f"  {b}" for b in basis)
    _emit(args, lines, {"degree": args.degree, "sectors": out})
    return EXIT_OK


# -- demo -------------------------------------------------------------------


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


DEMO_TABLE = {
    "g[1,1]": "1", "g[1,2]": "x3", "g[1,3]": "x2", "g[2,2]": "1", "g[2,3]": "y1", "g[3,3]": "0",
    "f[1,2]": "-1/2*x3", "f[1,3]": "-1/2*x2", "f[2,3]": "0",
}
DEMO_EXP = "t1*t2 + t2*d1 - x3*t1*d1 - t1*d2 + d1*d2 + x3/2"


def corrupt_tables(model: OrbifoldLG) -> None:
    """Negative control: overwrite the cached g[1,2] of the rho sector."""
    h = model.lookup("rho")
    t = twist_tables(model, h)
    g = dict(t.g)
    g[(1, 2)] = g[(1, 2)] + model.x(3)
    model._cache[("tables", h, "auto")] = replace(t, g=g)


def run_demo(model: OrbifoldLG | None = None, corrupt: bool = False) -> list[Check]:
    model = model or example_model()
    if corrupt:
        corrupt_tables(model)
    rho, one = model.lookup("rho"), model.identity
    checks = []

    t = twist_tables(model, rho)
    got = dict(table_rows(model, t))
    bad = [k for k, v in DEMO_TABLE.items() if model.parse(v) != model.parse(got[k])]
    checks.append(Check("rho twist tables", not bad, ", ".join(f"{k}={got[k]}" for k in bad)))
    checks.append(Check("table identities", not check_identities(model, t)))

    for h in model.elements:
        checks.append(Check(f"d^2 = W(y)-W(x) in [{model.tag(h)}]", check_mf(model, h)))

    a = parse_cochain(model, "[rho] t1*t2")
    tau = parse_cochain(model, "[rho] t1*t2*t3")
    phi = exp_eta(model, rho, a)
    want = parse_expression_cliff(model, DEMO_EXP)
    checks.append(Check("exp(eta)((t1 t2)^rho)", phi.body == want, str(phi)))
    checks.append(Check("exp(eta)((t1 t2)^rho) closed", is_closed(model, phi)))

    def product_check(name, x, y, expect):
        try:
            got = cup_twisted(model, parse_twisted(model, x), parse_twisted(model, y))
        except (AssertionError, ValueError) as exc:
            return Check(name, False, str(exc))
        return Check(name, got == parse_twisted(model, expect), got.format(model))

    checks.append(product_check("(t1 t2)^rho cup (t1 t2)^rho", "[rho] t1*t2", "[rho] t1*t2", "[1] x3^2/4 - 1"))
    checks.append(
        product_check(
            "(t1 t2)^rho cup (t1 t2 t3)^rho",
            "[rho] t1*t2",
            "[rho] t1*t2*t3",
            "[1] x2/2*t1 - x2*x3/4*t2 + (x3^2/4 - 1)*t3",
        )
    )

    lp = parse_twisted(model, "[1] x3/2 + [rho] t1*t2")
    lm = parse_twisted(model, "[1] x3/2 - [rho] t1*t2")
    unit = parse_twisted(model, "[1] 1")
    bound = default_bound(model)

    def relation(name, x, y, expect):
        try:
            rep = cup_class(model, x, y, expect, bound)
        except (AssertionError, ValueError) as exc:
            return Check(name, False, str(exc))
        return Check(name, bool(rep.equal), rep.product.format(model))

    checks.append(relation("lambda+ lambda- = 1", lp, lm, unit))
    checks.append(relation("tau tau = 0", tau, tau, KoszulCochain.zero(model.n, one)))

    gens = {"lambda+": lp, "lambda-": lm, "tau": parse_twisted(model, "[rho] t1*t2*t3")}
    for name, c in gens.items():
        parts = list(c.parts.values())
        ok = all(is_cocycle(model, p) and is_invariant(model, p) for p in parts)
        nontrivial = not twisted_class_equal(model, c, c.scale(0), bound)
        checks.append(Check(f"generator {name}", ok and nontrivial, c.format(model)))
    return checks


def parse_expression_cliff(model: OrbifoldLG, text: str) -> CliffordElt:
    return parse_expression(text, CliffordRing(model.n, model.m))


def cmd_demo(args) -> int:
    checks = run_demo(corrupt=args.corrupt_table)
    ok = all(c.ok for c in checks)
    width = max(len(c.name) for c in checks)
    lines = [f"{'PASS' if c.ok else 'FAIL'}  {c.name.ljust(width)}  {c.detail}".rstrip() for c in checks]
    lines.append(f"{sum(c.ok for c in checks)}/{len(checks)} checks passed")
    payload = {"ok": ok, "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]}
    _emit(args, lines, payload)
    return EXIT_OK if ok else EXIT_FAIL


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twistkoszul", description="Orbifold Koszul algebra computations.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "validate a model file")
    sp.add_argument("model")
    sp = add("g-table", cmd_g_table, "dump the g/f tables of a sector")
    sp.add_argument("model")
    sp.add_argument("--sector", required=True)
    sp = add("exp-eta", cmd_exp_eta, "apply exp(eta_h) to a cochain")
    sp.add_argument("model")
    sp.add_argument("--sector", required=True)
    sp.add_argument("--cochain", required=True)
    sp = add("cup", cmd_cup, "cup product of two cochains")
    sp.add_argument("model")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--class-eq", dest="class_eq")
    sp.add_argument("--max-degree", dest="max_degree", type=int)
    sp = add("invariants", cmd_invariants, "list G-invariant monomial cochains per sector")
    sp.add_argument("model")
    sp.add_argument("--degree", type=int, default=2)
    sp = add("demo", cmd_demo, "reproduce the worked Z/2 example")
    sp.add_argument("--corrupt-table", action="store_true", help=argparse.SUPPRESS)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelError as exc:
        print(f"FAIL {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
