"""Command-line front end: ``liecube {info,efo,rule,verify,integrate,approx,cloud}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 orbit guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import warnings
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import approx, cubature, lattice, orbitfn
from .rootsys import (
    GUARD_ENV,
    OrbitGuardError,
    RootSystem,
    build_root_system,
    conjugation_permutation,
    orbit_guard,
    parse_type,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

RULE_ANCHOR = "gaussian-cubature"
ORTHO_TOL = 1e-9
ZERO_TOL = 1e-9
JACOBIAN_TOL = 1e-8


class UsageError(Exception):
    pass


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0.1.0"


def _fmt(x: float) -> str:
    """17 significant digits; integral values keep a trailing ``.0`` so they read back as floats."""
    text = format(float(x), ".17g")
    if text.lstrip("-").isdigit():
        text += ".0"
    return text


def _root_system(text: str) -> RootSystem:
    try:
        return build_root_system(parse_type(text))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


_FLOAT_MARK = re.compile(r'"@f17:([^"@]*)@"')


def _mark_floats(obj):
    if isinstance(obj, float):
        return f"@f17:{_fmt(obj)}@"
    if isinstance(obj, dict):
        return {k: _mark_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark_floats(v) for v in obj]
    return obj


def _dump_json(payload) -> str:
    """JSON text with every float written in the fixed 17-significant-digit format."""
    text = json.dumps(_mark_floats(payload), indent=2)
    return _FLOAT_MARK.sub(lambda m: m.group(1), text) + "\n"


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


# --- info -------------------------------------------------------------------

def info_payload(rs: RootSystem) -> dict:
    return {
        "type": rs.name,
        "rank": rs.rank,
        "cartan": [list(r) for r in rs.cartan],
        "marks": list(rs.marks),
        "comarks": list(rs.comarks),
        "coxeter_number": rs.coxeter_number,
        "center_order": rs.center_order,
        "weyl_order": rs.weyl_order,
        "sigma": list(conjugation_permutation(rs)),
        "positive_roots": len(rs.positive_roots),
    }


def cmd_info(args) -> int:
    rs = _root_system(args.type)
    payload = info_payload(rs)
    large = rs.type.family == "E" and rs.rank >= 7 or rs.weyl_order > orbit_guard()
    if args.format == "json":
        if large:
            payload["warning"] = "orbit guard: Weyl orbits of this type need --allow-large-orbits"
        _emit(_dump_json(payload), args.out)
        return EXIT_OK
    lines = [f"type            {payload['type']}",
             f"rank            {payload['rank']}",
             f"marks           {','.join(map(str, rs.marks))}",
             f"comarks         {','.join(map(str, rs.comarks))}",
             f"h               {rs.coxeter_number}",
             f"c_G             {rs.center_order}",
             f"|W|             {rs.weyl_order}",
             f"sigma           {' '.join(map(str, payload['sigma']))}",
             f"positive roots  {payload['positive_roots']}"]
    if large:
        lines.append(f"warning: orbit guard: |W| = {rs.weyl_order}; S-function evaluation "
                     f"needs --allow-large-orbits (guard {orbit_guard()}, env {GUARD_ENV})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# --- efo ------------------------------------------------------------------

def cmd_efo(args) -> int:
    rs = _root_system(args.type)
    if args.level < 1:
        raise UsageError("level must be >= 1")
    pts = lattice.enumerate_efo(rs, args.level, interior_only=not args.all)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"s{j}" for j in range(rs.rank + 1)]
                   + [f"x{j + 1}" for j in range(rs.rank)] + ["strict_order", "interior"])
        for p in pts:
            w.writerow(list(p.kac) + [cubature._frac_str(q) for q in p.alpha_check_coords]
                       + [lattice.strict_ad_order(p), int(p.is_interior)])
        _emit(buf.getvalue(), args.out)
    else:
        payload = {
            "type": rs.type.family, "rank": rs.rank, "level": args.level,
            "points": [{"kac": list(p.kac),
                        "coords": [cubature._frac_str(q) for q in p.alpha_check_coords],
                        "strict_order": lattice.strict_ad_order(p),
                        "interior": p.is_interior} for p in pts],
        }
        _emit(_dump_json(payload), args.out)
    return EXIT_OK


# --- rule -------------------------------------------------------------------

def rule_file_payload(rule: cubature.CubatureRule) -> dict:
    payload = cubature.rule_to_dict(rule)
    payload["metadata"] = {
        "anchor": RULE_ANCHOR,
        # deterministic unless the caller pins a build timestamp
        "created": os.environ.get("SOURCE_DATE_EPOCH"),
        "tool_version": tool_version(),
    }
    return payload


def rule_invariant_failures(rule: cubature.CubatureRule) -> list[str]:
    problems = []
    expected = len(cubature.dominant_weights_up_to(rule.rs, rule.M))
    if len(rule) != expected:
        problems.append(f"node count {len(rule)} != dominant weight count {expected}")
    if lattice.count_f_m(rule.rs, rule.M) != len(rule):
        problems.append(f"node count {len(rule)} != |F_M| = {lattice.count_f_m(rule.rs, rule.M)}")
    if not np.all(rule.weights > 0):
        problems.append("non-positive cubature weight")
    return problems


def cmd_rule(args) -> int:
    rs = _root_system(args.type)
    if args.M < 0:
        raise UsageError("M must be non-negative")
    rule = cubature.build_rule(rs, args.M, allow_large=args.allow_large_orbits)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        n = rs.rank
        w.writerow([f"s{j}" for j in range(n + 1)] + [f"x{j + 1}" for j in range(n)]
                   + [f"X{j + 1}_{part}" for j in range(n) for part in ("re", "im")]
                   + ["weight"])
        for i, p in enumerate(rule.nodes):
            w.writerow(list(p.kac) + [cubature._frac_str(q) for q in p.alpha_check_coords]
                       + [_fmt(v) for z in rule.X[i] for v in (z.real, z.imag)]
                       + [_fmt(rule.weights[i])])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_dump_json(rule_file_payload(rule)), args.out)
    problems = rule_invariant_failures(rule)
    for msg in problems:
        print(f"FAIL: {msg}", file=sys.stderr)
    return EXIT_FAIL if problems else EXIT_OK


def load_rule_file(path: str) -> cubature.CubatureRule:
    data = _load_json(path)
    try:
        return cubature.rule_from_dict(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: not a valid rule file ({exc})") from None


# --- verify -------------------------------------------------------------------

def verify_report(rs: RootSystem, M: int, *, deep: bool = False,
                  allow_large: bool = False) -> list[tuple[str, bool, str]]:
    """Run the verification suite; one ``(name, passed, detail)`` per check."""
    level = M + rs.coxeter_number
    results = []

    nodes = lattice.enumerate_efo(rs, level)
    weights = cubature.dominant_weights_up_to(rs, M)
    results.append(("count duality", len(nodes) == len(weights) == lattice.count_f_m(rs, M),
                    f"nodes={len(nodes)} weights={len(weights)} |F_M|={lattice.count_f_m(rs, M)}"))

    X = cubature.s_matrix(rs, weights, nodes, allow_large=allow_large)
    scale = rs.center_order * level**rs.rank
    gram_dev = float(np.max(np.abs(X @ X.conj().T - scale * np.eye(len(weights)))))
    results.append(("gram identity", gram_dev <= ORTHO_TOL * scale,
                     f"max|X X^H - {scale} I| = {gram_dev:.3e}"))

    ortho = cubature.discrete_orthogonality_deviation(rs, M, allow_large=allow_large)
    results.append(("discrete orthogonality", ortho <= ORTHO_TOL,
                    f"max deviation (deg <= M+1 vs <= M) = {ortho:.3e}"))

    zero = cubature.zero_theorem_deviation(rs, M, allow_large=allow_large)
    results.append(("common zeros", zero <= ZERO_TOL * rs.weyl_order,
                    f"max|S_(lam+rho)| at deg M+1 = {zero:.3e}"))

    rule = cubature.build_rule(rs, M, allow_large=allow_large)
    results.append(("positive weights", bool(np.all(rule.weights > 0)),
                    f"min weight = {float(np.min(rule.weights)):.6g}"))

    if deep:
        worst = 0.0
        for p in nodes:
            s_rho = orbitfn.s_function(rs, (0,) * rs.rank, p, allow_large=allow_large)
            det = orbitfn.steinberg_jacobian(rs, p, allow_large=allow_large)
            worst = max(worst, abs(det - s_rho) / abs(s_rho))
        results.append(("Jacobian = S_rho", worst <= JACOBIAN_TOL,
                        f"max relative residual = {worst:.3e}"))
        if rs.rank <= 3 and M <= 6:
            rep = cubature.separation_check(rs, M)
            results.append(("separation", rep.ok,
                            f"checked {rep.checked} weights, "
                            f"{len(rep.counterexamples)} counterexamples"))
        else:
            results.append(("separation", True, "skipped (needs rank <= 3 and M <= 6)"))
    return results


def cmd_verify(args) -> int:
    rs = _root_system(args.type)
    if args.M < 0:
        raise UsageError("M must be non-negative")
    results = verify_report(rs, args.M, deep=args.deep, allow_large=args.allow_large_orbits)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    ok = all(r[1] for r in results)
    print(f"{'PASS' if ok else 'FAIL'}  {rs.name} M={args.M}")
    return EXIT_OK if ok else EXIT_FAIL


# --- integrate / approx --------------------------------------------------------

def load_poly_file(path: str) -> cubature.PolynomialInX:
    data = _load_json(path)
    try:
        return cubature.PolynomialInX.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: not a valid polynomial file ({exc})") from None


def _check_arity(rule, poly):
    for e in poly.terms:
        if len(e) != rule.rs.rank:
            raise UsageError(f"exponent vector {list(e)} does not match rank {rule.rs.rank}")


def cmd_integrate(args) -> int:
    rule = load_rule_file(args.rule)
    poly = load_poly_file(args.poly)
    _check_arity(rule, poly)
    deg = poly.m_degree(rule.rs)
    if deg > rule.exact_degree:
        print(f"warning: m-degree {deg} > 2M+1 = {rule.exact_degree}: exactness not guaranteed")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", cubature.ExactnessWarning)
        value = cubature.cubature_integrate(rule, poly)
    print(f"cubature {_fmt(value.real)} {_fmt(value.imag)}")
    if args.oracle:
        if rule.rs.rank > 3:
            raise UsageError("--oracle needs rank <= 3")
        ref = cubature.oracle_integral(rule.rs, poly, args.resolution)
        gap = abs(value - ref) / max(abs(ref), 1e-300)
        print(f"oracle   {_fmt(ref.real)} {_fmt(ref.imag)}")
        print(f"relative_gap {gap:.3e}")
    return EXIT_OK


def cmd_approx(args) -> int:
    rule = load_rule_file(args.rule)
    poly = load_poly_file(args.poly)
    _check_arity(rule, poly)
    M = rule.M if args.degree is None else args.degree
    if not 0 <= M <= rule.M:
        raise UsageError(f"--degree must be in 0..{rule.M}")
    exp = approx.expansion_coefficients(rule, poly, M)
    _emit(_dump_json(exp.to_json()), args.out)
    return EXIT_OK


# --- cloud -------------------------------------------------------------------

def cmd_cloud(args) -> int:
    rs = _root_system(args.type)
    if rs.rank > 3:
        raise UsageError(f"cloud supports rank <= 3, got {rs.name}")
    if args.level < 1:
        raise UsageError("level must be >= 1")
    pts = cubature.omega_cloud(rs, args.level)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"X{j + 1}" for j in range(rs.rank)])
    for row in pts:
        w.writerow([_fmt(v) for v in row])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liecube",
        description="Gaussian cubature on Weyl-character domains of compact simple Lie groups.")
    parser.add_argument("--allow-large-orbits", action="store_true",
                        help="permit E7/E8 Weyl orbits (millions of terms)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="marks, comarks, Coxeter number and other type data")
    p.add_argument("type")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("efo", help="list elements of finite order of a given level")
    p.add_argument("type")
    p.add_argument("level", type=int)
    p.add_argument("--all", action="store_true", help="include boundary points")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_efo)

    p = sub.add_parser("rule", help="build the cubature rule exact to m-degree 2M+1")
    p.add_argument("type")
    p.add_argument("M", type=int)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rule)

    p = sub.add_parser("verify", help="check orthogonality, common zeros and counts")
    p.add_argument("type")
    p.add_argument("M", type=int)
    p.add_argument("--deep", action="store_true", help="add Jacobian and separation checks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrate", help="integrate a polynomial in X with a rule file")
    p.add_argument("rule")
    p.add_argument("poly")
    p.add_argument("--oracle", action="store_true", help="compare with the grid oracle")
    p.add_argument("--resolution", type=int, default=400)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("approx", help="character expansion of a polynomial in X")
    p.add_argument("rule")
    p.add_argument("poly")
    p.add_argument("--degree", type=int, help="truncation degree (default: the rule's M)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("cloud", help="points of Omega from interior EFOs, as CSV")
    p.add_argument("type")
    p.add_argument("level", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cloud)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"liecube: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OrbitGuardError as exc:
        print(f"liecube: error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OSError as exc:
        print(f"liecube: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
