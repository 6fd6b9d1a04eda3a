"""Acceptance criteria, one test per criterion.

Every test prints a ``PASS``/``FAIL`` line (collected again in the pytest
terminal summary).  Run ``python3 tests/test_acceptance.py`` to get just the
eleven lines.
"""

from __future__ import annotations

import math
import sys
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from liecube import build_root_system, build_rule, count_f_m, enumerate_efo
from liecube.cubature import (
    PolynomialInX,
    character_values,
    cubature_integrate,
    discrete_orthogonality_deviation,
    dominant_weights_up_to,
    oracle_integral,
    s_matrix,
    separation_check,
    zero_theorem_deviation,
)
from liecube.lattice import dual_point
from liecube.orbitfn import s_function_batch, s_rho_product, steinberg_jacobian

RESULTS: list[str] = []

# Interior points of adjoint order 14 for G2, as listed for the M=8 worked example.
# The listed [2,1,1] is the level-7 name of [4,2,2]; the listed coordinates of
# [1,2,3] are fixed by s0 + 2 s1 + 3 s2 = 14 instead.
G2_NODES = [(9, 1, 1), (7, 2, 1), (5, 3, 1), (3, 4, 1), (1, 5, 1),
            (6, 1, 2), (4, 2, 2), (2, 3, 2), (3, 1, 3), (1, 2, 3)]

G2_K_VALUES = [0.364666, 7.36467, 30.1836, 37.1836, 7.36467,
               11.4517, 49.0, 37.1836, 11.4517, 4.45175]

# reference 10x10 matrix X^(8), rounded to 4 figures
G2_REFERENCE_X = [
    [-0.604, -2.714, -5.494, -6.098, -2.714, -3.384, -7.0, -6.098, -3.384, -2.11],
    [-2.714, -7.604, -6.098, 1.506, 2.714, -4.89, 0.0, 6.098, 3.384, 3.384],
    [-5.494, -6.098, 2.11, -3.384, -6.098, 2.714, 7.0, -3.384, 2.714, -0.604],
    [-6.098, 1.506, -3.384, -4.89, 6.098, 7.604, 0.0, 3.384, -2.714, -2.714],
    [-2.714, 2.714, -6.098, 6.098, -7.604, 3.384, 0.0, 1.506, -4.89, 3.384],
    [-3.384, -4.89, 2.714, 7.604, 3.384, -1.506, 0.0, -2.714, -6.098, -6.098],
    [-7.0, 0.0, 7.0, 0.0, 0.0, 0.0, -7.0, 0.0, 0.0, 7.0],
    [-6.098, 6.098, -3.384, 3.384, 1.506, -2.714, 0.0, -4.89, 7.604, -2.714],
    [-3.384, 3.384, 2.714, -2.714, -4.89, -6.098, 0.0, 7.604, -1.506, -6.098],
    [-2.11, 3.384, -0.604, -2.714, 3.384, -6.098, 7.0, -2.714, -6.098, 5.494],
]

SUITE_TYPES = ["A2", "C2", "G2", "A3", "B3"]
RANK_LE_4 = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2"]


def _report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {title}: {detail}"
    RESULTS.append(line)
    print(line)


def _best_time(fn, repeats: int = 7) -> tuple[object, float]:
    best, out = math.inf, None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def criterion_1():
    g2 = build_root_system("G2")
    pts, secs = _best_time(lambda: enumerate_efo(g2, 14, interior_only=True))
    got = Counter(p.kac for p in pts)
    ok = got == Counter(G2_NODES) and len(pts) == 10 and secs < 1e-3
    coords = {p.kac: p.omega_check_coords for p in pts}
    fixed = coords.get((1, 2, 3)) == (Fraction(1, 7), Fraction(3, 14))
    ok &= fixed
    return ok, (f"{len(pts)} points, multiset match={got == Counter(G2_NODES)}, "
                f"[1,2,3] at (1/7, 3/14)={fixed}, {secs * 1e3:.3f} ms")


def criterion_2():
    g2 = build_root_system("G2")

    def compute():
        pts = enumerate_efo(g2, 14)
        cw = np.array([p.coweight for p in pts])
        s = s_function_batch(g2, g2.rho, cw, 14)
        return (s * s.conj()).real

    K, secs = _best_time(compute)
    worst = float(np.max(np.abs(np.sort(K) - np.sort(G2_K_VALUES))))
    ok = worst <= 1e-4 and secs < 1e-2
    return ok, f"max |K - reference| = {worst:.2e} (tol 1e-4), {secs * 1e3:.3f} ms"


def criterion_3():
    g2 = build_root_system("G2")
    X = s_matrix(g2, dominant_weights_up_to(g2, 8), enumerate_efo(g2, 14))
    gram_dev = float(np.max(np.abs(X @ X.T - 196 * np.eye(10))))
    imag = float(np.max(np.abs(X.imag)))
    entries = np.sort(X.real.ravel())
    reference = np.sort(np.array(G2_REFERENCE_X).ravel())
    multiset_dev = float(np.max(np.abs(entries - reference)))
    ok = gram_dev <= 1e-9 and multiset_dev <= 1.5e-3 and imag <= 1e-9
    return ok, (f"max|X X^T - 196 I| = {gram_dev:.2e}, sorted-entry gap = {multiset_dev:.2e} "
                f"(tol 1.5e-3), max|Im X| = {imag:.1e}")


def criterion_4():
    n = len(enumerate_efo(build_root_system("G2"), 106))
    return n == 884, f"{n} interior points at level 106 (expected 884)"


def criterion_5():
    t0 = time.perf_counter()
    worst_ratio, where = 0.0, None
    for name in SUITE_TYPES:
        rs = build_root_system(name)
        for M in range(7):
            ratio = zero_theorem_deviation(rs, M) / rs.weyl_order
            if ratio >= worst_ratio:
                worst_ratio, where = ratio, (name, M)
    secs = time.perf_counter() - t0
    ok = worst_ratio <= 1e-9 and secs < 30
    return ok, f"max |S|/|W| = {worst_ratio:.2e} at {where} (tol 1e-9), {secs:.2f} s"


def criterion_6():
    worst, where = 0.0, None
    for name in SUITE_TYPES:
        rs = build_root_system(name)
        for M in range(7):
            dev = discrete_orthogonality_deviation(rs, M)
            if dev >= worst:
                worst, where = dev, (name, M)
    return worst <= 1e-9, f"max deviation from identity = {worst:.2e} at {where} (tol 1e-9)"


def criterion_7():
    g2 = build_root_system("G2")
    rule = build_rule(g2, 8)
    scale = (2 * math.pi) ** 2
    lams = dominant_weights_up_to(g2, 17)
    worst = 0.0
    for lam in lams:
        expected = scale if not any(lam) else 0.0
        worst = max(worst, abs(cubature_integrate(rule, character_values(rule, lam)) - expected))
    ok = worst <= 1e-9 * scale
    return ok, f"{len(lams)} characters, max error = {worst:.2e} (tol {1e-9 * scale:.2e})"


def random_polynomial(rng: np.random.Generator, comarks, max_degree: int) -> PolynomialInX:
    n = len(comarks)
    terms = {}
    for _ in range(int(rng.integers(2, 7))):
        e = [0] * n
        budget = int(rng.integers(0, max_degree + 1))
        for j in rng.permutation(n):
            e[j] = int(rng.integers(0, budget // comarks[j] + 1))
            budget -= e[j] * comarks[j]
        terms[tuple(e)] = complex(rng.normal(), rng.normal())
    return PolynomialInX(terms)


def criterion_8():
    g2 = build_root_system("G2")
    rule = build_rule(g2, 8)
    rng = np.random.default_rng(20240817)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(10):
        f = random_polynomial(rng, g2.comarks, 17)
        assert f.m_degree(g2) <= 17
        ref = oracle_integral(g2, f, resolution=400)
        worst = max(worst, abs(cubature_integrate(rule, f) - ref) / abs(ref))
    secs = time.perf_counter() - t0
    ok = worst <= 1e-3 and secs <= 60
    return ok, f"max relative gap = {worst:.2e} (tol 1e-3), {secs:.1f} s"


def random_interior_points(rs, count: int, rng: np.random.Generator):
    """Interior points with random Kac coordinates at random levels."""
    out = []
    while len(out) < count:
        kac = [int(v) for v in rng.integers(1, 12, size=rs.rank + 1)]
        out.append(dual_point(rs, kac))
    return out


def criterion_9():
    rng = np.random.default_rng(7)
    worst = 0.0
    for name in ("A2", "G2"):
        rs = build_root_system(name)
        for p in random_interior_points(rs, 100, rng):
            ref = s_rho_product(rs, p)
            worst = max(worst, abs(steinberg_jacobian(rs, p) - ref) / abs(ref))
    return worst <= 1e-8, f"max relative residual = {worst:.2e} over 200 points (tol 1e-8)"


def criterion_10():
    bad = []
    for name in RANK_LE_4:
        rs = build_root_system(name)
        for M in range(11):
            nodes = len(enumerate_efo(rs, M + rs.coxeter_number))
            weights = len(dominant_weights_up_to(rs, M))
            if not nodes == weights == count_f_m(rs, M):
                bad.append((name, M, nodes, weights))
    return not bad, f"{len(RANK_LE_4)} types x M=0..10, mismatches: {bad or 'none'}"


def criterion_11():
    checked, bad = 0, []
    for name in ("G2", "A2", "C2"):
        rs = build_root_system(name)
        for M in range(5):
            rep = separation_check(rs, M)
            checked += rep.checked
            bad.extend((name, M, phi) for phi in rep.counterexamples)
    return not bad, f"{checked} weights scanned, counterexamples: {bad or 'none'}"


CRITERIA = [
    (1, "G2 M=8 node set", criterion_1),
    (2, "G2 K values", criterion_2),
    (3, "G2 gram identity and reference matrix", criterion_3),
    (4, "G2 level-106 count", criterion_4),
    (5, "common zeros suite", criterion_5),
    (6, "discrete orthogonality suite", criterion_6),
    (7, "G2 M=8 cubature exactness", criterion_7),
    (8, "grid oracle agreement", criterion_8),
    (9, "Jacobian equals S_rho", criterion_9),
    (10, "node count duality", criterion_10),
    (11, "separation scan", criterion_11),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    ok, detail = check()
    _report(number, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for number, title, check in CRITERIA:
        ok, detail = check()
        _report(number, title, ok, detail)
        failures += not ok
    sys.exit(1 if failures else 0)
