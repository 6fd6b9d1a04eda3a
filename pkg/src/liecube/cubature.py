"""Gaussian cubature rules on the domain Omega.

For a rank ``n`` group with Coxeter number ``h`` and a degree bound ``M``, the
rule uses the interior points of adjoint order ``M + h`` as nodes and
``K = |S_rho|^2`` as weights:

    int_Omega f K^{1/2} dX = (2 pi)^n / (c_G (M+h)^n) * sum_x f(X(x)) K(x)

exactly whenever the m-degree of ``f`` is at most ``2M + 1``.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .lattice import DualPoint, dual_point, enumerate_efo
from .orbitfn import character_batch, s_function_batch
from .rootsys import RootSystem, build_root_system, parse_type, signed_weyl_orbit

__all__ = [
    "CubatureRule",
    "ExactnessWarning",
    "PolynomialInX",
    "SeparationReport",
    "build_rule",
    "character_values",
    "cubature_integrate",
    "direct_s_function",
    "discrete_orthogonality_deviation",
    "dominant_weights_up_to",
    "dual_node_order",
    "gram_matrix",
    "grid_quadrature_oracle",
    "m_degree",
    "node_values",
    "omega_cloud",
    "oracle_integral",
    "realify",
    "rule_from_dict",
    "rule_to_dict",
    "s_matrix",
    "separation_check",
    "simplex_vertices",
    "zero_theorem_deviation",
]


class ExactnessWarning(UserWarning):
    """The integrand's m-degree exceeds ``2M + 1``; the rule is then only approximate."""


def m_degree(rs: RootSystem, lam) -> int:
    """``sum_j lam_j * comark_j``."""
    return rs.m_degree(lam)


def dominant_weights_up_to(rs: RootSystem, M: int, *, exact: bool = False) -> list[tuple[int, ...]]:
    """Dominant weights of m-degree ``<= M`` (``== M`` with ``exact``), lexicographic."""
    out = []

    def rec(prefix, budget, rest):
        if not rest:
            if not exact or budget == 0:
                out.append(tuple(prefix))
            return
        c = rest[0]
        for t in range(budget // c + 1):
            rec(prefix + [t], budget - c * t, rest[1:])

    if M >= 0:
        rec([], M, rs.comarks)
    return out


@dataclass(frozen=True, eq=False)
class CubatureRule:
    rs: RootSystem
    M: int
    nodes: tuple[DualPoint, ...]
    weights: np.ndarray
    X: np.ndarray
    norm_const: float

    @property
    def level(self) -> int:
        return self.M + self.rs.coxeter_number

    @property
    def exact_degree(self) -> int:
        return 2 * self.M + 1

    def __len__(self) -> int:
        return len(self.nodes)


def _norm_const(rs: RootSystem, level: int) -> float:
    n = rs.rank
    return (2 * math.pi) ** n / (rs.center_order * level**n)


def build_rule(rs: RootSystem, M: int, *, allow_large: bool = False) -> CubatureRule:
    """Cubature rule of degree ``2M + 1``: nodes, ``K`` weights and fundamental characters."""
    if M < 0:
        raise ValueError("M must be non-negative")
    level = M + rs.coxeter_number
    nodes = tuple(enumerate_efo(rs, level, interior_only=True))
    cw = np.array([p.coweight for p in nodes], dtype=np.int64)
    s_rho = s_function_batch(rs, rs.rho, cw, level, allow_large=allow_large)
    weights = (s_rho * s_rho.conj()).real
    X = np.empty((len(nodes), rs.rank), dtype=complex)
    for j in range(rs.rank):
        seed = tuple(2 if i == j else 1 for i in range(rs.rank))
        X[:, j] = s_function_batch(rs, seed, cw, level, allow_large=allow_large) / s_rho
    for a in (weights, X):
        a.flags.writeable = False
    return CubatureRule(rs, M, nodes, weights, X, _norm_const(rs, level))


def s_matrix(rs: RootSystem, weights: Sequence, nodes: Sequence[DualPoint], *,
             allow_large: bool = False) -> np.ndarray:
    """``S_{lam+rho}(x)`` with rows indexed by ``weights`` and columns by ``nodes``."""
    nodes = list(nodes)
    out = np.empty((len(weights), len(nodes)), dtype=complex)
    by_level: dict[int, list[int]] = {}
    for i, p in enumerate(nodes):
        by_level.setdefault(p.level, []).append(i)
    for level, idx in by_level.items():
        cw = np.array([nodes[i].coweight for i in idx], dtype=np.int64)
        for r, lam in enumerate(weights):
            seed = tuple(int(v) + 1 for v in lam)
            out[r, idx] = s_function_batch(rs, seed, cw, level, allow_large=allow_large)
    return out


def gram_matrix(rs: RootSystem, M: int, *, allow_large: bool = False) -> np.ndarray:
    """The square cubature matrix ``(S_{lam+rho}(x))`` for ``deg lam <= M`` and the rule nodes."""
    nodes = enumerate_efo(rs, M + rs.coxeter_number)
    return s_matrix(rs, dominant_weights_up_to(rs, M), nodes, allow_large=allow_large)


def discrete_orthogonality_deviation(rs: RootSystem, M: int, *,
                                     allow_large: bool = False) -> float:
    """Max deviation of ``S_{M+1} S_M^dagger / (c_G (M+h)^n)`` from the Kronecker delta.

    Rows run over dominant weights of m-degree ``<= M+1``, columns over ``<= M``.
    """
    level = M + rs.coxeter_number
    nodes = enumerate_efo(rs, level)
    rows = dominant_weights_up_to(rs, M + 1)
    cols = dominant_weights_up_to(rs, M)
    S = s_matrix(rs, rows, nodes, allow_large=allow_large)
    col_index = {lam: c for c, lam in enumerate(cols)}
    G = S @ S[[rows.index(lam) for lam in cols]].conj().T / (rs.center_order * level**rs.rank)
    target = np.zeros_like(G)
    for r, lam in enumerate(rows):
        if lam in col_index:
            target[r, col_index[lam]] = 1.0
    return float(np.max(np.abs(G - target))) if G.size else 0.0


def zero_theorem_deviation(rs: RootSystem, M: int, *, allow_large: bool = False) -> float:
    """Max ``|S_{lam+rho}(x)|`` over ``deg lam == M+1`` and interior nodes of level ``M+h``."""
    nodes = enumerate_efo(rs, M + rs.coxeter_number)
    lams = dominant_weights_up_to(rs, M + 1, exact=True)
    if not lams or not nodes:
        return 0.0
    return float(np.max(np.abs(s_matrix(rs, lams, nodes, allow_large=allow_large))))


def _dual_permutation(rs: RootSystem) -> tuple[int, ...] | None:
    """A permutation ``pi`` with ``comarks[j] == marks[pi[j]]`` carrying ``A^T`` onto ``A``."""
    n = rs.rank
    # identity first among the candidates, so simply-laced types keep their order
    choices = [sorted((k for k in range(n) if rs.marks[k] == c), key=lambda k: k != j)
               for j, c in enumerate(rs.comarks)]
    for perm in itertools.product(*choices):
        if len(set(perm)) < n:
            continue
        if all(rs.cartan[perm[i]][perm[j]] == rs.cartan[j][i] for i in range(n) for j in range(n)):
            return perm
    return None


def dual_node_order(rs: RootSystem, M: int) -> list[DualPoint]:
    """Rule nodes reordered to match ``dominant_weights_up_to(rs, M)`` under marks <-> comarks.

    The node paired with ``lam`` has ``s_{pi(j)} = lam_j + 1`` where ``pi`` maps
    each comark position to a mark position of equal value.  Only defined for
    types whose dual root system is isomorphic to the original under ``pi``.
    """
    level = M + rs.coxeter_number
    perm = _dual_permutation(rs)
    if perm is None:
        raise ValueError(f"{rs.name} is not self-dual under marks <-> comarks")
    out = []
    for lam in dominant_weights_up_to(rs, M):
        s = [0] * rs.rank
        for j, v in enumerate(lam):
            s[perm[j]] = v + 1
        s0 = level - sum(m * v for m, v in zip(rs.marks, s))
        out.append(dual_point(rs, [s0] + s))
    return out


@dataclass(frozen=True)
class PolynomialInX:
    """Sparse polynomial ``sum c_e X_1^e_1 ... X_n^e_n``."""

    terms: Mapping[tuple[int, ...], complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in dict(self.terms).items():
            e = tuple(int(v) for v in e)
            if min(e, default=0) < 0:
                raise ValueError(f"negative exponent in {e}")
            c = complex(c)
            if c != 0:
                clean[e] = clean.get(e, 0) + c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, value: complex, n: int) -> "PolynomialInX":
        return cls({(0,) * n: value})

    @classmethod
    def from_json(cls, data) -> "PolynomialInX":
        """Parse ``[{"exponents": [...], "coeff": [re, im]}, ...]``."""
        terms: dict[tuple[int, ...], complex] = {}
        for item in data:
            re, im = item["coeff"]
            e = tuple(int(v) for v in item["exponents"])
            terms[e] = terms.get(e, 0) + complex(re, im)
        return cls(terms)

    def to_json(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": [c.real, c.imag]}
                for e, c in sorted(self.terms.items())]

    def m_degree(self, rs: RootSystem) -> int:
        return max((rs.m_degree(e) for e in self.terms), default=0)

    def __call__(self, X) -> np.ndarray | complex:
        """Evaluate at ``X`` of shape ``(n,)`` or ``(P, n)``."""
        X = np.asarray(X, dtype=complex)
        flat = X.ndim == 1
        X2 = np.atleast_2d(X)
        out = np.zeros(X2.shape[0], dtype=complex)
        for e, c in self.terms.items():
            out += c * np.prod(X2 ** np.asarray(e), axis=1)
        return complex(out[0]) if flat else out

    def conjugate(self, rs: RootSystem) -> "PolynomialInX":
        """Conjugate coefficients and send ``X_j`` to ``X_sigma(j)``."""
        terms = {}
        for e, c in self.terms.items():
            new = [0] * len(e)
            for j, v in enumerate(e):
                new[rs.sigma[j]] += v
            terms[tuple(new)] = c.conjugate()
        return PolynomialInX(terms)

    def __add__(self, other: "PolynomialInX") -> "PolynomialInX":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return PolynomialInX(terms)

    def __mul__(self, other: "PolynomialInX") -> "PolynomialInX":
        terms: dict[tuple[int, ...], complex] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            terms[e] = terms.get(e, 0) + c1 * c2
        return PolynomialInX(terms)


def character_values(rule: CubatureRule, lam) -> np.ndarray:
    """Values of ``chi_lam`` at the rule nodes."""
    return character_batch(rule.rs, lam, rule.nodes)


def node_values(rule: CubatureRule, f) -> np.ndarray:
    """Values of ``f`` at the rule nodes.

    ``f`` may be a :class:`PolynomialInX` (evaluated at the fundamental
    characters), an array of node values, or a callable taking a
    :class:`DualPoint`.
    """
    if isinstance(f, PolynomialInX):
        return np.asarray(f(rule.X), dtype=complex).reshape(len(rule))
    if callable(f):
        return np.array([f(p) for p in rule.nodes], dtype=complex)
    vals = np.asarray(f, dtype=complex)
    if vals.shape != (len(rule),):
        raise ValueError(f"expected {len(rule)} node values, got shape {vals.shape}")
    return vals


def cubature_integrate(rule: CubatureRule, f) -> complex:
    """``int_Omega f K^{1/2} dX`` by the cubature formula.

    Exact for polynomials of m-degree ``<= 2M + 1``; a :class:`ExactnessWarning`
    is issued for polynomials of higher degree.
    """
    if isinstance(f, PolynomialInX):
        deg = f.m_degree(rule.rs)
        if deg > rule.exact_degree:
            warnings.warn(
                f"m-degree {deg} exceeds 2M+1 = {rule.exact_degree}: exactness not guaranteed",
                ExactnessWarning, stacklevel=2)
    vals = node_values(rule, f) * rule.weights
    total = complex(math.fsum(vals.real), math.fsum(vals.imag))
    return rule.norm_const * total


# --- independent grid oracle -------------------------------------------------

def simplex_vertices(rs: RootSystem) -> np.ndarray:
    """Vertices ``0, omega_check_j / m_j`` of ``F`` in alpha-check coordinates, shape ``(n+1, n)``."""
    Ainv = np.array([[float(v) for v in row] for row in rs.cartan_inverse])
    verts = [np.zeros(rs.rank)] + [Ainv[:, j] / rs.marks[j] for j in range(rs.rank)]
    return np.array(verts)


def _kuhn_centroids(n: int, res: int, chunk: int = 200_000):
    """Centroids of the ``res^n`` Kuhn simplices tiling ``{res >= y_1 >= ... >= y_n >= 0}``."""
    grid = np.stack(np.meshgrid(*[np.arange(res)] * n, indexing="ij"), axis=-1).reshape(-1, n)
    for perm in itertools.permutations(range(n)):
        offset = np.zeros(n)
        for pos, axis in enumerate(perm):
            offset[axis] = (n - pos) / (n + 1)
        for start in range(0, len(grid), chunk):
            c = grid[start:start + chunk] + offset
            keep = np.all(c[:, :-1] > c[:, 1:], axis=1) if n > 1 else np.ones(len(c), bool)
            yield c[keep]


def grid_quadrature_oracle(rs: RootSystem, integrand: Callable[[np.ndarray], np.ndarray],
                           resolution: int) -> complex:
    """Midpoint-rule ``int_F integrand dx`` over a uniform subdivision of the simplex ``F``.

    ``integrand`` receives an ``(P, n)`` array of alpha-check coordinates.  The
    measure is Lebesgue measure in those coordinates, in which a fundamental
    cell of the coroot lattice has volume 1.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if rs.rank > 3:
        raise ValueError("grid oracle supports rank <= 3")
    n = rs.rank
    V = simplex_vertices(rs)[1:]  # (n, n)
    volume = abs(np.linalg.det(V)) / math.factorial(n)
    total_re, total_im, count = [], [], 0
    for y in _kuhn_centroids(n, resolution):
        y = y / resolution
        bary = y - np.concatenate([y[:, 1:], np.zeros((len(y), 1))], axis=1)
        vals = np.asarray(integrand(bary @ V), dtype=complex)
        total_re.append(math.fsum(vals.real))
        total_im.append(math.fsum(vals.imag))
        count += len(y)
    if count != resolution**n:
        raise RuntimeError(f"subdivision produced {count} cells, expected {resolution ** n}")
    return complex(math.fsum(total_re), math.fsum(total_im)) * volume / count


def direct_s_function(rs: RootSystem, seed, points: np.ndarray) -> np.ndarray:
    """``S_seed`` at float alpha-check coordinates by direct complex exponentials."""
    orbit = signed_weyl_orbit(rs, seed)
    phase = np.asarray(points, dtype=float) @ orbit.weights.T.astype(float)
    return np.exp(2j * np.pi * phase) @ orbit.signs.astype(float)


def oracle_integral(rs: RootSystem, f, resolution: int = 400) -> complex:
    """``(2 pi)^n int_F f(X(x)) |S_rho(x)|^2 dx`` via :func:`grid_quadrature_oracle`.

    ``f`` is a :class:`PolynomialInX` or any callable on an ``(P, n)`` array of
    fundamental-character values.
    """
    n = rs.rank
    eye = np.eye(n, dtype=int)

    def integrand(x):
        s_rho = direct_s_function(rs, rs.rho, x)
        X = np.stack([direct_s_function(rs, tuple(eye[j] + 1), x) / s_rho for j in range(n)],
                     axis=1)
        return np.asarray(f(X)) * (s_rho * s_rho.conj()).real

    return (2 * math.pi) ** n * grid_quadrature_oracle(rs, integrand, resolution)


# --- separation and point clouds ----------------------------------------------

@dataclass(frozen=True)
class SeparationReport:
    type: str
    M: int
    checked: int
    counterexamples: tuple[tuple[int, ...], ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def separation_check(rs: RootSystem, M: int) -> SeparationReport:
    """Scan dominant ``phi != 0`` with m-degree ``< 2(M+h)`` for membership in ``(M+h) Q``."""
    if rs.rank > 3 or M > 6:
        raise ValueError("separation_check is limited to rank <= 3 and M <= 6")
    N = M + rs.coxeter_number
    inv = rs.cartan_inverse
    bad = []
    phis = [p for p in dominant_weights_up_to(rs, 2 * N - 1) if any(p)]
    for phi in phis:
        # root-basis coordinates c = (A^{-1})^T phi
        c = [sum(inv[k][i] * phi[k] for k in range(rs.rank)) for i in range(rs.rank)]
        if all((ci / N).denominator == 1 for ci in c):
            bad.append(phi)
    return SeparationReport(rs.name, M, len(phis), tuple(bad))


def realify(rs: RootSystem, X: np.ndarray) -> np.ndarray:
    """Real coordinates on the sigma-fixed real space.

    A fixed index ``j`` contributes ``Re X_j``; a pair ``j < sigma(j)``
    contributes ``Re X_j`` at position ``j`` and ``Im X_j`` at ``sigma(j)``.
    """
    X = np.atleast_2d(X)
    out = np.empty(X.shape, dtype=float)
    for j in range(rs.rank):
        k = rs.sigma[j]
        if k == j:
            out[:, j] = X[:, j].real
        elif j < k:
            out[:, j] = X[:, j].real
            out[:, k] = X[:, j].imag
    return out


def omega_cloud(rs: RootSystem, N: int, *, realified: bool = True) -> np.ndarray:
    """Images ``(X_1(x), ..., X_n(x))`` of the interior points of level ``N``."""
    if rs.rank > 3:
        raise ValueError("omega_cloud supports rank <= 3")
    nodes = enumerate_efo(rs, N)
    X = np.empty((len(nodes), rs.rank), dtype=complex)
    for j in range(rs.rank):
        X[:, j] = character_batch(rs, tuple(int(i == j) for i in range(rs.rank)), nodes)
    return realify(rs, X) if realified else X


# --- serialization --------------------------------------------------------------

def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def rule_to_dict(rule: CubatureRule) -> dict:
    rs = rule.rs
    return {
        "type": rs.type.family,
        "rank": rs.rank,
        "M": rule.M,
        "level": rule.level,
        "norm_const": rule.norm_const,
        "nodes": [
            {
                "kac": list(p.kac),
                "coords": [_frac_str(q) for q in p.alpha_check_coords],
                "X": [[float(z.real), float(z.imag)] for z in rule.X[i]],
                "weight": float(rule.weights[i]),
            }
            for i, p in enumerate(rule.nodes)
        ],
    }


def rule_from_dict(data: dict) -> CubatureRule:
    """Rebuild a rule from :func:`rule_to_dict` output, checking node consistency."""
    rs = build_root_system(parse_type(f"{data['type']}{data['rank']}"))
    M = int(data["M"])
    level = M + rs.coxeter_number
    if int(data["level"]) != level:
        raise ValueError(f"level {data['level']} inconsistent with M={M}, h={rs.coxeter_number}")
    nodes, weights, X = [], [], []
    for item in data["nodes"]:
        p = dual_point(rs, item["kac"])
        if p.level != level or not p.is_interior:
            raise ValueError(f"node {item['kac']} is not an interior point of level {level}")
        coords = tuple(Fraction(s) for s in item["coords"])
        if coords != p.alpha_check_coords:
            raise ValueError(f"coords of node {item['kac']} do not match its Kac coordinates")
        nodes.append(p)
        weights.append(float(item["weight"]))
        X.append([complex(re, im) for re, im in item["X"]])
    w = np.array(weights)
    Xa = np.array(X, dtype=complex).reshape(len(nodes), rs.rank)
    w.flags.writeable = False
    Xa.flags.writeable = False
    return CubatureRule(rs, M, tuple(nodes), w, Xa, float(data["norm_const"]))
