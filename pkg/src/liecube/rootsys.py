"""Classification data for the compact simple Lie types.

Simple roots are numbered left to right along the main line of the
Coxeter-Dynkin diagram, the node above the main line taking the highest
index.  The Cartan matrix follows the convention

    A[i, j] = <alpha_i, alpha_check_j> = 2 (alpha_i | alpha_j) / (alpha_j | alpha_j)

so that row ``i`` of ``A`` holds the simple root ``alpha_i`` in the basis of
fundamental weights.  Roots are integer vectors in the simple-root basis,
weights are integer vectors in the fundamental-weight basis.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "DEFAULT_ORBIT_GUARD",
    "LieFamily",
    "OrbitGuardError",
    "RootSystem",
    "SignedWeightOrbit",
    "build_root_system",
    "conjugation_permutation",
    "orbit_guard",
    "parse_type",
    "positive_roots",
    "reflect",
    "signed_weyl_orbit",
    "weyl_orbit",
]

DEFAULT_ORBIT_GUARD = 10**7
GUARD_ENV = "LIECUBE_ORBIT_GUARD"
LARGE_ORBIT_FLAG = "--allow-large-orbits"

_RANK_BOUNDS = {"A": 1, "B": 2, "C": 2, "D": 4}
_EXCEPTIONAL_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


class OrbitGuardError(RuntimeError):
    """Raised when a Weyl orbit would exceed the configured size limit."""


@dataclass(frozen=True, order=True)
class LieFamily:
    family: str
    rank: int

    def __post_init__(self):
        fam, n = self.family, self.rank
        if fam in _RANK_BOUNDS:
            if n < _RANK_BOUNDS[fam]:
                raise ValueError(
                    f"type {fam}{n} is invalid: {fam}_n requires n >= {_RANK_BOUNDS[fam]}"
                )
        elif fam in _EXCEPTIONAL_RANKS:
            if n not in _EXCEPTIONAL_RANKS[fam]:
                allowed = ", ".join(f"{fam}{r}" for r in _EXCEPTIONAL_RANKS[fam])
                raise ValueError(f"type {fam}{n} is invalid: allowed {allowed}")
        else:
            raise ValueError(f"unknown Lie family {fam!r}; expected one of A-G")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def parse_type(text: str) -> LieFamily:
    """Parse strings such as ``"G2"``, ``"a3"`` or ``"E_6"``."""
    m = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", text)
    if m is None:
        raise ValueError(f"cannot parse Lie type {text!r}")
    return LieFamily(m.group(1).upper(), int(m.group(2)))


def _dynkin(family: str, n: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Squared root lengths and diagram edges (0-based node indices)."""
    chain = [(i, i + 1) for i in range(n - 1)]
    if family == "A":
        return [2] * n, chain
    if family == "B":
        return [2] * (n - 1) + [1], chain
    if family == "C":
        return [1] * (n - 1) + [2], chain
    if family == "D":
        return [2] * n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if family == "E":
        # main line 1..n-1, node n hangs off node 3 (E6), 4 (E7) or 5 (E8)
        branch = {6: 2, 7: 3, 8: 4}[n]
        return [2] * n, [(i, i + 1) for i in range(n - 2)] + [(branch, n - 1)]
    if family == "F":
        return [2, 2, 1, 1], chain
    if family == "G":
        return [3, 1], chain
    raise ValueError(family)


def _cartan(family: str, n: int) -> np.ndarray:
    norms, edges = _dynkin(family, n)
    A = 2 * np.eye(n, dtype=np.int64)
    for i, j in edges:
        # adjacent simple roots: (a_i|a_j) = -max(|a_i|^2, |a_j|^2) / 2
        ip = Fraction(-max(norms[i], norms[j]), 2)
        A[i, j] = int(2 * ip / norms[j])
        A[j, i] = int(2 * ip / norms[i])
    return A


def _exact_inverse(A: np.ndarray) -> tuple[tuple[Fraction, ...], ...]:
    n = A.shape[0]
    M = [[Fraction(int(A[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def _exact_det(A: np.ndarray) -> Fraction:
    n = A.shape[0]
    M = [[Fraction(int(v)) for v in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return det


def _positive_roots_of(A: np.ndarray) -> list[tuple[int, ...]]:
    """Positive roots by reflection closure of the simple roots."""
    n = A.shape[0]
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    queue = list(simple)
    while queue:
        beta = np.array(queue.pop())
        pairing = beta @ A  # <beta, alpha_check_i>
        for i in range(n):
            if pairing[i] < 0:
                gamma = beta.copy()
                gamma[i] -= pairing[i]
                key = tuple(int(v) for v in gamma)
                if key not in found:
                    found.add(key)
                    queue.append(key)
    return sorted(found, key=lambda r: (sum(r), tuple(-v for v in r)))


def _weyl_order(family: str, n: int) -> int:
    if family == "A":
        return math.factorial(n + 1)
    if family in "BC":
        return 2**n * math.factorial(n)
    if family == "D":
        return 2 ** (n - 1) * math.factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[(family, n)]


def _sigma_table(family: str, n: int) -> tuple[int, ...]:
    """0-based image of each index under -w_opp (identity unless listed)."""
    if family == "A" and n > 1:
        return tuple(range(n - 1, -1, -1))
    if family == "D" and n % 2 == 1:
        return tuple(range(n - 2)) + (n - 1, n - 2)
    if family == "E" and n == 6:
        return (4, 3, 2, 1, 0, 5)
    return tuple(range(n))


@dataclass(frozen=True)
class RootSystem:
    """Static data of one simple Lie type.  Build with :func:`build_root_system`."""

    type: LieFamily
    cartan: tuple[tuple[int, ...], ...]
    cartan_inverse: tuple[tuple[Fraction, ...], ...]
    marks: tuple[int, ...]
    comarks: tuple[int, ...]
    coxeter_number: int
    center_order: int
    positive_roots: tuple[tuple[int, ...], ...]
    weyl_order: int
    sigma: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.type.rank

    @property
    def name(self) -> str:
        return str(self.type)

    @property
    def rho(self) -> tuple[int, ...]:
        return (1,) * self.rank

    @property
    def cartan_array(self) -> np.ndarray:
        return _array_cache(self)[0]

    @property
    def scaled_inverse(self) -> np.ndarray:
        """Integer matrix ``c_G * A^{-1}``; pairings have denominator ``c_G * N``."""
        return _array_cache(self)[1]

    def pairing_numerator(self, weight, coweight) -> int:
        """Integer ``c_G * <weight, coweight>`` for weight in the omega basis and
        coweight in the omega-check basis."""
        return int(np.asarray(weight, dtype=np.int64) @ self.scaled_inverse
                   @ np.asarray(coweight, dtype=np.int64))

    def m_degree(self, weight) -> int:
        return int(sum(int(w) * c for w, c in zip(weight, self.comarks)))

    def simple_root_in_weights(self, j: int) -> np.ndarray:
        return self.cartan_array[j]

    def __repr__(self) -> str:
        return f"RootSystem({self.name})"


@lru_cache(maxsize=None)
def _array_cache(rs: RootSystem) -> tuple[np.ndarray, np.ndarray]:
    A = np.array(rs.cartan, dtype=np.int64)
    B = np.array([[int(v * rs.center_order) for v in row] for row in rs.cartan_inverse],
                 dtype=np.int64)
    A.flags.writeable = False
    B.flags.writeable = False
    return A, B


def build_root_system(family: LieFamily | str, rank: int | None = None) -> RootSystem:
    """Construct the :class:`RootSystem` of a simple Lie type.

    Accepts ``build_root_system(LieFamily("G", 2))``, ``build_root_system("G", 2)``
    or ``build_root_system("G2")``; equal types give the same cached object.
    """
    if isinstance(family, str):
        lt = parse_type(family) if rank is None else LieFamily(family.strip().upper(), rank)
    else:
        lt = family
    return _build(lt)


@lru_cache(maxsize=None)
def _build(lt: LieFamily) -> RootSystem:
    fam, n = lt.family, lt.rank
    A = _cartan(fam, n)
    roots = _positive_roots_of(A)
    marks = roots[-1]
    # comarks: highest root of the dual system, whose Cartan matrix is A^T
    comarks = _positive_roots_of(A.T)[-1]
    det = _exact_det(A)
    return RootSystem(
        type=lt,
        cartan=tuple(tuple(int(v) for v in row) for row in A),
        cartan_inverse=_exact_inverse(A),
        marks=tuple(marks),
        comarks=tuple(comarks),
        coxeter_number=1 + sum(marks),
        center_order=int(det),
        positive_roots=tuple(roots),
        weyl_order=_weyl_order(fam, n),
        sigma=_sigma_table(fam, n),
    )


def positive_roots(rs: RootSystem) -> list[tuple[int, ...]]:
    """Positive roots in the simple-root basis, ordered by height."""
    return list(rs.positive_roots)


def conjugation_permutation(rs: RootSystem) -> tuple[int, ...]:
    """The involution sigma as a 1-based tuple: ``sigma[j-1]`` is the image of ``j``."""
    return tuple(s + 1 for s in rs.sigma)


def reflect(rs: RootSystem, weight, j: int) -> tuple[int, ...]:
    """Simple reflection ``r_j`` (0-based ``j``) of an omega-basis weight."""
    w = np.asarray(weight, dtype=np.int64)
    return tuple(int(v) for v in w - w[j] * rs.cartan_array[j])


def orbit_guard() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw is None:
        return DEFAULT_ORBIT_GUARD
    try:
        return int(float(raw))
    except ValueError:
        raise ValueError(f"{GUARD_ENV} must be an integer, got {raw!r}") from None


def _check_guard(rs: RootSystem, allow_large: bool) -> None:
    if rs.type.family == "E" and rs.rank >= 7 and not allow_large:
        raise OrbitGuardError(
            f"orbit too large: |W({rs.name})| = {rs.weyl_order}; "
            f"pass {LARGE_ORBIT_FLAG} (allow_large=True) to enable"
        )
    limit = orbit_guard()
    if rs.weyl_order > limit:
        raise OrbitGuardError(
            f"orbit too large: |W({rs.name})| = {rs.weyl_order} exceeds the guard {limit}; "
            f"raise {GUARD_ENV} together with {LARGE_ORBIT_FLAG}"
        )


@dataclass(frozen=True, eq=False)
class SignedWeightOrbit:
    """W-orbit of a strictly dominant weight with the sign of the generating element.

    ``weights`` is an ``(|W|, n)`` integer array in breadth-first order, the seed
    first; ``signs[k]`` is ``(-1)^l(w)`` for the unique ``w`` with
    ``w(seed) = weights[k]``.
    """

    seed: tuple[int, ...]
    weights: np.ndarray
    signs: np.ndarray

    def __len__(self) -> int:
        return len(self.signs)

    @property
    def entries(self) -> list[tuple[tuple[int, ...], int]]:
        return [(tuple(int(v) for v in w), int(s)) for w, s in zip(self.weights, self.signs)]


def _bfs_orbit(A: np.ndarray, seed: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    n = len(seed)
    frontier = np.array([seed], dtype=np.int64)
    levels, signs = [frontier], [np.ones(1, dtype=np.int8)]
    sign = 1
    while len(frontier):
        sign = -sign
        children = []
        for j in range(n):
            parents = frontier[frontier[:, j] > 0]
            if not len(parents):
                continue
            kids = parents - parents[:, j:j + 1] * A[j]
            neg = kids < 0
            # keep kid only if j is its first negative coordinate (unique parent)
            first_neg = np.argmax(neg, axis=1)
            children.append(kids[first_neg == j])
        frontier = np.concatenate(children) if children else np.empty((0, n), np.int64)
        if len(frontier):
            levels.append(frontier)
            signs.append(np.full(len(frontier), sign, dtype=np.int8))
    weights = np.concatenate(levels)
    sg = np.concatenate(signs)
    weights.flags.writeable = False
    sg.flags.writeable = False
    return weights, sg


@lru_cache(maxsize=4096)
def _orbit_cached(rs: RootSystem, seed: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    return _bfs_orbit(rs.cartan_array, seed)


def weyl_orbit(rs: RootSystem, seed, *, allow_large: bool = False) -> np.ndarray:
    """W-orbit of any dominant weight (no signs; the stabilizer may be nontrivial)."""
    seed = tuple(int(v) for v in seed)
    if len(seed) != rs.rank or min(seed) < 0:
        raise ValueError(f"seed {seed} is not a dominant weight of {rs.name}")
    _check_guard(rs, allow_large)
    return _orbit_cached(rs, seed)[0]


def signed_weyl_orbit(rs: RootSystem, seed, *, allow_large: bool = False) -> SignedWeightOrbit:
    """Signed orbit ``{(w(seed), (-1)^l(w)) : w in W}`` of a strictly dominant seed."""
    seed = tuple(int(v) for v in seed)
    if len(seed) != rs.rank or min(seed) <= 0:
        raise ValueError(f"seed {seed} is not strictly dominant for {rs.name}")
    _check_guard(rs, allow_large)
    weights, signs = _orbit_cached(rs, seed)
    return SignedWeightOrbit(seed, weights, signs)
