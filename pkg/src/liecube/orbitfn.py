"""S-functions, Weyl characters and the weight function at exact rational points.

Every phase ``<w(mu), x>`` at a point of level ``N`` is a rational with
denominator dividing ``c_G * N``; its exponential is read from a table of
roots of unity instead of being computed from a float argument.  Orbit sums
are accumulated with :func:`math.fsum` in orbit order, so values are
correctly rounded sums of the tabulated terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import DualPoint
from .rootsys import RootSystem, signed_weyl_orbit

__all__ = [
    "PhaseTable",
    "character",
    "character_batch",
    "conjugate_value",
    "fundamental_characters",
    "k_function",
    "phase_table",
    "s_function",
    "s_function_at",
    "s_function_batch",
    "s_rho_product",
    "steinberg_jacobian",
]


@dataclass(frozen=True, eq=False)
class PhaseTable:
    denominator: int
    values: np.ndarray

    def __getitem__(self, k):
        return self.values[np.mod(k, self.denominator)]


@lru_cache(maxsize=256)
def phase_table(denominator: int) -> PhaseTable:
    """``exp(2 pi i k / D)`` for ``k = 0 .. D-1``."""
    D = int(denominator)
    if D < 1:
        raise ValueError("denominator must be positive")
    k = np.arange(D)
    # reduce to the first octant-free form: angle in [-pi, pi) keeps sin/cos accurate
    angle = 2.0 * np.pi * np.where(2 * k >= D, k - D, k) / D
    vals = np.cos(angle) + 1j * np.sin(angle)
    vals[0] = 1.0
    vals.flags.writeable = False
    return PhaseTable(D, vals)


def _fsum_columns(terms: np.ndarray) -> np.ndarray:
    """Correctly rounded column sums of a 2-D complex array."""
    out = np.empty(terms.shape[1], dtype=complex)
    for c in range(terms.shape[1]):
        col = terms[:, c]
        out[c] = complex(math.fsum(col.real), math.fsum(col.imag))
    return out


def _phase_terms(rs: RootSystem, seed, coweights: np.ndarray, level: int,
                 allow_large: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orbit weights, signs and the ``(|W|, P)`` matrix of phase exponentials."""
    orbit = signed_weyl_orbit(rs, seed, allow_large=allow_large)
    D = rs.center_order * level
    numer = orbit.weights @ (rs.scaled_inverse @ coweights.T)
    phases = phase_table(D)[numer]
    return orbit.weights, orbit.signs, phases


def s_function_batch(rs: RootSystem, seed, coweights, level: int, *,
                     allow_large: bool = False) -> np.ndarray:
    """``S_seed`` at the points ``coweights[p] / level`` (omega-check coordinates).

    ``seed`` is a strictly dominant weight, e.g. ``lambda + rho``.  The points
    may lie anywhere in ``(1/level) P_check``, not only in ``F``.
    """
    cw = np.atleast_2d(np.asarray(coweights, dtype=np.int64))
    _, signs, phases = _phase_terms(rs, seed, cw, level, allow_large)
    return _fsum_columns(signs[:, None] * phases)


def s_function_at(rs: RootSystem, seed, coweight, level: int, *,
                  allow_large: bool = False) -> complex:
    return complex(s_function_batch(rs, seed, [coweight], level, allow_large=allow_large)[0])


def _shift_rho(lam) -> tuple[int, ...]:
    lam = tuple(int(v) for v in lam)
    if min(lam, default=0) < 0:
        raise ValueError(f"{lam} is not a dominant weight")
    return tuple(v + 1 for v in lam)


def s_function(rs: RootSystem, lam, x: DualPoint, *, allow_large: bool = False) -> complex:
    """``S_{lam+rho}(x) = sum_w (-1)^l(w) exp(2 pi i <w(lam+rho), x>)`` for dominant ``lam``."""
    return s_function_at(rs, _shift_rho(lam), x.coweight, x.level, allow_large=allow_large)


def s_rho_product(rs: RootSystem, x: DualPoint) -> complex:
    """``S_rho(x)`` from the product ``prod_{alpha > 0} 2i sin(pi <alpha, x>)``."""
    s = np.asarray(x.coweight, dtype=np.int64)
    out = 1.0 + 0j
    for root in rs.positive_roots:
        # <alpha_k, x> = s_k / N, so <alpha, x> = (root . s) / N
        num = int(np.dot(root, s)) % (2 * x.level)
        out *= 2j * math.sin(math.pi * num / x.level)
    return out


def _require_interior(x: DualPoint, what: str) -> None:
    if not x.is_interior:
        raise ValueError(f"{what} requires interior point; got Kac coordinates {x.kac}")


def character_batch(rs: RootSystem, lam, points, *, allow_large: bool = False) -> np.ndarray:
    """``chi_lam`` at interior points sharing one level, as S-function quotients."""
    points = list(points)
    if not points:
        return np.empty(0, dtype=complex)
    level = points[0].level
    if any(p.level != level for p in points):
        return np.array([character(rs, lam, p, allow_large=allow_large) for p in points])
    for p in points:
        _require_interior(p, "character evaluation")
    cw = np.array([p.coweight for p in points], dtype=np.int64)
    num = s_function_batch(rs, _shift_rho(lam), cw, level, allow_large=allow_large)
    den = s_function_batch(rs, rs.rho, cw, level, allow_large=allow_large)
    return num / den


def character(rs: RootSystem, lam, x: DualPoint, *, allow_large: bool = False) -> complex:
    """Weyl character ``chi_lam(x) = S_{lam+rho}(x) / S_rho(x)`` at an interior point."""
    _require_interior(x, "character evaluation")
    num = s_function(rs, lam, x, allow_large=allow_large)
    den = s_function(rs, (0,) * rs.rank, x, allow_large=allow_large)
    return num / den


def fundamental_characters(rs: RootSystem, x: DualPoint, *,
                           allow_large: bool = False) -> np.ndarray:
    """The variables ``(X_1, ..., X_n) = (chi_omega_1(x), ..., chi_omega_n(x))``."""
    eye = np.eye(rs.rank, dtype=np.int64)
    return np.array([character(rs, eye[j], x, allow_large=allow_large) for j in range(rs.rank)])


def k_function(rs: RootSystem, x: DualPoint, *, allow_large: bool = False) -> float:
    """``K = |S_rho(x)|^2``; zero on the boundary of ``F``."""
    v = s_function(rs, (0,) * rs.rank, x, allow_large=allow_large)
    return float(v.real * v.real + v.imag * v.imag)


def _derived_sums(rs: RootSystem, seed, x: DualPoint, allow_large: bool):
    """``S_seed(x)`` and ``D_j S_seed(x)`` for every simple coroot ``j``.

    ``D_j`` multiplies each exponential ``exp(2 pi i <mu, x>)`` by
    ``<mu, alpha_check_j>``, the j-th omega coordinate of ``mu``.
    """
    cw = np.asarray([x.coweight], dtype=np.int64)
    weights, signs, phases = _phase_terms(rs, seed, cw, x.level, allow_large)
    terms = signs[:, None] * phases  # (|W|, 1)
    value = _fsum_columns(terms)[0]
    derivs = _fsum_columns(terms * weights)  # column j scaled by mu_j
    return value, derivs


def steinberg_jacobian(rs: RootSystem, x: DualPoint, *, allow_large: bool = False) -> complex:
    """``det(J)`` with ``J[j, k] = D_j chi_omega_k(x)``, via the quotient rule."""
    _require_interior(x, "Jacobian evaluation")
    n = rs.rank
    s_rho, d_rho = _derived_sums(rs, rs.rho, x, allow_large)
    J = np.empty((n, n), dtype=complex)
    for k in range(n):
        seed = tuple(2 if i == k else 1 for i in range(n))
        s_k, d_k = _derived_sums(rs, seed, x, allow_large)
        J[:, k] = (d_k * s_rho - s_k * d_rho) / (s_rho * s_rho)
    return complex(np.linalg.det(J))


def conjugate_value(rs: RootSystem, j: int, x: DualPoint, *,
                    allow_large: bool = False) -> complex:
    """Value of the conjugate variable ``conj(X_j)``, computed as ``chi_omega_sigma(j)(x)``.

    ``j`` is 1-based, matching the variable names ``X_1 .. X_n``.
    """
    if not 1 <= j <= rs.rank:
        raise ValueError(f"variable index must be in 1..{rs.rank}")
    target = rs.sigma[j - 1]
    lam = tuple(int(i == target) for i in range(rs.rank))
    return character(rs, lam, x, allow_large=allow_large)
