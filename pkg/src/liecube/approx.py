"""Character expansions and best L2_K approximation on Omega.

The inner product used here is normalized so the characters are orthonormal,

    <f, g>_K = (2 pi)^-n int_Omega f conj(g) K^{1/2} dX = int_F f conj(g) |S_rho|^2 dx,

and is evaluated with a cubature rule as ``sum f conj(g) K / (c_G (M+h)^n)``.
Coefficients are exact when ``f conj(chi_lam)`` has m-degree ``<= 2M + 1``;
for other ``f`` the same formula gives an approximation (no refinement is
attempted).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .cubature import CubatureRule, dominant_weights_up_to, node_values
from .lattice import DualPoint
from .orbitfn import character_batch

__all__ = [
    "Approximation",
    "CharacterExpansion",
    "OptimalityReport",
    "expansion_coefficients",
    "inner_product",
    "optimality_residual_check",
    "truncated_approximation",
]


@dataclass(frozen=True)
class CharacterExpansion:
    """Sparse map dominant weight -> coefficient of ``chi_lam``."""

    coeffs: Mapping[tuple[int, ...], complex] = field(default_factory=dict)

    def __getitem__(self, lam) -> complex:
        return self.coeffs.get(tuple(lam), 0j)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def items(self):
        return self.coeffs.items()

    def to_json(self) -> dict[str, list[float]]:
        return {",".join(map(str, lam)): [c.real, c.imag] for lam, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, Sequence[float]]) -> "CharacterExpansion":
        return cls({tuple(int(v) for v in k.split(",")): complex(*v) for k, v in data.items()})


def inner_product(rule: CubatureRule, f, g) -> complex:
    """Cubature value of ``<f, g>_K``; ``f``, ``g`` as accepted by :func:`node_values`."""
    vals = node_values(rule, f) * node_values(rule, g).conj() * rule.weights
    denom = rule.rs.center_order * rule.level**rule.rs.rank
    return complex(math.fsum(vals.real), math.fsum(vals.imag)) / denom


def expansion_coefficients(rule: CubatureRule, f, M: int | None = None) -> CharacterExpansion:
    """``a_lam = <f, chi_lam>_K`` for every dominant ``lam`` of m-degree ``<= M``.

    ``M`` defaults to the rule's own degree bound.
    """
    M = rule.M if M is None else M
    if M > rule.M:
        raise ValueError(f"M={M} exceeds the rule's degree bound {rule.M}")
    fv = node_values(rule, f)
    coeffs = {}
    for lam in dominant_weights_up_to(rule.rs, M):
        coeffs[lam] = inner_product(rule, fv, character_batch(rule.rs, lam, rule.nodes))
    return CharacterExpansion(coeffs)


@dataclass(frozen=True, eq=False)
class Approximation:
    """The polynomial ``sum_lam a_lam chi_lam`` as a function of interior points."""

    rs: object
    expansion: CharacterExpansion

    def __call__(self, x: DualPoint) -> complex:
        return complex(self.at([x])[0])

    def at(self, points: Sequence[DualPoint]) -> np.ndarray:
        points = list(points)
        out = np.zeros(len(points), dtype=complex)
        for lam, c in self.expansion.items():
            if c != 0:
                out += c * character_batch(self.rs, lam, points)
        return out


def truncated_approximation(rule: CubatureRule, f, M: int | None = None) -> Approximation:
    """Best L2_K approximation of ``f`` by polynomials of m-degree ``<= M``."""
    return Approximation(rule.rs, expansion_coefficients(rule, f, M))


@dataclass(frozen=True)
class OptimalityReport:
    M: int
    residual_max: float
    gaps: tuple[float, ...]
    identity_errors: tuple[float, ...]

    @property
    def identity_max(self) -> float:
        return max(self.identity_errors, default=0.0)

    def ok(self, tol: float = 1e-8) -> bool:
        return (self.residual_max <= tol and self.identity_max <= tol
                and all(g >= -tol for g in self.gaps))


def optimality_residual_check(rule: CubatureRule, f, M: int,
                              trials: Sequence[Mapping]) -> OptimalityReport:
    """Check optimality of the degree-``M`` truncation of ``f``.

    ``rule`` must be fine enough that every inner product involved is exact.
    Each trial is a coefficient map ``lam -> b_lam`` over m-degree ``<= M``.
    Reports the largest ``|<f - q, chi_lam>_K|``, the gaps
    ``||f-p||^2 - ||f-q||^2`` and their deviation from ``sum |b_lam - a_lam|^2``.
    """
    rs = rule.rs
    fv = node_values(rule, f)
    lams = dominant_weights_up_to(rs, M)
    chis = {lam: character_batch(rs, lam, rule.nodes) for lam in lams}
    a = {lam: inner_product(rule, fv, chis[lam]) for lam in lams}
    q = sum((a[lam] * chis[lam] for lam in lams), np.zeros(len(rule), dtype=complex))
    resid = fv - q
    residual_max = max((abs(inner_product(rule, resid, chis[lam])) for lam in lams), default=0.0)
    base = inner_product(rule, resid, resid).real
    gaps, errs = [], []
    for b in trials:
        b = {tuple(k): complex(v) for k, v in dict(b).items()}
        extra = set(b) - set(lams)
        if extra:
            raise ValueError(f"trial uses weights above m-degree {M}: {sorted(extra)}")
        p = sum((b.get(lam, 0) * chis[lam] for lam in lams), np.zeros(len(rule), dtype=complex))
        diff = fv - p
        gap = inner_product(rule, diff, diff).real - base
        predicted = math.fsum(abs(b.get(lam, 0) - a[lam]) ** 2 for lam in lams)
        gaps.append(gap)
        errs.append(abs(gap - predicted))
    return OptimalityReport(M, residual_max, tuple(gaps), tuple(errs))
