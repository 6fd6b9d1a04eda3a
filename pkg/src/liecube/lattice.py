"""Elements of finite adjoint order as exact points of the fundamental simplex.

A point of adjoint order ``N`` in the fundamental domain ``F`` is

    x = (1/N) * sum_j s_j * omega_check_j,   s_0 + sum_j m_j s_j = N,

with non-negative integer Kac coordinates ``[s_0, s_1, ..., s_n]``.  It lies
in the interior iff every Kac coordinate is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .rootsys import RootSystem

__all__ = [
    "DualPoint",
    "count_f_m",
    "dual_point",
    "enumerate_efo",
    "pairing",
    "strict_ad_order",
]


@dataclass(frozen=True)
class DualPoint:
    """An element of finite order: level ``N`` and Kac coordinates ``(s_0, ..., s_n)``."""

    level: int
    kac: tuple[int, ...]
    alpha_check_coords: tuple[Fraction, ...] = field(compare=False)
    rs: RootSystem = field(repr=False, compare=False)

    @property
    def coweight(self) -> tuple[int, ...]:
        """``(s_1, ..., s_n)``: ``N * x`` in the omega-check basis."""
        return self.kac[1:]

    @property
    def omega_check_coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(s, self.level) for s in self.kac[1:])

    @property
    def is_interior(self) -> bool:
        return min(self.kac) > 0

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.kac)) + f"]/{self.level}"


def dual_point(rs: RootSystem, kac) -> DualPoint:
    """Build a :class:`DualPoint` from Kac coordinates; the level is ``sum m_j s_j``."""
    kac = tuple(int(s) for s in kac)
    if len(kac) != rs.rank + 1:
        raise ValueError(f"{rs.name} needs {rs.rank + 1} Kac coordinates, got {len(kac)}")
    if min(kac) < 0:
        raise ValueError(f"Kac coordinates must be non-negative: {kac}")
    level = kac[0] + sum(m * s for m, s in zip(rs.marks, kac[1:]))
    if level <= 0:
        raise ValueError("level must be positive")
    return _make(rs, level, kac)


def _make(rs: RootSystem, level: int, kac: tuple[int, ...]) -> DualPoint:
    # alpha-check coordinates of omega_check_j are the columns of A^{-1}
    num = rs.scaled_inverse @ np.asarray(kac[1:], dtype=np.int64)
    den = rs.center_order * level
    coords = tuple(Fraction(int(v), den) for v in num)
    return DualPoint(level, kac, coords, rs)


def _solutions(weights: tuple[int, ...], budget: int, lo: int):
    """Tuples ``t >= lo`` (componentwise) with ``sum w_j t_j <= budget``, lexicographic."""
    if not weights:
        yield ()
        return
    w, rest = weights[0], weights[1:]
    floor_rest = lo * sum(rest)
    t = lo
    while w * t + floor_rest <= budget:
        for tail in _solutions(rest, budget - w * t, lo):
            yield (t,) + tail
        t += 1


def enumerate_efo(rs: RootSystem, N: int, interior_only: bool = True) -> list[DualPoint]:
    """All points of ``F`` of adjoint order dividing ``N``.

    With ``interior_only`` (the default) only regular points, all ``s_j > 0``,
    are returned.  Points are ordered lexicographically on ``(s_1, ..., s_n)``.
    """
    if N < 1:
        raise ValueError(f"level must be >= 1, got {N}")
    lo = 1 if interior_only else 0
    budget = N - lo  # leaves room for s_0 >= lo
    out = []
    for s in _solutions(rs.marks, budget, lo):
        s0 = N - sum(m * v for m, v in zip(rs.marks, s))
        out.append(_make(rs, N, (s0,) + s))
    return out


def strict_ad_order(p: DualPoint) -> int:
    """Least ``N'`` with ``Ad(exp(2 pi i x))^N' = 1``."""
    return p.level // reduce(math.gcd, p.kac, 0)


def count_f_m(rs: RootSystem, M: int) -> int:
    """Number of non-negative solutions of ``s_0 + sum m_j s_j = M``."""
    if M < 0:
        return 0
    # coin-change count over the marks m_0 = 1, m_1, ..., m_n
    ways = [1] * (M + 1)
    for m in rs.marks:
        for t in range(m, M + 1):
            ways[t] += ways[t - m]
    return ways[M]


def pairing(rs: RootSystem, weight, p: DualPoint) -> Fraction:
    """Exact ``<weight, x>`` for an omega-basis weight and a dual point."""
    return Fraction(rs.pairing_numerator(weight, p.coweight), rs.center_order * p.level)
