"""Torus-invariant divisor classes and their intersection theory.

A class ``L = sum b_i D_i`` is stored by its coefficient vector.  Its degree
vector ``t_i = L.D_i = b_{i-1} + b_{i+1} + d_i b_i`` determines it up to
linear equivalence, and ampleness/nefness are coordinatewise positivity of
``t``.  Principal divisors are ``sum <u, v_i> D_i`` for ``u`` in the dual
lattice, so pinning ``b_0 = b_1 = 0`` picks a unique representative.
"""

from __future__ import annotations

import json
from itertools import product
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

from .errors import FanMismatch, InconsistentDegrees
from .fan import Fan


def degrees_of(fan: Fan, b: Sequence[int]) -> tuple[int, ...]:
    d = fan.profile
    n = len(d)
    return tuple(b[i - 1] + b[(i + 1) % n] + d[i] * b[i] for i in range(n))


@dataclass(frozen=True)
class DivisorClass:
    fan: Fan
    coefficients: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.coefficients)
        object.__setattr__(self, "coefficients", b)
        if len(b) != self.fan.e:
            raise ValueError(f"{len(b)} coefficients for a fan with {self.fan.e} rays")

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return degrees_of(self.fan, self.coefficients)

    def _same_fan(self, other: "DivisorClass") -> None:
        if self.fan != other.fan:
            raise FanMismatch("divisor classes live on different fans")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._same_fan(other)
        return DivisorClass(self.fan, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._same_fan(other)
        return DivisorClass(self.fan, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.fan, tuple(-a for a in self.coefficients))

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.fan, tuple(k * a for a in self.coefficients))

    __rmul__ = __mul__

    def dot(self, other: "DivisorClass") -> int:
        return intersect(self, other)

    @property
    def square(self) -> int:
        return sum(b * t for b, t in zip(self.coefficients, self.degrees))

    def __repr__(self) -> str:
        return f"DivisorClass(b={list(self.coefficients)}, t={list(self.degrees)})"


def divisor(fan: Fan, coefficients: Sequence[int]) -> DivisorClass:
    return DivisorClass(fan, tuple(coefficients))


def invariant_divisor(fan: Fan, i: int) -> DivisorClass:
    b = [0] * fan.e
    b[i % fan.e] = 1
    return DivisorClass(fan, tuple(b))


def zero_class(fan: Fan) -> DivisorClass:
    return DivisorClass(fan, (0,) * fan.e)


def canonical_class(fan: Fan) -> DivisorClass:
    return DivisorClass(fan, (-1,) * fan.e)


def degree_vector(L: DivisorClass) -> tuple[int, ...]:
    return L.degrees


def intersect(L: DivisorClass, M: DivisorClass) -> int:
    if L.fan != M.fan:
        raise FanMismatch("divisor classes live on different fans")
    return sum(b * t for b, t in zip(L.coefficients, M.degrees))


def is_nef(L: DivisorClass) -> bool:
    return min(L.degrees) >= 0


def is_ample(L: DivisorClass) -> bool:
    return min(L.degrees) >= 1


def anticanonical_degree(L: DivisorClass) -> int:
    """``-K.L``, which is the sum of the degrees."""
    return sum(L.degrees)


def sectional_genus(L: DivisorClass) -> int:
    twice = L.square - anticanonical_degree(L) + 2
    if twice % 2:
        raise ArithmeticError(f"L^2 + K.L is odd for {L!r}")
    return twice // 2


def principal(fan: Fan, u: Sequence[int]) -> DivisorClass:
    """Divisor of the character ``u``: coefficients ``<u, v_i>``."""
    return DivisorClass(fan, tuple(u[0] * x + u[1] * y for x, y in fan.rays))


def closure_defect(fan: Fan, t: Sequence[int]) -> tuple[int, int]:
    """``sum t_i v_i``; zero exactly when ``t`` is a degree vector."""
    return (
        sum(ti * x for ti, (x, _) in zip(t, fan.rays)),
        sum(ti * y for ti, (_, y) in zip(t, fan.rays)),
    )


def normalize(L: DivisorClass) -> DivisorClass:
    (x0, y0), (x1, y1) = L.fan.rays[0], L.fan.rays[1]
    b0, b1 = L.coefficients[0], L.coefficients[1]
    # x0*y1 - y0*x1 == 1, so this solves <u, v_0> = b0, <u, v_1> = b1 exactly
    u = (y1 * b0 - y0 * b1, -x1 * b0 + x0 * b1)
    return L - principal(L.fan, u)


def linear_equivalent(L: DivisorClass, M: DivisorClass) -> bool:
    if L.fan != M.fan:
        raise FanMismatch("divisor classes live on different fans")
    return normalize(L).coefficients == normalize(M).coefficients


def from_degrees(fan: Fan, t: Sequence[int]) -> DivisorClass:
    """The normalized class with degree vector ``t``."""
    t = tuple(int(x) for x in t)
    n = fan.e
    if len(t) != n:
        raise ValueError(f"{len(t)} degrees for a fan with {n} rays")
    if closure_defect(fan, t) != (0, 0):
        raise InconsistentDegrees(f"sum t_i v_i = {closure_defect(fan, t)} != 0")
    d = fan.profile
    b = [0] * n
    for i in range(1, n - 1):
        b[i + 1] = t[i] - b[i - 1] - d[i] * b[i]
    L = DivisorClass(fan, tuple(b))
    if L.degrees != t:
        raise InconsistentDegrees(f"degrees {t} not realized (got {L.degrees})")
    return L


def load_divisor(fan: Fan, path) -> tuple[DivisorClass, str]:
    """Read ``{"coefficients": [...]}`` or ``{"degrees": [...]}``.

    Returns the class and the name of the form that was supplied.
    """
    data = json.loads(Path(path).read_text())
    return divisor_from_json(fan, data)


def divisor_from_json(fan: Fan, data: dict) -> tuple[DivisorClass, str]:
    if "coefficients" in data and "degrees" in data:
        raise ValueError("give either 'coefficients' or 'degrees', not both")
    if "coefficients" in data:
        return divisor(fan, data["coefficients"]), "coefficients"
    if "degrees" in data:
        return from_degrees(fan, data["degrees"]), "degrees"
    raise ValueError("divisor JSON needs 'coefficients' or 'degrees'")


def divisor_to_json(L: DivisorClass) -> dict:
    return {"coefficients": list(L.coefficients), "degrees": list(L.degrees)}


def ample_degree_vectors(fan: Fan, t_max: int, t_min: int = 1) -> list[tuple[int, ...]]:
    """All degree vectors with entries in ``[t_min, t_max]``, lexicographically.

    The last ``e - 2`` entries are free; the first two are then forced by
    ``sum t_i v_i = 0`` because ``v_0, v_1`` is a lattice basis.
    """
    rays = fan.rays
    v0, v1 = rays[0], rays[1]
    rest = rays[2:]
    out = []
    for tail in product(range(t_min, t_max + 1), repeat=fan.e - 2):
        wx = -sum(t * x for t, (x, _) in zip(tail, rest))
        wy = -sum(t * y for t, (_, y) in zip(tail, rest))
        t0 = wx * v1[1] - wy * v1[0]
        t1 = v0[0] * wy - v0[1] * wx
        if t_min <= t0 <= t_max and t_min <= t1 <= t_max:
            out.append((t0, t1) + tail)
    out.sort()
    return out
