"""Smooth complete fans in the rank-2 lattice.

A fan is stored as its cyclic list of primitive rays in counterclockwise
order.  Ray ``i`` corresponds to the invariant divisor ``D_i`` and the cone
``(v_i, v_{i+1})`` to a torus-fixed point, so the number of rays is the
Euler characteristic of the surface.

Everything here is integer arithmetic; Python ints are unbounded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    NonPrimitiveRay,
    NotComplete,
    NotMinusOneCurve,
    NotRealizable,
    NotUnimodular,
    TooFewRays,
)

Ray = tuple[int, int]


def det(u: Ray, v: Ray) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _half(v: Ray) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_less(u: Ray, v: Ray) -> bool:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu < hv
    return det(u, v) > 0


def winding_number(rays: Sequence[Ray]) -> int:
    """Number of turns made by a cyclic ray list whose steps all turn left.

    Only meaningful when every consecutive determinant is positive, so each
    step turns by an angle strictly between 0 and pi.
    """
    n = len(rays)
    wraps = 0
    for i in range(n):
        if not _angle_less(rays[i], rays[(i + 1) % n]):
            wraps += 1
    return wraps


def _check_rays(rays: Sequence[Ray]) -> None:
    if len(rays) < 3:
        raise TooFewRays(f"a complete fan needs at least 3 rays, got {len(rays)}")
    for i, (x, y) in enumerate(rays):
        if (x, y) == (0, 0) or gcd(x, y) != 1:
            raise NonPrimitiveRay(i, (x, y))
    n = len(rays)
    for i in range(n):
        d = det(rays[i], rays[(i + 1) % n])
        if d != 1:
            raise NotUnimodular(i, d, (i + 1) % n)
    w = winding_number(rays)
    if w != 1:
        raise NotComplete(w)


@dataclass(frozen=True)
class Fan:
    """A smooth complete fan; construction validates every invariant."""

    rays: tuple[Ray, ...]

    def __post_init__(self):
        rays = tuple((int(x), int(y)) for x, y in self.rays)
        object.__setattr__(self, "rays", rays)
        _check_rays(rays)

    @property
    def e(self) -> int:
        return len(self.rays)

    def __len__(self) -> int:
        return len(self.rays)

    @cached_property
    def profile(self) -> tuple[int, ...]:
        """Self-intersections ``D_i^2``, from ``v_{i-1} + v_{i+1} = -d_i v_i``."""
        r, n = self.rays, len(self.rays)
        return tuple(-det(r[i - 1], r[(i + 1) % n]) for i in range(n))

    @cached_property
    def canonical(self) -> tuple[int, ...]:
        return canonical_form(self.profile)

    @property
    def picard_rank(self) -> int:
        return self.e - 2

    def to_json(self) -> dict:
        return {"rays": [list(v) for v in self.rays]}

    def __repr__(self) -> str:
        return f"Fan({list(self.rays)})"


def validate_fan(rays: Iterable[Sequence[int]]) -> Fan:
    return Fan(tuple((int(v[0]), int(v[1])) for v in rays))


def self_intersections(fan: Fan) -> tuple[int, ...]:
    return fan.profile


def projective_plane() -> Fan:
    return Fan(((1, 0), (0, 1), (-1, -1)))


def hirzebruch(a: int) -> Fan:
    """Fan of F_a with profile ``(0, -a, 0, a)``."""
    return Fan(((1, 0), (0, 1), (-1, a), (0, -1)))


def realize_profile(d: Sequence[int]) -> Fan:
    """Rebuild a fan from its self-intersection profile.

    Runs the transfer recursion ``v_{i+1} = -d_i v_i - v_{i-1}`` from
    ``v_0 = (1, 0)``, ``v_1 = (0, 1)``; the result is unique up to
    ``GL(2, Z)``.
    """
    d = [int(x) for x in d]
    n = len(d)
    if n < 3:
        raise TooFewRays(f"a complete fan needs at least 3 rays, got {n}")
    rays: list[Ray] = [(1, 0), (0, 1)]
    for i in range(1, n + 1):
        (px, py), (cx, cy) = rays[i - 1], rays[i]
        k = -d[i % n]
        rays.append((k * cx - px, k * cy - py))
    if rays[n] != rays[0] or rays[n + 1] != rays[1]:
        raise NotRealizable(f"transfer recursion does not close up for profile {d}")
    try:
        return Fan(tuple(rays[:n]))
    except (NotComplete, NotUnimodular, NonPrimitiveRay) as exc:
        raise NotRealizable(f"profile {d}: {exc}") from exc


def blowup(fan: Fan, corner: int) -> Fan:
    """Blow up the fixed point of the cone ``(v_corner, v_{corner+1})``.

    The new ray sits between the two; for the wrap-around cone
    ``(v_{e-1}, v_0)`` it is placed first so that ``blowdown`` at index 0
    followed by ``blowup`` at the last corner is the identity.
    """
    n = fan.e
    i = corner % n
    r = fan.rays
    j = (i + 1) % n
    new = (r[i][0] + r[j][0], r[i][1] + r[j][1])
    if j == 0:
        return Fan((new,) + r)
    return Fan(r[: i + 1] + (new,) + r[i + 1 :])


@dataclass(frozen=True)
class BlowdownRecord:
    removed_ray_index: int
    parent: Fan
    child: Fan = field(repr=False)

    @property
    def corner(self) -> int:
        """Corner of the child fan whose blowup restores the parent."""
        return (self.removed_ray_index - 1) % self.child.e


def blowdown(fan: Fan, ray: int) -> BlowdownRecord:
    n = fan.e
    i = ray % n
    r = fan.rays
    a, b = r[i - 1], r[(i + 1) % n]
    if (a[0] + b[0], a[1] + b[1]) != r[i]:
        raise NotMinusOneCurve(f"ray {i} has self-intersection {fan.profile[i]}, not -1")
    if n == 3:
        raise NotMinusOneCurve("cannot blow down a fan with 3 rays")
    child = Fan(r[:i] + r[i + 1 :])
    return BlowdownRecord(i, fan, child)


def minus_one_rays(fan: Fan) -> list[int]:
    return [i for i, d in enumerate(fan.profile) if d == -1]


def dihedral_images(seq: Sequence) -> list[tuple]:
    """All rotations and reflections of a cyclic sequence."""
    s = tuple(seq)
    n = len(s)
    rev = s[::-1]
    out = []
    for k in range(n):
        out.append(s[k:] + s[:k])
        out.append(rev[k:] + rev[:k])
    return out


def canonical_form(seq: Sequence) -> tuple:
    return min(dihedral_images(seq))


def canonical_profile(fan: Fan) -> tuple[int, ...]:
    return fan.canonical


def transform(fan: Fan, matrix: Sequence[Sequence[int]]) -> Fan:
    """Apply a unimodular lattice map to every ray.

    A map of determinant -1 reverses orientation, so the ray order is
    reversed to stay counterclockwise.
    """
    (a, b), (c, dd) = matrix
    m = a * dd - b * c
    if m not in (1, -1):
        raise ValueError(f"matrix {matrix} is not unimodular")
    rays = [(a * x + b * y, c * x + dd * y) for x, y in fan.rays]
    if m == -1:
        rays.reverse()
    return Fan(tuple(rays))


def load_fan(path) -> Fan:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or "rays" not in data:
        raise ValueError(f"{path}: expected an object with a 'rays' list")
    rays = data["rays"]
    for v in rays:
        if len(v) != 2 or not all(isinstance(c, int) and not isinstance(c, bool) for c in v):
            raise ValueError(f"{path}: ray {v!r} is not a pair of integers")
    return validate_fan(rays)


def dump_fan(fan: Fan, path) -> None:
    Path(path).write_text(json.dumps(fan.to_json()) + "\n")


def profile_json(fan: Fan) -> dict:
    return {"profile": list(fan.profile)}
