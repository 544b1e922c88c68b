"""Closed-form Chern number bounds, the rank-2 catalogue, and bound surfaces.

Every bound is returned as an exact :class:`fractions.Fraction`; decimals
appear only when rows are serialized.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .divisors import (
    DivisorClass,
    canonical_class,
    divisor,
    from_degrees,
    intersect,
    linear_equivalent,
)
from .errors import EulerTooSmall, FanMismatch, RankNotTwo
from .fan import hirzebruch, projective_plane, realize_profile


def adjunction_depth(e: int) -> int:
    """``floor(log2((e - 1) / 6))``, the band index with ``6*2^b < e <= 12*2^b``."""
    if e <= 6:
        raise EulerTooSmall(f"e = {e}: the bound needs e >= 7")
    return ((e - 1) // 6).bit_length() - 1


def c1sq_lower_bound(r: int, e: int) -> Fraction:
    b = adjunction_depth(e)
    if r < 1:
        raise ValueError("rank must be positive")
    return (
        e * (3 * r * r + 2 * r + 4 * b * r + 2 * b - 2)
        - 12 * (b + 1) * (b + 2 * r)
        - 12 * r * (r - 1)
        + Fraction(2 * e, 2**b)
        - 2
    )


def c2_lower_bound(e: int) -> Fraction:
    """Lower bound for ``c2`` of an ample rank-2 bundle."""
    b = adjunction_depth(e)
    return -3 * (b + 2) * (b + 3) + Fraction((5 * b + 7) * e, 2) + Fraction(e, 2 ** (b + 1)) - Fraction(1, 2)


def conjectured_c2_bound(r: int, e: int) -> Fraction:
    """Conjectural rank-r analogue of :func:`c2_lower_bound` (unproven)."""
    return Fraction(r - 1, 2 * r) * c1sq_lower_bound(r, e)


def bogomolov_contradiction(b: int, e: int) -> Fraction:
    """``18b^2 + 42b + 13 - 7eb + e - 3e/2^b``; never positive inside band ``b``."""
    return 18 * b * b + 42 * b + 13 - 7 * e * b + e - Fraction(3 * e, 2**b)


def summation_identity(b: int) -> tuple[int, int]:
    """Both sides of ``sum_{j<=b} (j+1) 2^j = 2^(b+1) b + 1``."""
    return sum((j + 1) * 2**j for j in range(b + 1)), 2 ** (b + 1) * b + 1


# -- reports ----------------------------------------------------------------


@dataclass
class BoundReport:
    instance: str
    bound: str
    lhs: Fraction | int | None
    rhs: Fraction | int | None
    verdict: bool
    equality: bool = False
    notes: list[str] = field(default_factory=list)
    grid: str | None = None
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "instance": self.instance,
            "bound": self.bound,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "verdict": "pass" if self.verdict else "fail",
            "equality": self.equality,
            "notes": list(self.notes),
        }
        if self.grid is not None:
            out["grid"] = self.grid
            out["failures"] = [list(f) for f in self.failures]
        return out

    def claim_json(self) -> dict:
        return {
            "claim": self.bound,
            "grid": self.grid,
            "verdict": "pass" if self.verdict else "fail",
            "failures": [list(f) for f in self.failures],
        }


def _num(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return x


@dataclass(frozen=True)
class ChernData:
    rank: int
    c1_sq: int
    c2: int
    e: int | None = None
    c1_class: DivisorClass | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if self.c1_class is not None:
            if self.c1_class.square != self.c1_sq:
                raise ValueError("c1_sq does not match the class")
            if min(self.c1_class.degrees) < self.rank:
                raise ValueError("det of an ample rank-r bundle has all degrees >= r")
            if self.e is not None and self.e != self.c1_class.fan.e:
                raise ValueError("surface Euler number does not match the class")

    @property
    def euler(self) -> int | None:
        if self.e is not None:
            return self.e
        return self.c1_class.fan.e if self.c1_class is not None else None


def easy_bound_check(data: ChernData, instance: str = "") -> BoundReport:
    """``c1^2 >= r^2 e`` for ``e >= 5``, equality only at ``-rK`` with ``e = 6``."""
    e, r = data.euler, data.rank
    if e is None or e < 5:
        raise EulerTooSmall("the easy bound needs e >= 5")
    rhs = r * r * e
    rep = BoundReport(instance, "c1sq>=r^2e", data.c1_sq, rhs, data.c1_sq >= rhs, data.c1_sq == rhs)
    if rep.equality:
        if e != 6:
            rep.verdict = False
            rep.notes.append(f"equality at e = {e} != 6")
        if data.c1_class is not None:
            H = data.c1_class
            if not linear_equivalent(H, canonical_class(H.fan) * (-r)):
                rep.verdict = False
                rep.notes.append("equality but det is not -rK")
            else:
                rep.notes.append("equality at det = -rK")
    return rep


def _grid_claim(name, pairs, predicate, grid) -> BoundReport:
    failures = []
    count = 0
    for r, e in pairs:
        count += 1
        if not predicate(r, e):
            failures.append((r, e))
    rep = BoundReport(name, name, count - len(failures), count, not failures, grid=grid, failures=failures)
    if failures:
        rep.notes.append(f"{len(failures)} failures, first {failures[:5]}")
    return rep


def intro_claims_check(e_max: int = 1000, r_max_mono: int = 50) -> list[BoundReport]:
    """Sweep the headline consequences of the c1^2 bound over finite grids."""
    if e_max < 1000:
        raise ValueError("e_max must be at least 1000")
    cache: dict[tuple[int, int], Fraction] = {}

    def lb(r, e):
        key = (r, e)
        if key not in cache:
            cache[key] = c1sq_lower_bound(r, e)
        return cache[key]

    def grid(rs, es):
        return ((r, e) for r in rs for e in es)

    E = range(13, e_max + 1)
    out = [
        _grid_claim("2r^2e, e>=13", grid(range(1, 21), E), lambda r, e: lb(r, e) >= 2 * r * r * e, f"r 1..20, e 13..{e_max}"),
        _grid_claim(
            "2r^2e, e>=12", grid(range(1, 21), range(12, e_max + 1)),
            lambda r, e: lb(r, e) >= 2 * r * r * e, f"r 1..20, e 12..{e_max}",
        ),
        _grid_claim("3r^2e, r<=3, e>=13", grid(range(1, 4), E), lambda r, e: lb(r, e) >= 3 * r * r * e, f"r 1..3, e 13..{e_max}"),
        _grid_claim(
            "3r^2e, r<=6, e>=19", grid(range(1, 7), range(19, e_max + 1)),
            lambda r, e: lb(r, e) >= 3 * r * r * e, f"r 1..6, e 19..{e_max}",
        ),
        _grid_claim(
            "3r^2e, r<=141, e>=100", grid(range(1, 142), range(100, e_max + 1)),
            lambda r, e: lb(r, e) >= 3 * r * r * e, f"r 1..141, e 100..{e_max}",
        ),
        _grid_claim(
            "3r^2e, e>=6r+7",
            ((r, e) for r in range(1, 51) for e in range(6 * r + 7, e_max + 1)),
            lambda r, e: lb(r, e) >= 3 * r * r * e, f"r 1..50, e 6r+7..{e_max}",
        ),
        _grid_claim(
            "5r^2e, r<=10, e>=100", grid(range(1, 11), range(100, e_max + 1)),
            lambda r, e: lb(r, e) >= 5 * r * r * e, f"r 1..10, e 100..{e_max}",
        ),
        _grid_claim(
            "bound>r^2e, e>=7", grid(range(1, r_max_mono + 1), range(7, e_max + 1)),
            lambda r, e: lb(r, e) > r * r * e, f"r 1..{r_max_mono}, e 7..{e_max}",
        ),
        monotonicity_check(r_max_mono, e_max, lb),
    ]
    return out


def monotonicity_check(r_max: int = 50, e_max: int = 2000, lb=None) -> BoundReport:
    """Finite-difference check that the c1^2 bound is non-decreasing in r and e."""
    lb = lb or c1sq_lower_bound
    failures = []
    for r in range(1, r_max + 1):
        prev = lb(r, 7)
        for e in range(8, e_max + 1):
            cur = lb(r, e)
            if cur < prev:
                failures.append(("e", r, e))
            prev = cur
    for e in range(7, e_max + 1):
        prev = lb(1, e)
        for r in range(2, r_max + 1):
            cur = lb(r, e)
            if cur < prev:
                failures.append(("r", r, e))
            prev = cur
    rep = BoundReport("monotone", "monotone in r and e", None, None, not failures,
                      grid=f"r 1..{r_max}, e 7..{e_max}", failures=failures)
    if failures:
        rep.notes.append(f"{len(failures)} failures, first {failures[:5]}")
    return rep


# -- rank-2 catalogue -------------------------------------------------------


def hirzebruch_pullback_twist_chern(r: int, eps: int, det_dot_e: int) -> tuple[int, int]:
    """Chern numbers of ``p^* V (x) xi`` on ``F_eps`` given ``det . E``."""
    if r < 1 or eps < 0:
        raise ValueError("need r >= 1 and eps >= 0")
    return r * r * eps + 2 * r * det_dot_e, comb(r, 2) * eps + (r - 1) * det_dot_e


def pullback_twist_chern(eps: int, splitting: Sequence[int]) -> tuple[int, int]:
    """Same as above with ``V = O(a_1) + ... + O(a_r)``, so ``det . E = sum a_i``."""
    return hirzebruch_pullback_twist_chern(len(splitting), eps, sum(splitting))


def chern_of_split(line_classes: Sequence[DivisorClass]) -> ChernData:
    fan = line_classes[0].fan
    if any(L.fan != fan for L in line_classes):
        raise FanMismatch("summands live on different fans")
    c1 = line_classes[0]
    for L in line_classes[1:]:
        c1 = c1 + L
    c2 = sum(
        intersect(line_classes[i], line_classes[j])
        for i in range(len(line_classes))
        for j in range(i + 1, len(line_classes))
    )
    return ChernData(len(line_classes), c1.square, c2, fan.e)


def stability_label(data: ChernData) -> str:
    if data.rank != 2:
        raise RankNotTwo(f"rank {data.rank}")
    if data.c1_sq > 4 * data.c2:
        return "U"
    return "B" if data.c1_sq == 4 * data.c2 else "S"


@dataclass(frozen=True)
class CatalogueRow:
    surface: str
    e: int
    construction: str
    c1_sq: int
    c2: int | None
    label: str
    method: str  # split | pullback_twist | data | open
    params: tuple = ()


def _p2(a: int) -> DivisorClass:
    return divisor(projective_plane(), [a, 0, 0])


def _quadric(p: int, q: int) -> DivisorClass:
    # t = (q, p, q, p) on the standard F_0 fan is bidegree (p, q)
    return from_degrees(hirzebruch(0), [q, p, q, p])


def del_pezzo_6():
    """The toric del Pezzo surface with six rays (hexagonal fan)."""
    return realize_profile([-1] * 6)


def table1_catalogue() -> list[CatalogueRow]:
    rows = [
        CatalogueRow("P2", 3, "O(1)+O(1)", 4, 1, "B", "split", ((1,), (1,))),
        CatalogueRow("P2", 3, "O(1)+O(2)", 9, 2, "U", "split", ((1,), (2,))),
        CatalogueRow("P2", 3, "T_P2", 9, 3, "S", "data", ((3,),)),
        CatalogueRow("P2", 3, "O(1)+O(3)", 16, 3, "U", "split", ((1,), (3,))),
        CatalogueRow("P1xP1", 4, "p*(O(1)+O(1))(x)xi", 8, 2, "B", "pullback_twist", (0, (1, 1))),
        CatalogueRow("P1xP1", 4, "p*(O(1)+O(2))(x)xi", 12, 3, "B", "pullback_twist", (0, (1, 2))),
        CatalogueRow("P1xP1", 4, "p*(O(1)+O(3))(x)xi", 16, 4, "B", "pullback_twist", (0, (1, 3))),
        CatalogueRow("P1xP1", 4, "p*(O(2)+O(2))(x)xi", 16, 4, "B", "pullback_twist", (0, (2, 2))),
        CatalogueRow("P1xP1", 4, "O(1,1)+O(2,2)", 18, 4, "U", "split", ((1, 1), (2, 2))),
        CatalogueRow("F1", 4, "p*(O(1)+O(1))(x)xi", 12, 3, "B", "pullback_twist", (1, (1, 1))),
        CatalogueRow("F1", 4, "p*(O(1)+O(2))(x)xi", 16, 4, "B", "pullback_twist", (1, (1, 2))),
        CatalogueRow("F2", 4, "p*(O(1)+O(1))(x)xi", 16, 4, "B", "pullback_twist", (2, (1, 1))),
        CatalogueRow("DelPezzo6", 6, "(-K)+(-K)", 24, 6, "B", "split", ("-K", "-K")),
        CatalogueRow("DelPezzo6", 6, "det=-2K, if any example exists", 24, None, "S", "open", ()),
    ]
    return rows


def _row_classes(row: CatalogueRow) -> list[DivisorClass]:
    if row.surface == "P2":
        return [_p2(a) for (a,) in row.params]
    if row.surface == "P1xP1":
        return [_quadric(p, q) for p, q in row.params]
    if row.surface == "DelPezzo6":
        K = canonical_class(del_pezzo_6())
        return [-K, -K]
    raise ValueError(row.surface)


def recompute_row(row: CatalogueRow) -> tuple[int, int | None, str | None]:
    """``(c1^2, c2, label)`` rebuilt from the row's construction."""
    if row.method == "split":
        data = chern_of_split(_row_classes(row))
        return data.c1_sq, data.c2, stability_label(data)
    if row.method == "pullback_twist":
        eps, split = row.params
        c1sq, c2 = pullback_twist_chern(eps, split)
        return c1sq, c2, stability_label(ChernData(2, c1sq, c2, 4))
    if row.method == "data":
        c1 = _p2(row.params[0][0])
        c1sq = c1.square
        return c1sq, row.c2, stability_label(ChernData(2, c1sq, row.c2, 3))
    # open row: det = -2K on the e=6 del Pezzo
    H = canonical_class(del_pezzo_6()) * (-2)
    return H.square, None, None


def verify_table1() -> list[BoundReport]:
    reports = []
    for k, row in enumerate(table1_catalogue(), start=1):
        c1sq, c2, label = recompute_row(row)
        inst = f"row{k}:{row.surface}:{row.construction}"
        if row.method == "open":
            ok = c1sq == row.c1_sq == 24
            rep = BoundReport(inst, "table1", c1sq, row.c1_sq, ok)
            rep.notes.append("c2 >= 7 open")
            # any example would have c2 >= 7 > 6 = c1^2/4, hence stable
            rep.notes.append(f"label for c2 >= 7: {stability_label(ChernData(2, c1sq, 7, 6))}")
        else:
            ok = (c1sq, c2, label) == (row.c1_sq, row.c2, row.label)
            rep = BoundReport(inst, "table1", (c1sq, c2, label), (row.c1_sq, row.c2, row.label), ok)
            if row.method == "data":
                rep.notes.append("c2 is catalogue data")
        reports.append(rep)
    return reports


# -- bound surface ----------------------------------------------------------


def _decimal(x: Fraction, digits: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        q = Decimal(x.numerator) / Decimal(x.denominator)
    return format(q, "f")


@dataclass(frozen=True)
class SurfaceRow:
    r: int
    e: int
    b: int
    bound: Fraction
    scaled: str | None


def emit_bound_surface(r_range: Iterable[int], e_range: Iterable[int], scaled: bool = True) -> list[SurfaceRow]:
    """Rows of the c1^2 bound, optionally divided by ``r e (3r + 4b)``."""
    rows = []
    e_values = list(e_range)
    for r in r_range:
        for e in e_values:
            b = adjunction_depth(e)
            v = c1sq_lower_bound(r, e)
            s = _decimal(v / (r * e * (3 * r + 4 * b))) if scaled else None
            rows.append(SurfaceRow(r, e, b, v, s))
    return rows


def surface_csv(rows: Sequence[SurfaceRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "e", "b", "bound_num", "bound_den", "scaled"])
    for row in rows:
        w.writerow([row.r, row.e, row.b, row.bound.numerator, row.bound.denominator, row.scaled or ""])
    return buf.getvalue()
