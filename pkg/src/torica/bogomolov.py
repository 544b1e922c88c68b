"""Bogomolov instability for rank-2 data on toric surfaces.

An unstable bundle ``E`` (``c1^2 > 4 c2``) sits in
``0 -> A -> E -> (H - A) (x) I_Z -> 0`` with ``H = det E``, ``H - A`` ample,
``2A - H`` of positive square and positive on ample classes, and
``c2 = A.(H - A) + deg Z``.  The search below enumerates the numerically
possible sub-line-bundles ``A`` inside a coefficient box.

Square roots never appear as floats: ``x >= q + sqrt(q)`` is decided by
squaring ``x - q`` after checking its sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .bounds import BoundReport, ChernData
from .divisors import (
    DivisorClass,
    ample_degree_vectors,
    canonical_class,
    divisor,
    from_degrees,
    intersect,
    is_nef,
)
from .errors import NoAmpleFound, NonPositiveSquare, NotUnstable, RankNotTwo
from .fan import Fan


def is_unstable(data: ChernData) -> bool:
    if data.rank != 2:
        raise RankNotTwo(f"rank {data.rank}")
    return data.c1_sq > 4 * data.c2


def at_least_q_plus_sqrt_q(x: int, q: int) -> bool:
    """Exact test of ``x >= q + sqrt(q)`` for ``q >= 0``."""
    s = x - q
    return s >= 0 and s * s >= q


def eq1_check(A: DivisorClass, H: DivisorClass) -> bool:
    """``A.(H-A) >= (H-A)^2 + sqrt((H-A)^2)``."""
    Q = H - A
    q = Q.square
    if q <= 0:
        raise NonPositiveSquare(f"(H - A)^2 = {q}")
    return at_least_q_plus_sqrt_q(intersect(A, Q), q)


def hodge_inequality_holds(P: DivisorClass, T: DivisorClass) -> bool:
    return P.square * T.square <= intersect(P, T) ** 2


@dataclass(frozen=True)
class DestabilizerCandidate:
    A: DivisorClass
    Q: DivisorClass
    T: DivisorClass
    deg_Z: int
    T_square: int
    T_dot_witness: tuple[int, ...]
    eq1: bool

    def to_json(self) -> dict:
        return {
            "A": list(self.A.coefficients),
            "A_degrees": list(self.A.degrees),
            "Q_degrees": list(self.Q.degrees),
            "T_degrees": list(self.T.degrees),
            "A_dot_Q": intersect(self.A, self.Q),
            "Q_square": self.Q.square,
            "T_square": self.T_square,
            "T_dot_witnesses": list(self.T_dot_witness),
            "deg_Z": self.deg_Z,
            "eq1": self.eq1,
        }


POSITIVITY_NOTE = (
    "2A-H positivity tested against the supplied witness, the quotient H-A, "
    "and -K when -K is nef; not against the whole ample cone"
)


def _basis_degrees(fan: Fan) -> np.ndarray:
    n = fan.e
    return np.array([divisor(fan, [1 if j == i else 0 for j in range(n)]).degrees for i in range(n)], dtype=np.int64)


def destabilizer_search(
    S: Fan,
    H: DivisorClass,
    c2: int,
    box: int,
    witness: DivisorClass | None = None,
) -> list[DestabilizerCandidate]:
    """All normalized ``A`` with coefficients in ``[-box, box]`` passing every test.

    An empty result means no destabilizer inside the box, nothing more.
    """
    if H.fan != S:
        raise ValueError("H does not live on S")
    if min(H.degrees) < 2:
        raise ValueError("det of an ample rank-2 bundle has all degrees >= 2")
    if not is_unstable(ChernData(2, H.square, c2)):
        raise NotUnstable(f"H^2 = {H.square} <= 4 c2 = {4 * c2}")
    W = witness if witness is not None else H
    witnesses = [W]
    K = canonical_class(S)
    if is_nef(-K):
        witnesses.append(-K)

    n = S.e
    scale = max([box] + [abs(b) for b in H.coefficients]) * (max(abs(d) for d in S.profile) + 2) * n
    if scale**2 * 4 * n >= 2**62:
        raise OverflowError("search box too large for the vectorized path")

    # candidate A = sum_{i>=2} c_i D_i, chunked by the leading free coefficient
    D = _basis_degrees(S)[2:]
    tH = np.array(H.degrees, dtype=np.int64)
    bH = np.array(H.coefficients, dtype=np.int64)
    tW = [np.array(w.degrees, dtype=np.int64) for w in witnesses]
    found = []
    rng = np.arange(-box, box + 1, dtype=np.int64)
    for lead in rng:
        rest = n - 3
        if rest:
            grid = np.array(list(product(range(-box, box + 1), repeat=rest)), dtype=np.int64)
            C = np.hstack([np.full((grid.shape[0], 1), lead, dtype=np.int64), grid])
        else:
            C = np.array([[lead]], dtype=np.int64)
        tA = C @ D  # degrees of A
        tQ = tH[None, :] - tA
        ok = (tQ >= 1).all(axis=1)
        if not ok.any():
            continue
        C, tA, tQ = C[ok], tA[ok], tQ[ok]
        bA = np.hstack([np.zeros((C.shape[0], 2), dtype=np.int64), C])
        tT = 2 * tA - tH[None, :]
        bT = 2 * bA - bH[None, :]
        T_sq = (bT * tT).sum(axis=1)
        AQ = (bA * tQ).sum(axis=1)
        bQ = bH[None, :] - bA
        keep = (T_sq > 0) & (AQ <= c2) & ((bQ * tT).sum(axis=1) > 0)
        for tw in tW:
            keep &= (bT * tw[None, :]).sum(axis=1) > 0
        for row in C[keep]:
            A = divisor(S, [0, 0] + [int(x) for x in row])
            Q = H - A
            T = A + A - H
            dots = tuple(intersect(T, w) for w in witnesses) + (intersect(T, Q),)
            found.append(DestabilizerCandidate(A, Q, T, c2 - intersect(A, Q), T.square, dots, eq1_check(A, H)))
    found.sort(key=lambda c: c.A.coefficients)
    return found


# -- the F_eps, eps >= 1 branch of the rank-2 classification ---------------

CASE2_CONSTRAINTS = (
    "x>=3",
    "y>=x*eps+2",
    "x-alpha>0",
    "y-beta>0",
    "y>=beta+(x-alpha)*eps+1",
    "2alpha>x",
    "2beta>y",
    "(2A-H)^2>0",
    "A.(H-A)<=4",
)

CASE2_ITEMS = {
    "item1": ("x>=3", "y>=x*eps+2"),
    "item2": ("x-alpha>0", "y-beta>0", "y>=beta+(x-alpha)*eps+1"),
    "item3": ("2alpha>x", "2beta>y"),
    "item4": ("(2A-H)^2>0",),
    "item5": ("A.(H-A)<=4",),
}


@dataclass
class Case2Result:
    caps: tuple[int, int, int]
    dropped: tuple[str, ...]
    count: int
    witnesses: list[tuple[int, int, int, int, int]] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return self.count == 0

    def report(self) -> BoundReport:
        rep = BoundReport(f"caps x<={self.caps[0]} y<={self.caps[1]} eps<={self.caps[2]}", "case2_infeasible",
                          self.count, 0, self.count == 0)
        if self.dropped:
            rep.notes.append(f"dropped {list(self.dropped)}")
        if self.witnesses:
            rep.notes.append(f"witnesses (eps, x, y, alpha, beta) {self.witnesses[:5]}")
        return rep


def case2_infeasibility_oracle(x_max: int, y_max: int, eps_max: int, drop=()) -> Case2Result:
    """Brute-force the inequality list for ``H = xE + yF``, ``A = alpha E + beta F``.

    ``drop`` names constraints (or ``item1``..``item5``) to leave out, which
    is how the search is shown not to be vacuous.
    """
    dropped: set[str] = set()
    for name in drop:
        if name in CASE2_ITEMS:
            dropped.update(CASE2_ITEMS[name])
        elif name in CASE2_CONSTRAINTS:
            dropped.add(name)
        else:
            raise ValueError(f"unknown constraint {name!r}")
    on = {c: c not in dropped for c in CASE2_CONSTRAINTS}

    count = 0
    witnesses = []
    x_lo = 3 if on["x>=3"] else 1
    alphas = np.arange(-x_max, x_max + 1, dtype=np.int64)
    betas = np.arange(-y_max, y_max + 1, dtype=np.int64)
    al, be = np.meshgrid(alphas, betas, indexing="ij")
    for eps in range(1, eps_max + 1):
        for x in range(x_lo, x_max + 1):
            for y in range(1, y_max + 1):
                if on["y>=x*eps+2"] and y < x * eps + 2:
                    continue
                m = np.ones(al.shape, dtype=bool)
                if on["x-alpha>0"]:
                    m &= x - al > 0
                if on["y-beta>0"]:
                    m &= y - be > 0
                if on["y>=beta+(x-alpha)*eps+1"]:
                    m &= y >= be + (x - al) * eps + 1
                if on["2alpha>x"]:
                    m &= 2 * al > x
                if on["2beta>y"]:
                    m &= 2 * be > y
                if on["(2A-H)^2>0"]:
                    u = 2 * al - x
                    m &= u * (4 * be - 2 * y - u * eps) > 0
                if on["A.(H-A)<=4"]:
                    m &= -al * (x - al) * eps + be * (x - al) + al * (y - be) <= 4
                k = int(m.sum())
                if k:
                    count += k
                    if len(witnesses) < 20:
                        for a, bb in zip(al[m][:5], be[m][:5]):
                            witnesses.append((eps, x, y, int(a), int(bb)))
    return Case2Result((x_max, y_max, eps_max), tuple(sorted(dropped)), count, witnesses)


# -- stability radius -------------------------------------------------------


def min_ample_square(S: Fan, t_max: int) -> int:
    """Smallest ``L^2`` over ample classes with degrees in ``[1, t_max]``.

    This is only an upper bound for the true minimum over the ample cone.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    vecs = ample_degree_vectors(S, t_max)
    if not vecs:
        raise NoAmpleFound(f"no ample degree vector with entries <= {t_max}")
    return min(from_degrees(S, t).square for t in vecs)


MINIMAL_PROFILES = {
    (1, 1, 1): "P2",
    (0, 0, 0, 0): "F0",
    (-1, 0, 1, 0): "F1",
    (-2, 0, 2, 0): "F2",
}


def bog_restriction_check(S: Fan, H: DivisorClass, c2: int, box: int = 4, instance: str = "") -> BoundReport:
    """Unstable rank-2 data with ``c2 <= e + sqrt(e)`` only live on P2, F0, F1, F2."""
    e = S.e
    c1sq = H.square
    rep = BoundReport(instance, "bog_restriction", c2, None, True)
    rep.notes.append(POSITIVITY_NOTE)
    if not is_unstable(ChernData(2, c1sq, c2)):
        rep.notes.append("not unstable: predicate does not apply")
        return rep
    if c2 > e and (c2 - e) ** 2 > e:
        rep.notes.append("c2 > e + sqrt(e): predicate does not apply")
        return rep
    name = MINIMAL_PROFILES.get(S.canonical)
    if name:
        rep.notes.append(f"surface is {name}: conclusion holds")
        return rep
    cands = destabilizer_search(S, H, c2, box)
    surviving = [c for c in cands if c.eq1]
    rep.lhs = len(surviving)
    rep.rhs = 0
    rep.verdict = not surviving
    rep.notes.append(f"no destabilizer within box {box}" if not cands else f"{len(cands)} candidates")
    if surviving:
        rep.notes.append(f"surviving {[c.to_json() for c in surviving[:3]]}")
    return rep

