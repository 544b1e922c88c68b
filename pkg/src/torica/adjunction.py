"""Adjunction reduction of polarized toric surfaces.

For an ample ``L`` on a smooth toric surface the adjoint class ``K + L`` is
inspected on the invariant curves.  When it is nef and big, the invariant
curves it kills are disjoint (-1)-curves; contracting them gives
``pi: S -> S1`` with ``L = pi^* L' - E`` and the process continues with the
new polarization ``L1 = K_{S1} + L'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence, Union

from .divisors import (
    DivisorClass,
    canonical_class,
    divisor,
    from_degrees,
    intersect,
    is_ample,
)
from .errors import AdjacentContractions, IndexMismatch, NotAmple
from .fan import BlowdownRecord, Fan, blowdown, blowup


def surface_name(fan: Fan) -> str | None:
    """Name of the minimal surfaces P2 and F_a, else None."""
    if fan.e == 3:
        return "P2"
    if fan.e == 4:
        return f"F{max(abs(d) for d in fan.profile)}"
    return None


# -- outcomes ---------------------------------------------------------------


@dataclass(frozen=True)
class Reduced:
    child: Fan
    pushed: DivisorClass  # L' with L = pi^* L' - E
    adjoint: DivisorClass  # L1 = K_{S1} + L'
    contracted: tuple[int, ...]
    records: tuple[BlowdownRecord, ...] = field(repr=False)
    kind = "reduced"

    def to_json(self) -> dict:
        return {"outcome": self.kind, "contracted_rays": list(self.contracted), "child_e": self.child.e}


@dataclass(frozen=True)
class Fibration:
    fiber: DivisorClass
    fiber_degree: int
    kind = "fibration"

    def to_json(self) -> dict:
        return {"outcome": self.kind, "fiber_degrees": list(self.fiber.degrees), "fiber_degree": self.fiber_degree}


@dataclass(frozen=True)
class AntiCanonical:
    kind = "anticanonical"

    def to_json(self) -> dict:
        return {"outcome": self.kind}


@dataclass(frozen=True)
class AdjointAmple:
    adjoint: DivisorClass
    kind = "adjoint_ample"

    def to_json(self) -> dict:
        return {"outcome": self.kind}


@dataclass(frozen=True)
class TerminalLowEuler:
    reason: str
    surface: str | None = None
    kind = "terminal_low_euler"

    def to_json(self) -> dict:
        return {"outcome": self.kind, "reason": self.reason, "surface": self.surface}


ReductionOutcome = Union[Reduced, Fibration, AntiCanonical, AdjointAmple, TerminalLowEuler]


# -- blowdown transport -----------------------------------------------------


def pushforward_under_blowdown(L: DivisorClass, record: BlowdownRecord) -> DivisorClass:
    if L.fan != record.parent:
        raise IndexMismatch("class does not live on the parent fan of the record")
    i = record.removed_ray_index
    b = L.coefficients
    return DivisorClass(record.child, b[:i] + b[i + 1 :])


def pullback_under_blowdown(M: DivisorClass, record: BlowdownRecord) -> DivisorClass:
    if M.fan != record.child:
        raise IndexMismatch("class does not live on the child fan of the record")
    i = record.removed_ray_index
    b = M.coefficients
    n = len(b)
    new = b[(i - 1) % n] + b[i % n]
    return DivisorClass(record.parent, b[:i] + (new,) + b[i:])


def pushforward(L: DivisorClass, records: Sequence[BlowdownRecord]) -> DivisorClass:
    for rec in records:
        L = pushforward_under_blowdown(L, rec)
    return L


def pullback(M: DivisorClass, records: Sequence[BlowdownRecord]) -> DivisorClass:
    for rec in reversed(records):
        M = pullback_under_blowdown(M, rec)
    return M


def contract(fan: Fan, rays: Sequence[int]) -> list[BlowdownRecord]:
    """Blow down pairwise non-adjacent (-1)-rays, highest index first."""
    records = []
    for i in sorted(rays, reverse=True):
        rec = blowdown(fan, i)
        records.append(rec)
        fan = rec.child
    return records


# -- adjunction -------------------------------------------------------------


def adjoint_class(L: DivisorClass) -> DivisorClass:
    return DivisorClass(L.fan, tuple(b - 1 for b in L.coefficients))


def _adjacent(i: int, j: int, n: int) -> bool:
    return (j - i) % n in (1, n - 1)


def classify_adjoint(S: Fan, L: DivisorClass) -> ReductionOutcome:
    if L.fan != S:
        raise IndexMismatch("divisor does not live on the given fan")
    if not is_ample(L):
        raise NotAmple(f"{L!r} is not ample")
    A = adjoint_class(L)
    a = A.degrees
    n = S.e
    if not any(a):
        return AntiCanonical()
    if min(a) >= 1:
        return AdjointAmple(A)
    if min(a) < 0:
        return TerminalLowEuler("adjoint class is not nef", surface_name(S))
    if A.square == 0:
        g = 0
        for x in a:
            g = gcd(g, x)
        F = from_degrees(S, [x // g for x in a])
        return Fibration(F, intersect(L, F))
    zero = [i for i, x in enumerate(a) if x == 0]
    d = S.profile
    if any(d[i] != -1 for i in zero):
        bad = [i for i in zero if d[i] != -1]
        return TerminalLowEuler(f"adjoint kills rays {bad} that are not (-1)-curves", surface_name(S))
    for k, i in enumerate(zero):
        for j in zero[k + 1 :]:
            if _adjacent(i, j, n):
                raise AdjacentContractions(f"rays {i} and {j} are adjacent and both killed by K + L")
    records = contract(S, zero)
    child = records[-1].child
    pushed = pushforward(L, records)
    L1 = canonical_class(child) + pushed
    return Reduced(child, pushed, L1, tuple(zero), tuple(records))


@dataclass(frozen=True)
class AdjunctionSequence:
    steps: tuple[tuple[Fan, DivisorClass], ...]
    outcomes: tuple[ReductionOutcome, ...]
    terminal: ReductionOutcome

    @property
    def length(self) -> int:
        return len(self.steps) - 1

    b = length

    def records(self, upto: int | None = None) -> list[BlowdownRecord]:
        """Blowdown records of the first ``upto`` steps, in order."""
        out: list[BlowdownRecord] = []
        for o in self.outcomes[: self.length if upto is None else upto]:
            if isinstance(o, Reduced):
                out.extend(o.records)
        return out

    def step_inequalities(self) -> list[tuple[int, int, bool, bool]]:
        """``(e_i, e_{i+1}, e_{i+1} >= e_i // 2, e_i <= 2 e_{i+1})`` per step."""
        es = [f.e for f, _ in self.steps]
        return [(x, y, y >= x // 2, x <= 2 * y) for x, y in zip(es, es[1:])]

    def to_json(self) -> dict:
        out = []
        for k, (S, L) in enumerate(self.steps):
            o = self.outcomes[k] if k < len(self.outcomes) else self.terminal
            rec = {
                "e": S.e,
                "profile": list(S.profile),
                "L_degrees": list(L.degrees),
                "contracted_rays": list(o.contracted) if isinstance(o, Reduced) else [],
            }
            rec.update(o.to_json())
            out.append(rec)
        return {"b": self.length, "steps": out}


MAX_STEPS = 10_000


def iterated_sequence(S: Fan, L: DivisorClass) -> AdjunctionSequence:
    """Repeat the adjunction step while the surface has at least 7 rays.

    A step whose adjoint is already ample contracts nothing and just
    re-polarizes by ``K + L``.
    """
    if not is_ample(L):
        raise NotAmple(f"{L!r} is not ample")
    steps = [(S, L)]
    outcomes: list[ReductionOutcome] = []
    while S.e >= 7:
        if len(steps) > MAX_STEPS:
            raise RuntimeError("adjunction sequence did not terminate")
        out = classify_adjoint(S, L)
        if isinstance(out, Reduced):
            S, L = out.child, out.adjoint
        elif isinstance(out, AdjointAmple):
            L = out.adjoint
        else:
            return AdjunctionSequence(tuple(steps), tuple(outcomes), out)
        if not is_ample(L):
            raise NotAmple(f"re-polarized class {L!r} on e={S.e} is not ample")
        outcomes.append(out)
        steps.append((S, L))
    return AdjunctionSequence(tuple(steps), tuple(outcomes), classify_adjoint(S, L))


@dataclass(frozen=True)
class TelescopeCheck:
    b: int
    direct: int
    upstairs: int
    telescoped: int
    floor_applies: bool = True

    @property
    def identity(self) -> bool:
        return self.direct == self.upstairs == self.telescoped

    @property
    def ok(self) -> bool:
        return self.identity and (self.direct >= -2 or not self.floor_applies)

    def __bool__(self) -> bool:
        return self.ok

    def diff(self) -> dict:
        return {
            "b": self.b,
            "direct": self.direct,
            "upstairs": self.upstairs,
            "telescoped": self.telescoped,
            "floor_applies": self.floor_applies,
        }


def telescoped_genus_check(
    seq: AdjunctionSequence, L: DivisorClass | None = None, depth: int | None = None
) -> TelescopeCheck:
    """Compare three evaluations of ``(K_b + L_b).(2K_b + L_b)``.

    ``direct`` is computed on ``S_b``, ``upstairs`` on the first surface from
    pulled-back canonical classes, and ``telescoped`` from the closed form
    ``sum_j 2(b-j+1) K_j^2 + (2b+3) K.L + L^2`` that only uses Euler numbers.
    ``b`` defaults to the sequence length.

    The value is ``2 g(K_b + L_b) - 2``, so it is at least -2 whenever
    ``K_b + L_b`` is the next polarization (or zero).  When the step at ``b``
    is a fibration or a non-nef adjoint that premise is missing and only the
    identity is checked.
    """
    S0, L0 = seq.steps[0]
    if L is not None and L != L0:
        raise IndexMismatch("L is not the first polarization of the sequence")
    b = seq.length if depth is None else depth
    if not 0 <= b <= seq.length:
        raise IndexMismatch(f"depth {b} outside the sequence (length {seq.length})")
    Sb, Lb = seq.steps[b]
    Kb = canonical_class(Sb)
    direct = intersect(Kb + Lb, Kb + Kb + Lb)

    pulled = [pullback(canonical_class(seq.steps[j][0]), seq.records(j)) for j in range(b + 1)]
    X = L0
    for Kj in pulled:
        X = X + Kj
    upstairs = intersect(X, X + pulled[b])

    K0 = canonical_class(S0)
    telescoped = sum(2 * (b - j + 1) * (12 - seq.steps[j][0].e) for j in range(b + 1))
    telescoped += (2 * b + 3) * intersect(K0, L0) + intersect(L0, L0)
    outcome = seq.outcomes[b] if b < len(seq.outcomes) else seq.terminal
    floor = isinstance(outcome, (Reduced, AdjointAmple, AntiCanonical))
    return TelescopeCheck(b, direct, upstairs, telescoped, floor)


def kl_check(S: Fan, H: DivisorClass, r: int) -> bool:
    """``-K.H >= r e``; false would be a counterexample."""
    if H.fan != S:
        raise IndexMismatch("divisor does not live on the given fan")
    return sum(H.degrees) >= r * S.e


def fibration_bound_holds(S: Fan, outcome: Fibration) -> bool:
    return S.e <= 2 + 2 * outcome.fiber_degree


def pullback_twist(parent_fan: Fan, records: Sequence[BlowdownRecord], M: DivisorClass) -> DivisorClass:
    """``pi^* M - E`` where ``E`` sums the exceptional curves of ``records``.

    ``records`` must be a list produced by blowing down from ``parent_fan``.
    """
    up = pullback(M, records)
    exc = [0] * parent_fan.e
    for i in _exceptional_indices(records):
        exc[i] = 1
    return up - divisor(parent_fan, exc)


def _exceptional_indices(records: Sequence[BlowdownRecord]) -> list[int]:
    """Indices in the first parent fan of all rays removed by ``records``."""
    removed: list[int] = []
    for rec in reversed(records):
        i = rec.removed_ray_index
        removed = [p + 1 if p >= i else p for p in removed]
        removed.append(i)
    return removed


def lift_polarization(
    S1: Fan, L1: DivisorClass, corners: Sequence[int]
) -> tuple[Fan, DivisorClass, list[BlowdownRecord]]:
    """Inverse of a reduction step: blow up ``corners`` of ``S1``.

    Returns ``(S, L, records)`` with ``L = pi^*(L1 - K_{S1}) - E``, so that
    ``K_S + L = pi^* L1``.  ``L`` need not be ample; callers check.
    """
    if L1.fan != S1:
        raise IndexMismatch("L1 does not live on S1")
    n = S1.e
    cs = sorted({c % n for c in corners})
    if len(cs) != len(corners):
        raise ValueError(f"corners {list(corners)} repeat a fixed point")
    wrap = n - 1 in cs
    inner = [c for c in cs if c != n - 1]
    S = S1
    # descending order keeps lower corner indices valid; the wrap corner is
    # always the last one of the current fan
    for c in reversed(inner):
        S = blowup(S, c)
    new = [c + 1 + k for k, c in enumerate(inner)]
    if wrap:
        S = blowup(S, S.e - 1)
        new = [0] + [i + 1 for i in new]
    records = contract(S, new)
    if records[-1].child != S1:
        raise RuntimeError("blowup and contraction do not round-trip")
    L = pullback_twist(S, records, L1 - canonical_class(S1))
    return S, L, records
