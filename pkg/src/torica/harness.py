"""Exhaustive desk-scale verification over enumerated toric surfaces.

Surfaces come from blowing up P2 and F_0..F_{a_max} at torus-fixed points,
deduplicated by canonical self-intersection profile.  Ample classes are
sampled as degree vectors in a box.  Every check is universally quantified
in theory, so sampling can miss counterexamples but never invent them.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .adjunction import (
    Fibration,
    Reduced,
    fibration_bound_holds,
    iterated_sequence,
    kl_check,
    telescoped_genus_check,
)
from .bounds import ChernData, easy_bound_check
from .divisors import (
    DivisorClass,
    ample_degree_vectors,
    canonical_class,
    from_degrees,
    is_ample,
    sectional_genus,
)
from .errors import ToricaError
from .fan import Fan, blowup, canonical_form, hirzebruch, projective_plane, realize_profile


@dataclass(frozen=True)
class InventoryEntry:
    profile: tuple[int, ...]
    fan: Fan
    seed: str
    schedule: tuple[int, ...]

    @property
    def e(self) -> int:
        return self.fan.e

    def to_json(self) -> dict:
        return {
            "profile": list(self.profile),
            "rays": [list(v) for v in self.fan.rays],
            "seed": self.seed,
            "schedule": list(self.schedule),
        }


@dataclass
class SurfaceInventory:
    entries: list[InventoryEntry]
    e_max: int
    a_max: int

    def __len__(self) -> int:
        return len(self.entries)

    def by_euler(self, e: int) -> list[InventoryEntry]:
        return [x for x in self.entries if x.e == e]

    def find(self, profile: Sequence[int]) -> InventoryEntry | None:
        key = canonical_form(profile)
        for x in self.entries:
            if x.profile == key:
                return x
        return None

    def to_json(self) -> dict:
        return {
            "params": {"e_max": self.e_max, "a_max": self.a_max},
            "incomplete": f"surfaces needing a Hirzebruch seed F_a with a > {self.a_max} are absent",
            "surface_count": len(self.entries),
            "entries": [x.to_json() for x in self.entries],
        }


def enumerate_surfaces(e_max: int, a_max: int) -> SurfaceInventory:
    """Blowup closure of P2 and F_0..F_{a_max}, up to ``e_max`` rays."""
    if e_max < 3 or a_max < 1:
        raise ValueError("need e_max >= 3 and a_max >= 1")
    seen: set[tuple[int, ...]] = set()
    entries: list[InventoryEntry] = []

    def add(fan: Fan, seed: str, schedule: tuple[int, ...]) -> InventoryEntry | None:
        key = fan.canonical
        if key in seen:
            return None
        seen.add(key)
        entry = InventoryEntry(key, fan, seed, schedule)
        entries.append(entry)
        return entry

    level = [add(projective_plane(), "P2", ())]
    for e in range(4, e_max + 1):
        nxt = []
        if e == 4:
            for a in range(a_max + 1):
                x = add(hirzebruch(a), f"F{a}", ())
                if x:
                    nxt.append(x)
        for parent in level:
            for corner in range(parent.e):
                x = add(blowup(parent.fan, corner), parent.seed, parent.schedule + (corner,))
                if x:
                    nxt.append(x)
        level = nxt
    return SurfaceInventory(entries, e_max, a_max)


def blowup_schedule(seed: Fan, target: Sequence[int]) -> tuple[int, ...] | None:
    """Corners whose successive blowups turn ``seed`` into a fan with profile ``target``."""
    goal = canonical_form(target)
    level = {seed.canonical: (seed, ())}
    while True:
        for fan, sched in level.values():
            if fan.canonical == goal:
                return sched
        if not level or next(iter(level.values()))[0].e >= len(goal):
            return None
        nxt: dict = {}
        for fan, sched in level.values():
            for c in range(fan.e):
                child = blowup(fan, c)
                nxt.setdefault(child.canonical, (child, sched + (c,)))
        level = nxt


def enumerate_ample_degrees(S: Fan, t_max: int) -> list[tuple[int, ...]]:
    return ample_degree_vectors(S, t_max)


# -- exception fingerprints for polarizations with small H^2 ----------------


def polarized_fingerprint(S: Fan, degrees: Sequence[int], r: int) -> tuple:
    return (r, canonical_form(tuple(zip(S.profile, degrees))))


def _hirz_degrees(a: int, fiber: int, b: int) -> tuple[int, ...]:
    # class fiber*E + b*f on the standard F_a fan; E is ray 1
    return (fiber, b - a * fiber, fiber, b)


def small_square_exceptions() -> dict[tuple, str]:
    """Fingerprints of all ``(S, det E, r)`` with ``c1^2 <= r e``."""
    P2, hexagon = projective_plane(), realize_profile([-1] * 6)
    rows = [
        (P2, (1, 1, 1), 1, "(P2, O(1))"),
        (hirzebruch(0), _hirz_degrees(0, 1, 1), 1, "(F0, E+f)"),
        (hirzebruch(0), _hirz_degrees(0, 1, 2), 1, "(F0, E+2f)"),
        (hirzebruch(1), _hirz_degrees(1, 1, 2), 1, "(F1, E+2f)"),
        (hirzebruch(2), _hirz_degrees(2, 1, 3), 1, "(F2, E+3f)"),
        (P2, (2, 2, 2), 2, "(P2, O(1)+O(1))"),
        (hexagon, (1,) * 6, 1, "(S6, -K)"),
        (hirzebruch(0), _hirz_degrees(0, 2, 2), 2, "(F0, (E+f)+(E+f))"),
        (P2, (3, 3, 3), 3, "(P2, O(1)+O(1)+O(1))"),
    ]
    return {polarized_fingerprint(S, t, r): name for S, t, r, name in rows}


# -- verification sweep -----------------------------------------------------


CHECKS = (
    "kl",
    "easy_bound",
    "small_square_exceptions",
    "adjunction_sequence",
    "step_inequality",
    "blowup_bound",
    "telescoped_genus",
    "fibration_bound",
    "rK_plus_H_nef",
)


@dataclass
class CounterexampleRecord:
    bound: str
    profile: tuple[int, ...]
    degrees: tuple[int, ...]
    r: int | None
    lhs: object
    rhs: object
    context: str = ""

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "profile": list(self.profile),
            "degrees": list(self.degrees),
            "r": self.r,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "context": self.context,
        }


@dataclass
class _Tally:
    checks: dict = field(default_factory=lambda: {c: {"pass": 0, "fail": 0, "equality_cases": []} for c in CHECKS})
    counterexamples: list = field(default_factory=list)
    instances: int = 0
    fingerprints: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def ok(self, name: str, equality: dict | None = None) -> None:
        self.checks[name]["pass"] += 1
        if equality is not None:
            self.checks[name]["equality_cases"].append(equality)

    def bad(self, rec: CounterexampleRecord) -> None:
        self.checks[rec.bound]["fail"] += 1
        self.counterexamples.append(rec)

    def note(self, key: str, k: int = 1) -> None:
        self.notes[key] = self.notes.get(key, 0) + k

    def merge(self, other: "_Tally") -> None:
        for c in CHECKS:
            for k in ("pass", "fail"):
                self.checks[c][k] += other.checks[c][k]
            self.checks[c]["equality_cases"].extend(other.checks[c]["equality_cases"])
        self.counterexamples.extend(other.counterexamples)
        self.instances += other.instances
        for k, v in other.fingerprints.items():
            self.fingerprints.setdefault(k, v)
        for k, v in other.notes.items():
            self.note(k, v)


def _check_sequence(t: _Tally, S: Fan, L, tag: str, r) -> None:
    prof, deg = S.profile, L.degrees
    try:
        seq = iterated_sequence(S, L)
    except ToricaError as exc:
        t.bad(CounterexampleRecord("adjunction_sequence", prof, deg, r, type(exc).__name__, None, f"{tag}: {exc}"))
        return
    t.ok("adjunction_sequence")
    for k, (x, y, halved, doubled) in enumerate(seq.step_inequalities()):
        if halved:
            t.ok("step_inequality")
        else:
            t.bad(CounterexampleRecord("step_inequality", prof, deg, r, y, x // 2, f"{tag}: step {k}"))
        if isinstance(seq.outcomes[k], Reduced):
            if doubled:
                t.ok("blowup_bound")
            else:
                t.bad(CounterexampleRecord("blowup_bound", prof, deg, r, x, 2 * y, f"{tag}: step {k}"))
    if seq.length >= 1:
        chk = telescoped_genus_check(seq)
        if not chk.floor_applies:
            t.note(f"genus floor not applicable ({seq.terminal.kind} at b)")
        if chk.ok:
            t.ok("telescoped_genus")
        else:
            t.bad(CounterexampleRecord("telescoped_genus", prof, deg, r, chk.diff(), -2, tag))
    for k, out in enumerate(tuple(seq.outcomes) + (seq.terminal,)):
        if isinstance(out, Fibration):
            Sk = seq.steps[k][0]
            if fibration_bound_holds(Sk, out):
                t.ok("fibration_bound")
            else:
                t.bad(CounterexampleRecord("fibration_bound", prof, deg, r, Sk.e, 2 + 2 * out.fiber_degree, tag))
    t.note(f"terminal:{seq.terminal.kind}")


def _verify_surface(args) -> _Tally:
    fan, t_max, r_set, expected = args
    t = _Tally()
    e = fan.e
    K = canonical_class(fan)
    prof = fan.profile
    for deg in ample_degree_vectors(fan, t_max):
        H = from_degrees(fan, deg)
        h2 = H.square
        mK_H = sum(deg)
        lo = min(deg)
        _check_sequence(t, fan, H, "H", None)
        for r in r_set:
            if lo < r:
                continue
            t.instances += 1
            # Lemma: -K.H >= r e
            if kl_check(fan, H, r):
                t.ok("kl", {"profile": list(prof), "degrees": list(deg), "r": r} if mK_H == r * e else None)
            else:
                t.bad(CounterexampleRecord("kl", prof, deg, r, mK_H, r * e))
            if e >= 5:
                rep = easy_bound_check(ChernData(r, h2, 0, e, H))
                if rep.verdict:
                    t.ok("easy_bound", {"profile": list(prof), "degrees": list(deg), "r": r} if rep.equality else None)
                else:
                    t.bad(CounterexampleRecord("easy_bound", prof, deg, r, h2, r * r * e, "; ".join(rep.notes)))
                rKH = H + K * r
                if min(rKH.degrees) >= 0:
                    t.ok("rK_plus_H_nef")
                else:
                    t.bad(CounterexampleRecord("rK_plus_H_nef", prof, deg, r, list(rKH.degrees), 0))
            if h2 <= r * e:
                fp = polarized_fingerprint(fan, deg, r)
                info = {"profile": list(prof), "degrees": list(deg), "r": r, "c1sq": h2, "e": e,
                        "genus": sectional_genus(H)}
                if fp in expected:
                    info["match"] = expected[fp]
                    t.fingerprints.setdefault(fp, info)
                    t.ok("small_square_exceptions", info)
                else:
                    t.bad(CounterexampleRecord("small_square_exceptions", prof, deg, r, h2, r * e, "not in exception list"))
            if r >= 2 and e >= 7:
                L = K * 1 + H * (r - 1)
                if is_ample(L):
                    _check_sequence(t, fan, L, f"K+{r - 1}H", r)
                else:
                    t.note("K+(r-1)H not ample")
    return t


def worker_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("TORICA_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


@dataclass
class VerificationResult:
    params: dict
    surface_count: int
    instance_count: int
    checks: dict
    counterexamples: list[CounterexampleRecord]
    exceptions_found: list[dict]
    exceptions_expected: list[str]
    exceptions_missing: list[str]
    notes: dict

    @property
    def ok(self) -> bool:
        return not self.counterexamples and not self.exceptions_missing

    def to_json(self) -> dict:
        return {
            "params": self.params,
            "surface_count": self.surface_count,
            "instance_count": self.instance_count,
            "checks": self.checks,
            "counterexamples": [c.to_json() for c in self.counterexamples],
            "small_square_exceptions": {
                "found": self.exceptions_found,
                "expected": self.exceptions_expected,
                "missing": self.exceptions_missing,
            },
            "notes": dict(sorted(self.notes.items())),
        }


def run_verification(
    inventory: SurfaceInventory,
    t_max: int,
    r_set: Iterable[int] = (1, 2, 3),
    e_min: int = 5,
    workers: int | None = None,
) -> VerificationResult:
    """Run every check on each ``(S, ample H, r)`` with ``min(H.D_i) >= r``."""
    r_set = tuple(sorted(set(r_set)))
    fans = [x.fan for x in inventory.entries if x.e >= e_min]
    if not fans:
        raise ValueError("no surfaces in range")
    expected = small_square_exceptions()
    jobs = [(f, t_max, r_set, expected) for f in fans]
    total = _Tally()
    n = worker_count(workers)
    if n == 1:
        parts = map(_verify_surface, jobs)
        for part in parts:
            total.merge(part)
    else:
        with ProcessPoolExecutor(max_workers=n) as ex:
            for part in ex.map(_verify_surface, jobs, chunksize=4):
                total.merge(part)

    # expected exceptions that the sampled range could contain
    e_lo, e_hi = e_min, max(f.e for f in fans)
    reachable = []
    for fp, name in expected.items():
        r, pairs = fp
        if r in r_set and e_lo <= len(pairs) <= e_hi and max(t for _, t in pairs) <= t_max:
            if inventory.find([d for d, _ in pairs]) is not None:
                reachable.append((fp, name))
    missing = sorted(name for fp, name in reachable if fp not in total.fingerprints)
    found = [total.fingerprints[fp] for fp in sorted(total.fingerprints)]
    params = {
        "e_min": e_min,
        "e_max": inventory.e_max,
        "a_max": inventory.a_max,
        "t_max": t_max,
        "r": list(r_set),
    }
    return VerificationResult(
        params,
        len(fans),
        total.instances,
        total.checks,
        total.counterexamples,
        found,
        sorted(name for _, name in reachable),
        missing,
        total.notes,
    )


# -- tightness of -K.H >= e --------------------------------------------------


@dataclass(frozen=True)
class ExtremalInstance:
    profile: tuple[int, ...]
    fan: Fan
    degrees: tuple[int, ...]
    alternating: bool

    def to_json(self) -> dict:
        return {"profile": list(self.profile), "degrees": list(self.degrees), "alternating": self.alternating}


def _is_alternating(profile: Sequence[int]) -> bool:
    n = len(profile)
    return n % 2 == 0 and all(profile[i] == profile[i % 2] for i in range(n))


def find_extremal(inventory: SurfaceInventory, t_max: int = 1) -> list[ExtremalInstance]:
    """All sampled ``(S, H)`` with ``-K.H = e``, i.e. every degree equal to 1."""
    out = []
    for entry in inventory.entries:
        if t_max < 1:
            break
        fan = entry.fan
        ones = (1,) * fan.e
        if sum(x for x, _ in fan.rays) == 0 and sum(y for _, y in fan.rays) == 0:
            out.append(ExtremalInstance(entry.profile, fan, ones, _is_alternating(entry.profile)))
    return out


def alternating_extremal_profiles(e_max: int, d_range: Iterable[int] = range(-12, 3)) -> dict[int, list[tuple[int, int]]]:
    """Period-two profiles ``(a, b)*(e/2)`` realizable as fans, per even ``e``.

    For each such fan the all-ones degree vector is ample with ``-K.H = e``.
    """
    d_values = list(d_range)
    out: dict[int, list[tuple[int, int]]] = {}
    for e in range(4, e_max + 1, 2):
        found = []
        for a in d_values:
            for b in d_values:
                if a > b:
                    continue
                try:
                    fan = realize_profile([a, b] * (e // 2))
                except ToricaError:
                    continue
                if sum(x for x, _ in fan.rays) == 0 and sum(y for _, y in fan.rays) == 0:
                    found.append((a, b))
        out[e] = found
    return out


# -- the 12-ray extremal example ----------------------------------------------

TWELVE_RAY_PROFILE = (-3, -1) * 6
TWELVE_RAY_ALTERNATING = (3, 5) * 6
TWELVE_RAY_PRINTED = (3, 5, 3, 5, 3, 5, 3, 5, 3, 3, 3, 5)


def twelve_ray_example() -> dict:
    """The blowup of P2 with profile ``(-3, -1)*6`` and its extremal class.

    The alternating coefficients ``(3, 5)*6`` give every degree 1.  The
    coefficient list as printed in the literature differs at position 10 and
    breaks the degrees at the 1-based positions returned in
    ``printed_bad_positions``.
    """
    S = realize_profile(TWELVE_RAY_PROFILE)
    L = DivisorClass(S, TWELVE_RAY_ALTERNATING)
    P = DivisorClass(S, TWELVE_RAY_PRINTED)
    bad = [i + 1 for i, t in enumerate(P.degrees) if t != 1]
    return {
        "profile": list(S.profile),
        "rays": [list(v) for v in S.rays],
        "coefficients": list(L.coefficients),
        "degrees": list(L.degrees),
        "anticanonical_degree": sum(L.degrees),
        "square": L.square,
        "genus": sectional_genus(L),
        "K_square": canonical_class(S).square,
        "printed_coefficients": list(P.coefficients),
        "printed_degrees": list(P.degrees),
        "printed_bad_positions": bad,
    }
