"""Seeded generators shared by the test modules."""

import random

from torica.adjunction import pullback_under_blowdown
from torica.divisors import DivisorClass, ample_degree_vectors, from_degrees
from torica.fan import Fan, blowdown, blowup, hirzebruch, projective_plane, transform

SEEDS = [projective_plane()] + [hirzebruch(a) for a in range(4)]
GENERATORS = [((0, -1), (1, 0)), ((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, 1), (1, 0)), ((-1, 0), (0, 1))]


def random_unimodular(rng: random.Random, steps: int = 6):
    m = ((1, 0), (0, 1))
    for _ in range(rng.randint(0, steps)):
        (a, b), (c, d) = m
        (p, q), (r, s) = rng.choice(GENERATORS)
        m = ((p * a + q * c, p * b + q * d), (r * a + s * c, r * b + s * d))
    return m


def rotate(fan: Fan, k: int) -> Fan:
    k %= fan.e
    return Fan(fan.rays[k:] + fan.rays[:k])


def random_fan(rng: random.Random, max_blowups: int = 6, mix: bool = True) -> Fan:
    S = rng.choice(SEEDS)
    for _ in range(rng.randint(0, max_blowups)):
        S = blowup(S, rng.randrange(S.e))
    if mix:
        S = rotate(transform(S, random_unimodular(rng)), rng.randrange(S.e))
    return S


def random_class(rng: random.Random, S: Fan, bound: int = 6) -> DivisorClass:
    return DivisorClass(S, tuple(rng.randint(-bound, bound) for _ in range(S.e)))


def random_ample(rng: random.Random, S: Fan, t_max: int = 3) -> DivisorClass:
    """A random ample class: box sampling when cheap, else a blowup construction."""
    vecs = ample_degree_vectors(S, t_max) if S.e <= 9 else []
    if vecs:
        return from_degrees(S, rng.choice(vecs))
    return ample_by_blowdown(S)


def ample_by_blowdown(S: Fan) -> DivisorClass:
    # contract (-1)-rays down to a minimal fan, then lift 2 pi^* L - E back up
    records = []
    while S.e > 3 and -1 in S.profile:
        rec = blowdown(S, S.profile.index(-1))
        records.append(rec)
        S = rec.child
    L = from_degrees(S, ample_degree_vectors(S, S.e + max(map(abs, S.profile)))[0])
    for rec in reversed(records):
        b = list(pullback_under_blowdown(L * 2, rec).coefficients)
        b[rec.removed_ray_index] -= 1
        L = DivisorClass(rec.parent, tuple(b))
    return L
