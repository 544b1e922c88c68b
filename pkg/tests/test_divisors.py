import random

import pytest

from helpers import random_class, random_fan
from torica.divisors import (
    ample_degree_vectors,
    anticanonical_degree,
    canonical_class,
    closure_defect,
    divisor,
    divisor_from_json,
    divisor_to_json,
    from_degrees,
    intersect,
    is_ample,
    is_nef,
    linear_equivalent,
    load_divisor,
    normalize,
    principal,
    sectional_genus,
)
from torica.errors import FanMismatch, InconsistentDegrees
from torica.fan import hirzebruch, projective_plane, realize_profile
from torica.harness import enumerate_surfaces

TWELVE = realize_profile((-3, -1) * 6)


def test_canonical_square():
    assert canonical_class(projective_plane()).square == 9
    assert canonical_class(TWELVE).square == 0
    for a in range(4):
        assert canonical_class(hirzebruch(a)).square == 8


def test_degree_vectors():
    assert divisor(projective_plane(), [1, 0, 0]).degrees == (1, 1, 1)
    L = divisor(TWELVE, (3, 5) * 6)
    assert L.degrees == (1,) * 12
    assert anticanonical_degree(L) == 12
    assert L.square == 48
    assert sectional_genus(L) == 19
    assert is_ample(L)


def test_canonical_degrees_match_adjunction():
    rng = random.Random(3)
    for _ in range(50):
        S = random_fan(rng)
        K = canonical_class(S)
        assert K.degrees == tuple(-2 - d for d in S.profile)
        assert not is_nef(K)


def test_intersections():
    P2 = projective_plane()
    assert intersect(divisor(P2, [2, 0, 0]), divisor(P2, [3, 0, 0])) == 6
    F0 = hirzebruch(0)
    assert from_degrees(F0, [2, 1, 2, 1]).square == 4
    with pytest.raises(FanMismatch):
        intersect(divisor(P2, [1, 0, 0]), divisor(F0, [1, 0, 0, 0]))


def test_genus():
    assert sectional_genus(divisor(projective_plane(), [1, 0, 0])) == 0
    rng = random.Random(5)
    for _ in range(30):
        S = random_fan(rng)
        assert sectional_genus(-canonical_class(S)) == 1


def test_from_degrees():
    P2 = projective_plane()
    assert linear_equivalent(from_degrees(P2, [1, 1, 1]), divisor(P2, [1, 0, 0]))
    with pytest.raises(InconsistentDegrees):
        from_degrees(P2, [1, 2, 1])
    with pytest.raises(ValueError):
        from_degrees(P2, [1, 1])


def test_linear_equivalence():
    P2 = projective_plane()
    assert linear_equivalent(divisor(P2, [0, 1, 0]), divisor(P2, [1, 0, 0]))
    assert not linear_equivalent(divisor(P2, [2, 0, 0]), divisor(P2, [1, 0, 0]))
    L = divisor(TWELVE, (3, 5) * 6)
    assert linear_equivalent(L, L + principal(TWELVE, (7, -4)))


def test_principal_divisors_have_zero_degrees():
    rng = random.Random(8)
    for _ in range(50):
        S = random_fan(rng)
        u = (rng.randint(-9, 9), rng.randint(-9, 9))
        assert principal(S, u).degrees == (0,) * S.e


def test_normalize_pins_first_two():
    rng = random.Random(9)
    for _ in range(50):
        S = random_fan(rng)
        N = normalize(random_class(rng, S))
        assert N.coefficients[:2] == (0, 0)


def test_ample_degree_vectors_examples():
    assert ample_degree_vectors(projective_plane(), 2) == [(1, 1, 1), (2, 2, 2)]
    F0 = ample_degree_vectors(hirzebruch(0), 2)
    assert sorted(F0) == sorted((q, p, q, p) for p in (1, 2) for q in (1, 2))
    assert ample_degree_vectors(TWELVE, 1) == [(1,) * 12]


def test_ample_degree_vectors_complete_against_brute_force():
    from itertools import product

    for S in [hirzebruch(2), realize_profile([-1] * 6), realize_profile([-2, -1] * 4)]:
        brute = sorted(t for t in product(range(1, 4), repeat=S.e) if closure_defect(S, t) == (0, 0))
        assert ample_degree_vectors(S, 3) == brute
        for t in brute:
            assert is_ample(from_degrees(S, t))


def test_some_ray_has_d_at_least_minus_one():
    inv = enumerate_surfaces(10, 3)
    for x in inv.entries:
        assert max(x.fan.profile) >= -1
        assert not is_nef(canonical_class(x.fan))


def test_json_forms(tmp_path):
    P2 = projective_plane()
    L, form = divisor_from_json(P2, {"degrees": [2, 2, 2]})
    assert form == "degrees" and L.coefficients == (0, 0, 2)
    M, form = divisor_from_json(P2, {"coefficients": [1, 1, 0]})
    assert form == "coefficients" and linear_equivalent(L, M)
    with pytest.raises(ValueError):
        divisor_from_json(P2, {"coefficients": [1, 0, 0], "degrees": [1, 1, 1]})
    p = tmp_path / "d.json"
    p.write_text('{"degrees": [1, 1, 1]}')
    assert load_divisor(P2, p)[1] == "degrees"
    assert divisor_to_json(M) == {"coefficients": [1, 1, 0], "degrees": [2, 2, 2]}


def test_arithmetic():
    P2 = projective_plane()
    H = divisor(P2, [1, 0, 0])
    assert (H * 3).square == 9
    assert (3 * H - H).square == 4
    assert (-H).degrees == (-1, -1, -1)
