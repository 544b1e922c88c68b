import random

import pytest

from helpers import random_ample, random_class, random_fan
from torica.bogomolov import (
    CASE2_CONSTRAINTS,
    at_least_q_plus_sqrt_q,
    bog_restriction_check,
    case2_infeasibility_oracle,
    destabilizer_search,
    eq1_check,
    hodge_inequality_holds,
    is_unstable,
    min_ample_square,
)
from torica.bounds import ChernData
from torica.divisors import ample_degree_vectors, canonical_class, divisor, from_degrees, intersect, is_ample
from torica.errors import NonPositiveSquare, NotUnstable, RankNotTwo
from torica.fan import hirzebruch, projective_plane, realize_profile
from torica.harness import enumerate_surfaces

P2 = projective_plane()
F0 = hirzebruch(0)


def quadric(p, q):
    return from_degrees(F0, [q, p, q, p])


def test_is_unstable():
    assert is_unstable(ChernData(2, 16, 3))
    assert not is_unstable(ChernData(2, 9, 3))
    assert not is_unstable(ChernData(2, 12, 3))
    with pytest.raises(RankNotTwo):
        is_unstable(ChernData(3, 16, 3))


def test_exact_sqrt_comparison():
    assert at_least_q_plus_sqrt_q(4, 2)
    assert not at_least_q_plus_sqrt_q(3, 2)
    for q in range(0, 400):
        for x in range(0, 450):
            assert at_least_q_plus_sqrt_q(x, q) == ((x - q) >= 0 and (x - q) ** 2 >= q)


def test_eq1_examples():
    assert eq1_check(divisor(P2, [3, 0, 0]), divisor(P2, [4, 0, 0]))
    assert not eq1_check(divisor(P2, [2, 0, 0]), divisor(P2, [4, 0, 0]))
    assert eq1_check(quadric(2, 2), quadric(3, 3))
    with pytest.raises(NonPositiveSquare):
        eq1_check(divisor(P2, [4, 0, 0]), divisor(P2, [4, 0, 0]))


@pytest.mark.parametrize(
    "H, c2, A",
    [
        (divisor(P2, [4, 0, 0]), 3, (0, 0, 3)),
        (divisor(P2, [3, 0, 0]), 2, (0, 0, 2)),
        (quadric(3, 3), 4, (0, 0, 2, 2)),
    ],
)
def test_destabilizer_goldens(H, c2, A):
    cands = destabilizer_search(H.fan, H, c2, 6)
    assert len(cands) == 1
    (c,) = cands
    assert c.A.coefficients == A
    assert c.deg_Z == 0
    assert c.eq1


def test_destabilizer_outputs_satisfy_invariants():
    for H, c2 in [(divisor(P2, [5, 0, 0]), 4), (quadric(3, 4), 5), (quadric(4, 4), 6)]:
        for c in destabilizer_search(H.fan, H, c2, 5):
            assert is_ample(c.Q)
            assert c.T.square > 0
            assert intersect(c.T, H) > 0
            assert c.deg_Z >= 0
            assert c.deg_Z == c2 - intersect(c.A, c.Q)
            assert hodge_inequality_holds(c.Q, c.T)


def test_search_finds_unstable_split_summand():
    for a, b in [(1, 2), (1, 3), (2, 4)]:
        A, B = divisor(P2, [b, 0, 0]), divisor(P2, [a, 0, 0])
        H = A + B
        cands = destabilizer_search(P2, H, intersect(A, B), 6)
        assert any(c.A.degrees == A.degrees for c in cands)


def test_search_preconditions():
    with pytest.raises(NotUnstable):
        destabilizer_search(P2, divisor(P2, [3, 0, 0]), 3, 3)
    with pytest.raises(ValueError):
        destabilizer_search(P2, divisor(P2, [1, 0, 0]), 0, 3)


def test_case2_oracle():
    assert case2_infeasibility_oracle(12, 40, 5).empty
    assert not case2_infeasibility_oracle(8, 20, 3, drop=["item3"]).empty
    with pytest.raises(ValueError):
        case2_infeasibility_oracle(3, 3, 1, drop=["nope"])
    assert len(CASE2_CONSTRAINTS) == 9


def test_case2_half_of_item3_is_redundant():
    # with 2beta > y kept, (2A-H)^2 > 0 already forces 2alpha > x
    assert case2_infeasibility_oracle(12, 40, 5, drop=["2alpha>x"]).empty


def test_min_ample_square():
    assert min_ample_square(P2, 3) == 1
    assert min_ample_square(F0, 3) == 2
    assert min_ample_square(realize_profile((-3, -1) * 6), 3) == 48


def test_restriction_check():
    rep = bog_restriction_check(P2, divisor(P2, [4, 0, 0]), 3)
    assert rep.verdict
    S6 = realize_profile([-1] * 6)
    rep = bog_restriction_check(S6, canonical_class(S6) * -2, 6)
    assert rep.verdict and any("not unstable" in n for n in rep.notes)


def test_restriction_sweep_small():
    for x in enumerate_surfaces(7, 2).entries:
        if x.e < 5:
            continue
        for t in ample_degree_vectors(x.fan, 3):
            if min(t) < 2:
                continue
            H = from_degrees(x.fan, t)
            for c2 in range(1, x.e + 1):
                if H.square > 4 * c2:
                    assert bog_restriction_check(x.fan, H, c2, box=2).verdict


def test_hodge_on_random_pairs():
    rng = random.Random(13)
    for _ in range(100):
        S = random_fan(rng)
        P = random_ample(rng, S)
        T = random_class(rng, S)
        assert hodge_inequality_holds(P, T)
    H = divisor(P2, [1, 0, 0])
    K = canonical_class(P2)
    assert H.square * K.square == intersect(H, K) ** 2
