from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forge import radix
from forge.errors import DomainError, InvalidBase, NoSecondDigit, NotInS, RangeError, SuccessorUnbounded
from forge.radix import BasePair, DWitness


def digits_oracle(y: int, k: int) -> list[int]:
    """Most significant first; written independently of radix.k_digits."""
    if k == 2:
        return [int(c) for c in bin(y)[2:]]
    out = []
    while y:
        out.append(y % k)
        y //= k
    return out[::-1]


def owner_oracle(k: int, ell: int, b: int):
    d = digits_oracle(ell**b, k)
    if d[0] != 1:
        return None
    for pos, c in enumerate(d[1:], start=1):
        if c:
            return len(d) - 1 - pos
    return None


@pytest.mark.parametrize(
    "k, ell, expected",
    [(2, 3, True), (4, 2, False), (8, 4, False), (6, 10, True), (12, 18, True), (9, 27, False), (2, 6, True)],
)
def test_mult_independent(k, ell, expected):
    assert radix.mult_independent(k, ell) is expected


def test_mult_independent_brute_force_agreement():
    for k in range(2, 9):
        for ell in range(2, 9):
            dependent = any(k**a == ell**b for a in range(1, 7) for b in range(1, 7))
            assert radix.mult_independent(k, ell) is (not dependent)


def test_invalid_bases():
    with pytest.raises(InvalidBase):
        radix.mult_independent(1, 3)
    with pytest.raises(InvalidBase):
        BasePair(4, 2)


def test_lambda_floor_examples():
    assert radix.lambda_floor(243, 2) == 7
    assert radix.lambda_floor(1, 2) == 0
    assert radix.lambda_floor(80, 3) == 3
    with pytest.raises(DomainError):
        radix.lambda_floor(0, 2)


@given(st.integers(min_value=1, max_value=10**60), st.integers(min_value=2, max_value=17))
def test_lambda_window(y, k):
    e = radix.lambda_floor(y, k)
    assert k**e <= y < k ** (e + 1)


def test_second_power():
    assert radix.second_power(243, 2) == 6
    assert radix.second_power(729, 2) == 7
    with pytest.raises(NoSecondDigit):
        radix.second_power(8, 2)


def test_s_member_examples(b23):
    assert radix.s_member(b23, 6, 5)
    assert not radix.s_member(b23, 7, 5)
    assert not radix.s_member(b23, 3, 0)
    assert radix.s_member(b23, 7, 6) and radix.s_member(b23, 7, 7)


def test_s_scan(b23):
    assert radix.s_scan(b23, 7, 5, 7) == [6, 7]
    assert radix.s_scan(b23, 6, 5, 7) == [5]
    assert radix.s_scan(b23, 0, 1, 1) == [1]
    with pytest.raises(RangeError):
        radix.s_scan(b23, 0, 3, 2)


@pytest.mark.parametrize("k, ell", [(2, 3), (3, 5), (2, 5), (5, 7)])
def test_owner_matches_digit_oracle(k, ell):
    bp = BasePair(k, ell)
    for b in range(0, 150):
        assert radix.s_owner(bp, b) == owner_oracle(k, ell, b)


@pytest.mark.parametrize("k, ell", [(2, 3), (3, 5), (2, 5), (10, 3)])
def test_profile_matches_owner(k, ell):
    bp = BasePair(k, ell)
    assert list(radix.iter_s_profile(bp, 400)) == [(m, radix.s_owner(bp, m)) for m in range(401)]


def test_sigma1():
    assert radix.sigma1(0, 5) == 5
    assert radix.sigma1(1, 3) == 4
    assert radix.sigma1(3, 2) == 5


def test_sigma2(b23):
    assert radix.sigma2(b23, 7, 6, 10) == 7
    assert radix.sigma2(b23, 7, 7, 8) is None
    with pytest.raises(NotInS):
        radix.sigma2(b23, 6, 4, 100)


def test_sigma2_iter_walks_both_ways(b23):
    members = radix.s_scan(b23, 0, 0, 50)
    assert members[:2] == [1, 2]
    assert radix.sigma2_iter(b23, 0, 1, 1, 50) == 2
    assert radix.sigma2_iter(b23, 0, 2, -1, 50) == 1
    assert radix.sigma2_iter(b23, 0, 1, -1, 50) is None
    assert radix.sigma2_iter(b23, 0, 1, 0, 50) == 1


def test_theta_count(b23):
    # 3 and 9 lie in S(1); nothing lies strictly between them
    assert radix.theta_count(b23, 0, 3, 1, 6) == 0
    with pytest.raises(SuccessorUnbounded):
        radix.theta_count(b23, 7, 3, 7, 8)


def test_theta_count_on_realised_pattern(b23):
    # word 010 is realised at n=52 by exponents 34, 35, 36 (rows 52, 53, 52)
    assert radix.theta_count(b23, 52, 53, 34, 40) == 1
    assert radix.theta_count(b23, 52, 54, 34, 40) == 0


def test_theta_count_stable_under_larger_cap(b23):
    assert radix.theta_count(b23, 52, 53, 34, 36) == radix.theta_count(b23, 52, 53, 34, 5000)


@pytest.mark.parametrize("c, u, bits", [(0, 2, [False, False]), (1, 2, [True, False]), (3, 2, [True, True])])
def test_omega_bits(monkeypatch, b23, c, u, bits):
    monkeypatch.setattr(radix, "theta_count", lambda *a, **k: c)
    assert [radix.omega_member(b23, u, v, 0, 0, 0, 10) for v in range(1, u + 1)] == bits


def test_omega_monotone_in_u(monkeypatch, b23):
    for c in range(8):
        monkeypatch.setattr(radix, "theta_count", lambda *a, c=c, **k: c)
        for u in range(1, 4):
            for v in range(1, u + 1):
                if c < 2**u and radix.omega_member(b23, u, v, 0, 0, 0, 10):
                    assert radix.omega_member(b23, u + 1, v, 0, 0, 0, 10)


def test_omega_rejects_bad_index(b23):
    with pytest.raises(DomainError):
        radix.omega_member(b23, 2, 3, 52, 53, 34, 40)


def test_d_check(b23):
    assert radix.d_check(b23, DWitness(0, 0, 1, 1)) == (0, 0)
    assert radix.d_check(b23, DWitness(1, 0, 1, 1)) is None
    assert radix.d_check(b23, DWitness(52, 53, 34, 36)) == (1, 1)
    with pytest.raises(RangeError):
        radix.d_check(b23, DWitness(52, 53, 34, 36), m_max=35)


@settings(max_examples=50)
@given(st.integers(0, 30), st.integers(0, 4), st.integers(0, 60), st.integers(0, 20))
def test_d_check_rank(a1, extra, b1, span):
    bp = BasePair(2, 3)
    res = radix.d_check(bp, DWitness(a1, a1 + extra, b1, b1 + span))
    if res is not None:
        assert res[0] == extra


def test_baker_gap(b23):
    res = radix.baker_gap_scan(b23, 30, 30)
    assert res.min_gap == 1
    assert (2, 1) in res.witnesses and (1, 1) in res.witnesses
    assert radix.baker_gap_scan(b23, 1, 1).min_gap == 1
    assert radix.baker_gap_scan(BasePair(3, 5), 1, 1).min_gap == 2


def test_baker_gap_monotone(b23):
    prev = None
    for n in range(1, 15):
        g = radix.baker_gap_scan(b23, n, n).min_gap
        assert prev is None or g <= prev
        prev = g


def test_baker_gap_brute_force(b23):
    gaps = {abs(2**a - 3**b) for a in range(1, 13) for b in range(1, 9)}
    assert radix.baker_gap_scan(b23, 12, 8).min_gap == min(gaps)
