from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forge import pattern as P
from forge.errors import BudgetExhausted, DomainError, ShapeError
from forge.pattern import Budget, Interval, PatternWitness
from forge.radix import BasePair

B23 = BasePair(2, 3)


def row_of(m: int) -> int | None:
    """Row of 3^m via its binary expansion; independent of forge.radix."""
    bits = bin(3**m)[3:]
    idx = bits.find("1")
    return None if idx < 0 else len(bits) - 1 - idx


def oracle_realises(word, R, n, ms) -> bool:
    if any(a >= b for a, b in zip(ms, ms[1:])):
        return False
    if any(row_of(m) != n + c for c, m in zip(word, ms)):
        return False
    marks = set(ms)
    return all(
        m in marks or row_of(m) is None or not 0 <= row_of(m) - n < R for m in range(ms[0], ms[-1] + 1)
    )


# -- mu, nu, U -------------------------------------------------------------------------


@pytest.mark.parametrize("x, k, z", [(Fraction(1), 2, 0), (Fraction(7, 2), 2, 1), (Fraction(1, 3), 2, -2), (Fraction(1, 9), 3, -2)])
def test_floor_log(x, k, z):
    assert P.floor_log(x, k) == z


@given(st.integers(1, 10**12), st.integers(1, 10**12), st.integers(2, 9))
def test_floor_log_window(p, q, k):
    x = Fraction(p, q)
    z = P.floor_log(x, k)
    assert P.kpow_q(k, z) <= x < P.kpow_q(k, z + 1)


def test_nu_examples():
    assert P.nu_of(Fraction(3), 2) == 2
    assert P.nu_of(Fraction(1), 2) == 0
    assert P.nu_of(Fraction(1, 3), 2) == -2
    assert P.nu_of(Fraction(1, 9), 2) == -3


@given(st.integers(1, 10**9), st.integers(1, 10**9))
def test_nu_matches_float_rounding(p, q):
    x = Fraction(p, q)
    m = P.nu_of(x, 2)
    assert 2 ** (2 * m - 1) <= x * x < Fraction(2) ** (2 * m + 1)
    assert abs(m - math.log2(p / q)) <= 0.5 + 1e-9


def test_u_of():
    assert P.u_of(B23, 1, 5) == 7
    assert P.u_of(B23, 2, 5) == 8
    with pytest.raises(DomainError):
        P.u_of(B23, 0, 5)


def test_first_refinement_interval():
    iv = P.refinement_interval(B23, 1, 5, 1)
    assert (iv.lo, iv.hi) == (Fraction(128, 3), Fraction(130, 3))


@given(st.integers(0, 40), st.integers(0, 40))
def test_mu_is_a_homomorphism(a, b):
    x, y = Fraction(1, 3**a), Fraction(3**b, 2**a)
    assert P.mu_of(x * y, 2) == P.circ_mul(P.mu_of(x, 2), P.mu_of(y, 2), 2)


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_mu_range(p, q):
    assert 1 <= P.mu_of(Fraction(p, q), 3) < 3


# -- intervals and disjoint selection ----------------------------------------------------


def test_interval_rejects_empty():
    with pytest.raises(DomainError):
        Interval(Fraction(1), Fraction(1))


def test_select_disjoint_skips_overlaps():
    I0 = Interval(Fraction(0), Fraction(10))
    stream = [
        Interval(Fraction(20), Fraction(21)),
        Interval(Fraction(2), Fraction(5)),
        Interval(Fraction(4), Fraction(6)),
        Interval(Fraction(6), Fraction(7)),
    ]
    assert list(P.iter_disjoint(I0, stream)) == [2, 4]
    assert P.select_disjoint(I0, stream, 10) == 2
    with pytest.raises(BudgetExhausted):
        P.select_disjoint(I0, stream, 1)


# -- safe constants ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "R, E, M, N",
    [(0, 2, 2, 5), (1, 2, 2, 6), (2, 2, 3, 7), (3, 2, 4, 8)],
)
def test_safe_constants_values(R, E, M, N):
    c = P.safe_constants(B23, R)
    assert (c.E, c.M, c.N) == (E, M, N)
    assert c.gap == Fraction(9, 8)
    assert c.delta == Fraction(4555500749, 2**32)


@pytest.mark.parametrize("bases", [B23, BasePair(2, 5), BasePair(3, 5), BasePair(3, 10)])
@pytest.mark.parametrize("R", [0, 1, 2, 3])
def test_safe_constants_invariants(bases, R):
    c = P.safe_constants(bases, R)
    assert all(P.check_safe_constants(bases, c).values())
    assert c.delta * c.delta < c.gap


@pytest.mark.parametrize("v", range(1, 6))
def test_k_arcs_disjoint(v):
    assert P.replay_disjoint_k(B23, P.safe_constants(B23, 2), v)


def test_k_arcs_overlap_when_delta_too_large():
    assert not P.k_arcs_disjoint(B23, Fraction(3, 2), [0, 1, 2])


# -- refinement --------------------------------------------------------------------------


@pytest.mark.parametrize("R, r, st_", [(1, 0, (52, 29)), (2, 0, (72, 41)), (2, 1, (53, 29))])
def test_find_refinement_values(R, r, st_):
    n = P.safe_constants(B23, R).N
    assert P.find_refinement(B23, R, n, r) == st_
    assert P.refinement_holds(B23, R, n, r, *st_)


def test_refinement_postconditions_independently():
    R, n, r = 2, 7, 1
    s, t = P.find_refinement(B23, R, n, r)
    lo, hi = Fraction(2**s, 3**t), Fraction(2**s + 2**R, 3**t)
    assert 2**n + 2**r <= lo and hi <= 2**n + 2 ** (r + 1)
    for v in range(1, t):
        for u in range(0, s + 10):
            a, b = Fraction(2**u, 3**v), Fraction(2**u + 2**R, 3**v)
            assert not (a < hi and lo < b)


def test_find_refinement_budget():
    with pytest.raises(BudgetExhausted):
        P.find_refinement(B23, 2, 7, 0, v_budget=5)
    with pytest.raises(DomainError):
        P.find_refinement(B23, 2, 7, 2)


def test_chain_nesting():
    chain = P.build_chain(B23, 2, (1, 0))
    assert chain.n0 == 7
    assert chain.steps == [(53, 29)]
    assert chain.is_nested(B23)


def test_chain_alphabet_bound():
    assert P.chain_alphabet_bound((0, 1), 2) == 2
    assert P.chain_alphabet_bound((0, 2), 2) == 3


# -- witnesses -----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "word, R, n, ms",
    [
        ((0,), 2, 3, (3,)),
        ((0, 0), 1, 7, (6, 7)),
        ((0, 0, 0), 2, 160, (102, 103, 106)),
        ((0, 1, 0), 2, 52, (34, 35, 36)),
    ],
)
def test_scan_witnesses(word, R, n, ms):
    w = P.find_pattern_witness(B23, word, R, "scan")
    assert w == PatternWitness(n, ms)
    assert P.verify_pattern_witness(B23, word, R, w)
    assert oracle_realises(word, R, n, ms)


def test_scan_exhausts_on_unrealised_word():
    with pytest.raises(BudgetExhausted):
        P.find_pattern_witness(B23, (0, 1, 1, 0), 2, "scan")


def test_chain_witness_single_letter():
    w = P.find_pattern_witness(B23, (0,), 2, "chain")
    assert w == PatternWitness(12, (12,))
    assert P.verify_pattern_witness(B23, (0,), 2, w)


def test_chain_witness_two_letters_exhausts():
    with pytest.raises(BudgetExhausted):
        P.find_pattern_witness(B23, (0, 0), 2, "chain", Budget(window=2000))


@pytest.mark.parametrize("bad", [PatternWitness(52, (35, 35, 36)), PatternWitness(52, (34, 35, 37)), PatternWitness(53, (34, 35, 36))])
def test_corrupted_witness_rejected(bad):
    assert not P.verify_pattern_witness(B23, (0, 1, 0), 2, bad)


def test_witness_shape_errors():
    with pytest.raises(ShapeError):
        P.verify_pattern_witness(B23, (0, 1), 2, PatternWitness(52, (34,)))
    with pytest.raises(ShapeError):
        P.find_pattern_witness(B23, (), 2)
    with pytest.raises(DomainError):
        P.find_pattern_witness(B23, (3,), 2)
    with pytest.raises(ValueError):
        P.find_pattern_witness(B23, (0,), 2, "nope")


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=3))
def test_scan_results_agree_with_oracle(word):
    try:
        w = P.find_pattern_witness(B23, word, 1, "scan", Budget(window=3000))
    except BudgetExhausted:
        return
    assert oracle_realises(word, 1, w.n, w.m)
