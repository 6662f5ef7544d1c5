"""Exact arithmetic on powers of two multiplicatively independent bases.

Powers ``k^a`` and ``l^b`` are passed around by their exponents; the integer
values are materialised on demand through a small power cache.  Everything is
plain Python integers, so there is no overflow at any magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .errors import DomainError, InvalidBase, NoSecondDigit, NotInS, RangeError, SuccessorUnbounded


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mult_independent(k: int, ell: int) -> bool:
    """True iff ``k^a != ell^b`` for all positive a, b.

    Two bases are dependent exactly when their prime exponent vectors are
    proportional, which is checked on the factorisations.
    """
    if k < 2 or ell < 2:
        raise InvalidBase(f"bases must be >= 2, got ({k}, {ell})")
    fk, fl = _factor(k), _factor(ell)
    if fk.keys() != fl.keys():
        return True
    p0 = next(iter(fk))
    # fk[p] / fl[p] must be the same ratio for every prime p
    return any(fk[p] * fl[p0] != fl[p] * fk[p0] for p in fk)


@dataclass(frozen=True)
class BasePair:
    """The fixed pair (k, ell) every computation is parameterised by."""

    k: int
    ell: int

    def __post_init__(self) -> None:
        if not mult_independent(self.k, self.ell):
            raise InvalidBase(f"{self.k} and {self.ell} are multiplicatively dependent")

    def kpow(self, a: int) -> int:
        return power(self.k, a)

    def lpow(self, b: int) -> int:
        return power(self.ell, b)

    def swapped(self) -> "BasePair":
        return BasePair(self.ell, self.k)


@lru_cache(maxsize=8192)
def power(base: int, e: int) -> int:
    if e < 0:
        raise DomainError(f"negative exponent {e}")
    return base**e


def ilog(y: int, base: int) -> int:
    """Largest e with ``base**e <= y`` (y >= 1)."""
    if y < 1:
        raise DomainError("ilog needs y >= 1")
    if base & (base - 1) == 0:
        return (y.bit_length() - 1) // (base.bit_length() - 1)
    e = int((y.bit_length() - 1) / math.log2(base))
    while e > 0 and power(base, e) > y:
        e -= 1
    while power(base, e + 1) <= y:
        e += 1
    return e


def log_pow(y: int, base: int) -> Optional[int]:
    """Exponent e with ``base**e == y``, or None when y is not a power of base."""
    if y < 1:
        return None
    e = ilog(y, base)
    return e if power(base, e) == y else None


def lambda_floor(y: int, k: int) -> int:
    """Exponent e with ``k^e <= y < k^(e+1)``."""
    if y == 0:
        raise DomainError("lambda is undefined at 0")
    return ilog(y, k)


def second_power(y: int, k: int) -> int:
    """Exponent of ``lambda(y - lambda(y))``."""
    if y == 0:
        raise DomainError("lambda is undefined at 0")
    rest = y - power(k, ilog(y, k))
    if rest == 0:
        raise NoSecondDigit(f"{y} is a power of {k}")
    return ilog(rest, k)


def s_owner(bases: BasePair, b: int) -> Optional[int]:
    """The exponent a with ``l^b in S(k^a)``, or None if l^b is in no S(x).

    Each l-power lies in at most one S(x) because x is determined by y.
    """
    y = bases.lpow(b)
    e = ilog(y, bases.k)
    rest = y - bases.kpow(e)
    if rest == 0:
        return None
    x = ilog(rest, bases.k)
    return x if x < e else None


def s_member(bases: BasePair, a: int, b: int) -> bool:
    """``(k^a, l^b) in S``: lambda(y - lambda(y)) = x and x < lambda(y)."""
    return s_owner(bases, b) == a


def s_member_interval(bases: BasePair, a: int, b: int) -> bool:
    """Interval criterion: some ``z = k^c`` with ``x < z`` and ``y in [z+x, z+kx)``."""
    x, y = bases.kpow(a), bases.lpow(b)
    c = a + 1
    while True:
        z = bases.kpow(c)
        if z > y:
            return False
        if z + x <= y < z + bases.k * x:
            return True
        c += 1


def k_digits(y: int, k: int) -> list[int]:
    """Base-k digits of y, least significant first."""
    out = []
    while y:
        y, d = divmod(y, k)
        out.append(d)
    return out


def s_member_digits(bases: BasePair, a: int, b: int) -> bool:
    """Digit criterion: leading digit 1 and the second nonzero digit sits at position a."""
    digits = k_digits(bases.lpow(b), bases.k)
    if digits[-1] != 1:
        return False
    for pos in range(len(digits) - 2, -1, -1):
        if digits[pos]:
            return pos == a
    return False


def s_scan(bases: BasePair, a: int, m_lo: int, m_hi: int) -> list[int]:
    """Exponents b in [m_lo, m_hi] with ``l^b in S(k^a)``, ascending."""
    if m_lo > m_hi:
        raise RangeError(f"empty range [{m_lo}, {m_hi}]")
    return [b for b in range(max(m_lo, 0), m_hi + 1) if s_member(bases, a, b)]


def sigma1(i: int, a: int) -> int:
    """Exponent of ``sigma_1^i(k^a) = k^(a+i)``."""
    return a + i


def sigma2(bases: BasePair, a: int, b: int, m_max: int) -> Optional[int]:
    """Exponent of the successor of l^b in S(k^a), searched up to ``m_max``.

    Returns None when no successor exists at or below the cap.
    """
    if not s_member(bases, a, b):
        raise NotInS(f"{bases.ell}^{b} is not in S({bases.k}^{a})")
    for c in range(b + 1, m_max + 1):
        if s_member(bases, a, c):
            return c
    return None


def sigma2_pred(bases: BasePair, a: int, b: int) -> Optional[int]:
    """Exponent of the predecessor of l^b in S(k^a), or None if l^b is the least element."""
    if not s_member(bases, a, b):
        raise NotInS(f"{bases.ell}^{b} is not in S({bases.k}^{a})")
    for c in range(b - 1, -1, -1):
        if s_member(bases, a, c):
            return c
    return None


def sigma2_iter(bases: BasePair, a: int, b: int, i: int, m_max: int) -> Optional[int]:
    """``sigma_2^i(k^a, l^b)``; negative i walks predecessors.

    None means the walk ran off the set (or past the cap).
    """
    cur: Optional[int] = b
    for _ in range(abs(i)):
        if cur is None:
            return None
        cur = sigma2(bases, a, cur, m_max) if i > 0 else sigma2_pred(bases, a, cur)
    return cur


def theta_count(bases: BasePair, a1: int, a: int, b: int, m_max: int) -> int:
    """c such that ``(k^a1, k^a, l^b) in Theta_c``.

    Counts l-powers in S(k^a) strictly between l^b and sigma_2(k^a1, l^b).
    """
    succ = sigma2(bases, a1, b, m_max)
    if succ is None:
        raise SuccessorUnbounded(
            f"no successor of {bases.ell}^{b} in S({bases.k}^{a1}) up to exponent {m_max}"
        )
    return sum(1 for c in range(b + 1, succ) if s_member(bases, a, c))


def omega_member(bases: BasePair, u: int, v: int, a1: int, a: int, b: int, m_max: int) -> bool:
    if not 1 <= v <= u:
        raise DomainError(f"need 1 <= v <= u, got v={v}, u={u}")
    c = theta_count(bases, a1, a, b, m_max)
    return c < (1 << u) and bool((c >> (v - 1)) & 1)


@dataclass(frozen=True)
class DWitness:
    """Exponents of (K1, K2, L1, L2) = (k^a1, k^a2, l^b1, l^b2)."""

    a1: int
    a2: int
    b1: int
    b2: int


def d_check(bases: BasePair, w: DWitness, m_max: int | None = None) -> Optional[tuple[int, int]]:
    """(R1, R2) with w in D(R1, R2), or None if w is not in D at all."""
    if m_max is not None and w.b2 > m_max:
        raise RangeError(f"L2 exponent {w.b2} exceeds cap {m_max}")
    if w.a1 > w.a2 or w.b1 > w.b2:
        return None
    if not (s_member(bases, w.a1, w.b1) and s_member(bases, w.a1, w.b2)):
        return None
    r2 = len(s_scan(bases, w.a1, w.b1, w.b2 - 1)) if w.b2 > w.b1 else 0
    return w.a2 - w.a1, r2


@dataclass
class BakerGap:
    min_gap: int
    witnesses: list[tuple[int, int]]


def baker_gap_scan(bases: BasePair, a_max: int, b_max: int) -> BakerGap:
    """Minimum of ``|k^a - l^b|`` over 1 <= a <= a_max, 1 <= b <= b_max."""
    if a_max < 1 or b_max < 1:
        raise RangeError("a_max and b_max must be >= 1")
    best: Optional[int] = None
    wit: list[tuple[int, int]] = []
    for a in range(1, a_max + 1):
        x = bases.kpow(a)
        for b in range(1, b_max + 1):
            g = abs(x - bases.lpow(b))
            if best is None or g < best:
                best, wit = g, [(a, b)]
            elif g == best:
                wit.append((a, b))
    assert best is not None
    return BakerGap(best, wit)


def iter_s_profile(bases: BasePair, m_max: int) -> Iterator[tuple[int, Optional[int]]]:
    """Yield ``(m, owner)`` for m = 0..m_max where ``l^m in S(k^owner)``.

    Incremental: one multiplication by l per step and no pow calls, so it is
    usable on windows of tens of thousands of exponents.
    """
    k = bases.k
    y, e, pk = 1, 0, 1
    for m in range(m_max + 1):
        if m:
            y *= bases.ell
            while pk * k <= y:
                pk *= k
                e += 1
        rest = y - pk
        if rest == 0 or y >= 2 * pk:
            yield m, None
            continue
        d, scaled = 1, rest * k
        while scaled < pk:
            scaled *= k
            d += 1
        # rest * k^d >= k^e > rest * k^(d-1)  =>  k^(e-d) <= rest < k^(e-d+1)
        yield m, e - d
