"""Exact-rational interval refinement and pattern realisation.

Points of the positive reals that the construction touches are all of the
form ``k^a l^-b`` (or sums of such), so :class:`fractions.Fraction` carries
every endpoint exactly.  No floats appear on the certification path.

Throughout, ``k < l`` is assumed (callers swap the bases if needed).
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Iterator, Optional, Sequence

from . import radix
from .errors import BudgetExhausted, DomainError, ShapeError
from .radix import BasePair

Word = Sequence[int]


# -- the functions of the multiplicative picture ------------------------------


def floor_log(x: Fraction, k: int) -> int:
    """Integer z with ``k^z <= x < k^(z+1)`` for rational x > 0."""
    x = Fraction(x)
    if x <= 0:
        raise DomainError("floor_log needs x > 0")
    p, q = x.numerator, x.denominator
    if q == 1:
        return radix.ilog(p, k)
    # first guess from magnitudes, then correct by exact comparison
    z = radix.ilog(p, k) - radix.ilog(q, k)
    while not _le_pow(k, z, p, q):
        z -= 1
    while _le_pow(k, z + 1, p, q):
        z += 1
    return z


def _le_pow(k: int, z: int, p: int, q: int) -> bool:
    """``k^z <= p/q``."""
    if z >= 0:
        return radix.power(k, z) * q <= p
    return q <= p * radix.power(k, -z)


def kpow_q(k: int, z: int) -> Fraction:
    return Fraction(radix.power(k, z)) if z >= 0 else Fraction(1, radix.power(k, -z))


def mu_of(x: Fraction, k: int) -> Fraction:
    """x divided by the largest integer power of k not exceeding it; lands in [1, k)."""
    return Fraction(x) / kpow_q(k, floor_log(x, k))


def nu_of(x: Fraction, k: int) -> int:
    """Integer m with ``k^(2m-1) <= x^2 < k^(2m+1)``.

    Squaring keeps the half-integer window boundaries rational.
    """
    z = floor_log(Fraction(x) ** 2, k)
    return (z + 1) // 2


def circ_mul(x: Fraction, y: Fraction, k: int) -> Fraction:
    """The group operation on [1, k)."""
    p = x * y
    return p if p < k else p / k


def u_of(bases: BasePair, v: int, n: int) -> int:
    """U(v) = n - nu(l^-v)."""
    if v < 1:
        raise DomainError("v must be >= 1")
    return n - nu_of(Fraction(1, bases.lpow(v)), bases.k)


# -- half-open intervals -----------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Half-open interval [lo, hi) with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi})")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def scale(self, c: Fraction) -> "Interval":
        return Interval(self.lo * c, self.hi * c)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi})"


def k_window(k: int, n: int, r: int) -> Interval:
    """``[k^n + k^r, k^n + k^(r+1))``."""
    base = radix.power(k, n)
    return Interval(Fraction(base + radix.power(k, r)), Fraction(base + radix.power(k, r + 1)))


def scaled_block(bases: BasePair, v: int, u: int, R: int) -> Interval:
    """``l^-v [k^u, k^u + k^R)``."""
    den = bases.lpow(v)
    ku = bases.kpow(u)
    return Interval(Fraction(ku, den), Fraction(ku + bases.kpow(R), den))


def refinement_interval(bases: BasePair, v: int, n: int, R: int) -> Interval:
    """I_v = ``l^-v [k^U(v), k^U(v) + k^R)``."""
    return scaled_block(bases, v, u_of(bases, v, n), R)


def iter_disjoint(I0: Interval, stream: Iterable[Interval]) -> Iterator[int]:
    """Yield (1-based) indices m with ``I_m ⊆ I0`` disjoint from every earlier I_n.

    Earlier intervals that miss I0 cannot meet a subinterval of I0, so only
    those meeting I0 are remembered.
    """
    seen: list[Interval] = []
    for m, iv in enumerate(stream, start=1):
        if I0.contains(iv) and not any(iv.intersects(prev) for prev in seen):
            yield m
        if iv.intersects(I0):
            seen.append(iv)


def select_disjoint(I0: Interval, stream: Iterable[Interval], budget: int) -> int:
    """Least index m <= budget with I_m ⊆ I0 and disjoint from I_1..I_(m-1)."""
    if budget < 1:
        raise DomainError("budget must be >= 1")
    for m in iter_disjoint(I0, itertools.islice(stream, budget)):
        return m
    raise BudgetExhausted(f"no disjoint interval inside {I0} among the first {budget}")


# -- constants for the refinement search --------------------------------------


@dataclass(frozen=True)
class SafeConstants:
    R: int
    E: int
    M: int
    delta: Fraction
    N: int
    gap: Fraction  # minimum circular multiplicative gap among mu(l^-i), i <= M


def _mu_points(bases: BasePair, M: int) -> list[Fraction]:
    return [mu_of(Fraction(1, bases.lpow(i)), bases.k) for i in range(M + 1)]


def min_circular_gap(points: Sequence[Fraction], k: int) -> Fraction:
    pts = sorted(points)
    gaps = [b / a for a, b in zip(pts, pts[1:])]
    gaps.append(pts[0] * k / pts[-1])
    return min(gaps)


def _sqrt_below(g: Fraction, scale: int = 1 << 32) -> Fraction:
    """Rational d > 1 with ``d^2 < g`` (g > 1), as large as the scale allows."""
    d = Fraction(isqrt(g.numerator * scale * scale // g.denominator), scale)
    while d * d >= g:
        d -= Fraction(1, scale)
    if d <= 1:
        return _sqrt_below(g, scale * scale)
    return d


def safe_constants(bases: BasePair, R: int) -> SafeConstants:
    k, ell = bases.k, bases.ell
    E = 0
    while radix.power(k, E) < 4:
        E += 1
    M = 0
    while ell**M <= radix.power(k, R + E):
        M += 1
    gap = min_circular_gap(_mu_points(bases, M), k)
    delta = _sqrt_below(gap)
    N = R + E + 1
    # (k^N + k^R) / k^N < delta  <=>  k^R < (delta - 1) k^N
    while not radix.power(k, R) < (delta - 1) * radix.power(k, N):
        N += 1
    return SafeConstants(R=R, E=E, M=M, delta=delta, N=N, gap=gap)


def check_safe_constants(bases: BasePair, c: SafeConstants) -> dict[str, bool]:
    k = bases.k
    return {
        "k^-E <= 1/4": 4 <= radix.power(k, c.E),
        "l^M > k^(R+E)": bases.lpow(c.M) > radix.power(k, c.R + c.E),
        "delta arcs disjoint": c.delta > 1
        and all(k_arcs_disjoint(bases, c.delta, [i for i in (i, j)]) for i, j in itertools.combinations(range(c.M + 1), 2)),
        "(k^N+k^R)/k^N < delta": Fraction(radix.power(k, c.N) + radix.power(k, c.R), radix.power(k, c.N)) < c.delta,
        "N > R+E": c.N > c.R + c.E,
    }


def k_arcs_disjoint(bases: BasePair, delta: Fraction, exps: Sequence[int]) -> bool:
    """Are the arcs ``mu(l^-v (1/delta, delta))`` for v in exps pairwise disjoint?

    Each arc is open with multiplicative length delta^2 on the circle [1, k);
    two arcs starting at p and q are disjoint iff both circular ratios
    ``mu(q/p)`` and ``mu(p/q)`` are at least delta^2.
    """
    k = bases.k
    starts = [mu_of(Fraction(1, bases.lpow(v)) / delta, k) for v in exps]
    span = delta * delta
    for p, q in itertools.combinations(starts, 2):
        if mu_of(q / p, k) < span or mu_of(p / q, k) < span:
            return False
    return True


def replay_disjoint_k(bases: BasePair, c: SafeConstants, v: int) -> bool:
    """K_v, ..., K_(v+M) are pairwise disjoint."""
    return k_arcs_disjoint(bases, c.delta, range(v, v + c.M + 1))


# -- single refinement step --------------------------------------------------


def blocks_meeting(bases: BasePair, target: Interval, v: int, R: int) -> list[int]:
    """All u in N with ``l^-v [k^u, k^u + k^R)`` meeting target.

    The block meets [a, b) iff ``k^u in (a l^v - k^R, b l^v)``.
    """
    lv = bases.lpow(v)
    lower = target.lo * lv - bases.kpow(R)
    upper = target.hi * lv
    u = 0 if lower < 1 else floor_log(lower, bases.k) + 1
    out = []
    while kpow_q(bases.k, u) < upper:
        if kpow_q(bases.k, u) > lower:
            out.append(u)
        u += 1
    return out


def refinement_holds(bases: BasePair, R: int, n: int, r: int, s: int, t: int) -> bool:
    """Exact replay of both refinement postconditions for (s, t).

    Containment in ``[k^n + k^r, k^n + k^(r+1))`` and emptiness against every
    block ``l^-v [k^u, k^u + k^R)``, v in 1..t-1, u ranging over all of N.
    """
    cand = scaled_block(bases, t, s, R)
    if not k_window(bases.k, n, r).contains(cand):
        return False
    return all(not blocks_meeting(bases, cand, v, R) for v in range(1, t))


def find_refinement(bases: BasePair, R: int, n: int, r: int, v_budget: int = 10_000) -> tuple[int, int]:
    """(s, t) with ``l^-t [k^s, k^s + k^R)`` inside the r-th window above k^n.

    The candidate stream is I_1, I_2, ... (u = U(v)); the first survivor of
    :func:`iter_disjoint` is replayed against all u before being returned,
    which matters only below the safe threshold n < N.
    """
    if not 0 <= r < R:
        raise DomainError(f"need 0 <= r < R, got r={r}, R={R}")
    I0 = k_window(bases.k, n, r)
    stream = (refinement_interval(bases, v, n, R) for v in itertools.count(1))
    for t in iter_disjoint(I0, itertools.islice(stream, v_budget)):
        s = u_of(bases, t, n)
        if s > n and refinement_holds(bases, R, n, r, s, t):
            return s, t
    raise BudgetExhausted(f"no refinement of window r={r} above {bases.k}^{n} with t <= {v_budget}")


# -- chains and witnesses ----------------------------------------------------


@dataclass(frozen=True)
class Budget:
    v_budget: int = 10_000
    window: int = 20_000


@dataclass
class RefinementChain:
    R: int
    word: tuple[int, ...]
    n0: int
    steps: list[tuple[int, int]] = field(default_factory=list)  # (n_j, M_j), j = 1..s

    def windows(self, bases: BasePair) -> list[tuple[Interval, Interval]]:
        """Per level j: (block ``l^-ΣM [k^n_j, k^n_j + k^R)``, its r_j window)."""
        out = []
        ns = [self.n0] + [n for n, _ in self.steps]
        shift = 0
        for j, nj in enumerate(ns):
            if j:
                shift += self.steps[j - 1][1]
            c = Fraction(1, bases.lpow(shift))
            block = Interval(Fraction(bases.kpow(nj)), Fraction(bases.kpow(nj) + bases.kpow(self.R))).scale(c)
            out.append((block, k_window(bases.k, nj, self.word[j]).scale(c)))
        return out

    def is_nested(self, bases: BasePair) -> bool:
        levels = self.windows(bases)
        ns = [self.n0] + [n for n, _ in self.steps]
        if any(a >= b for a, b in zip(ns, ns[1:])):
            return False
        for j, (block, win) in enumerate(levels):
            if not block.contains(win):
                return False
            if j and not levels[j - 1][1].contains(block):
                return False
        return True


def chain_alphabet_bound(word: Word, R: int) -> int:
    """Refinement needs every letter strictly below the bound, so a letter equal
    to R lifts the working bound to R + 1 (exclusions only get stronger)."""
    top = max(word) if word else 0
    return R if top < R else top + 1


def build_chain(bases: BasePair, R: int, word: Word, v_budget: int = 10_000) -> RefinementChain:
    word = tuple(word)
    if not word:
        raise ShapeError("empty word")
    if min(word) < 0 or max(word) > R:
        raise DomainError(f"letters must lie in 0..{R}")
    Rw = chain_alphabet_bound(word, R)
    chain = RefinementChain(R=Rw, word=word, n0=safe_constants(bases, Rw).N)
    n = chain.n0
    for r in word[:-1]:
        s, t = find_refinement(bases, Rw, n, r, v_budget)
        chain.steps.append((s, t))
        n = s
    return chain


@dataclass(frozen=True)
class PatternWitness:
    n: int
    m: tuple[int, ...]


def _chain_witness(bases: BasePair, word: Word, R: int, budget: Budget) -> PatternWitness:
    chain = build_chain(bases, R, word, budget.v_budget)
    shift = sum(M for _, M in chain.steps)
    n_s = chain.steps[-1][0] if chain.steps else chain.n0
    lo = radix.power(bases.k, n_s) + radix.power(bases.k, word[-1])
    hi = radix.power(bases.k, n_s) + radix.power(bases.k, word[-1] + 1)
    # k^-n l^M in l^-shift [lo, hi)  <=>  l^(M+shift) in [k^n lo, k^n hi)
    for M in range(1, budget.window + 1):
        y = bases.lpow(M + shift)
        n = radix.ilog(y, bases.k) - n_s
        if n < 1:
            continue
        kn = bases.kpow(n)
        if kn * lo <= y < kn * hi:
            ms = [M]
            for _, Mj in chain.steps:
                ms.append(ms[-1] + Mj)
            return PatternWitness(n, tuple(ms))
    raise BudgetExhausted(f"no l^M in the final chain window with M <= {budget.window}")


def _scan_witness(bases: BasePair, word: Word, R: int, budget: Budget) -> PatternWitness:
    """Direct search over the S-profile of l^0..l^window.

    For a base offset n, the relevant events are the m whose owner lies in
    rows n..n+R.  The word must match a run of events in which every skipped
    event sits in row R (rows below R are exclusion rows).  Greedy matching
    from each start is optimal, and scanning n and the start in ascending
    order returns the lexicographically least witness.
    """
    rows: dict[int, list[int]] = defaultdict(list)
    for m, owner in radix.iter_s_profile(bases, budget.window):
        if owner is not None:
            rows[owner].append(m)
    top = max(rows, default=0)
    for n in range(1, top + 1):
        events = sorted((m, row - n) for row in range(n, n + R + 1) for m in rows.get(row, ()))
        for p, (m0, c0) in enumerate(events):
            if c0 != word[0]:
                continue
            ms = _greedy_match(events, p, word, R)
            if ms is not None:
                return PatternWitness(n, tuple(ms))
    raise BudgetExhausted(f"word not realised by l-powers up to exponent {budget.window}")


def _greedy_match(events: list[tuple[int, int]], p: int, word: Word, R: int) -> Optional[list[int]]:
    ms = [events[p][0]]
    q = p + 1
    for c in word[1:]:
        while q < len(events) and events[q][1] != c:
            if events[q][1] < R:
                return None
            q += 1
        if q == len(events):
            return None
        ms.append(events[q][0])
        q += 1
    return ms


def find_pattern_witness(
    bases: BasePair,
    word: Word,
    R: int,
    strategy: str = "scan",
    budget: Budget = Budget(),
) -> PatternWitness:
    """Witness (n, m_0 < ... < m_s) realising ``word`` in rows n..n+R.

    ``strategy`` is ``"scan"``, ``"chain"`` or ``"auto"`` (scan, then chain).
    """
    word = tuple(word)
    if not word:
        raise ShapeError("empty word")
    if min(word) < 0 or max(word) > R:
        raise DomainError(f"letters must lie in 0..{R}")
    if strategy == "scan":
        w = _scan_witness(bases, word, R, budget)
    elif strategy == "chain":
        w = _chain_witness(bases, word, R, budget)
    elif strategy == "auto":
        try:
            w = _scan_witness(bases, word, R, budget)
        except BudgetExhausted:
            w = _chain_witness(bases, word, R, budget)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return w


def verify_pattern_witness(bases: BasePair, word: Word, R: int, w: PatternWitness) -> bool:
    """Hits for every letter, exclusions for rows 0..R-1 over [m_0, m_s].

    Uses only the radix digit arithmetic (one pow per exponent), never the
    incremental profile the scan relies on.
    """
    word = tuple(word)
    if len(word) != len(w.m):
        raise ShapeError(f"word has {len(word)} letters but witness has {len(w.m)} exponents")
    if any(a >= b for a, b in zip(w.m, w.m[1:])):
        return False
    if not all(radix.s_member(bases, w.n + r, m) for r, m in zip(word, w.m)):
        return False
    marked = dict(zip(w.m, word))
    for m in range(w.m[0], w.m[-1] + 1):
        owner = radix.s_owner(bases, m)
        if owner is None or not 0 <= owner - w.n < R:
            continue
        if marked.get(m) != owner - w.n:
            return False
    return True
