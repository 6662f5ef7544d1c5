"""Macro predicates: their table, their radix semantics, and their core expansions.

========== ====== ===== ============================================================
name       params arity meaning
========== ====== ===== ============================================================
Lambda     0      2     z is the largest power of k not above y
S          0      2     (x, y) in S
Sigma1     1 (i)  2     y = k^i x with x a power of k
Sigma2     0      3     L2 is the successor of L in S(K), or 0 when there is none
InD        0      4     (K1, K2, L1, L2) in D
InDR       2      4     (K1, K2, L1, L2) in D(R1, R2)
Theta      1 (c)  3     (K1, K, L) in Theta_c
Omega      2      3     (K1, K, L) in Omega_{u,v}
AbsDiffGt  0      3     |x - y| > u
========== ====== ===== ============================================================
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from .. import radix
from ..errors import ExpansionTooLarge
from ..radix import BasePair
from .ast import (
    POWK, POWL, Add, And, Eq, Exists, Forall, Formula, Implies, Le, Lt, Macro, Not, Or,
    PowK, PowL, Term, Var, Zero, conj, disj, macro, times,
)


@dataclass(frozen=True)
class MacroInfo:
    params: int
    arity: int


MACROS: dict[str, MacroInfo] = {
    "Lambda": MacroInfo(0, 2),
    "S": MacroInfo(0, 2),
    "Sigma1": MacroInfo(1, 2),
    "Sigma2": MacroInfo(0, 3),
    "InD": MacroInfo(0, 4),
    "InDR": MacroInfo(2, 4),
    "Theta": MacroInfo(1, 3),
    "Omega": MacroInfo(2, 3),
    "AbsDiffGt": MacroInfo(0, 3),
}


# -- semantics over the integers ------------------------------------------------


def _kexp(bases: BasePair, x: int) -> Optional[int]:
    return radix.log_pow(x, bases.k)


def _lexp(bases: BasePair, y: int) -> Optional[int]:
    return radix.log_pow(y, bases.ell)


def theta_value(bases: BasePair, a1: int, a: int, b: int, cap_l: int) -> int:
    """Theta count with the 'no successor' sentinel: an absent successor below cap_l gives 0."""
    succ = radix.sigma2(bases, a1, b, cap_l)
    if succ is None:
        return 0
    return sum(1 for c in range(b + 1, succ) if radix.s_member(bases, a, c))


def macro_holds(bases: BasePair, name: str, params: tuple[int, ...], vals: tuple[int, ...], cap_l: int) -> bool:
    """Truth of a macro atom at concrete integer arguments.

    Successor searches stop at l^cap_l, matching the windowed reading of the
    expanded formulas.
    """
    if name == "Lambda":
        y, z = vals
        return y >= 1 and z == radix.power(bases.k, radix.ilog(y, bases.k))
    if name == "AbsDiffGt":
        x, y, u = vals
        return abs(x - y) > u
    if name == "S":
        a, b = _kexp(bases, vals[0]), _lexp(bases, vals[1])
        return a is not None and b is not None and radix.s_member(bases, a, b)
    if name == "Sigma1":
        a = _kexp(bases, vals[0])
        return a is not None and vals[1] == vals[0] * radix.power(bases.k, params[0])
    if name == "Sigma2":
        a, b = _kexp(bases, vals[0]), _lexp(bases, vals[1])
        if a is None or b is None or not radix.s_member(bases, a, b):
            return False
        succ = radix.sigma2(bases, a, b, cap_l)
        return vals[2] == (0 if succ is None else bases.lpow(succ))
    if name in ("InD", "InDR"):
        a1, a2 = _kexp(bases, vals[0]), _kexp(bases, vals[1])
        b1, b2 = _lexp(bases, vals[2]), _lexp(bases, vals[3])
        if None in (a1, a2, b1, b2):
            return False
        dims = radix.d_check(bases, radix.DWitness(a1, a2, b1, b2))
        return dims is not None and (name == "InD" or dims == tuple(params))
    if name in ("Theta", "Omega"):
        a1, a = _kexp(bases, vals[0]), _kexp(bases, vals[1])
        b = _lexp(bases, vals[2])
        if a1 is None or a is None or b is None or not radix.s_member(bases, a1, b):
            return False
        c = theta_value(bases, a1, a, b, cap_l)
        if name == "Theta":
            return c == params[0]
        u, v = params
        return c < (1 << u) and bool((c >> (v - 1)) & 1)
    raise KeyError(name)


# -- expansions ---------------------------------------------------------------------


class _Fresh:
    def __init__(self) -> None:
        self.counter = itertools.count()

    def __call__(self, stem: str) -> str:
        return f"{stem}_{next(self.counter)}"


def _expand_lambda(a: tuple[Term, ...], fresh: _Fresh) -> Formula:
    y, z = a
    w = fresh("w")
    return conj(PowK(z), Le(z, y), Forall(w, POWK, Implies(Le(Var(w), y), Le(Var(w), z))))


def _expand_s_lambda(a: tuple[Term, ...], fresh: _Fresh) -> Formula:
    # lambda(y - z) = x, written without subtraction: x <= y - z and no larger k-power fits
    x, y = a
    z, w = fresh("z"), fresh("w")
    Z = Var(z)
    return conj(
        PowK(x),
        PowL(y),
        Exists(z, POWK, conj(
            macro("Lambda", y, Z),
            Lt(x, Z),
            Le(Add(Z, x), y),
            Forall(w, POWK, Implies(Le(Add(Z, Var(w)), y), Le(Var(w), x))),
        )),
    )


def _expand_s_interval(k: int) -> Callable[[tuple[Term, ...], _Fresh], Formula]:
    def build(a: tuple[Term, ...], fresh: _Fresh) -> Formula:
        x, y = a
        z = fresh("z")
        Z = Var(z)
        return conj(PowK(x), PowL(y), Exists(z, POWK, conj(Lt(x, Z), Le(Add(Z, x), y), Lt(y, Add(Z, times(k, x))))))

    return build


def _expand_sigma1(k: int) -> Callable[..., Formula]:
    def build(a: tuple[Term, ...], fresh: _Fresh, i: int) -> Formula:
        x, y = a
        if i == 0:
            return conj(PowK(x), Eq(y, x))
        if i == 1:
            return conj(PowK(x), Eq(y, times(k, x)))
        mid = fresh("s")
        return Exists(mid, POWK, conj(macro("Sigma1", x, Var(mid), params=(1,)),
                                      macro("Sigma1", Var(mid), y, params=(i - 1,))))

    return build


def _expand_sigma2(a: tuple[Term, ...], fresh: _Fresh) -> Formula:
    K, L, L2 = a
    p = fresh("p")
    P = Var(p)
    later = conj(macro("S", K, P), Lt(L, P))
    return conj(
        macro("S", K, L),
        disj(
            conj(macro("S", K, L2), Lt(L, L2), Forall(p, POWL, Implies(later, Le(L2, P)))),
            conj(Eq(L2, Zero()), Forall(p, POWL, Not(later))),
        ),
    )


def _expand_ind(a: tuple[Term, ...], fresh: _Fresh) -> Formula:
    K1, K2, L1, L2 = a
    return conj(PowK(K1), PowK(K2), PowL(L1), PowL(L2), Le(K1, K2), Le(L1, L2),
                macro("S", K1, L1), macro("S", K1, L2))


def _expand_indr(a: tuple[Term, ...], fresh: _Fresh, r1: int, r2: int) -> Formula:
    K1, K2, L1, L2 = a
    # L2 is reached from L1 by exactly r2 successor steps inside S(K1)
    if r2 == 0:
        steps: Formula = Eq(L1, L2)
    else:
        names = [fresh("q") for _ in range(r2 - 1)]
        chain = [L1, *map(Var, names), L2]
        steps = conj(*(macro("Sigma2", K1, chain[i], chain[i + 1]) for i in range(r2)))
        for nm in reversed(names):
            steps = Exists(nm, POWL, steps)
    return conj(macro("InD", *a), macro("Sigma1", K1, K2, params=(r1,)), steps)


def _expand_theta(a: tuple[Term, ...], fresh: _Fresh, c: int) -> Formula:
    """Exactly c elements of S(K) strictly between L and its successor N in S(K1).

    The c witnesses are taken in increasing order (which makes them pairwise
    distinct) and a closing universal says nothing else qualifies.
    """
    K1, K, L = a
    n = fresh("n")
    N = Var(n)
    xs = [fresh("x") for _ in range(c)]
    y = fresh("y")
    Y = Var(y)
    cover = Forall(y, POWL, Implies(conj(macro("S", K, Y), Lt(L, Y), Lt(Y, N)),
                                    disj(*(Eq(Y, Var(x)) for x in xs))))
    body: Formula = cover
    for idx in reversed(range(c)):
        prev = L if idx == 0 else Var(xs[idx - 1])
        X = Var(xs[idx])
        body = Exists(xs[idx], POWL, conj(Lt(prev, X), Lt(X, N), macro("S", K, X), body))
    with_succ = Exists(n, POWL, conj(macro("Sigma2", K1, L, N), body))
    parts = [with_succ]
    if c == 0:
        p = fresh("p")
        P = Var(p)
        parts.append(Forall(p, POWL, Implies(macro("S", K1, P), Le(P, L))))
    return conj(PowK(K), macro("S", K1, L), disj(*parts))


def _expand_omega(a: tuple[Term, ...], fresh: _Fresh, u: int, v: int) -> Formula:
    return disj(*(macro("Theta", *a, params=(c,)) for c in range(1 << u) if (c >> (v - 1)) & 1))


def _expand_absdiff(a: tuple[Term, ...], fresh: _Fresh) -> Formula:
    x, y, u = a
    return Or((conj(Le(y, x), Lt(Add(y, u), x)), conj(Lt(x, y), Lt(Add(x, u), y))))


def expand_once(m: Macro, fresh: _Fresh, k: int, s_form: str = "lambda", theta_limit: int = 64) -> Formula:
    if m.name == "Lambda":
        return _expand_lambda(m.args, fresh)
    if m.name == "S":
        if s_form == "lambda":
            return _expand_s_lambda(m.args, fresh)
        if s_form == "interval":
            return _expand_s_interval(k)(m.args, fresh)
        raise ValueError(f"unknown S form {s_form!r}")
    if m.name == "Sigma1":
        return _expand_sigma1(k)(m.args, fresh, m.params[0])
    if m.name == "Sigma2":
        return _expand_sigma2(m.args, fresh)
    if m.name == "InD":
        return _expand_ind(m.args, fresh)
    if m.name == "InDR":
        return _expand_indr(m.args, fresh, *m.params)
    if m.name == "Theta":
        if m.params[0] >= theta_limit:
            raise ExpansionTooLarge(f"Theta_{m.params[0]} exceeds the expansion limit {theta_limit}")
        return _expand_theta(m.args, fresh, m.params[0])
    if m.name == "Omega":
        u, v = m.params
        if (1 << u) > theta_limit:
            raise ExpansionTooLarge(f"Omega_{{{u},{v}}} needs Theta_c up to c = {(1 << u) - 1}")
        return _expand_omega(m.args, fresh, u, v)
    if m.name == "AbsDiffGt":
        return _expand_absdiff(m.args, fresh)
    raise KeyError(m.name)


def expand_macros(
    f: Formula,
    k: int = 2,
    s_form: str = "lambda",
    theta_limit: int = 64,
    keep: frozenset[str] = frozenset(),
) -> Formula:
    """Replace every macro (except names in ``keep``) by its core-signature definition.

    Only Sigma1 and the interval form of S mention k, through the sum term
    ``x + ... + x`` with k summands.  Bound variables introduced here carry a
    ``_<n>`` suffix that cannot clash with user variables bound in ``f``
    unless those already use the same pattern.
    """
    fresh = _Fresh()

    def go(node: Formula) -> Formula:
        if isinstance(node, Macro):
            return node if node.name in keep else go(expand_once(node, fresh, k, s_form, theta_limit))
        if isinstance(node, Not):
            return Not(go(node.body))
        if isinstance(node, And):
            return And(tuple(go(p) for p in node.parts))
        if isinstance(node, Or):
            return Or(tuple(go(p) for p in node.parts))
        if isinstance(node, Implies):
            return Implies(go(node.left), go(node.right))
        if isinstance(node, Forall):
            return Forall(node.var, node.guard, go(node.body))
        if isinstance(node, Exists):
            return Exists(node.var, node.guard, go(node.body))
        return node

    return go(f)
