"""Compile a normalised Turing machine into a sentence over (N, +, k^N, l^N).

The body is a conjunction of five labelled clauses quantified over the grid
window ``K1 < K <= K2``, ``L1 <= L < L2`` with ``L in S(K1)``:

* (a) at most one state marker and at most one symbol marker per cell,
* (b) the start marker sits at (K1·k, L1) and the first row carries no symbols,
* (c) some cell in the window is marked with the accept state,
* (d) every row has exactly one state marker,
* (e) marked cells are carried forward or rewritten by the transition rule;
  in blank mode a further clause (e') handles unmarked cells under the head.

``sigma_1`` images are bound to auxiliary variables through the ``Sigma1``
macro and ``sigma_2`` steps through ``Sigma2``, so the sentence does not
depend on k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..tm import ACCEPT, BLANK, TuringMachine
from .ast import (
    POWK, POWL, Eq, Exists, Forall, Formula, Guard, Implies, Le, Lt, Not, Var, conj, disj, macro,
)

K1, K2, L1, L2, K, L = (Var(n) for n in ("K1", "K2", "L1", "L2", "K", "L"))
CLAUSES = ("a", "b", "c", "d", "e")


def omega(u: int, v: int, k_: Var, l_: Var) -> Formula:
    return macro("Omega", K1, k_, l_, params=(u, v))


def _state_any(u: int, u1: int, k_: Var, l_: Var) -> Formula:
    return disj(*(omega(u, i, k_, l_) for i in range(1, u1 + 1)))


def _pairwise_exclusive(u: int, lo: int, hi: int) -> list[Formula]:
    return [
        Not(conj(omega(u, i, K, L), omega(u, j, K, L)))
        for i in range(lo, hi + 1)
        for j in range(i + 1, hi + 1)
    ]


def _at_successor_row(body_of: Callable[[Var], Formula]) -> Formula:
    """∃K' ∈ k^N (K' = sigma_1(K) ∧ body(K'))."""
    return Exists("Kn", POWK, conj(macro("Sigma1", K, Var("Kn"), params=(1,)), body_of(Var("Kn"))))


def _moved(u: int, target: int, move: int, k_next: Var) -> Formula:
    """The state marker ``target`` appears at (k_next, sigma_2^move(K1, L)).

    A left move from the first column stays in place.
    """
    Lm = Var("Lm")
    if move > 0:
        return Exists("Lm", POWL, conj(macro("Sigma2", K1, L, Lm), omega(u, target, k_next, Lm)))
    return disj(
        conj(Lt(L1, L), Exists("Lm", POWL, conj(macro("Sigma2", K1, Lm, L), omega(u, target, k_next, Lm)))),
        conj(Eq(L, L1), omega(u, target, k_next, L)),
    )


def _apply_rule(m: TuringMachine, u: int, q: int, a: int) -> Formula:
    q2, a2, move = m.delta[(q, a)]
    return _at_successor_row(lambda kn: conj(omega(u, m.u1 + a2, kn, L), _moved(u, q2, move, kn)))


def theta_clauses(m: TuringMachine) -> dict[str, Formula]:
    """The five (six in blank mode) clause bodies, with K and L free."""
    u1, u2 = m.u1, m.u2
    u = u1 + u2
    Kp, Lp, Lq = Var("Kp"), Var("Lp"), Var("Lq")
    in_window = lambda x: conj(macro("S", K1, x), Le(L1, x), Lt(x, L2))  # noqa: E731

    a = conj(*_pairwise_exclusive(u, 1, u1), *_pairwise_exclusive(u, u1 + 1, u))

    b = Exists("Ks", POWK, conj(
        macro("Sigma1", K1, Var("Ks"), params=(1,)),
        omega(u, 1, Var("Ks"), L1),
        *(Not(omega(u, u1 + j, Var("Ks"), L)) for j in range(1, u2 + 1)),
    ))

    c = Exists("Kp", POWK, Exists("Lp", POWL, conj(
        Lt(K1, Kp), Le(Kp, K2), macro("S", K1, Lp), omega(u, ACCEPT, Kp, Lp),
    )))

    d = Exists("Lp", POWL, conj(
        in_window(Lp),
        _state_any(u, u1, K, Lp),
        Forall("Lq", POWL, Implies(conj(in_window(Lq), _state_any(u, u1, K, Lq)), Eq(Lp, Lq))),
    ))

    no_state = conj(*(Not(omega(u, i, K, L)) for i in range(1, u1 + 1)))
    per_symbol = []
    for j in range(1, u2 + 1):
        carried = Implies(no_state, _at_successor_row(lambda kn, j=j: omega(u, u1 + j, kn, L)))
        rules = [
            Implies(omega(u, q, K, L), _apply_rule(m, u, q, j))
            for q in range(1, u1 + 1)
            if (q, j) in m.delta
        ]
        per_symbol.append(Implies(omega(u, u1 + j, K, L), conj(carried, *rules)))
    e = Implies(Lt(K, K2), conj(*per_symbol))

    out = {"a": a, "b": b, "c": c, "d": d, "e": e}
    if m.blank:
        unmarked = conj(*(Not(omega(u, u1 + j, K, L)) for j in range(1, u2 + 1)))
        blank_rules = [
            Implies(conj(omega(u, q, K, L), unmarked), _apply_rule(m, u, q, BLANK))
            for q in range(1, u1 + 1)
            if (q, BLANK) in m.delta
        ]
        out["e'"] = Implies(Lt(K, K2), conj(*blank_rules))
    return out


def window(body: Formula) -> Formula:
    """∀K ∈ k^N ∀L ∈ l^N ((L ∈ S(K1) ∧ K1 < K ≤ K2 ∧ L1 ≤ L < L2) → body)."""
    guard = conj(macro("S", K1, L), Lt(K1, K), Le(K, K2), Le(L1, L), Lt(L, L2))
    return Forall("K", POWK, Forall("L", POWL, Implies(guard, body)))


def build_theta(m: TuringMachine) -> Formula:
    """theta_M(K1, K2, L1, L2); free variables are exactly K1, K2, L1, L2."""
    return window(conj(*theta_clauses(m).values()))


def theta_clause(m: TuringMachine, name: str) -> Formula:
    """A single clause under the same window quantifiers, for clause-by-clause checks."""
    return window(theta_clauses(m)[name])


def build_phi(m: TuringMachine) -> Formula:
    """∃ (K1, K2, L1, L2) ∈ D with a non-empty window and theta_M.

    Without ``K1 < K2`` and ``L1 < L2`` the window quantifier ranges over
    nothing and theta_M holds for every machine.
    """
    body = conj(macro("InD", K1, K2, L1, L2), Lt(K1, K2), Lt(L1, L2), build_theta(m))
    for name, g in (("L2", POWL), ("L1", POWL), ("K2", POWK), ("K1", POWK)):
        body = Exists(name, g, body)
    return body


@dataclass(frozen=True)
class CompileInfo:
    u1: int
    u2: int
    u: int
    mode: str
    clauses: tuple[str, ...]


def compile_info(m: TuringMachine) -> CompileInfo:
    names = tuple(theta_clauses(m))
    return CompileInfo(m.u1, m.u2, m.u1 + m.u2, "blank" if m.blank else "verbatim", names)


# -- the Baker sentence -------------------------------------------------------------


def baker_body(u: Var, v: Var) -> Formula:
    x, y = Var("x"), Var("y")
    return Forall("x", POWK, Forall("y", POWL, Implies(
        disj(Le(v, x), Le(v, y)),
        macro("AbsDiffGt", x, y, u),
    )))


def build_baker_sentence() -> Formula:
    """∀u ∃v ∀x ∈ k^N ∀y ∈ l^N ((x >= v ∨ y >= v) → |x - y| > u)."""
    u, v = Var("u"), Var("v")
    return Forall("u", None, Exists("v", None, baker_body(u, v)))


def bounded_baker() -> Formula:
    """The Baker sentence with range guards ``u <= Umax`` and ``v <= Vmax``.

    Umax and Vmax stay free, so the bounds are supplied through the environment.
    """
    u, v = Var("u"), Var("v")
    return Forall("u", Guard("<=", Var("Umax")), Exists("v", Guard("<=", Var("Vmax")), baker_body(u, v)))


def baker_instance() -> Formula:
    """∃v <= Vmax ∀x ∀y (...), with u and Vmax free."""
    return Exists("v", Guard("<=", Var("Vmax")), baker_body(Var("u"), Var("v")))
