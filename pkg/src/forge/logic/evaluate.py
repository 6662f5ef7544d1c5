"""Cap-bounded evaluation of formulas in (N, +, k^N, l^N).

Quantifiers over k^N and l^N range over k^0..k^cap_k and l^0..l^cap_l;
quantifiers over N need a range guard.  Existential truth found inside the
caps is genuine; universal truth is only known up to the caps, which
:func:`verdict` reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from ..errors import CapTooSmall, DomainError, UnboundedQuantifier
from ..radix import BasePair, power
from .ast import (
    Add, And, Bottom, Eq, Exists, Forall, Formula, Implies, Le, Lt, Macro, Not, One, Or, PowK,
    PowL, Term, Top, Var, Zero, free_vars,
)
from .macros import macro_holds

CAP_SENSITIVE = frozenset({"Sigma2", "Theta", "Omega", "InDR"})


@dataclass(frozen=True)
class EvalCaps:
    cap_k: int
    cap_l: int
    range_limit: int = 10**6

    def __post_init__(self) -> None:
        if self.cap_k < 0 or self.cap_l < 0:
            raise DomainError("caps must be >= 0")


class Evaluator:
    """Tarskian evaluation with memoised quantifier and macro nodes.

    The memo is keyed by node identity plus the values of the node's free
    variables, so one evaluator can be reused across many environments for
    the same formula object.
    """

    def __init__(self, bases: BasePair, caps: EvalCaps):
        self.bases = bases
        self.caps = caps
        self.kpows = [power(bases.k, i) for i in range(caps.cap_k + 1)]
        self.lpows = [power(bases.ell, i) for i in range(caps.cap_l + 1)]
        self._kset = frozenset(self.kpows)
        self._lset = frozenset(self.lpows)
        self._memo: dict[tuple, bool] = {}
        self._fv: dict[int, tuple[Formula, tuple[str, ...]]] = {}

    # terms

    def term(self, t: Term, env: Mapping[str, int]) -> int:
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise DomainError(f"variable {t.name!r} has no value") from None
        if isinstance(t, Zero):
            return 0
        if isinstance(t, One):
            return 1
        if isinstance(t, Add):
            return self.term(t.left, env) + self.term(t.right, env)
        raise TypeError(f"not a term: {t!r}")

    # membership tests against the true predicates, not the capped lists

    def is_kpow(self, x: int) -> bool:
        if x in self._kset:
            return True
        while x > 1 and x % self.bases.k == 0:
            x //= self.bases.k
        return x == 1

    def is_lpow(self, y: int) -> bool:
        if y in self._lset:
            return True
        while y > 1 and y % self.bases.ell == 0:
            y //= self.bases.ell
        return y == 1

    def domain(self, f: Forall | Exists, env: Mapping[str, int]):
        g = f.guard
        if g is None:
            raise UnboundedQuantifier(f"quantifier over {f.var!r} has no guard")
        if g.kind == "powK":
            return self.kpows
        if g.kind == "powL":
            return self.lpows
        top = self.term(g.bound, env) + (1 if g.kind == "<=" else 0)
        if top > self.caps.range_limit:
            raise CapTooSmall(f"range guard on {f.var!r} reaches {top}, above the limit {self.caps.range_limit}")
        return range(top)

    def _key(self, f: Formula, env: Mapping[str, int]) -> tuple:
        entry = self._fv.get(id(f))
        if entry is None or entry[0] is not f:
            entry = (f, tuple(sorted(free_vars(f))))
            self._fv[id(f)] = entry
        return (id(f),) + tuple(env.get(x) for x in entry[1])

    def eval(self, f: Formula, env: Optional[Mapping[str, int]] = None) -> bool:
        return self._eval(f, dict(env or {}))

    def _eval(self, f: Formula, env: dict[str, int]) -> bool:
        if isinstance(f, Eq):
            return self.term(f.left, env) == self.term(f.right, env)
        if isinstance(f, Lt):
            return self.term(f.left, env) < self.term(f.right, env)
        if isinstance(f, Le):
            return self.term(f.left, env) <= self.term(f.right, env)
        if isinstance(f, PowK):
            return self.is_kpow(self.term(f.term, env))
        if isinstance(f, PowL):
            return self.is_lpow(self.term(f.term, env))
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        if isinstance(f, Not):
            return not self._eval(f.body, env)
        if isinstance(f, And):
            return all(self._eval(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(self._eval(p, env) for p in f.parts)
        if isinstance(f, Implies):
            return not self._eval(f.left, env) or self._eval(f.right, env)
        key = self._key(f, env)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(f, Macro):
            vals = tuple(self.term(a, env) for a in f.args)
            out = macro_holds(self.bases, f.name, f.params, vals, self.caps.cap_l)
        elif isinstance(f, (Forall, Exists)):
            want = isinstance(f, Exists)
            saved = env.get(f.var)
            out = not want
            for val in self.domain(f, env):
                env[f.var] = val
                if self._eval(f.body, env) == want:
                    out = want
                    break
            if saved is None:
                env.pop(f.var, None)
            else:
                env[f.var] = saved
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._memo[key] = out
        return out


def eval_bounded(
    f: Formula,
    env: Optional[Mapping[str, int]],
    caps: EvalCaps,
    bases: BasePair,
) -> bool:
    return Evaluator(bases, caps).eval(f, env)


def _polar_scan(f: Formula, positive: bool, acc: dict[str, bool]) -> None:
    if isinstance(f, Not):
        _polar_scan(f.body, not positive, acc)
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            _polar_scan(p, positive, acc)
    elif isinstance(f, Implies):
        _polar_scan(f.left, not positive, acc)
        _polar_scan(f.right, positive, acc)
    elif isinstance(f, (Forall, Exists)):
        if f.guard is not None and f.guard.kind in ("powK", "powL"):
            universal = isinstance(f, Forall) == positive
            acc["universal" if universal else "existential"] = True
        _polar_scan(f.body, positive, acc)
    elif isinstance(f, Macro) and f.name in CAP_SENSITIVE:
        acc["universal"] = acc["existential"] = True


def verdict(f: Formula, result: bool) -> str:
    """``true``/``false`` when the caps cannot affect the answer, else ``...-within-caps``."""
    acc = {"universal": False, "existential": False}
    _polar_scan(f, True, acc)
    if result:
        return "true-within-caps" if acc["universal"] else "true"
    return "false-within-caps" if acc["existential"] else "false"
