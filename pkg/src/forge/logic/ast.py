"""Terms and formulas over the signature {+, <, =, 0, 1, PowK, PowL} plus macros.

All nodes are frozen dataclasses, so structural equality is ``==``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union


# -- terms ----------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


Term = Union[Var, Zero, One, Add]


# -- formulas -------------------------------------------------------------------


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Lt:
    left: Term
    right: Term


@dataclass(frozen=True)
class Le:
    left: Term
    right: Term


@dataclass(frozen=True)
class PowK:
    term: Term


@dataclass(frozen=True)
class PowL:
    term: Term


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Guard:
    """Quantifier guard: ``powK``/``powL`` membership or a range ``< bound`` / ``<= bound``."""

    kind: str
    bound: Optional[Term] = None

    def __post_init__(self) -> None:
        if self.kind in ("powK", "powL"):
            if self.bound is not None:
                raise ValueError(f"{self.kind} guard takes no bound")
        elif self.kind in ("<", "<="):
            if self.bound is None:
                raise ValueError(f"range guard {self.kind} needs a bound")
        else:
            raise ValueError(f"unknown guard {self.kind!r}")


POWK = Guard("powK")
POWL = Guard("powL")


@dataclass(frozen=True)
class Forall:
    var: str
    guard: Optional[Guard]
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    guard: Optional[Guard]
    body: "Formula"


@dataclass(frozen=True)
class Macro:
    name: str
    params: tuple[int, ...]
    args: tuple[Term, ...]


Formula = Union[Eq, Lt, Le, PowK, PowL, Top, Bottom, Not, And, Or, Implies, Forall, Exists, Macro]

Quantifier = (Forall, Exists)


# -- construction helpers ---------------------------------------------------------


def v(name: str) -> Var:
    return Var(name)


def add(*terms: Term) -> Term:
    """Left-nested sum; ``add()`` is 0."""
    if not terms:
        return Zero()
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


def times(n: int, t: Term) -> Term:
    """The term t + t + ... + t with n summands."""
    return add(*([t] * n))


def conj(*parts: Formula) -> Formula:
    parts = tuple(p for p in parts if not isinstance(p, Top))
    if not parts:
        return Top()
    return parts[0] if len(parts) == 1 else And(parts)


def disj(*parts: Formula) -> Formula:
    parts = tuple(p for p in parts if not isinstance(p, Bottom))
    if not parts:
        return Bottom()
    return parts[0] if len(parts) == 1 else Or(parts)


def macro(name: str, *args: Union[str, Term], params: tuple[int, ...] = ()) -> Macro:
    return Macro(name, tuple(params), tuple(Var(a) if isinstance(a, str) else a for a in args))


# -- traversal --------------------------------------------------------------------


def term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, Add):
        yield from term_vars(t.left)
        yield from term_vars(t.right)


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (Eq, Lt, Le)):
        return frozenset(term_vars(f.left)) | frozenset(term_vars(f.right))
    if isinstance(f, (PowK, PowL)):
        return frozenset(term_vars(f.term))
    if isinstance(f, (Top, Bottom)):
        return frozenset()
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        return frozenset().union(*(free_vars(p) for p in f.parts))
    if isinstance(f, Implies):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Forall, Exists)):
        inner = free_vars(f.body) - {f.var}
        if f.guard is not None and f.guard.bound is not None:
            inner |= frozenset(term_vars(f.guard.bound))
        return inner
    if isinstance(f, Macro):
        return frozenset(x for a in f.args for x in term_vars(a))
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, (And, Or)):
        return f.parts
    if isinstance(f, Implies):
        return (f.left, f.right)
    if isinstance(f, (Forall, Exists)):
        return (f.body,)
    return ()


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal of formula nodes."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def count_macros(f: Formula, name: Optional[str] = None) -> int:
    return sum(1 for n in walk(f) if isinstance(n, Macro) and (name is None or n.name == name))


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))
