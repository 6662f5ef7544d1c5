"""Readable Unicode rendering.  Output only; macros are printed unexpanded."""

from __future__ import annotations

from .ast import (
    Add, And, Bottom, Eq, Exists, Forall, Formula, Implies, Le, Lt, Macro, Not, One, Or, PowK,
    PowL, Term, Top, Var, Zero,
)

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    assert isinstance(t, Add)
    return f"{_term(t.left)} + {_term(t.right)}"


def _paren_term(t: Term) -> str:
    return f"({_term(t)})" if isinstance(t, Add) else _term(t)


def _macro(m: Macro) -> str:
    args = ", ".join(_term(a) for a in m.args)
    if m.name == "S":
        return f"{_paren_term(m.args[1])} ∈ S({_term(m.args[0])})"
    if m.name == "Lambda":
        return f"{_paren_term(m.args[1])} = λ({_term(m.args[0])})"
    if m.name == "Sigma1":
        return f"{_paren_term(m.args[1])} = σ₁^{m.params[0]}({_term(m.args[0])})"
    if m.name == "Sigma2":
        return f"{_paren_term(m.args[2])} = σ₂({_term(m.args[0])}, {_term(m.args[1])})"
    if m.name == "InD":
        return f"({args}) ∈ D"
    if m.name == "InDR":
        return f"({args}) ∈ D({m.params[0]},{m.params[1]})"
    if m.name == "Theta":
        return f"({args}) ∈ Θ{str(m.params[0]).translate(_SUB)}"
    if m.name == "Omega":
        return f"({args}) ∈ Ω_{{{m.params[0]},{m.params[1]}}}"
    if m.name == "AbsDiffGt":
        x, y, u = (_term(a) for a in m.args)
        return f"|{x} − {y}| > {u}"
    return f"{m.name}({args})"


def _guard(f: Forall | Exists) -> str:
    g = f.guard
    if g is None:
        return f.var
    if g.kind == "powK":
        return f"{f.var} ∈ k^ℕ"
    if g.kind == "powL":
        return f"{f.var} ∈ ℓ^ℕ"
    return f"{f.var} {'<' if g.kind == '<' else '≤'} {_term(g.bound)}"


def render_human(f: Formula) -> str:
    return _fmt(f, top=True)


def _fmt(f: Formula, top: bool = False) -> str:
    if isinstance(f, Top):
        return "⊤"
    if isinstance(f, Bottom):
        return "⊥"
    if isinstance(f, Eq):
        return f"{_term(f.left)} = {_term(f.right)}"
    if isinstance(f, Lt):
        return f"{_term(f.left)} < {_term(f.right)}"
    if isinstance(f, Le):
        return f"{_term(f.left)} ≤ {_term(f.right)}"
    if isinstance(f, PowK):
        return f"{_paren_term(f.term)} ∈ k^ℕ"
    if isinstance(f, PowL):
        return f"{_paren_term(f.term)} ∈ ℓ^ℕ"
    if isinstance(f, Macro):
        return _macro(f)
    if isinstance(f, Not):
        return f"¬{_fmt(f.body)}" if isinstance(f.body, (Macro, Not)) else f"¬({_fmt(f.body, True)})"
    if isinstance(f, (And, Or)):
        if not f.parts:
            return "⊤" if isinstance(f, And) else "⊥"
        sep = " ∧ " if isinstance(f, And) else " ∨ "
        body = sep.join(_fmt(p) for p in f.parts)
        return body if top else f"({body})"
    if isinstance(f, Implies):
        body = f"{_fmt(f.left)} → {_fmt(f.right)}"
        return body if top else f"({body})"
    if isinstance(f, (Forall, Exists)):
        q = "∀" if isinstance(f, Forall) else "∃"
        return f"{q}{_guard(f)} {_fmt(f.body)}"
    raise TypeError(f"not a formula: {f!r}")
