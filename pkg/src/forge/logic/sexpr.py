"""S-expression reader and writer for formulas.

The grammar is documented in ``docs/sexpr.md``.  ``render`` always produces
the canonical single-line form, and ``parse(render(f)) == f`` for every
formula ``f``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..errors import ParseError
from .ast import (
    Add, And, Bottom, Eq, Exists, Forall, Formula, Guard, Implies, Le, Lt, Macro, Not, One, Or,
    PowK, PowL, Term, Top, Var, Zero,
)
from .macros import MACROS

KEYWORDS = {
    "true", "false", "not", "and", "or", "implies", "forall", "exists", "macro",
    "powK", "powL", "+", "=", "<", "<=",
}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


@dataclass
class _Atom:
    text: str
    pos: int


@dataclass
class _List:
    items: list["_Node"]
    pos: int


_Node = Union[_Atom, _List]


def _read(text: str) -> _Node:
    stack: list[_List] = []
    top: list[_Node] = []
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if tok[0].isspace() or tok[0] == ";":
            continue
        if tok == "(":
            stack.append(_List([], m.start()))
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", position=m.start())
            done = stack.pop()
            (stack[-1].items if stack else top).append(done)
        else:
            (stack[-1].items if stack else top).append(_Atom(tok, m.start()))
    if stack:
        raise ParseError("unclosed '('", position=stack[-1].pos)
    if not top:
        raise ParseError("empty input", position=0)
    if len(top) > 1:
        raise ParseError("trailing input after formula", position=top[1].pos)
    return top[0]


def _ident(node: _Node, what: str) -> str:
    if not isinstance(node, _Atom) or node.text in KEYWORDS or not _IDENT.match(node.text):
        raise ParseError(f"expected {what}", position=node.pos)
    return node.text


def _term(node: _Node) -> Term:
    if isinstance(node, _Atom):
        if node.text == "0":
            return Zero()
        if node.text == "1":
            return One()
        return Var(_ident(node, "a term"))
    if len(node.items) == 3 and isinstance(node.items[0], _Atom) and node.items[0].text == "+":
        return Add(_term(node.items[1]), _term(node.items[2]))
    raise ParseError("expected a term", position=node.pos)


def _guard(items: list[_Node], pos: int) -> Guard | None:
    if not items:
        return None
    head = items[0]
    if isinstance(head, _Atom) and head.text in ("powK", "powL") and len(items) == 1:
        return Guard(head.text)
    if isinstance(head, _Atom) and head.text in ("<", "<=") and len(items) == 2:
        return Guard(head.text, _term(items[1]))
    raise ParseError("bad quantifier guard", position=pos)


def _int(node: _Node) -> int:
    if not isinstance(node, _Atom) or not node.text.isdigit():
        raise ParseError("expected a macro parameter (natural number)", position=node.pos)
    return int(node.text)


def _formula(node: _Node) -> Formula:
    if isinstance(node, _Atom):
        if node.text == "true":
            return Top()
        if node.text == "false":
            return Bottom()
        raise ParseError(f"expected a formula, got {node.text!r}", position=node.pos)
    if not node.items or not isinstance(node.items[0], _Atom):
        raise ParseError("expected an operator", position=node.pos)
    head, rest = node.items[0].text, node.items[1:]

    def arity(n: int) -> None:
        if len(rest) != n:
            raise ParseError(f"'{head}' takes {n} argument(s), got {len(rest)}", position=node.pos)

    if head in ("=", "<", "<="):
        arity(2)
        cls = {"=": Eq, "<": Lt, "<=": Le}[head]
        return cls(_term(rest[0]), _term(rest[1]))
    if head in ("powK", "powL"):
        arity(1)
        return (PowK if head == "powK" else PowL)(_term(rest[0]))
    if head == "not":
        arity(1)
        return Not(_formula(rest[0]))
    if head in ("and", "or"):
        parts = tuple(_formula(x) for x in rest)
        return And(parts) if head == "and" else Or(parts)
    if head == "implies":
        arity(2)
        return Implies(_formula(rest[0]), _formula(rest[1]))
    if head in ("forall", "exists"):
        arity(2)
        binder = rest[0]
        if not isinstance(binder, _List) or not binder.items:
            raise ParseError("expected a binder (var [guard])", position=binder.pos)
        var = _ident(binder.items[0], "a bound variable")
        guard = _guard(binder.items[1:], binder.pos)
        return (Forall if head == "forall" else Exists)(var, guard, _formula(rest[1]))
    if head == "macro":
        if not rest:
            raise ParseError("macro needs a name", position=node.pos)
        mhead = rest[0]
        if isinstance(mhead, _Atom):
            name, params = mhead.text, ()
        elif mhead.items and isinstance(mhead.items[0], _Atom):
            name, params = mhead.items[0].text, tuple(_int(x) for x in mhead.items[1:])
        else:
            raise ParseError("bad macro name", position=mhead.pos)
        info = MACROS.get(name)
        if info is None:
            raise ParseError(f"unknown macro {name!r}", position=mhead.pos)
        args = tuple(_term(x) for x in rest[1:])
        if len(args) != info.arity or len(params) != info.params:
            raise ParseError(
                f"macro {name} takes {info.params} parameter(s) and {info.arity} argument(s)",
                position=node.pos,
            )
        return Macro(name, params, args)
    raise ParseError(f"unknown operator {head!r}", position=node.items[0].pos)


def parse_sexpr(text: str) -> Formula:
    return _formula(_read(text))


def parse_term(text: str) -> Term:
    return _term(_read(text))


# -- writer -------------------------------------------------------------------------


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    return f"(+ {render_term(t.left)} {render_term(t.right)})"


def render_sexpr(f: Formula) -> str:
    out: list[str] = []
    _emit(f, out)
    return "".join(out)


def _emit(f: Formula, out: list[str]) -> None:
    # explicit stack keeps deep formulas (large expansions) off the recursion limit
    stack: list[Union[Formula, str]] = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            out.append(node)
            continue
        if isinstance(node, Top):
            out.append("true")
        elif isinstance(node, Bottom):
            out.append("false")
        elif isinstance(node, (Eq, Lt, Le)):
            op = {Eq: "=", Lt: "<", Le: "<="}[type(node)]
            out.append(f"({op} {render_term(node.left)} {render_term(node.right)})")
        elif isinstance(node, (PowK, PowL)):
            out.append(f"({'powK' if isinstance(node, PowK) else 'powL'} {render_term(node.term)})")
        elif isinstance(node, Macro):
            name = node.name if not node.params else "(" + " ".join([node.name, *map(str, node.params)]) + ")"
            args = "".join(" " + render_term(a) for a in node.args)
            out.append(f"(macro {name}{args})")
        elif isinstance(node, Not):
            out.append("(not ")
            stack.extend([")", node.body])
        elif isinstance(node, (And, Or)):
            out.append("(and" if isinstance(node, And) else "(or")
            stack.append(")")
            for p in reversed(node.parts):
                stack.extend([p, " "])
        elif isinstance(node, Implies):
            out.append("(implies ")
            stack.extend([")", node.right, " ", node.left])
        elif isinstance(node, (Forall, Exists)):
            q = "forall" if isinstance(node, Forall) else "exists"
            g = node.guard
            if g is None:
                binder = f"({node.var})"
            elif g.bound is None:
                binder = f"({node.var} {g.kind})"
            else:
                binder = f"({node.var} {g.kind} {render_term(g.bound)})"
            out.append(f"({q} {binder} ")
            stack.extend([")", node.body])
        else:
            raise TypeError(f"not a formula: {node!r}")
