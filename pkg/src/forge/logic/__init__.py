"""First-order formulas over (N, +, k^N, l^N): syntax, macros, evaluation, compilation."""

from .ast import free_vars, is_sentence
from .compile import build_baker_sentence, build_phi, build_theta, theta_clause, theta_clauses
from .evaluate import EvalCaps, Evaluator, eval_bounded, verdict
from .human import render_human
from .macros import MACROS, expand_macros
from .sexpr import parse_sexpr, render_sexpr


def render(f, fmt: str = "sexpr") -> str:
    if fmt == "sexpr":
        return render_sexpr(f)
    if fmt == "human":
        return render_human(f)
    raise ValueError(f"unknown format {fmt!r}")


__all__ = [
    "EvalCaps", "Evaluator", "MACROS", "build_baker_sentence", "build_phi", "build_theta",
    "eval_bounded", "expand_macros", "free_vars", "is_sentence", "parse_sexpr", "render",
    "render_human", "render_sexpr", "theta_clause", "theta_clauses", "verdict",
]
