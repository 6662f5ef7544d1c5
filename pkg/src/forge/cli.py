"""The ``forge`` command line.

Exit status: 0 on success, 1 on a domain failure (any :class:`ForgeError`,
or an unreadable input file), 2 on a usage error.  JSON documents follow the
schemas in :mod:`forge.schemas`.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from . import grid, pattern, radix, tm
from .errors import ForgeError, ParseError
from .logic import (
    EvalCaps, Evaluator, build_baker_sentence, build_phi, build_theta, expand_macros, parse_sexpr,
    render, verdict,
)
from .logic.compile import compile_info, theta_clause
from .radix import BasePair
from .report import document, emit_report

DEFAULTS = {
    "k": 2,
    "ell": 3,
    "format": "json",
    "v_budget": 10_000,
    "window": 20_000,
    "m_max": 10_000,
    "max_steps": 1_000,
    "jobs": 1,
    "seed": 0,
}


@dataclass(frozen=True)
class RunConfig:
    bases: BasePair
    v_budget: int
    window: int
    m_max: int
    max_steps: int
    output: str
    jobs: int
    seed: int
    swapped: bool = False

    @property
    def budget(self) -> pattern.Budget:
        return pattern.Budget(self.v_budget, self.window)


class UsageError(Exception):
    """Bad option values detected after argparse (mapped to exit 2)."""


def _resolve(args: argparse.Namespace) -> RunConfig:
    cfg: dict[str, Any] = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")

    def pick(name: str) -> Any:
        val = getattr(args, name, None)
        if val is None:
            val = cfg.get(name, DEFAULTS[name])
        return val

    values = {n: pick(n) for n in DEFAULTS}
    for n in ("v_budget", "window", "m_max", "max_steps", "jobs"):
        if not isinstance(values[n], int) or values[n] < 1:
            raise UsageError(f"{n.replace('_', '-')} must be a positive integer")
    if values["format"] not in ("json", "csv", "text"):
        raise UsageError(f"unknown format {values['format']!r}")
    bases = BasePair(int(values["k"]), int(values["ell"]))
    return RunConfig(
        bases, values["v_budget"], values["window"], values["m_max"], values["max_steps"],
        values["format"], values["jobs"], values["seed"],
    )


def _for_pattern(cfg: RunConfig) -> RunConfig:
    """Pattern search assumes k < l; swap otherwise and record it."""
    if cfg.bases.k < cfg.bases.ell:
        return cfg
    return RunConfig(cfg.bases.swapped(), cfg.v_budget, cfg.window, cfg.m_max, cfg.max_steps,
                     cfg.output, cfg.jobs, cfg.seed, swapped=True)


def _bases_fields(cfg: RunConfig) -> dict[str, Any]:
    out: dict[str, Any] = {"k": cfg.bases.k, "ell": cfg.bases.ell}
    if cfg.swapped:
        out["swapped"] = True
    return out


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


# -- s-scan, baker-scan ----------------------------------------------------------------


def cmd_s_scan(args: argparse.Namespace, cfg: RunConfig) -> dict:
    ms = radix.s_scan(cfg.bases, args.x, args.lo, args.hi)
    return document("s-scan", **_bases_fields(cfg), x=args.x, lo=args.lo, hi=args.hi, exponents=ms,
                    table={"columns": ["m"], "rows": [[m] for m in ms]})


def cmd_baker_scan(args: argparse.Namespace, cfg: RunConfig) -> dict:
    res = radix.baker_gap_scan(cfg.bases, args.a_max, args.b_max)
    if args.all:
        rows = [[a, b, abs(cfg.bases.kpow(a) - cfg.bases.lpow(b))]
                for a in range(1, args.a_max + 1) for b in range(1, args.b_max + 1)]
    else:
        rows = [[a, b, res.min_gap] for a, b in res.witnesses]
    return document("baker-scan", **_bases_fields(cfg), a_max=args.a_max, b_max=args.b_max,
                    min_gap=res.min_gap, witnesses=[list(w) for w in res.witnesses],
                    table={"columns": ["a", "b", "gap"], "rows": rows})


# -- pattern ---------------------------------------------------------------------------


def cmd_pattern_find(args: argparse.Namespace, cfg: RunConfig) -> dict:
    cfg = _for_pattern(cfg)
    word = grid.parse_word(args.word)
    w = pattern.find_pattern_witness(cfg.bases, word, args.R, args.strategy, cfg.budget)
    ok = pattern.verify_pattern_witness(cfg.bases, word, args.R, w)
    return document("pattern find", **_bases_fields(cfg), word=grid.format_word(word, args.R), R=args.R,
                    strategy=args.strategy, n=w.n, m=list(w.m), verified=ok,
                    table={"columns": ["j", "letter", "m", "row"],
                           "rows": [[j, c, m, w.n + c] for j, (c, m) in enumerate(zip(word, w.m))]})


def cmd_pattern_verify(args: argparse.Namespace, cfg: RunConfig) -> dict:
    cfg = _for_pattern(cfg)
    word = grid.parse_word(args.word)
    w = pattern.PatternWitness(args.n, tuple(_int_list(args.m)))
    ok = pattern.verify_pattern_witness(cfg.bases, word, args.R, w)
    return document("pattern verify", **_bases_fields(cfg), word=grid.format_word(word, args.R), R=args.R,
                    n=w.n, m=list(w.m), verified=ok)


def cmd_pattern_refine(args: argparse.Namespace, cfg: RunConfig) -> dict:
    cfg = _for_pattern(cfg)
    consts = pattern.safe_constants(cfg.bases, args.R)
    n = consts.N if args.n is None else args.n
    s, t = pattern.find_refinement(cfg.bases, args.R, n, args.r, cfg.v_budget)
    return document("pattern refine", **_bases_fields(cfg), R=args.R, n=n, r=args.r, s=s, t=t,
                    verified=pattern.refinement_holds(cfg.bases, args.R, n, args.r, s, t),
                    constants={"E": consts.E, "M": consts.M, "delta": str(consts.delta), "N": consts.N})


# -- codec -----------------------------------------------------------------------------


def _load_subsets(path: str) -> tuple[grid.SubsetTuple, int]:
    try:
        data = json.loads(_read(path))
        return grid.make_subsets(data["sets"]), int(data["R"])
    except (json.JSONDecodeError, KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"bad subset document: {exc}") from None


def _subsets_json(X: grid.SubsetTuple) -> list[list[list[int]]]:
    return [[list(p) for p in sorted(s)] for s in X]


def cmd_codec_encode(args: argparse.Namespace, cfg: RunConfig) -> dict:
    X, R = _load_subsets(args.file)
    B = grid.encode_matrix(X, R)
    word = grid.word_of_matrix(B)
    return document("codec encode", R=R, u=len(X), matrix=B.to_lists(), word=grid.format_word(word, R))


def cmd_codec_decode(args: argparse.Namespace, cfg: RunConfig) -> dict:
    word = grid.parse_word(args.word)
    B = grid.matrix_of_word(word, args.R)
    X = grid.decode_subsets(word, args.R, args.u)
    return document("codec decode", R=args.R, u=args.u, well_formed=grid.is_well_formed(word, args.R),
                    matrix=B.to_lists(), sets=_subsets_json(X))


def cmd_codec_roundtrip(args: argparse.Namespace, cfg: RunConfig) -> dict:
    X, R = _load_subsets(args.file)
    B = grid.encode_matrix(X, R)
    word = grid.word_of_matrix(B)
    back = grid.decode_subsets(word, R, len(X))
    ok = back == grid.restrict(X, R) and grid.matrix_of_word(word, R) == B
    if not ok:
        raise ForgeError("codec round trip failed")
    return document("codec roundtrip", R=R, u=len(X), word=grid.format_word(word, R), ok=ok)


# -- machines --------------------------------------------------------------------------


def _machine(path: str) -> tm.TuringMachine:
    return tm.parse_tm(_read(path))


def _grids_json(g: tm.GridWitnessSets) -> dict:
    return {"R1": g.R1, "R2": g.R2, "A": _subsets_json(tuple(g.A)), "B": _subsets_json(tuple(g.B))}


def cmd_tm_parse(args: argparse.Namespace, cfg: RunConfig) -> dict:
    m = _machine(args.file)
    return document("tm parse", u1=m.u1, u2=m.u2, mode="blank" if m.blank else "verbatim",
                    rules=len(m.delta), text=m.to_text())


def cmd_tm_simulate(args: argparse.Namespace, cfg: RunConfig) -> dict:
    m = _machine(args.file)
    t = tm.simulate(m, cfg.max_steps)
    rows = [[s, c.state, c.head, json.dumps(c.tape_dict(), sort_keys=True)] for s, c in enumerate(t.steps)]
    return document("tm simulate", halted=t.halted, stuck=t.stuck, steps=len(t.steps) - 1,
                    table={"columns": ["step", "state", "head", "tape"], "rows": rows})


def cmd_tm_grids(args: argparse.Namespace, cfg: RunConfig) -> dict:
    m = _machine(args.file)
    t = tm.simulate(m, cfg.max_steps)
    g = tm.trace_to_grids(m, t, allow_partial=True)
    return document("tm grids", halted=t.halted, **_grids_json(g))


def _conditions_doc(m: tm.TuringMachine, g: tm.GridWitnessSets) -> list[dict]:
    return [
        {"condition": r.name, "ok": r.ok,
         "counterexample": list(r.counterexample) if r.counterexample else None, "detail": r.detail}
        for r in tm.check_conditions(m, g)
    ]


def cmd_tm_check(args: argparse.Namespace, cfg: RunConfig) -> dict:
    m = _machine(args.file)
    t = tm.simulate(m, cfg.max_steps)
    g = tm.trace_to_grids(m, t, allow_partial=True)
    conds = _conditions_doc(m, g)
    return document("tm check", halted=t.halted, all_pass=all(c["ok"] for c in conds), conditions=conds,
                    table={"columns": ["condition", "ok", "counterexample", "detail"],
                           "rows": [[c["condition"], c["ok"], c["counterexample"], c["detail"]] for c in conds]})


# -- compile ---------------------------------------------------------------------------


def _compiled(args: argparse.Namespace, cfg: RunConfig, f, extra: dict) -> dict:
    if args.expand:
        f = expand_macros(f, k=cfg.bases.k, s_form=args.s_form)
    return document(f"compile {args.which}", syntax=args.syntax, expanded=args.expand, **extra,
                    formula=render(f, args.syntax))


def cmd_compile(args: argparse.Namespace, cfg: RunConfig) -> dict:
    if args.which == "baker":
        return _compiled(args, cfg, build_baker_sentence(), {})
    if not args.file:
        raise UsageError(f"compile {args.which} needs --file MACHINE")
    m = _machine(args.file)
    info = compile_info(m)
    meta = {"u1": info.u1, "u2": info.u2, "u": info.u, "mode": info.mode, "clauses": list(info.clauses)}
    f = build_theta(m) if args.which == "theta" else build_phi(m)
    return _compiled(args, cfg, f, meta)


# -- witnesses -------------------------------------------------------------------------


def _witness_doc(cfg: RunConfig, w: tm.ModelWitness, X: grid.SubsetTuple, origin: dict) -> dict:
    cap = max(cfg.m_max, w.d.b2)
    dims = radix.d_check(cfg.bases, w.d)
    mismatches = sum(1 for i, j, v, hit in tm.omega_table(cfg.bases, w.d, w.u, w.R, cap) if hit != ((i, j) in X[v - 1]))
    return document(
        "witness build", **_bases_fields(cfg), **origin,
        witness={"K1": w.d.a1, "K2": w.d.a2, "L1": w.d.b1, "L2": w.d.b2},
        u=w.u, R=w.R, pattern={"n": w.pattern.n, "m": list(w.pattern.m)}, sets=_subsets_json(X),
        verification={"d_check": list(dims) if dims else None, "tau": tm.tau_check(cfg.bases, w.d, cap),
                      "cells": w.R * w.R * w.u, "mismatches": mismatches,
                      "verified": tm.verify_model_witness(cfg.bases, w, X, cap)},
    )


def cmd_witness_build(args: argparse.Namespace, cfg: RunConfig) -> dict:
    cfg = _for_pattern(cfg)
    if bool(args.file) == bool(args.subsets):
        raise UsageError("witness build needs exactly one of --file MACHINE or --subsets FILE")
    if args.file:
        m = _machine(args.file)
        t = tm.simulate(m, cfg.max_steps)
        g = tm.trace_to_grids(m, t)
        w = tm.build_model_witness(cfg.bases, m, g, args.strategy, cfg.budget, cfg.m_max)
        return _witness_doc(cfg, w, g.subsets(), {"source": "machine", "R1": g.R1, "R2": g.R2})
    X, R = _load_subsets(args.subsets)
    w = tm.realize_subsets(cfg.bases, X, R, args.strategy, cfg.budget, cfg.m_max)
    return _witness_doc(cfg, w, grid.restrict(X, R), {"source": "subsets"})


def cmd_witness_verify(args: argparse.Namespace, cfg: RunConfig) -> dict:
    try:
        data = json.loads(_read(args.file))
        wd, R, u = data["witness"], int(data["R"]), int(data["u"])
        X = grid.make_subsets(data["sets"])
        pw = pattern.PatternWitness(int(data["pattern"]["n"]), tuple(data["pattern"]["m"]))
        d = radix.DWitness(int(wd["K1"]), int(wd["K2"]), int(wd["L1"]), int(wd["L2"]))
        bases = BasePair(int(data.get("k", cfg.bases.k)), int(data.get("ell", cfg.bases.ell)))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ForgeError):
            raise
        raise ParseError(f"bad witness document: {exc}") from None
    w = tm.ModelWitness(d, u, R, pw)
    ok = tm.verify_model_witness(bases, w, X, cfg.m_max)
    return document("witness verify", k=bases.k, ell=bases.ell, witness=wd, verified=ok)


# -- eval ------------------------------------------------------------------------------


def _env_value(text: str, name: str) -> int:
    text = text.strip()
    try:
        if "^" in text:
            base, exp = text.split("^", 1)
            return int(base) ** int(exp)
        return int(text)
    except ValueError:
        raise ParseError(f"bad value for {name}: {text!r}") from None


def cmd_eval(args: argparse.Namespace, cfg: RunConfig) -> dict:
    if bool(args.formula) == bool(args.builtin):
        raise UsageError("eval needs exactly one of --formula FILE or --builtin NAME")
    if args.builtin:
        if args.builtin == "baker":
            f = build_baker_sentence()
        else:
            if not args.machine:
                raise UsageError(f"--builtin {args.builtin} needs --machine FILE")
            m = _machine(args.machine)
            if args.builtin == "theta":
                f = build_theta(m)
            elif args.builtin == "phi":
                f = build_phi(m)
            else:
                f = theta_clause(m, args.builtin.split("-", 1)[1])
    else:
        f = parse_sexpr(_read(args.formula))
    if args.expand:
        f = expand_macros(f, k=cfg.bases.k, s_form=args.s_form)
    env: dict[str, int] = {}
    for item in args.env or []:
        if "=" not in item:
            raise UsageError(f"--env expects NAME=VALUE, got {item!r}")
        name, val = item.split("=", 1)
        env[name.strip()] = _env_value(val, name)
    ev = Evaluator(cfg.bases, EvalCaps(args.cap_k, args.cap_l, args.range_limit))
    result = ev.eval(f, env)
    return document("eval", **_bases_fields(cfg), caps={"cap_k": args.cap_k, "cap_l": args.cap_l},
                    env=env, result=result, verdict=verdict(f, result))


# -- parser ----------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--k", type=int, help="first base (default 2)")
    g.add_argument("--ell", type=int, help="second base (default 3)")
    g.add_argument("--format", choices=["json", "csv", "text"], help="output format (default json)")
    g.add_argument("--config", help="JSON file with defaults for these options")
    g.add_argument("--v-budget", dest="v_budget", type=int, help="refinement index budget (default 10000)")
    g.add_argument("--window", type=int, help="scan window for l-exponents (default 20000)")
    g.add_argument("--m-max", dest="m_max", type=int, help="successor search cap (default 10000)")
    g.add_argument("--max-steps", dest="max_steps", type=int, help="simulation step budget (default 1000)")
    g.add_argument("--jobs", type=int, help="worker cap (searches here run in one process)")
    g.add_argument("--seed", type=int, help="seed for randomised suites")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="forge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(container, name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        p = container.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(fn=fn)
        return p

    p = leaf(sub, "s-scan", cmd_s_scan, "list exponents m in [lo, hi] with l^m in S(k^x)")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)

    p = leaf(sub, "baker-scan", cmd_baker_scan, "minimum of |k^a - l^b| over a box of exponents")
    p.add_argument("--a-max", dest="a_max", type=int, default=30)
    p.add_argument("--b-max", dest="b_max", type=int, default=30)
    p.add_argument("--all", action="store_true", help="tabulate every pair, not just the minimisers")

    pat = sub.add_parser("pattern", help="pattern realisation").add_subparsers(dest="action", required=True)
    p = leaf(pat, "find", cmd_pattern_find, "find a witness realising a word")
    p.add_argument("--word", required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--strategy", choices=["scan", "chain", "auto"], default="scan")
    p = leaf(pat, "verify", cmd_pattern_verify, "check a witness against a word")
    p.add_argument("--word", required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", required=True, help="comma-separated exponents")
    p = leaf(pat, "refine", cmd_pattern_refine, "one refinement step inside a k-window")
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, help="defaults to the safe threshold N")

    cod = sub.add_parser("codec", help="subset/matrix/word codecs").add_subparsers(dest="action", required=True)
    p = leaf(cod, "encode", cmd_codec_encode, "subset tuple to matrix and word")
    p.add_argument("--file", required=True)
    p = leaf(cod, "decode", cmd_codec_decode, "word to matrix and subset tuple")
    p.add_argument("--word", required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p = leaf(cod, "roundtrip", cmd_codec_roundtrip, "encode then decode, failing on any difference")
    p.add_argument("--file", required=True)

    tmp = sub.add_parser("tm", help="Turing machines").add_subparsers(dest="action", required=True)
    for name, fn, h in (("parse", cmd_tm_parse, "validate a machine"),
                        ("simulate", cmd_tm_simulate, "run from the empty tape"),
                        ("grids", cmd_tm_grids, "encode the run as subsets of N^2"),
                        ("check", cmd_tm_check, "check the encoding conditions")):
        p = leaf(tmp, name, fn, h)
        p.add_argument("--file", required=True)

    com = sub.add_parser("compile", help="build sentences").add_subparsers(dest="which", required=True)
    for name in ("theta", "phi", "baker"):
        p = leaf(com, name, cmd_compile, f"print the {name} formula")
        if name != "baker":
            p.add_argument("--file", required=True, help="machine description")
        else:
            p.set_defaults(file=None)
        p.add_argument("--syntax", choices=["sexpr", "human"], default="sexpr")
        p.add_argument("--expand", action="store_true", help="expand macros to the core signature")
        p.add_argument("--s-form", dest="s_form", choices=["lambda", "interval"], default="lambda")

    wit = sub.add_parser("witness", help="model witnesses").add_subparsers(dest="action", required=True)
    p = leaf(wit, "build", cmd_witness_build, "build (K1, K2, L1, L2) for a machine or subset tuple")
    p.add_argument("--file", help="machine description")
    p.add_argument("--subsets", help="subset tuple JSON")
    p.add_argument("--strategy", choices=["scan", "chain", "auto"], default="scan")
    p = leaf(wit, "verify", cmd_witness_verify, "re-verify a witness document")
    p.add_argument("--file", required=True)

    p = leaf(sub, "eval", cmd_eval, "cap-bounded evaluation of a formula")
    p.add_argument("--formula", help="S-expression file")
    p.add_argument("--builtin", choices=["theta", "phi", "baker", *(f"theta-{c}" for c in "abcde"), "theta-e'"])
    p.add_argument("--machine", help="machine for --builtin theta/phi")
    p.add_argument("--env", action="append", metavar="NAME=VALUE", help="value such as 7, 2^5 or 3^9")
    p.add_argument("--cap-k", dest="cap_k", type=int, default=16)
    p.add_argument("--cap-l", dest="cap_l", type=int, default=16)
    p.add_argument("--range-limit", dest="range_limit", type=int, default=10**6)
    p.add_argument("--expand", action="store_true")
    p.add_argument("--s-form", dest="s_form", choices=["lambda", "interval"], default="lambda")
    return parser


def dispatch(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args)
        doc = args.fn(args, cfg)
        out.write(emit_report(doc, cfg.output))
        return 0
    except UsageError as exc:
        err.write(f"forge: error: {exc}\n")
        return 2
    except (ForgeError, OSError) as exc:
        err.write(f"forge: {type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
