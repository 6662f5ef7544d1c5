"""JSON Schemas (draft 2020-12) for every document the CLI reads or writes.

``OUTPUT[command]`` describes the JSON printed by ``forge <command>``;
``SUBSETS`` and ``WITNESS`` describe the input files of ``codec`` and
``witness verify``.  Every output document shares the ``schema``/``command``
envelope, and unknown top-level fields are rejected so that additions to a
command show up as a schema change.
"""

from __future__ import annotations

from typing import Any

from .report import SCHEMA

_NAT = {"type": "integer", "minimum": 0}
_POS = {"type": "integer", "minimum": 1}
_NATS = {"type": "array", "items": _NAT}
_POINT = {"type": "array", "items": _NAT, "minItems": 2, "maxItems": 2}
_SET = {"type": "array", "items": _POINT}
_SETS = {"type": "array", "items": _SET, "minItems": 1}
_MATRIX = {"type": "array", "items": _NATS}
_WORD = {"type": "string", "pattern": r"^[0-9]+(,[0-9]+)*$"}
_BASES = {"k": {"type": "integer", "minimum": 2}, "ell": {"type": "integer", "minimum": 2}, "swapped": {"const": True}}
_TABLE = {
    "type": "object",
    "properties": {"columns": {"type": "array", "items": {"type": "string"}}, "rows": {"type": "array", "items": {"type": "array"}}},
    "required": ["columns", "rows"],
    "additionalProperties": False,
}
_PATTERN = {
    "type": "object",
    "properties": {"n": _NAT, "m": _NATS},
    "required": ["n", "m"],
    "additionalProperties": False,
}
_EXPONENTS = {
    "type": "object",
    "properties": {"K1": _NAT, "K2": _NAT, "L1": _NAT, "L2": _NAT},
    "required": ["K1", "K2", "L1", "L2"],
    "additionalProperties": False,
}


def _doc(command: str, required: list[str], **props: Any) -> dict[str, Any]:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": f"forge {command}",
        "type": "object",
        "properties": {"schema": {"const": SCHEMA}, "command": {"const": command}, **props},
        "required": ["schema", "command", *required],
        "additionalProperties": False,
    }


_CONDITIONS = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "condition": {"enum": ["1", "2", "3", "4", "5", "6", "6'"]},
            "ok": {"type": "boolean"},
            "counterexample": {"oneOf": [_POINT, {"type": "null"}]},
            "detail": {"type": "string"},
        },
        "required": ["condition", "ok", "counterexample", "detail"],
        "additionalProperties": False,
    },
}

_COMPILE_META = {
    "u1": _POS, "u2": _POS, "u": _POS,
    "mode": {"enum": ["blank", "verbatim"]},
    "clauses": {"type": "array", "items": {"enum": ["a", "b", "c", "d", "e", "e'"]}},
}


def _compile(which: str) -> dict[str, Any]:
    meta = {} if which == "baker" else _COMPILE_META
    return _doc(
        f"compile {which}", ["syntax", "expanded", "formula", *meta],
        syntax={"enum": ["sexpr", "human"]}, expanded={"type": "boolean"}, formula={"type": "string"}, **meta,
    )


OUTPUT: dict[str, dict[str, Any]] = {
    "s-scan": _doc("s-scan", ["k", "ell", "x", "lo", "hi", "exponents", "table"],
                   **_BASES, x=_NAT, lo=_NAT, hi=_NAT, exponents=_NATS, table=_TABLE),
    "baker-scan": _doc("baker-scan", ["k", "ell", "a_max", "b_max", "min_gap", "witnesses", "table"],
                       **_BASES, a_max=_POS, b_max=_POS, min_gap=_NAT,
                       witnesses={"type": "array", "items": _POINT}, table=_TABLE),
    "pattern find": _doc("pattern find", ["k", "ell", "word", "R", "strategy", "n", "m", "verified", "table"],
                         **_BASES, word=_WORD, R=_NAT, strategy={"enum": ["scan", "chain", "auto"]},
                         n=_NAT, m=_NATS, verified={"type": "boolean"}, table=_TABLE),
    "pattern verify": _doc("pattern verify", ["k", "ell", "word", "R", "n", "m", "verified"],
                           **_BASES, word=_WORD, R=_NAT, n=_NAT, m=_NATS, verified={"type": "boolean"}),
    "pattern refine": _doc("pattern refine", ["k", "ell", "R", "n", "r", "s", "t", "verified", "constants"],
                           **_BASES, R=_POS, n=_NAT, r=_NAT, s=_NAT, t=_POS, verified={"type": "boolean"},
                           constants={"type": "object",
                                      "properties": {"E": _NAT, "M": _NAT, "delta": {"type": "string"}, "N": _NAT},
                                      "required": ["E", "M", "delta", "N"], "additionalProperties": False}),
    "codec encode": _doc("codec encode", ["R", "u", "matrix", "word"], R=_POS, u=_POS, matrix=_MATRIX, word=_WORD),
    "codec decode": _doc("codec decode", ["R", "u", "well_formed", "matrix", "sets"],
                         R=_POS, u=_POS, well_formed={"type": "boolean"}, matrix=_MATRIX, sets=_SETS),
    "codec roundtrip": _doc("codec roundtrip", ["R", "u", "word", "ok"], R=_POS, u=_POS, word=_WORD, ok={"const": True}),
    "tm parse": _doc("tm parse", ["u1", "u2", "mode", "rules", "text"],
                     u1=_POS, u2=_POS, mode={"enum": ["blank", "verbatim"]}, rules=_NAT, text={"type": "string"}),
    "tm simulate": _doc("tm simulate", ["halted", "stuck", "steps", "table"],
                        halted={"type": "boolean"}, stuck={"type": "boolean"}, steps=_NAT, table=_TABLE),
    "tm grids": _doc("tm grids", ["halted", "R1", "R2", "A", "B"],
                     halted={"type": "boolean"}, R1=_POS, R2=_POS, A=_SETS, B=_SETS),
    "tm check": _doc("tm check", ["halted", "all_pass", "conditions", "table"],
                     halted={"type": "boolean"}, all_pass={"type": "boolean"}, conditions=_CONDITIONS, table=_TABLE),
    "compile theta": _compile("theta"),
    "compile phi": _compile("phi"),
    "compile baker": _compile("baker"),
    "witness build": _doc(
        "witness build", ["k", "ell", "source", "witness", "u", "R", "pattern", "sets", "verification"],
        **_BASES, source={"enum": ["machine", "subsets"]}, R1=_POS, R2=_POS, witness=_EXPONENTS, u=_POS, R=_POS,
        pattern=_PATTERN, sets=_SETS,
        verification={
            "type": "object",
            "properties": {
                "d_check": {"oneOf": [{"type": "array", "items": _NAT, "minItems": 2, "maxItems": 2}, {"type": "null"}]},
                "tau": {"type": "boolean"}, "cells": _NAT, "mismatches": _NAT, "verified": {"type": "boolean"},
            },
            "required": ["d_check", "tau", "cells", "mismatches", "verified"],
            "additionalProperties": False,
        },
    ),
    "witness verify": _doc("witness verify", ["k", "ell", "witness", "verified"],
                           k=_BASES["k"], ell=_BASES["ell"], witness=_EXPONENTS, verified={"type": "boolean"}),
    "eval": _doc("eval", ["k", "ell", "caps", "env", "result", "verdict"],
                 **_BASES,
                 caps={"type": "object", "properties": {"cap_k": _NAT, "cap_l": _NAT},
                       "required": ["cap_k", "cap_l"], "additionalProperties": False},
                 env={"type": "object", "additionalProperties": _NAT},
                 result={"type": "boolean"},
                 verdict={"enum": ["true", "true-within-caps", "false", "false-within-caps"]}),
}

SUBSETS: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "subset tuple",
    "type": "object",
    "properties": {"R": _POS, "sets": _SETS},
    "required": ["R", "sets"],
}

WITNESS: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "model witness (the output of witness build)",
    "type": "object",
    "properties": {"k": _BASES["k"], "ell": _BASES["ell"], "witness": _EXPONENTS, "R": _POS, "u": _POS,
                   "sets": _SETS, "pattern": _PATTERN},
    "required": ["witness", "R", "u", "sets", "pattern"],
}
