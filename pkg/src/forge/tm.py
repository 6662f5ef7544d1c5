"""Normalised Turing machines, their grid encodings, and model witnesses.

States are 1..u1 with start state 1 and accept state 2; tape symbols are
1..u2.  In ``blank`` mode the symbol 0 stands for an unmarked cell and may be
read (written as ``_`` in the text format) but never written.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import radix
from .errors import NotHalted, ParseError, ValidationError, VerificationFailed
from .grid import SubsetTuple, encode_matrix, word_of_matrix
from .pattern import Budget, PatternWitness, find_pattern_witness
from .radix import BasePair, DWitness

START, ACCEPT, BLANK = 1, 2, 0
MOVES = {"L": -1, "R": 1}

Rule = tuple[int, int, int]  # (next state, written symbol, move)


@dataclass(frozen=True)
class TuringMachine:
    u1: int
    u2: int
    delta: dict[tuple[int, int], Rule]
    blank: bool = True

    @property
    def symbols_read(self) -> range:
        return range(0 if self.blank else 1, self.u2 + 1)

    def rule(self, q: int, a: int) -> Optional[Rule]:
        return self.delta.get((q, a))

    def to_text(self) -> str:
        lines = [f"states {self.u1} symbols {self.u2} mode {'blank' if self.blank else 'verbatim'}"]
        for (q, a), (q2, a2, m) in sorted(self.delta.items()):
            sym = "_" if a == BLANK else str(a)
            lines.append(f"{q} {sym} -> {q2} {a2} {'R' if m > 0 else 'L'}")
        return "\n".join(lines) + "\n"


def _int_field(tok: str, what: str, line: int) -> int:
    if not tok.isdigit():
        raise ParseError(f"{what} must be a positive integer, got {tok!r}", line=line)
    return int(tok)


def parse_tm(text: str) -> TuringMachine:
    """Parse the line-based machine format.

    Blank lines and ``#`` comments are skipped.  The first remaining line is
    the header ``states U1 symbols U2 mode blank|verbatim``; every other line
    is a rule ``q a -> q' a' m``.  Rules are required for every non-accepting
    state and every readable symbol; rules for the accept state are optional.
    """
    header: Optional[tuple[int, int, bool]] = None
    delta: dict[tuple[int, int], Rule] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        toks = body.split()
        if header is None:
            if len(toks) != 6 or toks[0] != "states" or toks[2] != "symbols" or toks[4] != "mode":
                raise ParseError("expected header 'states U1 symbols U2 mode blank|verbatim'", line=lineno)
            if toks[5] not in ("blank", "verbatim"):
                raise ParseError(f"unknown mode {toks[5]!r}", line=lineno)
            u1 = _int_field(toks[1], "state count", lineno)
            u2 = _int_field(toks[3], "symbol count", lineno)
            if u1 < 2:
                raise ValidationError("a machine needs at least the start and accept states", line=lineno)
            if u2 < 1:
                raise ValidationError("a machine needs at least one symbol", line=lineno)
            header = (u1, u2, toks[5] == "blank")
            continue
        u1, u2, blank = header
        if len(toks) != 6 or toks[2] != "->":
            raise ParseError("expected rule 'q a -> q2 a2 L|R'", line=lineno)
        if toks[5] not in MOVES:
            raise ParseError(f"move must be L or R, got {toks[5]!r}", line=lineno)
        q = _int_field(toks[0], "state", lineno)
        if toks[1] == "_":
            if not blank:
                raise ValidationError("blank reads are only allowed in blank mode", line=lineno)
            a = BLANK
        else:
            a = _int_field(toks[1], "symbol", lineno)
        q2 = _int_field(toks[3], "state", lineno)
        if toks[4] == "_":
            raise ValidationError("the blank cannot be written", line=lineno)
        a2 = _int_field(toks[4], "symbol", lineno)
        for s in (q, q2):
            if not 1 <= s <= u1:
                raise ValidationError(f"state {s} outside 1..{u1}", line=lineno)
        for s in (a, a2):
            if s != BLANK and not 1 <= s <= u2:
                raise ValidationError(f"symbol {s} outside 1..{u2}", line=lineno)
        if (q, a) in delta:
            raise ValidationError(f"duplicate rule for ({toks[0]}, {toks[1]})", line=lineno)
        delta[(q, a)] = (q2, a2, MOVES[toks[5]])
    if header is None:
        raise ParseError("missing header", line=1)
    u1, u2, blank = header
    m = TuringMachine(u1, u2, delta, blank)
    for q in range(1, u1 + 1):
        if q == ACCEPT:
            continue
        for a in m.symbols_read:
            if (q, a) not in delta:
                sym = "_" if a == BLANK else a
                raise ValidationError(f"transition table has no rule for state {q}, symbol {sym}")
    return m


# -- simulation ------------------------------------------------------------------


@dataclass(frozen=True)
class Config:
    state: int
    head: int
    tape: tuple[tuple[int, int], ...]  # sorted (cell, symbol) pairs of marked cells

    def tape_dict(self) -> dict[int, int]:
        return dict(self.tape)


@dataclass
class Trace:
    halted: bool
    steps: list[Config]
    stuck: bool = False  # verbatim mode read an unmarked cell


def simulate(m: TuringMachine, max_steps: int) -> Trace:
    """Run from the empty tape in state 1 with the head on cell 0.

    A left move on cell 0 keeps the head on cell 0.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    state, head, tape = START, 0, {}
    steps = [Config(state, head, ())]
    for _ in range(max_steps):
        if state == ACCEPT:
            break
        rule = m.rule(state, tape.get(head, BLANK))
        if rule is None:
            return Trace(False, steps, stuck=True)
        state, tape[head], move = rule
        head = max(head + move, 0)
        steps.append(Config(state, head, tuple(sorted(tape.items()))))
    return Trace(state == ACCEPT, steps)


@dataclass
class GridWitnessSets:
    A: list[frozenset[tuple[int, int]]]
    B: list[frozenset[tuple[int, int]]]
    R1: int
    R2: int

    def subsets(self) -> SubsetTuple:
        return tuple(self.A) + tuple(self.B)

    @property
    def R(self) -> int:
        return max(self.R1, self.R2)


def trace_to_grids(m: TuringMachine, t: Trace, allow_partial: bool = False) -> GridWitnessSets:
    """Rows are steps, columns are cells.

    ``allow_partial`` encodes a trace that never halted (useful for showing
    which condition a non-halting run violates).
    """
    if not t.halted and not allow_partial:
        raise NotHalted(f"trace stopped after {len(t.steps) - 1} steps without accepting")
    A: list[set[tuple[int, int]]] = [set() for _ in range(m.u1)]
    B: list[set[tuple[int, int]]] = [set() for _ in range(m.u2)]
    top = 0
    for s, c in enumerate(t.steps):
        A[c.state - 1].add((s, c.head))
        top = max(top, c.head)
        for cell, sym in c.tape:
            B[sym - 1].add((s, cell))
            top = max(top, cell)
    return GridWitnessSets([frozenset(a) for a in A], [frozenset(b) for b in B], len(t.steps), top + 1)


# -- conditions -----------------------------------------------------------------


@dataclass
class ConditionResult:
    name: str
    ok: bool
    counterexample: Optional[tuple[int, int]] = None
    detail: str = ""


def _owner(sets: list[frozenset[tuple[int, int]]], cell: tuple[int, int]) -> list[int]:
    return [idx + 1 for idx, s in enumerate(sets) if cell in s]


def check_conditions(m: TuringMachine, g: GridWitnessSets) -> list[ConditionResult]:
    """Itemised check of the halting encoding.

    Condition 5 requires exactly one state marker per row.  Conditions 6 and
    6' relate row s to row s+1 and are checked for s + 1 < R1.  Condition 6'
    (unmarked cell under the head) is only reported in blank mode.
    """
    R1, R2 = g.R1, g.R2
    cells = [(s, t) for s in range(R1) for t in range(R2)]
    out: list[ConditionResult] = []

    def first(pred, name: str, detail: str) -> None:
        bad = next((c for c in cells if pred(c)), None)
        out.append(ConditionResult(name, bad is None, bad, "" if bad is None else detail))

    stray = next(
        (p for s in g.A + g.B for p in sorted(s) if not (0 <= p[0] < R1 and 0 <= p[1] < R2)), None
    )
    if stray is not None:
        out.append(ConditionResult("1", False, stray, "point outside the R1 x R2 box"))
    else:
        first(lambda c: len(_owner(g.A, c)) > 1 or len(_owner(g.B, c)) > 1, "1", "two markers of one kind")
    out.append(ConditionResult("2", (0, 0) in g.A[START - 1], None if (0, 0) in g.A[START - 1] else (0, 0),
                               "" if (0, 0) in g.A[START - 1] else "start marker missing"))
    first(lambda c: c[0] == 0 and bool(_owner(g.B, c)), "3", "symbol on the initial tape")
    has_accept = bool(g.A[ACCEPT - 1]) if len(g.A) >= ACCEPT else False
    out.append(ConditionResult("4", has_accept, None, "" if has_accept else "accept state never reached"))
    bad_row = next((s for s in range(R1) if sum(1 for t in range(R2) if _owner(g.A, (s, t))) != 1), None)
    out.append(ConditionResult("5", bad_row is None, None if bad_row is None else (bad_row, 0),
                               "" if bad_row is None else "row without exactly one state"))

    def transition_ok(s: int, t: int, q: int, a: int) -> bool:
        rule = m.rule(q, a)
        if rule is None:
            return True
        q2, a2, move = rule
        return (s + 1, t) in g.B[a2 - 1] and (s + 1, max(t + move, 0)) in g.A[q2 - 1]

    def cond6(c: tuple[int, int]) -> bool:
        s, t = c
        if s + 1 >= R1:
            return False
        for j in _owner(g.B, c):
            qs = _owner(g.A, c)
            if not qs and (s + 1, t) not in g.B[j - 1]:
                return True
            if any(not transition_ok(s, t, q, j) for q in qs):
                return True
        return False

    first(cond6, "6", "marked cell not carried or transition not applied")
    if m.blank:
        def cond6b(c: tuple[int, int]) -> bool:
            s, t = c
            if s + 1 >= R1 or _owner(g.B, c):
                return False
            return any(not transition_ok(s, t, q, BLANK) for q in _owner(g.A, c))

        first(cond6b, "6'", "transition on an unmarked cell not applied")
    return out


def all_pass(results: list[ConditionResult]) -> bool:
    return all(r.ok for r in results)


# -- model witnesses ------------------------------------------------------------


@dataclass
class ModelWitness:
    d: DWitness
    u: int
    R: int
    pattern: PatternWitness
    report: list[tuple[int, int, int, bool]] = field(default_factory=list)  # (i, j, v, member)

    def as_dict(self) -> dict:
        return {
            "K1": self.d.a1, "K2": self.d.a2, "L1": self.d.b1, "L2": self.d.b2,
            "u": self.u, "R": self.R,
            "pattern": {"n": self.pattern.n, "m": list(self.pattern.m)},
        }


def omega_table(bases: BasePair, d: DWitness, u: int, R: int, m_max: int) -> list[tuple[int, int, int, bool]]:
    """Omega membership of every grid cell, computed with radix arithmetic only."""
    out = []
    for j in range(R):
        b = radix.sigma2_iter(bases, d.a1, d.b1, j, m_max)
        for i in range(R):
            for v in range(1, u + 1):
                hit = b is not None and radix.omega_member(bases, u, v, d.a1, d.a1 + i + 1, b, m_max)
                out.append((i, j, v, hit))
    return out


def tau_check(bases: BasePair, d: DWitness, m_max: int) -> bool:
    """The grid map (i, j) -> (k^(a1+i+1), sigma_2^j(K1, L1)) hits S(K1) ∩ [L1, L2) in order."""
    dims = radix.d_check(bases, d)
    if dims is None:
        return False
    R1, R2 = dims
    members = radix.s_scan(bases, d.a1, d.b1, d.b2 - 1) if d.b2 > d.b1 else []
    if len(members) != R2:
        return False
    walk = [radix.sigma2_iter(bases, d.a1, d.b1, j, m_max) for j in range(R2)]
    return walk == members and R1 == d.a2 - d.a1


def verify_model_witness(bases: BasePair, w: ModelWitness, X: SubsetTuple, m_max: int | None = None) -> bool:
    cap = max(m_max or 0, w.d.b2)
    if radix.d_check(bases, w.d) != (w.R, w.R) or not tau_check(bases, w.d, cap):
        return False
    for i, j, v, hit in omega_table(bases, w.d, w.u, w.R, cap):
        if hit != ((i, j) in X[v - 1]):
            return False
    return True


def realize_subsets(
    bases: BasePair,
    X: SubsetTuple,
    R: int,
    strategy: str = "scan",
    budget: Budget = Budget(),
    m_max: int | None = None,
) -> ModelWitness:
    """A tuple (K1, K2, L1, L2) in D(R, R) whose Omega sets cut out X on the R x R grid.

    The word of X is realised with exclusions in rows 0..R (pattern bound
    R + 1), since the counts read off row R must be exact as well.
    """
    word = word_of_matrix(encode_matrix(X, R))
    pw = find_pattern_witness(bases, word, R + 1, strategy=strategy, budget=budget)
    d = DWitness(pw.n, pw.n + R, pw.m[0], pw.m[-1])
    cap = max(m_max or 0, d.b2)
    w = ModelWitness(d, len(X), R, pw, omega_table(bases, d, len(X), R, cap))
    if not verify_model_witness(bases, w, X, cap):
        raise VerificationFailed(f"pattern witness {pw} does not encode the requested subsets")
    return w


def build_model_witness(
    bases: BasePair,
    m: TuringMachine,
    g: GridWitnessSets,
    strategy: str = "scan",
    budget: Budget = Budget(),
    m_max: int | None = None,
) -> ModelWitness:
    results = check_conditions(m, g)
    failed = [r.name for r in results if not r.ok]
    if failed:
        raise ValidationError(f"grids violate condition(s) {', '.join(failed)}")
    return realize_subsets(bases, g.subsets(), g.R, strategy, budget, m_max)
