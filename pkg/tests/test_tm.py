from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forge import tm as T
from forge.errors import BudgetExhausted, NotHalted, ParseError, ValidationError
from forge.grid import make_subsets
from forge.pattern import Budget
from forge.radix import DWitness


def results_by_name(results):
    return {r.name: r for r in results}


# -- parsing ----------------------------------------------------------------------------


def test_parse_halt(halt_machine):
    assert (halt_machine.u1, halt_machine.u2, halt_machine.blank) == (2, 1, True)
    assert halt_machine.rule(1, 0) == (2, 1, 1)
    assert T.parse_tm(halt_machine.to_text()) == halt_machine


def test_parse_verbatim(fixtures):
    m = T.parse_tm((fixtures / "halt_verbatim.tm").read_text())
    assert not m.blank and list(m.symbols_read) == [1]


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("states 2 symbols 1 mode fancy\n", 1),
        ("states 2 symbols 1\n", 1),
        ("states 2 symbols 1 mode blank\n1 _ -> 2 1 X\n", 2),
        ("states 2 symbols 1 mode blank\n1 _ 2 1 R\n", 2),
        ("states two symbols 1 mode blank\n", 1),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        T.parse_tm(text)
    assert exc.value.line == line


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("states 2 symbols 1 mode blank\n1 _ -> 2 1 R\n", "no rule for state 1, symbol 1"),
        ("states 2 symbols 1 mode blank\n1 _ -> 2 1 R\n1 _ -> 2 1 L\n1 1 -> 2 1 R\n", "duplicate"),
        ("states 2 symbols 1 mode blank\n1 _ -> 3 1 R\n1 1 -> 2 1 R\n", "state 3"),
        ("states 2 symbols 1 mode blank\n1 _ -> 2 2 R\n1 1 -> 2 1 R\n", "symbol 2"),
        ("states 2 symbols 1 mode blank\n1 _ -> 2 _ R\n1 1 -> 2 1 R\n", "blank cannot be written"),
        ("states 2 symbols 1 mode verbatim\n1 _ -> 2 1 R\n", "blank mode"),
        ("states 1 symbols 1 mode blank\n", "accept"),
    ],
)
def test_validation_errors(text, fragment):
    with pytest.raises(ValidationError) as exc:
        T.parse_tm(text)
    assert fragment in str(exc.value)


def test_accept_state_rules_optional():
    m = T.parse_tm("states 2 symbols 1 mode blank\n1 _ -> 2 1 R\n1 1 -> 2 1 R\n2 1 -> 1 1 L\n")
    assert m.rule(2, 1) == (1, 1, -1) and m.rule(2, 0) is None


# -- simulation -------------------------------------------------------------------------


def test_simulate_halt(halt_machine):
    t = T.simulate(halt_machine, 10)
    assert t.halted and len(t.steps) == 2
    assert t.steps[-1] == T.Config(2, 1, ((0, 1),))


def test_simulate_loop(loop_machine):
    t = T.simulate(loop_machine, 50)
    assert not t.halted and not t.stuck and len(t.steps) == 51
    assert {c.head for c in t.steps} == {0, 1}


def test_simulate_verbatim_gets_stuck(fixtures):
    m = T.parse_tm((fixtures / "halt_verbatim.tm").read_text())
    t = T.simulate(m, 5)
    assert t.stuck and not t.halted


def test_simulate_left_edge_clamp():
    m = T.parse_tm("states 3 symbols 1 mode blank\n1 _ -> 3 1 L\n1 1 -> 3 1 L\n3 _ -> 2 1 R\n3 1 -> 2 1 R\n")
    t = T.simulate(m, 5)
    assert [c.head for c in t.steps] == [0, 0, 1]


def test_simulate_rejects_zero_budget(halt_machine):
    with pytest.raises(ValueError):
        T.simulate(halt_machine, 0)


# -- grids and conditions ---------------------------------------------------------------


def test_halt_grids(halt_machine):
    g = T.trace_to_grids(halt_machine, T.simulate(halt_machine, 10))
    assert g.A == [frozenset({(0, 0)}), frozenset({(1, 1)})]
    assert g.B == [frozenset({(1, 0)})]
    assert (g.R1, g.R2, g.R) == (2, 2, 2)
    assert T.all_pass(T.check_conditions(halt_machine, g))


def test_not_halted_refused(loop_machine):
    with pytest.raises(NotHalted):
        T.trace_to_grids(loop_machine, T.simulate(loop_machine, 20))


def test_loop_fails_only_accept(loop_machine):
    g = T.trace_to_grids(loop_machine, T.simulate(loop_machine, 20), allow_partial=True)
    res = results_by_name(T.check_conditions(loop_machine, g))
    assert [n for n, r in res.items() if not r.ok] == ["4"]


def _halt_grids(halt_machine):
    return T.trace_to_grids(halt_machine, T.simulate(halt_machine, 10))


@pytest.mark.parametrize(
    "mutate, name",
    [
        (lambda g: T.GridWitnessSets([g.A[0], frozenset()], g.B, g.R1, g.R2), "4"),
        (lambda g: T.GridWitnessSets([g.A[0] | {(1, 0)}, g.A[1]], g.B, g.R1, g.R2), "5"),
        (lambda g: T.GridWitnessSets([frozenset({(0, 1)}), g.A[1]], g.B, g.R1, g.R2), "2"),
        (lambda g: T.GridWitnessSets(g.A, [g.B[0] | {(0, 1)}], g.R1, g.R2), "3"),
        (lambda g: T.GridWitnessSets(g.A, [frozenset()], g.R1, g.R2), "6'"),
        (lambda g: T.GridWitnessSets(g.A, [g.B[0] | {(5, 5)}], g.R1, g.R2), "1"),
    ],
)
def test_mutations_detected(halt_machine, mutate, name):
    res = results_by_name(T.check_conditions(halt_machine, mutate(_halt_grids(halt_machine))))
    assert not res[name].ok


def test_condition6_carry():
    m = T.parse_tm(
        "states 3 symbols 1 mode blank\n1 _ -> 3 1 R\n1 1 -> 3 1 R\n3 _ -> 2 1 L\n3 1 -> 2 1 L\n"
    )
    g = T.trace_to_grids(m, T.simulate(m, 10))
    assert T.all_pass(T.check_conditions(m, g))
    dropped = T.GridWitnessSets(g.A, [g.B[0] - {(2, 0)}], g.R1, g.R2)
    assert not results_by_name(T.check_conditions(m, dropped))["6"].ok


def test_verbatim_mode_has_no_blank_condition(fixtures):
    m = T.parse_tm((fixtures / "halt_verbatim.tm").read_text())
    g = T.GridWitnessSets([frozenset({(0, 0)}), frozenset()], [frozenset()], 1, 1)
    names = [r.name for r in T.check_conditions(m, g)]
    assert names == ["1", "2", "3", "4", "5", "6"]


machines = st.tuples(st.integers(2, 4), st.integers(1, 2)).flatmap(
    lambda sz: st.fixed_dictionaries(
        {
            (q, a): st.tuples(st.integers(1, sz[0]), st.integers(1, sz[1]), st.sampled_from([-1, 1]))
            for q in range(1, sz[0] + 1)
            if q != T.ACCEPT
            for a in range(0, sz[1] + 1)
        }
    ).map(lambda d: T.TuringMachine(sz[0], sz[1], d, True))
)


@settings(max_examples=60, deadline=None)
@given(machines)
def test_halting_runs_satisfy_all_conditions(m):
    t = T.simulate(m, 30)
    if t.halted:
        assert T.all_pass(T.check_conditions(m, T.trace_to_grids(m, t)))
    else:
        res = results_by_name(T.check_conditions(m, T.trace_to_grids(m, t, allow_partial=True)))
        assert not res["4"].ok
        assert all(r.ok for n, r in res.items() if n != "4")


@settings(max_examples=40, deadline=None)
@given(machines)
def test_machine_text_roundtrip(m):
    assert T.parse_tm(m.to_text()) == m


# -- model witnesses --------------------------------------------------------------------


@pytest.mark.parametrize(
    "sets, R, d",
    [
        ([[(0, 0)]], 1, DWitness(52, 53, 34, 36)),
        ([[]], 1, DWitness(7, 8, 6, 7)),
        ([[]], 2, DWitness(160, 162, 102, 106)),
    ],
)
def test_realize_subsets(b23, sets, R, d):
    X = make_subsets(sets)
    w = T.realize_subsets(b23, X, R)
    assert w.d == d
    assert T.verify_model_witness(b23, w, X)
    assert T.tau_check(b23, w.d, w.d.b2)


def test_model_witness_rejects_wrong_subsets(b23):
    X = make_subsets([[(0, 0)]])
    w = T.realize_subsets(b23, X, 1)
    assert not T.verify_model_witness(b23, w, make_subsets([[]]))


def test_model_witness_swapped_exponents_rejected(b23):
    X = make_subsets([[(0, 0)]])
    w = T.realize_subsets(b23, X, 1)
    d = w.d
    bad = T.ModelWitness(DWitness(d.b1, d.b2, d.a1, d.a2), w.u, w.R, w.pattern)
    assert not T.verify_model_witness(b23, bad, X)


def test_tau_check_rejects_non_member(b23):
    assert not T.tau_check(b23, DWitness(52, 53, 35, 36), 40)


def test_build_model_witness_refuses_bad_grids(b23, loop_machine):
    g = T.trace_to_grids(loop_machine, T.simulate(loop_machine, 10), allow_partial=True)
    with pytest.raises(ValidationError):
        T.build_model_witness(b23, loop_machine, g)


def test_halt_machine_witness_out_of_budget(b23, halt_machine):
    g = _halt_grids(halt_machine)
    with pytest.raises(BudgetExhausted):
        T.build_model_witness(b23, halt_machine, g, budget=Budget(window=2000))
