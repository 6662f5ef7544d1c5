from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from forge import grid as G
from forge.errors import DomainError, ParseError, ShapeError

WORKED = [[1, 2, 0], [1, 0, 1], [0, 0, 3]]
WORKED_WORD = (0, 1, 2, 0, 1, 1, 0, 2, 3, 3, 3, 0)


def test_worked_matrix_to_word():
    B = G.GridMatrix.from_lists(WORKED)
    assert G.word_of_matrix(B) == WORKED_WORD
    assert G.format_word(WORKED_WORD) == "012011023330"


def test_zero_positions_and_fallback():
    assert [G.z_index(WORKED_WORD, j) for j in range(1, 5)] == [0, 3, 6, 11]
    assert G.z_index(WORKED_WORD, 5) == 11
    with pytest.raises(DomainError):
        G.z_index(WORKED_WORD, 0)


@pytest.mark.parametrize("i", [1, 2, 3])
@pytest.mark.parametrize("j", [1, 2, 3])
def test_run_counts_recover_entries(i, j):
    assert G.run_count(WORKED_WORD, i, j) == WORKED[i - 1][j - 1]


def test_matrix_of_word_inverse_on_example():
    assert G.matrix_of_word(WORKED_WORD, 3).to_lists() == WORKED


def test_single_entry_matrix():
    assert G.format_word(G.word_of_matrix(G.GridMatrix.from_lists([[2]]))) == "0110"


def test_encode_from_subsets():
    X = G.make_subsets([[(0, 0), (1, 0)], [(0, 0)]])
    B = G.encode_matrix(X, 2)
    assert B.to_lists() == [[3, 0], [1, 0]]
    assert G.decode_subsets(G.word_of_matrix(B), 2, 2) == X


def test_encode_ignores_points_outside():
    X = G.make_subsets([[(0, 0), (5, 1)]])
    assert G.encode_matrix(X, 2).to_lists() == [[1, 0], [0, 0]]
    assert G.restrict(X, 2) == (frozenset({(0, 0)}),)


def test_bit_member():
    assert G.bit_member(1, 5) and not G.bit_member(2, 5) and G.bit_member(3, 5)
    with pytest.raises(DomainError):
        G.bit_member(0, 5)


@pytest.mark.parametrize(
    "rows, exc",
    [([[1, 2]], ShapeError), ([], ShapeError), ([[-1]], DomainError)],
)
def test_matrix_shape_errors(rows, exc):
    with pytest.raises(exc):
        G.GridMatrix.from_lists(rows)


def test_make_subsets_errors():
    with pytest.raises(ShapeError):
        G.make_subsets([])
    with pytest.raises(DomainError):
        G.make_subsets([[(-1, 0)]])


@pytest.mark.parametrize(
    "word, R, ok",
    [(WORKED_WORD, 3, True), (WORKED_WORD, 2, False), ((0, 0), 1, True), ((0, 4, 0), 1, False), ((1, 0), 1, False)],
)
def test_well_formed(word, R, ok):
    assert G.is_well_formed(word, R) is ok


def test_malformed_words_still_decode():
    assert G.matrix_of_word((1, 1), 2).to_lists() == [[0, 0], [0, 0]]
    assert G.matrix_of_word((0, 1, 1), 1).to_lists() == [[1]]


@pytest.mark.parametrize("text, word", [("0110", (0, 1, 1, 0)), ("0,12,0", (0, 12, 0)), (" 00 ", (0, 0))])
def test_parse_word(text, word):
    assert G.parse_word(text) == word


@pytest.mark.parametrize("text", ["", "0a1", "0,,1"])
def test_parse_word_errors(text):
    with pytest.raises(ParseError):
        G.parse_word(text)


def test_format_word_wide_letters():
    assert G.format_word((0, 10, 0)) == "0,10,0"
    assert G.parse_word(G.format_word((0, 10, 0))) == (0, 10, 0)


matrices = st.integers(1, 4).flatmap(
    lambda R: st.lists(st.lists(st.integers(0, 5), min_size=R, max_size=R), min_size=R, max_size=R)
)


@given(matrices)
def test_matrix_word_roundtrip(rows):
    B = G.GridMatrix.from_lists(rows)
    w = G.word_of_matrix(B)
    assert G.is_well_formed(w, B.R)
    assert G.matrix_of_word(w, B.R) == B
    assert G.parse_word(G.format_word(w)) == w


@given(
    st.integers(1, 4).flatmap(
        lambda R: st.tuples(
            st.just(R),
            st.lists(st.frozensets(st.tuples(st.integers(0, R - 1), st.integers(0, R - 1))), min_size=1, max_size=3),
        )
    )
)
def test_subsets_roundtrip(args):
    R, sets = args
    X = tuple(sets)
    w = G.word_of_matrix(G.encode_matrix(X, R))
    assert G.decode_subsets(w, R, len(X)) == X
