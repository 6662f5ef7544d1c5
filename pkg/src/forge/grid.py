"""Codecs between tuples of finite subsets of N^2, square matrices and words.

Matrix entries are addressed 1-based as ``B[i][j]`` for ``1 <= i, j <= R``
(stored in a 0-based list of rows), while subset coordinates are 0-based:
entry (i, j) describes the point (i-1, j-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, ParseError, ShapeError

Point = tuple[int, int]
SubsetTuple = tuple[frozenset[Point], ...]


@dataclass(frozen=True)
class GridMatrix:
    R: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.R < 1:
            raise ShapeError("R must be >= 1")
        if len(self.rows) != self.R or any(len(r) != self.R for r in self.rows):
            raise ShapeError(f"matrix must be {self.R}x{self.R}")
        if any(e < 0 for r in self.rows for e in r):
            raise DomainError("matrix entries must be natural numbers")

    def entry(self, i: int, j: int) -> int:
        """1-based access."""
        return self.rows[i - 1][j - 1]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "GridMatrix":
        return cls(len(rows), tuple(tuple(int(e) for e in r) for r in rows))


def make_subsets(sets: Iterable[Iterable[Sequence[int]]]) -> SubsetTuple:
    out = tuple(frozenset((int(p[0]), int(p[1])) for p in s) for s in sets)
    if not out:
        raise ShapeError("a subset tuple needs arity >= 1")
    for s in out:
        if any(i < 0 or j < 0 for i, j in s):
            raise DomainError("subset coordinates must be natural numbers")
    return out


def restrict(X: SubsetTuple, R: int) -> SubsetTuple:
    return tuple(frozenset((i, j) for i, j in s if i < R and j < R) for s in X)


def encode_matrix(X: SubsetTuple, R: int) -> GridMatrix:
    """Entry (i, j) is the bitmask whose bit v says (i-1, j-1) is in X[v].

    Points with a coordinate >= R are ignored.
    """
    if R < 1:
        raise ShapeError("R must be >= 1")
    grid = [[0] * R for _ in range(R)]
    for v, s in enumerate(X):
        for i, j in s:
            if i < R and j < R:
                grid[i][j] |= 1 << v
    return GridMatrix(R, tuple(tuple(r) for r in grid))


def word_of_matrix(B: GridMatrix) -> tuple[int, ...]:
    """Column by column: a 0, then letter i repeated B[i][j] times for i = 1..R; a final 0."""
    out: list[int] = []
    for j in range(1, B.R + 1):
        out.append(0)
        for i in range(1, B.R + 1):
            out.extend([i] * B.entry(i, j))
    out.append(0)
    return tuple(out)


def zero_positions(r: Sequence[int]) -> list[int]:
    return [p for p, c in enumerate(r) if c == 0]


def z_index(r: Sequence[int], j: int) -> int:
    """Position of the j-th zero (1-based j), or the last index when there are fewer zeros."""
    if j < 1:
        raise DomainError("j must be >= 1")
    zs = zero_positions(r)
    if j <= len(zs):
        return zs[j - 1]
    return max(len(r) - 1, 0)


def run_count(r: Sequence[int], i: int, j: int) -> int:
    """Occurrences of letter i strictly between the j-th and (j+1)-th zero."""
    if i < 1 or j < 1:
        raise DomainError("i and j must be >= 1")
    lo, hi = z_index(r, j), z_index(r, j + 1)
    return sum(1 for p in range(lo + 1, hi) if r[p] == i)


def matrix_of_word(r: Sequence[int], R: int) -> GridMatrix:
    """Inverse of :func:`word_of_matrix`; total on malformed words."""
    if R < 1:
        raise ShapeError("R must be >= 1")
    return GridMatrix(
        R, tuple(tuple(run_count(r, i, j) for j in range(1, R + 1)) for i in range(1, R + 1))
    )


def bit_member(v: int, entry: int) -> bool:
    if v < 1:
        raise DomainError("v must be >= 1")
    return bool((entry >> (v - 1)) & 1)


def decode_subsets(r: Sequence[int], R: int, u: int) -> SubsetTuple:
    if u < 1:
        raise ShapeError("arity must be >= 1")
    B = matrix_of_word(r, R)
    return tuple(
        frozenset(
            (i, j) for i in range(R) for j in range(R) if bit_member(v, B.entry(i + 1, j + 1))
        )
        for v in range(1, u + 1)
    )


def is_well_formed(r: Sequence[int], R: int) -> bool:
    """Exactly R+1 zeros with one at each end, letters in 0..R."""
    return (
        len(r) >= 2
        and r[0] == 0
        and r[-1] == 0
        and len(zero_positions(r)) == R + 1
        and all(0 <= c <= R for c in r)
    )


# -- text form of words -------------------------------------------------------


def format_word(r: Sequence[int], R: int | None = None) -> str:
    """Contiguous digits when every letter (and R, if given) is <= 9, else comma-separated."""
    top = max([*r, R or 0], default=0)
    if top <= 9:
        return "".join(str(c) for c in r)
    return ",".join(str(c) for c in r)


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        raise ParseError("empty word", position=0)
    parts = text.split(",") if "," in text else list(text)
    out = []
    pos = 0
    for part in parts:
        tok = part.strip()
        if not tok.isdigit():
            raise ParseError(f"bad letter {part!r}", position=pos)
        out.append(int(tok))
        pos += len(part) + ("," in text)
    return tuple(out)
