"""Nonnegative integer matrices with fixed margins and the double-coset oracle.

M(v, w) is the set of n x n matrices over N with row sums v and column sums
w.  It is in bijection with the double cosets S^(v) \\ S_d / S^(w); the
brute-force count over all d! permutations serves as a trusted cross-check
at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator

from .blocksym import BlockStructure, as_parts


class SumMismatchError(Exception):
    """Row and column compositions do not share the same total."""


class TooLargeError(Exception):
    """The factorial-time oracle was asked for more than it can chew."""


@dataclass(frozen=True)
class CompMatrix:
    """An n x n matrix of nonnegative integers, stored row-major."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise ValueError("matrix must be square")
            if any(e < 0 for e in row):
                raise ValueError("entries must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def d(self) -> int:
        return sum(sum(row) for row in self.entries)

    @property
    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.entries)

    @property
    def col_sums(self) -> tuple[int, ...]:
        return tuple(sum(row[j] for row in self.entries) for j in range(self.n))

    def refinement_intervals(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Column-major consecutive variable intervals, one per matrix cell.

        Returns pairs ((i, j), (lo, hi)) with 1-indexed inclusive positions;
        cells with entry zero get empty intervals and are skipped.
        """
        out = []
        pos = 0
        for j in range(self.n):
            for i in range(self.n):
                size = self.entries[i][j]
                if size:
                    out.append(((i + 1, j + 1), (pos + 1, pos + size)))
                    pos += size
        return out

    def refinement_composition(self) -> tuple[int, ...]:
        """Column-major cell sizes as a composition of d (zeros kept)."""
        return tuple(self.entries[i][j] for j in range(self.n) for i in range(self.n))

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


def diag_matrix(v) -> CompMatrix:
    parts = as_parts(v)
    n = len(parts)
    return CompMatrix(tuple(tuple(parts[i] if i == j else 0 for j in range(n)) for i in range(n)))


def e_matrix(i: int, j: int, v, a: int) -> CompMatrix:
    """diag(v) + a*E_ij, an element of M(v + a e_i, v + a e_j).

    Block indices are 1-based; a must be positive (the pure diagonal has its
    own constructor).
    """
    parts = as_parts(v)
    n = len(parts)
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"block indices ({i}, {j}) out of range 1..{n}")
    if i == j:
        raise ValueError("e_matrix requires i != j")
    if a <= 0:
        raise ValueError("e_matrix requires a positive off-diagonal entry")
    rows = [[parts[r] if r == c else 0 for c in range(n)] for r in range(n)]
    rows[i - 1][j - 1] += a
    return CompMatrix(tuple(tuple(row) for row in rows))


def enumerate_matrices(v, w) -> list[CompMatrix]:
    """All of M(v, w) in lexicographic order of the flattened entries."""
    v = as_parts(v)
    w = as_parts(w)
    if sum(v) != sum(w):
        raise SumMismatchError(f"margins total {sum(v)} and {sum(w)}")
    n = len(v)
    if len(w) != n:
        raise SumMismatchError("row and column compositions must have the same length")
    out: list[CompMatrix] = []

    def fill_rows(row_idx: int, col_left: tuple[int, ...], acc: list[tuple[int, ...]]):
        if row_idx == n:
            if all(c == 0 for c in col_left):
                out.append(CompMatrix(tuple(acc)))
            return
        for row in _rows_with_sum(v[row_idx], col_left):
            fill_rows(row_idx + 1, tuple(c - r for c, r in zip(col_left, row)), acc + [row])

    fill_rows(0, w, [])
    return out


def _rows_with_sum(total: int, bounds: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Rows with the given sum and entrywise bounds, in lexicographic order."""
    n = len(bounds)

    def rec(pos: int, left: int, acc: tuple[int, ...]):
        if pos == n:
            if left == 0:
                yield acc
            return
        if pos == n - 1:
            if left <= bounds[pos]:
                yield acc + (left,)
            return
        for value in range(min(left, bounds[pos]) + 1):
            yield from rec(pos + 1, left - value, acc + (value,))

    yield from rec(0, total, ())


def _block_transpositions(v, d: int) -> list[tuple[int, ...]]:
    """Adjacent transpositions generating the Young subgroup S^(v)."""
    gens = []
    structure = BlockStructure.from_composition(v)
    for lo, hi in structure.intervals:
        for pos in range(lo, hi):
            sigma = list(range(1, d + 1))
            sigma[pos - 1], sigma[pos] = pos + 1, pos
            gens.append(tuple(sigma))
    return gens


def _compose(sigma: tuple[int, ...], tau: tuple[int, ...]) -> tuple[int, ...]:
    """(sigma o tau)(i) = sigma(tau(i))."""
    return tuple(sigma[t - 1] for t in tau)


def double_coset_count(v, w) -> int:
    """The number of (S^(v), S^(w)) double cosets in S_d, by direct orbit sweep.

    Factorial time; refuses d > 7.
    """
    v = as_parts(v)
    w = as_parts(w)
    if sum(v) != sum(w):
        raise SumMismatchError(f"margins total {sum(v)} and {sum(w)}")
    d = sum(v)
    if d > 7:
        raise TooLargeError(f"d = {d} exceeds the oracle bound 7")
    if d == 0:
        return 1
    left_gens = _block_transpositions(v, d)
    right_gens = _block_transpositions(w, d)
    unseen = set(permutations(range(1, d + 1)))
    count = 0
    while unseen:
        count += 1
        seed = next(iter(unseen))
        stack = [seed]
        unseen.discard(seed)
        while stack:
            g = stack.pop()
            for t in left_gens:
                h = _compose(t, g)
                if h in unseen:
                    unseen.discard(h)
                    stack.append(h)
            for t in right_gens:
                h = _compose(g, t)
                if h in unseen:
                    unseen.discard(h)
                    stack.append(h)
    return count
