"""Exact rank of integer matrices via fraction-free elimination.

Python integers are arbitrary precision, so the Bareiss recurrence stays
exact at any size; ranks are over the rationals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .circulant import BipartiteGraph, CirculantSpec


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match declared dimensions")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> IntMatrix:
        grid = tuple(tuple(int(x) for x in row) for row in entries)
        return cls(len(grid), len(grid[0]) if grid else 0, grid)


def to_matrix(spec: CirculantSpec) -> IntMatrix:
    """Circulant 0/1 matrix with a 1 at (r, c) iff (c - r) mod n is a power."""
    n = spec.n
    present = set(spec.powers)
    grid = tuple(
        tuple(1 if (c - r) % n in present else 0 for c in range(n)) for r in range(n)
    )
    return IntMatrix(n, n, grid)


def graph_from_matrix(matrix: IntMatrix) -> BipartiteGraph:
    """Bipartite graph whose biadjacency matrix is the given square 0/1 matrix."""
    if matrix.rows != matrix.cols:
        raise ValueError("only square biadjacency matrices map to this graph type")
    return BipartiteGraph.from_biadjacency_rows(matrix.entries)


def rank(matrix: IntMatrix) -> int:
    """Exact rank over the rationals (Bareiss fraction-free elimination)."""
    m = [list(row) for row in matrix.entries]
    rows, cols = matrix.rows, matrix.cols
    r = 0
    prev = 1
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[r], m[pivot_row] = m[pivot_row], m[r]
        pivot = m[r][c]
        for i in range(r + 1, rows):
            factor = m[i][c]
            for j in range(c, cols):
                m[i][j] = (m[i][j] * pivot - factor * m[r][j]) // prev
        prev = pivot
        r += 1
        if r == rows:
            break
    return r


def rank_invariance_check(matrix: IntMatrix, trials: int, seed: int = 0) -> bool:
    """Rank is unchanged under random row and column permutations."""
    if trials < 1:
        raise ValueError("trials must be positive")
    base = rank(matrix)
    rng = random.Random(seed)
    rows = list(range(matrix.rows))
    cols = list(range(matrix.cols))
    for _ in range(trials):
        rng.shuffle(rows)
        rng.shuffle(cols)
        permuted = IntMatrix(
            matrix.rows,
            matrix.cols,
            tuple(tuple(matrix.entries[r][c] for c in cols) for r in rows),
        )
        if rank(permuted) != base:
            return False
    return True


def parse_matrix_text(text: str) -> IntMatrix:
    """One row per line, whitespace-separated integers."""
    grid = []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line:
            continue
        grid.append([int(tok) for tok in line.split()])
    if not grid:
        raise ValueError("matrix file is empty")
    widths = {len(row) for row in grid}
    if len(widths) != 1:
        raise ValueError("matrix rows have inconsistent lengths")
    return IntMatrix.from_lists(grid)


def parse_matrix_file(path: str | Path) -> IntMatrix:
    return parse_matrix_text(Path(path).read_text())
