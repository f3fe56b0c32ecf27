"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written against plain sets and dicts, not the
package's bitmask machinery, so a bug cannot hide on both sides of a test.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction


def adjacency_dict(graph) -> dict[int, set[int]]:
    return {v: set(graph.neighbors(v)) for v in range(2 * graph.n)}


def closure_sets(adj: dict[int, set[int]], black) -> set[int]:
    """Fixed point of the forcing rule on plain sets, ascending scan order."""
    black = set(black)
    changed = True
    while changed:
        changed = False
        for v in sorted(black):
            white = adj[v] - black
            if len(white) == 1:
                black |= white
                changed = True
    return black


def closure_random_order(adj: dict[int, set[int]], black, rng: random.Random) -> set[int]:
    """Apply one applicable force at a time in random order until none applies."""
    black = set(black)
    while True:
        moves = []
        for v in black:
            white = adj[v] - black
            if len(white) == 1:
                moves.append(next(iter(white)))
        if not moves:
            return black
        black.add(rng.choice(moves))


def is_forcing(adj: dict[int, set[int]], black) -> bool:
    return len(closure_sets(adj, black)) == len(adj)


def brute_force_minimum(graph) -> tuple[int, tuple[int, ...]]:
    """Smallest forcing set by exhaustive lexicographic enumeration."""
    adj = adjacency_dict(graph)
    v_count = 2 * graph.n
    for size in range(1, v_count + 1):
        for comb in itertools.combinations(range(v_count), size):
            if is_forcing(adj, comb):
                return size, comb
    raise AssertionError("the full vertex set always forces")


def no_forcing_set_of_size(graph, size: int) -> bool:
    adj = adjacency_dict(graph)
    return not any(
        is_forcing(adj, comb) for comb in itertools.combinations(range(2 * graph.n), size)
    )


def connected_by_union_find(graph) -> bool:
    parent = list(range(2 * graph.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in range(2 * graph.n):
        for u in graph.neighbors(v):
            ra, rb = find(v), find(u)
            if ra != rb:
                parent[ra] = rb
    return len({find(v) for v in range(2 * graph.n)}) == 1


def affine_images(n: int, powers: tuple[int, ...]) -> set[tuple[int, ...]]:
    out = set()
    for u in range(1, n + 1):
        if math.gcd(u, n) != 1:
            continue
        for z in range(n):
            out.add(tuple(sorted((u * p + z) % n for p in powers)))
    return out


def laplace_det(matrix: list[list[Fraction]]) -> Fraction:
    """Determinant by first-row minor expansion (exact, exponential)."""
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    total = Fraction(0)
    for col, head in enumerate(matrix[0]):
        if head == 0:
            continue
        minor = [row[:col] + row[col + 1:] for row in matrix[1:]]
        sign = -1 if col % 2 else 1
        total += sign * head * laplace_det(minor)
    return total


def rank_by_minor_expansion(entries) -> int:
    """Largest r with a nonzero r-by-r minor, all determinants by expansion."""
    rows = len(entries)
    cols = len(entries[0])
    grid = [[Fraction(x) for x in row] for row in entries]
    for r in range(min(rows, cols), 0, -1):
        for row_idx in itertools.combinations(range(rows), r):
            for col_idx in itertools.combinations(range(cols), r):
                minor = [[grid[i][j] for j in col_idx] for i in row_idx]
                if laplace_det(minor) != 0:
                    return r
    return 0
