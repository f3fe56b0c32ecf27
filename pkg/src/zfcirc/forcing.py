"""The forcing rule: a black vertex with exactly one white neighbor forces it.

All state lives in integer bitmasks over the 2n vertices, which keeps the
closure loop cheap enough for the solver to call it millions of times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .circulant import BipartiteGraph, mask_vertices, vertices_mask


@dataclass(frozen=True)
class ForcingTrace:
    """Ordered forces applied on the way from ``initial`` to ``final``."""

    initial: int
    steps: tuple[tuple[int, int], ...]
    final: int

    @property
    def final_vertices(self) -> tuple[int, ...]:
        return mask_vertices(self.final)


def _as_mask(graph: BipartiteGraph, black: int | Iterable[int]) -> int:
    if isinstance(black, int):
        if black & ~graph.full_mask:
            raise ValueError("black mask has bits outside the vertex set")
        return black
    return vertices_mask(black, graph.vertex_count)


def closure_mask(adj: tuple[int, ...], black: int, full: int) -> int:
    """Fixed point of the forcing rule, as a mask.  Worklist-driven."""
    if black == full:
        return full
    stack = []
    m = black
    while m:
        b = m & -m
        m ^= b
        stack.append(b.bit_length() - 1)
    while stack:
        v = stack.pop()
        white = adj[v] & ~black
        if white and not (white & (white - 1)):
            black |= white
            if black == full:
                return full
            u = white.bit_length() - 1
            stack.append(u)
            # neighbors of u just lost a white neighbor; recheck the black ones
            m = adj[u] & black
            while m:
                b = m & -m
                m ^= b
                stack.append(b.bit_length() - 1)
    return black


def closure_add_mask(adj: tuple[int, ...], closed: int, add: int, full: int) -> int:
    """Closure of ``closed | add`` given that ``closed`` is already closed."""
    black = closed | add
    if black == full:
        return full
    stack = []
    m = add & ~closed
    while m:
        b = m & -m
        m ^= b
        v = b.bit_length() - 1
        stack.append(v)
        nb = adj[v] & black
        while nb:
            c = nb & -nb
            nb ^= c
            stack.append(c.bit_length() - 1)
    while stack:
        v = stack.pop()
        white = adj[v] & ~black
        if white and not (white & (white - 1)):
            black |= white
            if black == full:
                return full
            u = white.bit_length() - 1
            stack.append(u)
            m = adj[u] & black
            while m:
                b = m & -m
                m ^= b
                stack.append(b.bit_length() - 1)
    return black


def closure(graph: BipartiteGraph, black: int | Iterable[int]) -> ForcingTrace:
    """Run the forcing rule to its fixed point, recording every force.

    Each round scans candidate forcers in ascending vertex index and applies
    forces immediately, so the trace is reproducible; the final set does not
    depend on the order (see the order-independence tests).
    """
    adj = graph.adj
    full = graph.full_mask
    initial = _as_mask(graph, black)
    current = initial
    steps: list[tuple[int, int]] = []
    changed = True
    while changed and current != full:
        changed = False
        for v in range(2 * graph.n):
            if not (current >> v) & 1:
                continue
            white = adj[v] & ~current
            if white and not (white & (white - 1)):
                u = white.bit_length() - 1
                steps.append((v, u))
                current |= white
                changed = True
    return ForcingTrace(initial, tuple(steps), current)


def is_forcing_set(graph: BipartiteGraph, candidate: int | Iterable[int]) -> bool:
    """True when the closure of the candidate set is the whole vertex set."""
    mask = _as_mask(graph, candidate)
    return closure_mask(graph.adj, mask, graph.full_mask) == graph.full_mask
