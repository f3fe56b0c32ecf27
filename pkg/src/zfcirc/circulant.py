"""Bipartite circulant graphs defined by a power set of the cyclic shift.

A spec ``(n, {i_1 < ... < i_k})`` stands for the n-by-n (0,1) circulant
biadjacency matrix with a 1 in position (r, c) exactly when ``(c - r) mod n``
is one of the powers.  The corresponding bipartite graph has left vertices
``0..n-1`` and right vertices ``n..2n-1`` (right label m is stored at index
``n + m`` so a single bitmask covers all 2n vertices).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator


class InvalidSpecError(ValueError):
    """Raised for malformed power sets, spec strings, or affine maps."""


@dataclass(frozen=True)
class CirculantSpec:
    """Half vertex count ``n`` and a strictly increasing tuple of powers."""

    n: int
    powers: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidSpecError(f"n must be positive, got {self.n}")
        powers = tuple(self.powers)
        object.__setattr__(self, "powers", powers)
        if not powers:
            raise InvalidSpecError("power set must be nonempty")
        if any(not (0 <= p < self.n) for p in powers):
            raise InvalidSpecError(f"powers must lie in [0, {self.n - 1}]: {powers}")
        if any(a >= b for a, b in zip(powers, powers[1:])):
            raise InvalidSpecError(f"powers must be strictly increasing: {powers}")

    @property
    def k(self) -> int:
        return len(self.powers)

    def __str__(self) -> str:
        return format_spec(self)


@dataclass(frozen=True)
class AffineMap:
    """Power-set relabeling ``i -> u*i + z (mod n)``; ``u`` must be a unit."""

    u: int
    z: int


@dataclass(frozen=True)
class BipartiteGraph:
    """2n-vertex bipartite graph with one adjacency bitmask per vertex."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.n
        if len(self.adj) != 2 * n:
            raise ValueError(f"expected {2 * n} adjacency rows, got {len(self.adj)}")
        left_mask = (1 << n) - 1
        for v, row in enumerate(self.adj):
            same_side = row & (left_mask if v < n else left_mask << n)
            if same_side:
                raise ValueError(f"vertex {v} has a neighbor on its own side")

    @classmethod
    def from_biadjacency_rows(cls, rows: Iterable[Iterable[int]]) -> BipartiteGraph:
        """Build from a square 0/1 matrix; rows are left vertices."""
        mat = [list(r) for r in rows]
        n = len(mat)
        if any(len(r) != n for r in mat):
            raise ValueError("biadjacency matrix must be square")
        adj = [0] * (2 * n)
        for r, row in enumerate(mat):
            for c, entry in enumerate(row):
                if entry not in (0, 1):
                    raise ValueError(f"entries must be 0/1, got {entry}")
                if entry:
                    adj[r] |= 1 << (n + c)
                    adj[n + c] |= 1 << r
        return cls(n, tuple(adj))

    @property
    def vertex_count(self) -> int:
        return 2 * self.n

    @property
    def full_mask(self) -> int:
        return (1 << (2 * self.n)) - 1

    def degree(self, v: int) -> int:
        return int.bit_count(self.adj[v])

    def regularity(self) -> int | None:
        """Common degree if the graph is regular, else None."""
        degs = {int.bit_count(row) for row in self.adj}
        return degs.pop() if len(degs) == 1 else None

    def neighbors(self, v: int) -> tuple[int, ...]:
        return mask_vertices(self.adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as (left, right) index pairs, lexicographic."""
        for v in range(self.n):
            m = self.adj[v]
            while m:
                b = m & -m
                m ^= b
                yield v, b.bit_length() - 1

    def edge_count(self) -> int:
        return sum(int.bit_count(row) for row in self.adj) // 2

    def vertex_name(self, v: int) -> str:
        return f"L{v}" if v < self.n else f"R{v - self.n}"


@dataclass(frozen=True)
class CycleDecomposition:
    """Cycles of the two-power subgraph on edges from ``P^a`` and ``P^b``."""

    n: int
    power_a: int
    power_b: int
    d: int
    cycles: tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# spec parsing / formatting
# ---------------------------------------------------------------------------

def parse_spec(text: str) -> CirculantSpec:
    """Parse the ``n:k:i1,...,ik`` spec string, e.g. ``6:3:0,1,3``."""
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise InvalidSpecError(f"expected n:k:i1,...,ik, got {text!r}")
    try:
        n = int(parts[0])
        k = int(parts[1])
        powers = tuple(int(p) for p in parts[2].split(",") if p.strip() != "")
    except ValueError as exc:
        raise InvalidSpecError(f"non-integer field in spec {text!r}") from exc
    if len(powers) != k:
        raise InvalidSpecError(f"spec {text!r} declares k={k} but lists {len(powers)} powers")
    if len(set(powers)) != len(powers):
        raise InvalidSpecError(f"duplicate powers in spec {text!r}")
    return CirculantSpec(n, tuple(sorted(powers)))


def format_spec(spec: CirculantSpec) -> str:
    return f"{spec.n}:{spec.k}:{','.join(str(p) for p in spec.powers)}"


# ---------------------------------------------------------------------------
# vertex/mask helpers shared across modules
# ---------------------------------------------------------------------------

def mask_vertices(mask: int) -> tuple[int, ...]:
    """Set bits of a mask as a sorted vertex tuple."""
    out = []
    while mask:
        b = mask & -mask
        mask ^= b
        out.append(b.bit_length() - 1)
    return tuple(out)


def vertices_mask(vertices: Iterable[int], vertex_count: int) -> int:
    mask = 0
    for v in vertices:
        if not (0 <= v < vertex_count):
            raise ValueError(f"vertex {v} out of range [0, {vertex_count})")
        mask |= 1 << v
    return mask


def parse_vertex(token: str, n: int) -> int:
    """Accept ``L3`` / ``R0`` names or raw indices into [0, 2n)."""
    token = token.strip()
    side = token[:1].upper()
    if side in ("L", "R") and token[1:].lstrip("-").isdigit():
        label = int(token[1:])
        if not (0 <= label < n):
            raise ValueError(f"label {label} out of range for n={n}")
        return label if side == "L" else n + label
    if token.lstrip("-").isdigit():
        v = int(token)
        if not (0 <= v < 2 * n):
            raise ValueError(f"vertex index {v} out of range for 2n={2 * n}")
        return v
    raise ValueError(f"cannot parse vertex {token!r}")


# ---------------------------------------------------------------------------
# construction and power-set transforms
# ---------------------------------------------------------------------------

def build_graph(spec: CirculantSpec) -> BipartiteGraph:
    """Graph with mL adjacent to (m + i)R for every power i."""
    n = spec.n
    adj = [0] * (2 * n)
    for m in range(n):
        row = 0
        for p in spec.powers:
            row |= 1 << (n + (m + p) % n)
        adj[m] = row
        while row:
            b = row & -row
            row ^= b
            adj[b.bit_length() - 1] |= 1 << m
    return BipartiteGraph(n, tuple(adj))


def normalize(spec: CirculantSpec) -> CirculantSpec:
    """Shift powers so the smallest becomes 0; yields an isomorphic graph."""
    base = spec.powers[0]
    if base == 0:
        return spec
    return CirculantSpec(spec.n, tuple(sorted((p - base) % spec.n for p in spec.powers)))


def affine_transform(spec: CirculantSpec, amap: AffineMap) -> CirculantSpec:
    """Apply ``i -> u*i + z`` to every power; the graph is unchanged up to iso."""
    n = spec.n
    u, z = amap.u % n, amap.z % n
    if math.gcd(u, n) != 1:
        raise InvalidSpecError(f"u={amap.u} is not a unit modulo {n}")
    return CirculantSpec(n, tuple(sorted((u * p + z) % n for p in spec.powers)))


def affine_orbit(spec: CirculantSpec) -> set[tuple[int, ...]]:
    """All distinct power sets reachable by affine maps."""
    n = spec.n
    orbit: set[tuple[int, ...]] = set()
    for u in range(1, n + 1):
        if math.gcd(u, n) != 1:
            continue
        scaled = [(u * p) % n for p in spec.powers]
        for z in range(n):
            orbit.add(tuple(sorted((s + z) % n for s in scaled)))
    return orbit


def canonical_form(spec: CirculantSpec) -> CirculantSpec:
    """Lexicographically smallest power set over the whole affine orbit."""
    return CirculantSpec(spec.n, min(affine_orbit(spec)))


def complement_spec(spec: CirculantSpec) -> CirculantSpec:
    """Complement of the power set within Z_n; rejects the full set."""
    if spec.k == spec.n:
        raise InvalidSpecError("complement of the full power set is empty")
    present = set(spec.powers)
    return CirculantSpec(spec.n, tuple(p for p in range(spec.n) if p not in present))


# ---------------------------------------------------------------------------
# connectivity
# ---------------------------------------------------------------------------

def is_connected_gcd(spec: CirculantSpec) -> bool:
    """Connectivity from the powers alone: gcd of nonzero powers and n is 1.

    The spec must contain 0 (normalize first otherwise).
    """
    if 0 not in spec.powers:
        raise InvalidSpecError("is_connected_gcd expects a normalized spec (0 in powers)")
    return math.gcd(spec.n, *spec.powers) == 1 if spec.k > 1 else spec.n == 1


def is_connected_bfs(graph: BipartiteGraph) -> bool:
    """Independent connectivity oracle: plain breadth-first search."""
    full = graph.full_mask
    seen = 1
    frontier = 1
    adj = graph.adj
    while frontier:
        nxt = 0
        m = frontier
        while m:
            b = m & -m
            m ^= b
            nxt |= adj[b.bit_length() - 1]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def connected_components(graph: BipartiteGraph) -> list[int]:
    """Vertex masks of the connected components, ordered by smallest member."""
    remaining = graph.full_mask
    adj = graph.adj
    comps = []
    while remaining:
        start = remaining & -remaining
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            m = frontier
            while m:
                b = m & -m
                m ^= b
                nxt |= adj[b.bit_length() - 1]
            frontier = nxt & ~seen
            seen |= frontier
        comps.append(seen)
        remaining &= ~seen
    return comps


# ---------------------------------------------------------------------------
# two-power cycle decomposition
# ---------------------------------------------------------------------------

def cycle_decomposition(spec: CirculantSpec, a: int, b: int) -> CycleDecomposition:
    """Split the subgraph on edges from ``P^a`` and ``P^b`` into its cycles.

    There are ``d = gcd(b - a, n)`` cycles of length ``2n/d``; the left labels
    of one cycle form a residue class modulo d (shifted by a on the right).
    """
    if a == b:
        raise InvalidSpecError("cycle decomposition needs two distinct powers")
    if a not in spec.powers or b not in spec.powers:
        raise InvalidSpecError(f"powers {a}, {b} must both belong to {spec.powers}")
    n = spec.n
    d = math.gcd((b - a) % n, n)
    length = 2 * n // d
    seen_left = set()
    cycles = []
    for start in range(n):
        if start in seen_left:
            continue
        cycle = []
        m = start
        for _ in range(length // 2):
            seen_left.add(m)
            cycle.append(m)                      # mL
            cycle.append(n + (m + a) % n)        # (m+a)R via P^a
            m = (m + a - b) % n                  # back to the left via P^b
        cycles.append(tuple(cycle))
    return CycleDecomposition(n, a, b, d, tuple(cycles))


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def graph_to_dot(graph: BipartiteGraph) -> str:
    """DOT text with left vertices L0..L{n-1} and right vertices R0..R{n-1}."""
    lines = ["graph G {"]
    for v in range(2 * graph.n):
        lines.append(f'  {graph.vertex_name(v)};')
    for left, right in graph.edges():
        lines.append(f"  {graph.vertex_name(left)} -- {graph.vertex_name(right)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(graph: BipartiteGraph, spec: CirculantSpec | None = None) -> str:
    """JSON adjacency lists keyed by vertex name."""
    doc: dict = {"n": graph.n}
    if spec is not None:
        doc["spec"] = format_spec(spec)
    doc["adjacency"] = {
        graph.vertex_name(v): [graph.vertex_name(u) for u in graph.neighbors(v)]
        for v in range(2 * graph.n)
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
