"""Exact bipartite graph isomorphism, cubic enumeration, and equivalence scans.

The isomorphism test is deliberately independent of the circulant machinery:
it works on explicit graphs with backtracking plus an iterated neighbor-degree
refinement invariant, so it can serve as the oracle for every equivalence
claim made elsewhere in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .circulant import (
    BipartiteGraph,
    CirculantSpec,
    build_graph,
    canonical_form,
    format_spec,
    is_connected_bfs,
    is_connected_gcd,
    normalize,
)
from .solver import Budget, BudgetExceededError

_REFINE_DEPTH = 3


@dataclass(frozen=True)
class IsoCertificate:
    """Outcome of an isomorphism test, with a verified mapping when positive.

    ``mapping[v]`` is the image of vertex v; ``side_swap`` marks maps that
    exchange the two sides.  Negative outcomes carry the invariant (or note)
    that separated the graphs.
    """

    isomorphic: bool
    side_swap: bool = False
    mapping: tuple[int, ...] | None = None
    invariant: str | None = None

    def verify(self, g1: BipartiteGraph, g2: BipartiteGraph) -> bool:
        """Recheck that the mapping is a bijection carrying edges to edges."""
        if not self.isomorphic or self.mapping is None:
            return False
        mapping = self.mapping
        if sorted(mapping) != list(range(2 * g2.n)):
            return False
        for v in range(2 * g1.n):
            image_nbrs = 0
            m = g1.adj[v]
            while m:
                b = m & -m
                m ^= b
                image_nbrs |= 1 << mapping[b.bit_length() - 1]
            if image_nbrs != g2.adj[mapping[v]]:
                return False
        return True


@dataclass(frozen=True)
class ScanFinding:
    """Comparison of two specs: affine-equivalent, isomorphic-but-not-affine
    (a counterexample for the representation-equivalence conjecture), or
    non-isomorphic."""

    n: int
    k: int
    spec_a: str
    spec_b: str
    status: str  # "affine-equivalent" | "counterexample" | "non-isomorphic"
    certificate: IsoCertificate | None = None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "spec_a": self.spec_a,
            "spec_b": self.spec_b,
            "status": self.status,
            "side_swap": self.certificate.side_swap if self.certificate else None,
            "mapping": list(self.certificate.mapping)
            if self.certificate and self.certificate.mapping
            else None,
        }


# ---------------------------------------------------------------------------
# refinement invariant
# ---------------------------------------------------------------------------

def _refined_labels(graph: BipartiteGraph) -> tuple[int, ...]:
    """Iterated multiset-of-neighbor-labels invariant, depth _REFINE_DEPTH.

    Labels are compressed to small ints after each round so the tuples stay
    comparable across graphs; sides are deliberately not part of the seed so
    side-swapped twins refine identically.
    """
    v_count = 2 * graph.n
    labels = [graph.degree(v) for v in range(v_count)]
    for _ in range(_REFINE_DEPTH):
        signatures = []
        for v in range(v_count):
            nbr = sorted(labels[u] for u in graph.neighbors(v))
            signatures.append((labels[v], tuple(nbr)))
        order = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
        labels = [order[sig] for sig in signatures]
    return tuple(labels)


def _invariant_profile(graph: BipartiteGraph) -> tuple:
    labels = _refined_labels(graph)
    return tuple(sorted(labels)), labels


# ---------------------------------------------------------------------------
# backtracking isomorphism
# ---------------------------------------------------------------------------

def _swap_sides(graph: BipartiteGraph) -> BipartiteGraph:
    n = graph.n
    perm = [n + v for v in range(n)] + list(range(n))
    adj = [0] * (2 * n)
    for v in range(2 * n):
        row = 0
        m = graph.adj[v]
        while m:
            b = m & -m
            m ^= b
            row |= 1 << perm[b.bit_length() - 1]
        adj[perm[v]] = row
    return BipartiteGraph(n, tuple(adj))


def _match_side_preserving(g1: BipartiteGraph, g2: BipartiteGraph) -> tuple[int, ...] | None:
    """Side-preserving isomorphism search; None when there is none."""
    v_count = 2 * g1.n
    lab1 = _refined_labels(g1)
    lab2 = _refined_labels(g2)
    if sorted(lab1) != sorted(lab2):
        return None

    # visit order: each new vertex adjacent to an already-placed one when
    # possible (fresh start only at new components), rarest label first
    label_count: dict[int, int] = {}
    for lab in lab1:
        label_count[lab] = label_count.get(lab, 0) + 1
    placed_mask = 0
    order: list[int] = []
    remaining = set(range(v_count))
    while remaining:
        frontier = [v for v in remaining if g1.adj[v] & placed_mask]
        pool = frontier or list(remaining)
        v = min(pool, key=lambda x: (label_count[lab1[x]], x))
        order.append(v)
        remaining.remove(v)
        placed_mask |= 1 << v

    mapping = [-1] * v_count
    used2 = 0
    side_bit = g1.n  # image side must match: v < n maps below n

    def extend(pos: int, placed1: int, placed_images: int) -> bool:
        nonlocal used2
        if pos == v_count:
            return True
        v = order[pos]
        required = 0
        m = g1.adj[v] & placed1
        while m:
            b = m & -m
            m ^= b
            required |= 1 << mapping[b.bit_length() - 1]
        lo, hi = (0, side_bit) if v < side_bit else (side_bit, 2 * side_bit)
        want = lab1[v]
        for w in range(lo, hi):
            bit = 1 << w
            if used2 & bit or lab2[w] != want:
                continue
            # adjacency to every already-placed vertex must match exactly
            if g2.adj[w] & placed_images != required:
                continue
            mapping[v] = w
            used2 |= bit
            if extend(pos + 1, placed1 | (1 << v), placed_images | bit):
                return True
            used2 &= ~bit
            mapping[v] = -1
        return False

    if extend(0, 0, 0):
        return tuple(mapping)
    return None


def bipartite_isomorphic(
    g1: BipartiteGraph, g2: BipartiteGraph, budget: Budget | None = None
) -> IsoCertificate:
    """Exact isomorphism decision trying side-preserving then side-swapping maps.

    Positive certificates are re-verified edge by edge before they are
    returned; negative ones name the invariant that separated the graphs.
    """
    budget = budget or Budget()
    if g1.vertex_count > budget.max_vertices or g2.vertex_count > budget.max_vertices:
        raise BudgetExceededError(
            f"graphs exceed the {budget.max_vertices}-vertex isomorphism budget"
        )
    if g1.n != g2.n:
        return IsoCertificate(False, invariant="vertex count")
    if g1.edge_count() != g2.edge_count():
        return IsoCertificate(False, invariant="edge count")
    if _invariant_profile(g1)[0] != _invariant_profile(g2)[0]:
        return IsoCertificate(False, invariant="refined degree profile")

    mapping = _match_side_preserving(g1, g2)
    if mapping is not None:
        cert = IsoCertificate(True, side_swap=False, mapping=mapping)
        if not cert.verify(g1, g2):
            raise AssertionError("isomorphism search produced an invalid mapping")
        return cert

    swapped = _swap_sides(g2)
    mapping = _match_side_preserving(g1, swapped)
    if mapping is not None:
        n = g2.n
        unswapped = tuple(m - n if m >= n else m + n for m in mapping)
        cert = IsoCertificate(True, side_swap=True, mapping=unswapped)
        if not cert.verify(g1, g2):
            raise AssertionError("side-swap search produced an invalid mapping")
        return cert
    return IsoCertificate(False, invariant="backtracking search exhausted")


# ---------------------------------------------------------------------------
# representation-equivalence scan
# ---------------------------------------------------------------------------

def compare_specs(spec_a: CirculantSpec, spec_b: CirculantSpec) -> ScanFinding:
    """Affine-equivalent, counterexample (isomorphic but not affine), or neither."""
    if spec_a.n != spec_b.n:
        raise ValueError("specs must share n")
    n, k = spec_a.n, spec_a.k
    name_a, name_b = format_spec(spec_a), format_spec(spec_b)
    if canonical_form(spec_a) == canonical_form(spec_b):
        return ScanFinding(n, k, name_a, name_b, "affine-equivalent")
    cert = bipartite_isomorphic(build_graph(spec_a), build_graph(spec_b))
    if cert.isomorphic:
        return ScanFinding(n, k, name_a, name_b, "counterexample", cert)
    return ScanFinding(n, k, name_a, name_b, "non-isomorphic", cert)


def connected_canonical_specs(n: int, k: int) -> list[CirculantSpec]:
    """One canonical representative per affine class of connected k-power specs."""
    reps = set()
    for powers in itertools.combinations(range(n), k):
        spec = normalize(CirculantSpec(n, powers))
        if not is_connected_gcd(spec):
            continue
        reps.add(canonical_form(spec).powers)
    return [CirculantSpec(n, powers) for powers in sorted(reps)]


def conjecture_scan(n_max: int, k: int, budget: Budget | None = None) -> list[ScanFinding]:
    """Pairwise isomorphism tests across distinct affine classes, n up to n_max.

    Cross-class isomorphisms are research findings (status "counterexample"),
    not errors: they would show two circulant representations that no affine
    power map connects.
    """
    budget = budget or Budget()
    findings: list[ScanFinding] = []
    for n in range(max(k, 1), n_max + 1):
        if 2 * n > budget.max_vertices:
            raise BudgetExceededError(f"n={n} exceeds the isomorphism budget", nodes=0)
        reps = connected_canonical_specs(n, k)
        for a, b in itertools.combinations(reps, 2):
            findings.append(compare_specs(a, b))
    return findings


# ---------------------------------------------------------------------------
# cubic bipartite enumeration
# ---------------------------------------------------------------------------

def enumerate_cubic_bipartite(n_half: int, budget_limit: int = 7) -> list[BipartiteGraph]:
    """All connected 3-regular bipartite graphs on 2*n_half vertices, up to iso.

    Row-by-row backtracking over weight-3 row masks kept in non-decreasing
    order (killing row permutations), with column-sum feasibility pruning;
    survivors are deduplicated with the exact isomorphism test.
    """
    if n_half > budget_limit:
        raise BudgetExceededError(f"n_half={n_half} exceeds the enumeration budget {budget_limit}")
    if n_half < 3:
        return []
    n = n_half
    combos = list(itertools.combinations(range(n), 3))
    results: list[BipartiteGraph] = []
    profiles: list[tuple] = []

    col_sums = [0] * n
    rows: list[int] = []

    def columns_feasible(next_row_index: int) -> bool:
        remaining = n - next_row_index
        if sum(3 - c for c in col_sums) != 3 * remaining:
            return False
        return all(3 - c <= remaining for c in col_sums)

    def place(row_index: int, min_choice: int) -> None:
        if row_index == n:
            graph = BipartiteGraph.from_biadjacency_rows(
                [[(mask >> c) & 1 for c in range(n)] for mask in rows]
            )
            if not is_connected_bfs(graph):
                return
            profile = _invariant_profile(graph)[0]
            for seen_profile, seen_graph in zip(profiles, results):
                if seen_profile == profile and bipartite_isomorphic(seen_graph, graph).isomorphic:
                    return
            profiles.append(profile)
            results.append(graph)
            return
        for idx in range(min_choice, len(combos)):
            cols = combos[idx]
            if any(col_sums[c] >= 3 for c in cols):
                continue
            for c in cols:
                col_sums[c] += 1
            if columns_feasible(row_index + 1):
                rows.append(sum(1 << c for c in cols))
                place(row_index + 1, idx)
                rows.pop()
            for c in cols:
                col_sums[c] -= 1

    place(0, 0)
    return results


@dataclass(frozen=True)
class UniquenessReport:
    """Forcing numbers across one enumeration of cubic bipartite graphs."""

    n_half: int
    class_count: int
    z_values: tuple[int, ...]
    minimal_count: int
    minimal_matches_reference: bool
    reference_spec: str

    @property
    def ok(self) -> bool:
        return self.minimal_count == 1 and self.minimal_matches_reference


def verify_cubic_uniqueness(n_half: int, budget: Budget | None = None) -> UniquenessReport:
    """Check that exactly one cubic bipartite class on 2*n_half vertices has the
    minimal forcing number 4, and that it is the consecutive-powers circulant."""
    from .solver import solve_graph

    graphs = enumerate_cubic_bipartite(n_half)
    zs = []
    minimal_graphs = []
    for graph in graphs:
        result = solve_graph(graph, lower=4, budget=budget)
        zs.append(result.z)
        if result.z == 4:
            minimal_graphs.append(graph)
    reference = CirculantSpec(n_half, (0, 1, 2))
    matches = False
    if len(minimal_graphs) == 1:
        matches = bipartite_isomorphic(minimal_graphs[0], build_graph(reference)).isomorphic
    return UniquenessReport(
        n_half=n_half,
        class_count=len(graphs),
        z_values=tuple(sorted(zs)),
        minimal_count=len(minimal_graphs),
        minimal_matches_reference=matches,
        reference_spec=format_spec(reference),
    )
