"""Forcing-number bounds and the exact branch-and-bound solver.

The exact search runs iterative deepening on the target set size, starting at
the best proven lower bound.  Within a size, candidate sets are enumerated in
lexicographic order over sorted vertex tuples with three sound prunes:

* already-forced vertices are never added (any forcing superset of size s
  would yield a forcing set of size s-1, which earlier iterations excluded);
* a branch dies once the closure of current-blacks plus *all* remaining
  higher-index vertices misses the full set (monotonicity), and because that
  optimistic union only shrinks as the candidate index grows, the first
  failure ends the whole candidate loop;
* only sets that are lexicographic minima of their rotation orbit are kept.
  Rotating both sides by s is an automorphism, a non-minimal prefix can never
  extend to a minimal set, and the lexicographically least minimum forcing
  set is itself orbit-minimal, so the witness is exact.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

from .circulant import (
    BipartiteGraph,
    CirculantSpec,
    affine_orbit,
    build_graph,
    format_spec,
    is_connected_gcd,
    mask_vertices,
    normalize,
)
from .forcing import closure_add_mask, closure_mask, is_forcing_set


class WitnessError(RuntimeError):
    """A constructed bound witness failed the forcing test."""


class BudgetExceededError(RuntimeError):
    """Search budget ran out; carries whatever bounds were established."""

    def __init__(self, message: str, bounds: "BoundReport | None" = None, nodes: int = 0):
        super().__init__(message)
        self.bounds = bounds
        self.nodes = nodes


class DisconnectedGraphError(ValueError):
    """Solver operations require a connected graph unless told otherwise."""


@dataclass(frozen=True)
class Budget:
    """Limits for the exact search; 2n must fit in ``max_vertices`` bits."""

    max_vertices: int = 32
    max_nodes: int | None = None
    max_seconds: float | None = None


@dataclass(frozen=True)
class BoundReport:
    """Every bound applicable to an instance, with verified witnesses."""

    lower_regular: int
    lower_bipartite: int
    lower_cycle: int | None
    upper_span: int | None
    upper_span_witness: tuple[int, ...] | None
    upper_cycle: int | None
    upper_cycle_witness: tuple[int, ...] | None
    best_lower: int
    best_upper: int
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "lower_regular": self.lower_regular,
            "lower_bipartite": self.lower_bipartite,
            "lower_cycle": self.lower_cycle,
            "upper_span": self.upper_span,
            "upper_span_witness": list(self.upper_span_witness) if self.upper_span_witness else None,
            "upper_cycle": self.upper_cycle,
            "upper_cycle_witness": list(self.upper_cycle_witness) if self.upper_cycle_witness else None,
            "best_lower": self.best_lower,
            "best_upper": self.best_upper,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class SolveResult:
    z: int
    witness: tuple[int, ...]
    nodes_explored: int
    wall_time: float
    bounds: BoundReport | None = None

    def to_json_dict(self) -> dict:
        return {
            "z": self.z,
            "witness": list(self.witness),
            "nodes": self.nodes_explored,
            "time": self.wall_time,
            "bounds": self.bounds.to_json_dict() if self.bounds else None,
        }


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def lower_bounds(spec: CirculantSpec) -> BoundReport:
    """Lower bounds from regularity, bipartiteness, and cycle structure."""
    spec = normalize(spec)
    k = spec.k
    n = spec.n
    notes: list[str] = []
    if n == 1 or k == 1:
        notes.append("degenerate instance (n=1 or k=1); lower bounds clamp to 1")
    lower_regular = max(1, k)
    lower_bipartite = max(1, 2 * (k - 1))
    lower_cycle: int | None = None
    connected = is_connected_gcd(spec)
    if not connected:
        notes.append("disconnected spec; cycle bound skipped")
    elif k == 3:
        ds = [math.gcd(p, n) for p in spec.powers[1:]]
        best = max((d for d in ds if d > 1), default=None)
        if best is not None:
            lower_cycle = best + 1
    best_lower = max(lower_regular, lower_bipartite, lower_cycle or 1)
    return BoundReport(
        lower_regular=lower_regular,
        lower_bipartite=lower_bipartite,
        lower_cycle=lower_cycle,
        upper_span=None,
        upper_span_witness=None,
        upper_cycle=None,
        upper_cycle_witness=None,
        best_lower=best_lower,
        best_upper=2 * n,
        notes=tuple(notes),
    )


def upper_bound_span(
    spec: CirculantSpec, orbit_search: bool = False
) -> tuple[int, tuple[int, ...]]:
    """Bound 2*i_k with the first i_k left and right vertices as witness.

    With ``orbit_search`` the minimum of 2*i_k over every affine image that
    contains power 0 is returned, with the witness pulled back to the input
    labeling through the isomorphism of that image.
    """
    spec = normalize(spec)
    if not is_connected_gcd(spec):
        raise DisconnectedGraphError("span upper bound needs a connected spec")
    n = spec.n
    graph = build_graph(spec)

    candidates: list[tuple[int, int, int]] = [(spec.powers[-1], 1, 0)]  # (i_k, u, z)
    if orbit_search:
        for u in range(1, n + 1):
            if math.gcd(u, n) != 1:
                continue
            scaled = sorted((u * p) % n for p in spec.powers)
            for z in range(n):
                image = sorted((s + z) % n for s in scaled)
                if image[0] == 0:
                    candidates.append((image[-1], u, z))
        candidates.sort()

    top, u, z = candidates[0]
    if top == 0:
        # single-edge graph (k = 1 connected forces n = 1); one endpoint forces
        witness = (0,)
        if not is_forcing_set(graph, witness):
            raise WitnessError(f"degenerate witness failed on {format_spec(spec)}")
        return 1, witness
    # witness in the image labeling: labels 0..top-1 on both sides; pull back
    # through mL -> (u m)L, mR -> (u m + z)R.
    u_inv = pow(u, -1, n)
    witness_vertices = sorted(
        [(u_inv * x) % n for x in range(top)]
        + [n + ((u_inv * (x - z)) % n) for x in range(top)]
    )
    witness = tuple(witness_vertices)
    if not is_forcing_set(graph, witness):
        raise WitnessError(
            f"span witness {witness} does not force on {format_spec(spec)}"
        )
    return 2 * top, witness


def upper_bound_cycle(spec: CirculantSpec) -> tuple[int, tuple[int, ...]] | None:
    """Cycle-decomposition bound d + 2(n/d) - 2 for cubic specs.

    Applies when some nonzero power j has d = gcd(j, n) > 1: the witness
    blackens the whole cycle through label 0 plus one left vertex in every
    residue class except 0 and -i (i being the other nonzero power).  Returns
    the better of the two power choices, or None when neither gcd is > 1.
    """
    spec = normalize(spec)
    if spec.k != 3:
        return None
    if not is_connected_gcd(spec):
        raise DisconnectedGraphError("cycle upper bound needs a connected spec")
    n = spec.n
    graph = build_graph(spec)
    best: tuple[int, tuple[int, ...]] | None = None
    _, p1, p2 = spec.powers
    for j, i in ((p2, p1), (p1, p2)):
        d = math.gcd(j, n)
        if d <= 1:
            continue
        value = d + 2 * (n // d) - 2
        skip = {0, (-i) % d}
        witness_set = set()
        for x in range(0, n, d):  # the cycle through 0L: labels = multiples of d
            witness_set.add(x)
            witness_set.add(n + x)
        for m in range(1, d):
            if m not in skip:
                witness_set.add(m)
        witness = tuple(sorted(witness_set))
        if len(witness) != value:
            raise WitnessError(
                f"cycle witness for {format_spec(spec)} has size {len(witness)}, expected {value}"
            )
        if not is_forcing_set(graph, witness):
            raise WitnessError(
                f"cycle witness {witness} does not force on {format_spec(spec)}"
            )
        if best is None or value < best[0]:
            best = (value, witness)
    return best


def bounds_report(spec: CirculantSpec, orbit_search: bool = False) -> BoundReport:
    """All applicable bounds for one instance, sandwich-consistent."""
    spec = normalize(spec)
    report = lower_bounds(spec)
    connected = is_connected_gcd(spec)
    upper_span = upper_span_witness = None
    upper_cycle = upper_cycle_witness = None
    notes = list(report.notes)
    if connected:
        upper_span, upper_span_witness = upper_bound_span(spec, orbit_search=orbit_search)
        cyc = upper_bound_cycle(spec)
        if cyc is not None:
            upper_cycle, upper_cycle_witness = cyc
    else:
        notes.append("upper bounds need connectivity; falling back to 2n")
    uppers = [u for u in (upper_span, upper_cycle) if u is not None]
    best_upper = min(uppers) if uppers else 2 * spec.n
    best_upper = min(best_upper, 2 * spec.n)
    return BoundReport(
        lower_regular=report.lower_regular,
        lower_bipartite=report.lower_bipartite,
        lower_cycle=report.lower_cycle,
        upper_span=upper_span,
        upper_span_witness=upper_span_witness,
        upper_cycle=upper_cycle,
        upper_cycle_witness=upper_cycle_witness,
        best_lower=min(report.best_lower, best_upper),
        best_upper=best_upper,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# exact search
# ---------------------------------------------------------------------------

class _SearchState:
    __slots__ = ("nodes", "deadline", "max_nodes", "witness")

    def __init__(self, max_nodes: int | None, max_seconds: float | None):
        self.nodes = 0
        self.max_nodes = max_nodes
        self.deadline = time.monotonic() + max_seconds if max_seconds else None
        self.witness: int | None = None

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceededError("node budget exceeded", nodes=self.nodes)
        if self.deadline is not None and not (self.nodes & 0xFFF):
            if time.monotonic() > self.deadline:
                raise BudgetExceededError("time budget exceeded", nodes=self.nodes)


def _rotate_mask(mask: int, s: int, n: int, low: int) -> int:
    left = mask & low
    right = mask >> n
    rl = ((left << s) | (left >> (n - s))) & low
    rr = ((right << s) | (right >> (n - s))) & low
    return rl | (rr << n)


def _orbit_lex_min(prefix: int, n: int, low: int) -> bool:
    """Is the prefix <= every rotation of itself, in sorted-tuple order?

    For equal-size sets the tuple order is decided by who owns the lowest bit
    of the symmetric difference.  Only rotations that move some member onto
    the prefix's smallest vertex can win, so only those are tried.
    """
    anchored_left = prefix & 1
    labels = []
    part = prefix & low if anchored_left else prefix >> n
    m = part
    while m:
        b = m & -m
        m ^= b
        labels.append(b.bit_length() - 1)
    for a in labels:
        if a == 0:
            continue
        rot = _rotate_mask(prefix, n - a, n, low)
        diff = rot ^ prefix
        if diff and (diff & -diff) & rot:
            return False
    return True


def _search_size(
    adj: Sequence[int],
    full: int,
    size: int,
    state: _SearchState,
    shift_n: int | None,
    roots: Sequence[int],
) -> int | None:
    """First forcing set of the given size in lexicographic order, as a mask."""
    vcount = full.bit_length()
    atleast = [(full >> v) << v for v in range(vcount + 1)]
    low = (1 << shift_n) - 1 if shift_n else 0

    def rec(closed: int, last: int, remaining: int, prefix: int) -> int | None:
        hi = vcount - remaining
        v = last + 1
        while v <= hi:
            bit = 1 << v
            if closed & bit:
                v += 1
                continue
            state.tick()
            # optimistic completion with every vertex >= v; shrinks with v,
            # so the first failure kills the rest of the loop too
            if closure_add_mask(adj, closed, atleast[v], full) != full:
                return None
            new_prefix = prefix | bit
            if shift_n and not _orbit_lex_min(new_prefix, shift_n, low):
                v += 1
                continue
            nc = closure_add_mask(adj, closed, bit, full)
            if remaining == 1:
                if nc == full:
                    return new_prefix
            else:
                if nc == full:
                    raise AssertionError(
                        "a smaller forcing set slipped past the lower bound"
                    )
                sub = rec(nc, v, remaining - 1, new_prefix)
                if sub is not None:
                    return sub
            v += 1
        return None

    for root in roots:
        bit = 1 << root
        state.tick()
        nc = closure_mask(adj, bit, full)
        if size == 1:
            if nc == full:
                return bit
            continue
        if nc == full:
            raise AssertionError("a smaller forcing set slipped past the lower bound")
        found = rec(nc, root, size - 1, bit)
        if found is not None:
            return found
    return None


def solve_graph(
    graph: BipartiteGraph,
    lower: int | None = None,
    upper: int | None = None,
    budget: Budget | None = None,
    shift_symmetry: bool = False,
) -> SolveResult:
    """Exact minimum forcing set size for an explicit graph.

    ``shift_symmetry`` may only be set when simultaneous rotation of both
    sides is known to be an automorphism (true for circulant builds).
    """
    budget = budget or Budget()
    if graph.vertex_count > budget.max_vertices:
        raise BudgetExceededError(
            f"graph has {graph.vertex_count} vertices; budget allows {budget.max_vertices}"
        )
    full = graph.full_mask
    adj = graph.adj
    start = time.monotonic()
    if lower is None:
        reg = graph.regularity()
        lower = max(1, 2 * (reg - 1)) if reg else 1
    upper = upper if upper is not None else graph.vertex_count
    state = _SearchState(budget.max_nodes, budget.max_seconds)
    if shift_symmetry:
        roots: tuple[int, ...] = (0, graph.n)
        shift_n: int | None = graph.n
    else:
        roots = tuple(range(graph.vertex_count))
        shift_n = None
    for size in range(max(1, lower), upper + 1):
        found = _search_size(adj, full, size, state, shift_n, roots)
        if found is not None:
            return SolveResult(
                z=size,
                witness=mask_vertices(found),
                nodes_explored=state.nodes,
                wall_time=time.monotonic() - start,
            )
    raise AssertionError("search exhausted all sizes without a forcing set")


def _component_reduction(spec: CirculantSpec) -> tuple[int, CirculantSpec]:
    """A disconnected circulant is g disjoint copies of a smaller circulant."""
    spec = normalize(spec)
    g = math.gcd(spec.n, *spec.powers)
    if g == 1:
        return 1, spec
    return g, CirculantSpec(spec.n // g, tuple(p // g for p in spec.powers))


def solve_exact(
    spec: CirculantSpec,
    budget: Budget | None = None,
    threads: int = 1,
    allow_disconnected: bool = False,
) -> SolveResult:
    """Exact forcing number of a circulant spec with rotation pruning.

    Single-threaded runs return the lexicographically least minimum forcing
    set; with ``threads > 1`` the value is identical but the witness may be
    any minimum set.
    """
    budget = budget or Budget()
    spec_n = normalize(spec)
    if not is_connected_gcd(spec_n):
        if not allow_disconnected:
            raise DisconnectedGraphError(
                f"{format_spec(spec)} is disconnected; pass allow_disconnected=True "
                "to solve per component"
            )
        copies, sub = _component_reduction(spec_n)
        part = solve_exact(sub, budget=budget, threads=threads)
        witness: list[int] = []
        n, sub_n = spec_n.n, sub.n
        for c in range(copies):
            for v in part.witness:
                if v < sub_n:
                    witness.append(c + copies * v)
                else:
                    witness.append(n + c + copies * (v - sub_n))
        graph = build_graph(spec_n)
        witness_t = tuple(sorted(witness))
        if not is_forcing_set(graph, witness_t):
            raise AssertionError("per-component witness failed to force")
        return SolveResult(
            z=copies * part.z,
            witness=witness_t,
            nodes_explored=part.nodes_explored,
            wall_time=part.wall_time,
            bounds=None,
        )

    bounds = bounds_report(spec_n)
    graph = build_graph(spec_n)
    start = time.monotonic()
    try:
        if threads > 1:
            z, witness_mask, nodes = _solve_parallel(graph, bounds, budget, threads)
        else:
            res = solve_graph(
                graph,
                lower=bounds.best_lower,
                upper=bounds.best_upper,
                budget=budget,
                shift_symmetry=True,
            )
            z, witness_mask, nodes = res.z, 0, res.nodes_explored
            witness = res.witness
    except BudgetExceededError as exc:
        raise BudgetExceededError(str(exc), bounds=bounds, nodes=exc.nodes) from None
    if threads > 1:
        witness = mask_vertices(witness_mask)
    return SolveResult(
        z=z,
        witness=witness,
        nodes_explored=nodes,
        wall_time=time.monotonic() - start,
        bounds=bounds,
    )


# ---------------------------------------------------------------------------
# parallel mode: split the depth-2 subtrees across worker processes
# ---------------------------------------------------------------------------

def _parallel_task(args: tuple) -> tuple[int | None, int]:
    adj, full, n, size, root, second, max_nodes, max_seconds = args
    state = _SearchState(max_nodes, max_seconds)
    low = (1 << n) - 1
    vcount = full.bit_length()
    atleast = [(full >> v) << v for v in range(vcount + 1)]

    def rec(closed: int, last: int, remaining: int, prefix: int) -> int | None:
        hi = vcount - remaining
        v = last + 1
        while v <= hi:
            bit = 1 << v
            if closed & bit:
                v += 1
                continue
            state.tick()
            if closure_add_mask(adj, closed, atleast[v], full) != full:
                return None
            new_prefix = prefix | bit
            if not _orbit_lex_min(new_prefix, n, low):
                v += 1
                continue
            nc = closure_add_mask(adj, closed, bit, full)
            if remaining == 1:
                if nc == full:
                    return new_prefix
            else:
                if nc != full:
                    sub = rec(nc, v, remaining - 1, new_prefix)
                    if sub is not None:
                        return sub
            v += 1
        return None

    prefix = (1 << root) | (1 << second)
    closed = closure_mask(adj, prefix, full)
    if size == 2:
        return (prefix if closed == full else None), state.nodes
    if closed == full:
        return None, state.nodes  # smaller set exists; outer sizes handle it
    try:
        return rec(closed, second, size - 2, prefix), state.nodes
    except BudgetExceededError:
        raise


def _solve_parallel(
    graph: BipartiteGraph, bounds: BoundReport, budget: Budget, threads: int
) -> tuple[int, int, int]:
    import multiprocessing as mp

    adj = graph.adj
    full = graph.full_mask
    n = graph.n
    low = (1 << n) - 1
    state = _SearchState(budget.max_nodes, budget.max_seconds)
    for size in range(bounds.best_lower, bounds.best_upper + 1):
        if size == 1:
            for root in (0, n):
                state.tick()
                if closure_mask(adj, 1 << root, full) == full:
                    return size, 1 << root, state.nodes
            continue
        tasks = []
        for root in (0, n):
            for second in range(root + 1, 2 * n):
                prefix = (1 << root) | (1 << second)
                if _orbit_lex_min(prefix, n, low):
                    tasks.append(
                        (adj, full, n, size, root, second,
                         budget.max_nodes, budget.max_seconds)
                    )
        total_nodes = state.nodes
        found_mask: int | None = None
        with mp.Pool(processes=threads) as pool:
            for mask, nodes in pool.imap_unordered(_parallel_task, tasks):
                total_nodes += nodes
                if mask is not None:
                    found_mask = mask
                    pool.terminate()
                    break
        state.nodes = total_nodes
        if found_mask is not None:
            return size, found_mask, total_nodes
    raise AssertionError("parallel search exhausted all sizes without a forcing set")
