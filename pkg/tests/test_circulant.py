import itertools
import json

import pytest

from zfcirc.circulant import (
    AffineMap,
    CirculantSpec,
    InvalidSpecError,
    affine_orbit,
    affine_transform,
    build_graph,
    canonical_form,
    complement_spec,
    cycle_decomposition,
    format_spec,
    graph_to_dot,
    graph_to_json,
    is_connected_bfs,
    is_connected_gcd,
    normalize,
    parse_spec,
    parse_vertex,
)

from oracles import affine_images, connected_by_union_find

# the 12-vertex example pair: shift powers {0,1,3} and {1,2,4} describe the
# same graph; both matrices are kept verbatim as ground truth
MATRIX_A = [
    [1, 1, 0, 1, 0, 0],
    [0, 1, 1, 0, 1, 0],
    [0, 0, 1, 1, 0, 1],
    [1, 0, 0, 1, 1, 0],
    [0, 1, 0, 0, 1, 1],
    [1, 0, 1, 0, 0, 1],
]
MATRIX_A_PRIME = [
    [0, 1, 1, 0, 1, 0],
    [0, 0, 1, 1, 0, 1],
    [1, 0, 0, 1, 1, 0],
    [0, 1, 0, 0, 1, 1],
    [1, 0, 1, 0, 0, 1],
    [1, 1, 0, 1, 0, 0],
]


def edges_of(matrix):
    n = len(matrix)
    return {(r, n + c) for r in range(n) for c in range(n) if matrix[r][c]}


class TestBuildGraph:
    def test_matches_reference_matrix(self):
        g = build_graph(parse_spec("6:3:0,1,3"))
        assert set(g.edges()) == edges_of(MATRIX_A)
        assert g.neighbors(0) == (6, 7, 9)  # 0L -> {0R, 1R, 3R}

    def test_single_edge(self):
        g = build_graph(CirculantSpec(1, (0,)))
        assert list(g.edges()) == [(0, 1)]

    def test_full_powers_is_complete_bipartite(self):
        g = build_graph(CirculantSpec(3, (0, 1, 2)))
        assert g.edge_count() == 9
        assert all(g.degree(v) == 3 for v in range(6))

    @pytest.mark.parametrize("n,powers", [(6, (0, 1, 3)), (8, (0, 2, 5)), (9, (1, 4))])
    def test_regular_with_neighbor_rule(self, n, powers):
        spec = CirculantSpec(n, powers)
        g = build_graph(spec)
        assert all(g.degree(v) == spec.k for v in range(2 * n))
        for m in range(n):
            assert g.neighbors(m) == tuple(sorted(n + (m + p) % n for p in powers))
            assert g.neighbors(n + m) == tuple(sorted((m - p) % n for p in powers))

    def test_rejects_bad_specs(self):
        with pytest.raises(InvalidSpecError):
            CirculantSpec(5, ())
        with pytest.raises(InvalidSpecError):
            CirculantSpec(5, (0, 0, 1))
        with pytest.raises(InvalidSpecError):
            CirculantSpec(5, (0, 5))
        with pytest.raises(InvalidSpecError):
            CirculantSpec(0, (0,))


class TestSpecStrings:
    def test_round_trip(self):
        spec = parse_spec("6:3:0,1,3")
        assert spec == CirculantSpec(6, (0, 1, 3))
        assert format_spec(spec) == "6:3:0,1,3"

    def test_rejects_count_mismatch_and_garbage(self):
        for bad in ["6:2:0,1,3", "6:3", "6:3:0,1,x", "6:3:0,1,1"]:
            with pytest.raises(InvalidSpecError):
                parse_spec(bad)

    def test_parse_vertex_names_and_indices(self):
        assert parse_vertex("L3", 6) == 3
        assert parse_vertex("R0", 6) == 6
        assert parse_vertex("11", 6) == 11
        with pytest.raises(ValueError):
            parse_vertex("R6", 6)


class TestNormalize:
    def test_reference_pair(self):
        assert normalize(CirculantSpec(6, (1, 2, 4))).powers == (0, 1, 3)

    def test_already_normalized(self):
        assert normalize(CirculantSpec(6, (0, 1, 3))).powers == (0, 1, 3)

    def test_shift_by_smallest(self):
        assert normalize(CirculantSpec(15, (3, 6, 8))).powers == (0, 3, 5)

    def test_normalized_graph_isomorphic(self):
        from zfcirc.isomorphism import bipartite_isomorphic

        spec = CirculantSpec(15, (3, 6, 8))
        cert = bipartite_isomorphic(build_graph(spec), build_graph(normalize(spec)))
        assert cert.isomorphic


class TestAffine:
    def test_reference_shift(self):
        out = affine_transform(CirculantSpec(6, (0, 1, 3)), AffineMap(1, 1))
        assert out.powers == (1, 2, 4)

    def test_identity(self):
        out = affine_transform(CirculantSpec(6, (0, 1, 3)), AffineMap(1, 0))
        assert out.powers == (0, 1, 3)

    def test_unit_five(self):
        out = affine_transform(CirculantSpec(6, (0, 1, 3)), AffineMap(5, 0))
        assert out.powers == (0, 3, 5)

    def test_rejects_non_unit(self):
        with pytest.raises(InvalidSpecError):
            affine_transform(CirculantSpec(6, (0, 1, 3)), AffineMap(2, 0))

    def test_graphs_isomorphic_under_sampled_maps(self):
        from zfcirc.isomorphism import bipartite_isomorphic

        import random

        rng = random.Random(7)
        for n, powers in [(6, (0, 1, 3)), (8, (0, 2, 3)), (10, (0, 1, 4))]:
            spec = CirculantSpec(n, powers)
            units = [u for u in range(1, n) if __import__("math").gcd(u, n) == 1]
            for _ in range(5):
                amap = AffineMap(rng.choice(units), rng.randrange(n))
                image = affine_transform(spec, amap)
                cert = bipartite_isomorphic(build_graph(spec), build_graph(image))
                assert cert.isomorphic, (spec, amap)


class TestCanonicalForm:
    def test_examples(self):
        assert canonical_form(CirculantSpec(6, (1, 2, 4))).powers == (0, 1, 3)
        assert canonical_form(CirculantSpec(3, (0, 1, 2))).powers == (0, 1, 2)
        assert canonical_form(CirculantSpec(6, (0, 3, 5))).powers == (0, 1, 3)

    def test_matches_independent_orbit_minimum(self):
        for n, powers in [(6, (1, 2, 4)), (8, (0, 2, 7)), (9, (2, 5)), (10, (0, 1, 4, 5))]:
            expected = min(affine_images(n, powers))
            assert canonical_form(CirculantSpec(n, powers)).powers == expected

    def test_idempotent_and_orbit_coherent(self):
        import math

        for n in range(2, 9):
            for powers in itertools.combinations(range(n), 3):
                if len(powers) > n:
                    continue
                spec = CirculantSpec(n, powers)
                canon = canonical_form(spec)
                assert canonical_form(canon) == canon
                for u in range(1, n):
                    if math.gcd(u, n) != 1:
                        continue
                    image = affine_transform(spec, AffineMap(u, 3 % n))
                    assert canonical_form(image) == canon


class TestConnectivity:
    def test_examples(self):
        assert is_connected_gcd(CirculantSpec(15, (0, 3, 5))) is True
        assert is_connected_gcd(CirculantSpec(6, (0, 2, 4))) is False
        assert is_connected_gcd(CirculantSpec(8, (0, 1, 2, 3))) is True

    def test_requires_normalized(self):
        with pytest.raises(InvalidSpecError):
            is_connected_gcd(CirculantSpec(6, (1, 2)))

    def test_exhaustive_agreement_with_bfs(self):
        # every spec with n <= 12, k <= 4
        disagreements = []
        for n in range(1, 13):
            for k in range(1, min(n, 4) + 1):
                for powers in itertools.combinations(range(n), k):
                    spec = normalize(CirculantSpec(n, powers))
                    graph = build_graph(spec)
                    if is_connected_gcd(spec) != is_connected_bfs(graph):
                        disagreements.append(format_spec(spec))
        assert disagreements == []

    def test_bfs_against_union_find(self):
        for n, powers in [(6, (0, 2, 4)), (6, (0, 1, 3)), (12, (0, 4, 8)), (9, (0, 3))]:
            graph = build_graph(CirculantSpec(n, powers))
            assert is_connected_bfs(graph) == connected_by_union_find(graph)


class TestCycleDecomposition:
    def under_rotation_or_reversal(self, cycle, expected_run):
        doubled = list(cycle) + list(cycle)
        rev = list(reversed(cycle)) * 2
        run = list(expected_run)
        return any(
            doubled[i:i + len(run)] == run or rev[i:i + len(run)] == run
            for i in range(len(cycle))
        )

    def test_fifteen_with_gap_five(self):
        dec = cycle_decomposition(CirculantSpec(15, (0, 3, 5)), 0, 5)
        assert dec.d == 5 and len(dec.cycles) == 5
        assert all(len(c) == 6 for c in dec.cycles)
        # the cycle through 0L visits 0L, 0R, 10L, 10R, 5L, 5R in some rotation
        first = next(c for c in dec.cycles if 0 in c)
        expected = [0, 15, 10, 25, 5, 20]
        assert self.under_rotation_or_reversal(first, expected)

    def test_fifteen_with_gap_three(self):
        dec = cycle_decomposition(CirculantSpec(15, (0, 3, 5)), 0, 3)
        assert dec.d == 3 and len(dec.cycles) == 3
        assert all(len(c) == 10 for c in dec.cycles)
        first = next(c for c in dec.cycles if 0 in c)
        # starts 0L, 3R, 3L, 6R reading one way around
        assert self.under_rotation_or_reversal(first, [0, 18, 3, 21])

    def test_single_cycle(self):
        dec = cycle_decomposition(CirculantSpec(4, (0, 1)), 0, 1)
        assert dec.d == 1 and len(dec.cycles) == 1 and len(dec.cycles[0]) == 8

    def test_partition_lengths_and_residues(self):
        import math

        for n, powers, a, b in [(12, (0, 2, 3), 2, 3), (15, (0, 3, 5), 3, 5), (8, (0, 4), 0, 4)]:
            spec = CirculantSpec(n, powers)
            dec = cycle_decomposition(spec, a, b)
            d = math.gcd((b - a) % n, n)
            assert dec.d == d
            seen = sorted(v for c in dec.cycles for v in c)
            assert seen == list(range(2 * n))
            for cyc in dec.cycles:
                assert len(cyc) == 2 * n // d
                lefts = [v for v in cyc if v < n]
                assert len({v % d for v in lefts}) == 1
                # edges alternate between the two chosen powers
                graph = build_graph(spec)
                for x, y in zip(cyc, cyc[1:] + cyc[:1]):
                    left, right = (x, y) if x < n else (y, x)
                    assert (right - n - left) % n in (a, b)

    def test_rejects_bad_powers(self):
        with pytest.raises(InvalidSpecError):
            cycle_decomposition(CirculantSpec(6, (0, 1, 3)), 1, 1)
        with pytest.raises(InvalidSpecError):
            cycle_decomposition(CirculantSpec(6, (0, 1, 3)), 0, 2)


class TestComplement:
    def test_examples(self):
        assert complement_spec(CirculantSpec(6, (0, 2))).powers == (1, 3, 4, 5)
        assert complement_spec(CirculantSpec(3, (0,))).powers == (1, 2)
        assert complement_spec(CirculantSpec(8, (4, 6))).powers == (0, 1, 2, 3, 5, 7)

    def test_rejects_full(self):
        with pytest.raises(InvalidSpecError):
            complement_spec(CirculantSpec(3, (0, 1, 2)))


class TestExports:
    def test_dot_counts(self):
        g = build_graph(parse_spec("6:3:0,1,3"))
        dot = graph_to_dot(g)
        assert dot.count(" -- ") == 18
        assert "L0;" in dot and "R5;" in dot

    def test_json_adjacency(self):
        spec = parse_spec("6:3:0,1,3")
        doc = json.loads(graph_to_json(build_graph(spec), spec))
        assert doc["n"] == 6 and doc["spec"] == "6:3:0,1,3"
        assert doc["adjacency"]["L0"] == ["R0", "R1", "R3"]
        assert len(doc["adjacency"]) == 12
