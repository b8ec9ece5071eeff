import json

import pytest

from twistbench.graphs import (
    InputError,
    SimplicialGraph,
    VertexSet,
    enumerate_graphs_up_to_iso,
    graph_from_adj,
    is_intersection_of_stars,
    join_decomposition,
    kappa,
    link,
    star,
    star_closure_mask,
)

PATH3 = SimplicialGraph.from_edges("abc", [("a", "b"), ("b", "c")])
K3 = SimplicialGraph.from_edges("abc", [("a", "b"), ("b", "c"), ("a", "c")])
SQUARE = SimplicialGraph.from_edges(
    "abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]
)
SINGLE = SimplicialGraph.from_edges("a", [])


def test_link_examples():
    assert set(link(PATH3, "b")) == {"a", "c"}
    assert set(link(PATH3, "a")) == {"b"}
    assert set(link(K3, "a")) == {"b", "c"}


def test_link_unknown_vertex():
    with pytest.raises(InputError):
        link(PATH3, "z")


def test_star():
    assert set(star(PATH3, "a")) == {"a", "b"}
    assert set(star(SQUARE, "a")) == {"a", "b", "d"}


def test_kappa_examples():
    # K3: every star is the whole graph
    assert set(kappa(K3, "a")) == {"a", "b", "c"}
    # path: St(a)={a,b} is contained in St(a) and in St(b)={a,b,c}
    # (enumeration oracle; the clique property pins it down)
    assert set(kappa(PATH3, "a")) == {"a", "b"}
    assert set(kappa(PATH3, "b")) == {"b"}
    assert set(kappa(SINGLE, "a")) == {"a"}


def test_kappa_contains_v_and_is_clique():
    for g in (PATH3, K3, SQUARE, SINGLE):
        for v in g.vertices:
            kv = kappa(g, v)
            assert v in kv
            idx = [g.index(u) for u in kv]
            for i in idx:
                for j in idx:
                    if i != j:
                        assert g.adjacent(i, j)


def test_kappa_against_bruteforce_enumeration():
    for adj in enumerate_graphs_up_to_iso(5):
        g = graph_from_adj(adj)
        for v in g.vertices:
            sv = set(star(g, v))
            expect = {
                w for w in g.vertices if sv <= set(star(g, w))
            }
            assert set(kappa(g, v)) == expect


def test_intersection_of_stars_examples():
    assert is_intersection_of_stars(SQUARE, {"b", "d"}) is True
    assert is_intersection_of_stars(PATH3, {"a", "c"}) is False
    # full vertex set: closure convention makes cl(V) = V when no vertex is
    # adjacent to all others, via the empty intersection
    assert is_intersection_of_stars(PATH3, set("abc")) is True
    assert is_intersection_of_stars(SQUARE, set("abcd")) is True


def test_closure_idempotent():
    for adj in enumerate_graphs_up_to_iso(5):
        g = graph_from_adj(adj)
        for mask in range(1 << len(g)):
            cl = star_closure_mask(g, mask)
            assert star_closure_mask(g, cl) == cl
            assert cl & mask == mask  # extensive


def test_join_decomposition_square():
    clique, factors = join_decomposition(SQUARE, set("abcd"))
    assert set(clique) == set()
    assert sorted(set(f) for f in factors) == [{"a", "c"}, {"b", "d"}]


def test_join_decomposition_k3():
    clique, factors = join_decomposition(K3, set("abc"))
    assert set(clique) == {"a", "b", "c"}
    assert factors == []


def test_join_decomposition_path3():
    # b is adjacent to both other vertices, so it is the clique part and
    # the complement component {a, c} is the unique irreducible factor
    clique, factors = join_decomposition(PATH3, set("abc"))
    assert set(clique) == {"b"}
    assert [set(f) for f in factors] == [{"a", "c"}]


def test_join_decomposition_path4_irreducible():
    p4 = SimplicialGraph.from_edges("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
    clique, factors = join_decomposition(p4, set("abcd"))
    assert set(clique) == set()
    assert [set(f) for f in factors] == [{"a", "b", "c", "d"}]


def test_join_decomposition_partition_and_cross_adjacency():
    for adj in enumerate_graphs_up_to_iso(5):
        g = graph_from_adj(adj)
        full = g.full_mask
        for mask in range(1, full + 1):
            vs = VertexSet(g, mask)
            clique, factors = join_decomposition(g, vs)
            parts = [clique.mask] + [f.mask for f in factors]
            assert sum(parts) == mask  # disjoint union (bitwise)
            acc = 0
            for p in parts:
                assert acc & p == 0
                acc |= p
            # every clique-part vertex is adjacent to all others in mask
            for i in range(len(g)):
                if clique.mask & (1 << i):
                    assert (mask & ~(1 << i)) & ~g.adj[i] == 0
            # cross-pairs between different parts are adjacent (join property)
            for pi in range(len(parts)):
                for pj in range(pi + 1, len(parts)):
                    for i in range(len(g)):
                        if parts[pi] & (1 << i):
                            assert parts[pj] & ~g.adj[i] == 0


def test_join_decomposition_empty_rejected():
    with pytest.raises(InputError):
        join_decomposition(SQUARE, set())


def test_json_round_trip_and_validation():
    g = SimplicialGraph.from_json(SQUARE.to_json())
    assert g == SQUARE
    with pytest.raises(InputError):
        SimplicialGraph.from_json(json.dumps({"vertices": ["a"], "edges": [["a", "a"]]}))
    with pytest.raises(InputError):
        SimplicialGraph.from_json(
            json.dumps({"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]})
        )
    with pytest.raises(InputError):
        SimplicialGraph.from_json("{not json")


def test_enumeration_counts():
    # numbers of graphs on n unlabelled vertices: 1, 2, 4, 11, 34, 156
    counts = [len(list(enumerate_graphs_up_to_iso(n))) for n in range(1, 7)]
    assert counts == [1, 2, 4, 11, 34, 156]


def test_induced_subgraph():
    sub = SQUARE.induced(SQUARE.mask_of(["a", "b", "c"]))
    assert sub.vertices == ("a", "b", "c")
    assert sub.adjacent(0, 1) and sub.adjacent(1, 2) and not sub.adjacent(0, 2)
