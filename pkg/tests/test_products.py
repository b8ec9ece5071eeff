import json
import random

import pytest

from twistbench.graphs import (
    InputError,
    SimplicialGraph,
    VertexSet,
    enumerate_graphs_up_to_iso,
    graph_from_adj,
    is_clique,
    link,
)
from twistbench.products import (
    children,
    closed_sets,
    extended_factors,
    extra_salient_certificate,
    hierarchy_fixpoint,
    hierarchy_masks,
    is_virtual_product,
    normalizer_is_self,
    normalizer_probe,
    salient_abelians,
    singular_subgraphs,
    star_is_standard_product,
    svp_closure,
)

PATH3 = SimplicialGraph.from_edges("abc", [("a", "b"), ("b", "c")])
K2 = SimplicialGraph.from_edges("ab", [("a", "b")])
K3 = SimplicialGraph.from_edges("abc", [("a", "b"), ("b", "c"), ("a", "c")])
SQUARE = SimplicialGraph.from_edges(
    "abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]
)
SINGLE = SimplicialGraph.from_edges("a", [])
# path with an apex adjacent to everything
APEX = SimplicialGraph.from_edges(
    "abcz",
    [("a", "b"), ("b", "c"), ("z", "a"), ("z", "b"), ("z", "c")],
)


def masks(g, sets):
    return sorted(s.mask for s in sets)


def labelsets(sets):
    return sorted(tuple(sorted(s.labels())) for s in sets)


def test_is_virtual_product():
    assert is_virtual_product(SQUARE, set("abcd")) is True
    assert is_virtual_product(SINGLE, {"a"}) is False
    assert is_virtual_product(K3, set("abc")) is True  # Z^3 is a product
    # the 3-vertex path is b x {a,c}: a genuine join
    assert is_virtual_product(PATH3, set("abc")) is True
    assert is_virtual_product(PATH3, {"a", "c"}) is False
    p4 = SimplicialGraph.from_edges("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
    assert is_virtual_product(p4, set("abcd")) is False
    with pytest.raises(InputError):
        is_virtual_product(PATH3, set())


def test_is_virtual_product_matches_complement_components():
    import oracles

    for adj in enumerate_graphs_up_to_iso(5):
        g = graph_from_adj(adj)
        for mask in range(1, g.full_mask + 1):
            verts = [i for i in range(len(g)) if mask & (1 << i)]
            comps = []
            left = set(verts)
            while left:
                root = left.pop()
                comp = {root}
                stack = [root]
                while stack:
                    x = stack.pop()
                    for y in list(left):
                        if not adj[x] & (1 << y):
                            left.discard(y)
                            comp.add(y)
                            stack.append(y)
                comps.append(comp)
            want = len(verts) >= 2 and len(comps) >= 2
            assert is_virtual_product(g, VertexSet(g, mask)) == want


def test_singular_subgraphs_examples():
    assert labelsets(singular_subgraphs(SQUARE, set("abcd"))) == [("a", "b", "c", "d")]
    # the whole path is already a join, so it is the unique maximal one
    assert labelsets(singular_subgraphs(PATH3, set("abc"))) == [("a", "b", "c")]
    assert singular_subgraphs(SINGLE, {"a"}) == []
    p4 = SimplicialGraph.from_edges("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
    # maximal joins of the 4-path are its three stars of edges... enumerate:
    got = labelsets(singular_subgraphs(p4, set("abcd")))
    assert got == [("a", "b", "c"), ("b", "c", "d")]


def test_extended_factors_examples():
    assert labelsets(extended_factors(SQUARE, set("abcd"))) == [
        ("a", "c"),
        ("b", "d"),
    ]
    assert labelsets(extended_factors(K3, set("abc"))) == [("a", "b", "c")]
    assert labelsets(extended_factors(APEX, set("abcz"))) == [("a", "b", "c", "z")]
    # each factor contains the clique part; union is everything
    for g in (SQUARE, K3, PATH3, APEX):
        from twistbench.graphs import clique_part_mask, join_decomposition

        clique, _ = join_decomposition(g, VertexSet(g, g.full_mask))
        factors = extended_factors(g, VertexSet(g, g.full_mask))
        union = 0
        for f in factors:
            assert clique.mask & ~f.mask == 0
            union |= f.mask
        assert union == g.full_mask


def test_extended_factors_irreducible_complement():
    # factor minus clique induces a connected complement graph
    for adj in enumerate_graphs_up_to_iso(5):
        g = graph_from_adj(adj)
        for mask in range(1, g.full_mask + 1):
            from twistbench.graphs import clique_part_mask

            clique = clique_part_mask(g, mask)
            for f in extended_factors(g, VertexSet(g, mask)):
                core = f.mask & ~clique
                if core:
                    assert not is_virtual_product(g, VertexSet(g, core)) or bin(
                        core
                    ).count("1") == 1


def test_children_examples():
    # square: factors {a,c},{b,d} are complement-connected, no centre
    assert children(SQUARE, set("abcd")) == []
    # abelian: centre equals the set, excluded
    assert children(K3, set("abc")) == []
    # apex graph: clique part {b,z} has rank 2 and is proper
    got = labelsets(children(APEX, set("abcz")))
    assert got == [("b", "z")]
    # path: clique part {b} has rank 1, factor {a,c} has no joins
    assert children(PATH3, set("abc")) == []


def test_svp_closure_examples():
    assert labelsets(svp_closure(SQUARE)) == [("a", "b", "c", "d")]
    assert labelsets(svp_closure(K2)) == [("a", "b")]
    assert labelsets(svp_closure(PATH3)) == [("a", "b", "c")]
    assert labelsets(svp_closure(APEX)) == [("a", "b", "c", "z"), ("b", "z")]


def test_svp_closure_is_fixpoint():
    rng = random.Random(17)
    import oracles

    for _ in range(40):
        g = graph_from_adj(oracles.random_graph(rng, 6))
        fam = svp_closure(g)
        fam_masks = {s.mask for s in fam}
        for s in fam:
            for c in children(g, s):
                assert c.mask in fam_masks
            assert is_virtual_product(g, s)


def test_star_criterion_small_graphs():
    # membership of St(v) in the closure vs the no-dominating-link criterion,
    # exhaustively over graphs with up to 5 vertices
    for adj in enumerate_graphs_up_to_iso(5):
        g = graph_from_adj(adj)
        for i, v in enumerate(g.vertices):
            if g.adj[i] == 0:
                continue
            crit = not any(
                x != i and g.adj[i] & ~g.adj[x] == 0 for x in range(len(g))
            )
            assert star_is_standard_product(g, v) == crit, (adj, v)


def test_salient_abelians_examples():
    assert labelsets(salient_abelians(SQUARE)) == []
    assert labelsets(salient_abelians(K2)) == [("a", "b")]
    # path: the unique closure member is the whole graph, self-normalizing,
    # with clique part {b}; no rank restriction applies to salience
    assert labelsets(salient_abelians(PATH3)) == [("b",)]


def test_salient_members_are_cliques_and_match_witness():
    import oracles

    rng = random.Random(23)
    for _ in range(30):
        g = graph_from_adj(oracles.random_graph(rng, 6))
        from twistbench.graphs import clique_part_mask

        svp = svp_closure(g)
        for a in salient_abelians(g):
            assert is_clique(g, a.mask)
            assert any(
                clique_part_mask(g, s.mask) == a.mask
                and normalizer_is_self(g, s.mask)
                for s in svp
            )


def test_normalizer_criterion_against_probe():
    import oracles

    rng = random.Random(29)
    for _ in range(12):
        g = graph_from_adj(oracles.random_graph(rng, 4))
        for mask in range(1, g.full_mask + 1):
            witness = normalizer_probe(g, mask, max_len=3)
            if normalizer_is_self(g, mask):
                assert witness is None
            else:
                assert witness is not None


def test_hierarchy_examples():
    assert sorted(hierarchy_masks(K3)) == [K3.full_mask]
    got = hierarchy_masks(SQUARE)
    assert sorted(got) == sorted(
        [SQUARE.full_mask, SQUARE.mask_of("ac"), SQUARE.mask_of("bd")]
    )
    apex_masks = set(hierarchy_masks(APEX))
    # everything, its centre {b,z}, and the child {b,z} coincide; centre of
    # {b,z} is itself
    assert APEX.full_mask in apex_masks
    assert APEX.mask_of("bz") in apex_masks


def test_hierarchy_fixpoint_idempotent_and_induced_local():
    import oracles

    rng = random.Random(31)
    for _ in range(25):
        g = graph_from_adj(oracles.random_graph(rng, 6))
        fam = hierarchy_masks(g)
        # fixpoint: rerunning from any member stays inside the family
        for m in fam:
            sub = hierarchy_masks(g, m)
            assert set(sub) <= set(fam) | {m}
        # induced locality: computing inside the induced subgraph agrees
        for m in fam:
            induced = g.induced(m)
            inner = hierarchy_masks(induced)
            relabeled = {
                g.mask_of(induced.labels_of(x)) for x in inner
            }
            assert relabeled == set(hierarchy_masks(g, m))


def test_extra_salience_probe():
    # in Z^2 every centraliser is the whole group: the full clique is
    # extra-salient
    ok, witness = extra_salient_certificate(K2, K2.full_mask)
    assert ok is True and witness is None
    # Z^2 * Z: no centraliser meets the clique {a,b} co-cyclically either
    # (this is the shape of the poisonous-centre examples)
    g = SimplicialGraph.from_edges("abc", [("a", "b")])
    ok, witness = extra_salient_certificate(g, g.mask_of("ab"))
    assert ok is True and witness is None
    # square plus apex z: the clique {b,z} meets the closed star of d in
    # the co-cyclic subgroup generated by z
    sq_apex = SimplicialGraph.from_edges(
        "abcdz",
        [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"),
         ("z", "a"), ("z", "b"), ("z", "c"), ("z", "d")],
    )
    ok, witness = extra_salient_certificate(sq_apex, sq_apex.mask_of("bz"))
    assert ok is False and witness[0] == "parabolic_centraliser"
    # witness is a closed set meeting the clique in corank exactly 1
    from twistbench.graphs import star_closure_mask

    assert star_closure_mask(sq_apex, witness[1]) == witness[1]
    assert bin(sq_apex.mask_of("bz") & ~witness[1]).count("1") == 1


def test_closed_sets_are_closures():
    from twistbench.graphs import star_closure_mask

    for g in (PATH3, SQUARE, K3, APEX):
        for m in closed_sets(g):
            assert star_closure_mask(g, m) == m


def test_hierarchy_report_json():
    rep = hierarchy_fixpoint(APEX)
    data = json.loads(rep.to_json())
    members = {tuple(m["vertices"]) for m in data["members"]}
    assert ("a", "b", "c", "z") in members
    assert ("b", "z") in members
    bz = next(m for m in data["members"] if tuple(m["vertices"]) == ("b", "z"))
    assert bz["is_svp"] is True
    assert bz["is_salient"] is True
