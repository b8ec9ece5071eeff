import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from twistbench import kernel
from twistbench.graphs import InputError, SimplicialGraph, graph_from_adj
from twistbench.words import (
    Comparison,
    FiniteSubset,
    ReferenceData,
    compare_reference,
    conjugate,
    cyclically_reduce,
    ell_set,
    identity,
    invert,
    multiply,
    normalize,
    parse_word,
    square_set,
    t_displacement,
    trans_len_Tv,
    trans_len_X,
)

SQUARE = SimplicialGraph.from_edges(
    "abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]
)
PATH3 = SimplicialGraph.from_edges("abc", [("a", "b"), ("b", "c")])
F2 = SimplicialGraph.from_edges("ab", [])


def w(g, *raw):
    return normalize(g, raw)


def test_normalize_examples():
    # commuting pair shuffles to lex-least
    assert w(SQUARE, 2, 1).letters == (1, 2)
    # free cancellation
    assert w(SQUARE, 1, -1).letters == ()
    # no shuffle-cancellation across a non-commuting letter
    assert w(PATH3, 1, 3, -1).letters == (1, 3, -1)


def test_normalize_letter_range():
    with pytest.raises(InputError):
        normalize(PATH3, [4])
    with pytest.raises(InputError):
        normalize(PATH3, [0])


def test_parse_and_tokens():
    u = parse_word(SQUARE, '["b","a"]')
    assert u.tokens() == ["a", "b"]
    v = parse_word(SQUARE, ["a", "-b"])
    assert v.letters == (1, -2)
    with pytest.raises(InputError):
        parse_word(SQUARE, '["z"]')
    with pytest.raises(InputError):
        parse_word(SQUARE, '{"a": 1}')


def test_group_law_examples():
    a = w(SQUARE, 1)
    assert multiply(a, invert(a)).is_identity()
    u = w(SQUARE, 1, 2)
    assert invert(u).letters == normalize(SQUARE, [-2, -1]).letters
    # commuting conjugation fixes the element
    assert conjugate(w(SQUARE, 1), w(SQUARE, 2)).letters == (1,)


def test_graph_mismatch_rejected():
    with pytest.raises(InputError):
        multiply(w(SQUARE, 1), w(PATH3, 1))


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_normalize_matches_scan_oracle(data):
    adj = oracles.random_graph(random.Random(data.draw(st.integers(0, 10**6))), 5)
    n = len(adj)
    raw = data.draw(
        st.lists(
            st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])),
            max_size=10,
        )
    )
    assert kernel.normalize(adj, tuple(raw)) == oracles.naive_canonical(adj, raw)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_normalize_idempotent_and_geodesic(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    adj = oracles.random_graph(rng, 4)
    raw = oracles.random_word(rng, len(adj), 6)
    out = kernel.normalize(adj, tuple(raw))
    assert kernel.normalize(adj, out) == out
    assert len(out) <= len(raw)
    assert len(out) == oracles.naive_length(adj, raw)


def test_geodesic_length_against_ball():
    # |normalize(w)| equals the BFS distance in the Cayley ball
    adj = PATH3.adj
    ball = oracles.cayley_ball(adj, 4)
    for word, dist in ball.items():
        assert len(kernel.normalize(adj, word)) == dist


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_group_laws_random(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    adj = oracles.random_graph(rng, 5)
    g = graph_from_adj(adj)
    u = normalize(g, oracles.random_word(rng, len(adj), 6))
    v = normalize(g, oracles.random_word(rng, len(adj), 6))
    x = normalize(g, oracles.random_word(rng, len(adj), 6))
    assert multiply(u, invert(u)).is_identity()
    assert multiply(multiply(u, v), x).letters == multiply(u, multiply(v, x)).letters


def test_cyclic_reduce_examples():
    core, conj = cyclically_reduce(w(F2, 1, 2, -1))
    assert core.letters == (2,)
    assert conj.letters == (1,)
    core, conj = cyclically_reduce(w(PATH3, 1))
    assert core.letters == (1,)
    assert conj.is_identity()
    # u = a b a with a, b non-adjacent: already cyclically reduced, length 3
    core, conj = cyclically_reduce(w(F2, 1, 2, 1))
    assert len(core) == 3
    assert oracles.min_conj_length(F2.adj, (1, 2, 1), 3) == 3


def test_cyclic_reduce_reassembles():
    rng = random.Random(7)
    for _ in range(80):
        adj = oracles.random_graph(rng, 5)
        g = graph_from_adj(adj)
        u = normalize(g, oracles.random_word(rng, len(adj), 8))
        core, conj = cyclically_reduce(u)
        assert conjugate(core, conj).letters == u.letters
        again, triv = cyclically_reduce(core)
        assert again.letters == core.letters and triv.is_identity()


def test_core_minimal_in_conjugacy_class():
    rng = random.Random(11)
    for _ in range(25):
        adj = oracles.random_graph(rng, 4)
        g = graph_from_adj(adj)
        u = normalize(g, oracles.random_word(rng, len(adj), 6))
        core, _ = cyclically_reduce(u)
        assert len(core) == oracles.min_conj_length(adj, u.letters, max(3, len(u)))


def test_trans_len_examples():
    assert trans_len_X(identity(SQUARE)) == 0
    assert trans_len_Tv(identity(SQUARE), "a") == 0
    u = w(SQUARE, 1, 2, 1)  # a, b adjacent: core aab
    core, _ = cyclically_reduce(u)
    assert core.letters == (1, 1, 2)
    assert trans_len_X(u) == 3
    assert trans_len_Tv(u, "a") == 2
    assert trans_len_Tv(u, "b") == 1
    assert trans_len_Tv(u, "c") == 0


def test_conjugacy_invariance_and_power_law():
    rng = random.Random(3)
    for _ in range(40):
        adj = oracles.random_graph(rng, 5)
        g = graph_from_adj(adj)
        u = normalize(g, oracles.random_word(rng, len(adj), 6))
        h = normalize(g, oracles.random_word(rng, len(adj), 4))
        assert trans_len_X(conjugate(u, h)) == trans_len_X(u)
        for v in g.vertices:
            assert trans_len_Tv(conjugate(u, h), v) == trans_len_Tv(u, v)
        p = identity(g)
        for k in range(1, 5):
            p = multiply(p, u)
            assert trans_len_X(p) == k * trans_len_X(u)


def test_hyperplane_decomposition_identity():
    rng = random.Random(5)
    for _ in range(200):
        adj = oracles.random_graph(rng, 6)
        g = graph_from_adj(adj)
        u = normalize(g, oracles.random_word(rng, len(adj), 8))
        assert sum(trans_len_Tv(u, v) for v in g.vertices) == trans_len_X(u)


def test_tree_length_against_collapse_oracle():
    # d_v(1, g) = v-letter count of the normal form, checked against the
    # min-v-edge-count distance in a radius-8 Cayley ball
    for graph in (F2, PATH3):
        adj = graph.adj
        ball = oracles.cayley_ball(adj, 8)
        edges = oracles.build_edges_by_node(adj, ball)
        rng = random.Random(9)
        for _ in range(25):
            raw = oracles.random_word(rng, len(adj), 5)
            target = oracles.naive_canonical(adj, raw)
            gword = normalize(graph, raw)
            for vi, v in enumerate(graph.vertices):
                got = oracles.tree_distance_v(adj, ball, edges, vi, (), target)
                want = sum(1 for l in gword.letters if abs(l) == vi + 1)
                assert got == want


def test_t_displacement_examples():
    g = F2
    one = identity(g)
    a = w(g, 1)
    omega = FiniteSubset.of([one, a])
    sq = square_set(omega)
    assert sorted(x.letters for x in sq) == [(), (1,), (1, 1)]
    assert ell_set(sq) == 3
    d = t_displacement(omega)
    assert d.value == 1 and d.certified
    d1 = t_displacement(FiniteSubset.of([one]), radius=2)
    assert d1.value == 0 and d1.certified
    assert ell_set(square_set(FiniteSubset.of([one]))) == 0


def test_t_displacement_matches_bruteforce():
    rng = random.Random(13)
    for _ in range(20):
        adj = oracles.random_graph(rng, 4)
        g = graph_from_adj(adj)
        elems = [identity(g)] + [
            normalize(g, oracles.random_word(rng, len(adj), 4))
            for _ in range(rng.randint(1, 3))
        ]
        omega = FiniteSubset.of(elems)
        radius = max(len(e) for e in omega)
        got = t_displacement(omega, radius=radius)
        want, _ = oracles.min_max_displacement_brute(
            adj, [e.letters for e in omega], radius
        )
        assert got.value == want


def test_t_displacement_negative_radius():
    with pytest.raises(InputError):
        t_displacement(FiniteSubset.of([identity(F2)]), radius=-1)


def _symmetric_set(g, words):
    elems = [identity(g)]
    for raw in words:
        u = normalize(g, raw)
        elems += [u, invert(u)]
    return FiniteSubset.of(elems)


def test_compare_reference():
    g = F2
    ref = ReferenceData(
        entries=(
            ("H1", _symmetric_set(g, [(1,)])),
            ("H2", _symmetric_set(g, [(2,)])),
        )
    )
    s1 = _symmetric_set(g, [(1,)])
    s2 = _symmetric_set(g, [(2,)])
    assert compare_reference([s1, s2], [s1, s2], ref) is Comparison.EQUIVALENT
    # single level, strictly shorter
    longer = _symmetric_set(g, [(1, 2, 1)])
    assert compare_reference([s1, s2], [longer, s2], ref) is Comparison.LESS
    # first level ties, second level decides, reversed
    assert compare_reference([s1, longer], [s1, s2], ref) is Comparison.GREATER


def test_compare_reference_validation():
    g = F2
    with pytest.raises(InputError):
        ReferenceData(entries=(("H", FiniteSubset.of([w(g, 1)])),))
    ref = ReferenceData(entries=(("H", _symmetric_set(g, [(1,)])),))
    with pytest.raises(InputError):
        compare_reference([], [], ref)


def test_compare_reference_total_preorder():
    g = F2
    ref = ReferenceData(
        entries=(
            ("H1", _symmetric_set(g, [(1,)])),
            ("H2", _symmetric_set(g, [(2,)])),
        )
    )
    rng = random.Random(21)
    sets = []
    for _ in range(6):
        sets.append(
            [
                _symmetric_set(g, [tuple(oracles.random_word(rng, 2, 3))]),
                _symmetric_set(g, [tuple(oracles.random_word(rng, 2, 3))]),
            ]
        )
    for x in sets:
        assert compare_reference(x, x, ref) is Comparison.EQUIVALENT
        for y in sets:
            cxy = compare_reference(x, y, ref)
            cyx = compare_reference(y, x, ref)
            flips = {
                Comparison.LESS: Comparison.GREATER,
                Comparison.GREATER: Comparison.LESS,
                Comparison.EQUIVALENT: Comparison.EQUIVALENT,
            }
            assert cyx is flips[cxy]
            for z in sets:
                if (
                    cxy is Comparison.LESS
                    and compare_reference(y, z, ref) is Comparison.LESS
                ):
                    assert compare_reference(x, z, ref) is Comparison.LESS
