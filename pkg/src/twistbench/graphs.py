"""Finite simplicial graphs and their link/star/join combinatorics.

Vertices carry stable string labels in the public API and dense indices
internally.  Vertex sets are bitmasks (Python integers, so any vertex count
works; the compiled word kernels additionally cap at 63 vertices).
"""

import json
from dataclasses import dataclass
from itertools import permutations


class InputError(ValueError):
    """Malformed user input (bad labels, bad JSON, empty sets, ...)."""


@dataclass(frozen=True)
class SimplicialGraph:
    """Immutable finite simplicial graph: irreflexive, symmetric adjacency."""

    vertices: tuple
    adj: tuple  # adj[i] = bitmask of neighbours of vertex i

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise InputError("duplicate vertex labels")
        if len(self.adj) != n:
            raise InputError("adjacency size mismatch")
        for i in range(n):
            if self.adj[i] >> n:
                raise InputError("adjacency mask out of range")
            if self.adj[i] & (1 << i):
                raise InputError(f"self-loop at {self.vertices[i]!r}")
            for j in range(n):
                if bool(self.adj[i] & (1 << j)) != bool(self.adj[j] & (1 << i)):
                    raise InputError("adjacency not symmetric")

    # -- construction ------------------------------------------------

    @classmethod
    def from_edges(cls, vertices, edges):
        vertices = tuple(vertices)
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise InputError("duplicate vertex labels")
        adj = [0] * len(vertices)
        seen = set()
        for e in edges:
            u, w = e
            if u not in index or w not in index:
                raise InputError(f"edge {e!r} uses unknown vertex")
            if u == w:
                raise InputError(f"self-loop edge {e!r}")
            key = frozenset((u, w))
            if key in seen:
                raise InputError(f"duplicate edge {e!r}")
            seen.add(key)
            adj[index[u]] |= 1 << index[w]
            adj[index[w]] |= 1 << index[u]
        return cls(vertices, tuple(adj))

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad graph JSON: {exc}") from exc
        if not isinstance(data, dict) or "vertices" not in data:
            raise InputError("graph JSON needs a 'vertices' list")
        return cls.from_edges(data["vertices"], data.get("edges", []))

    def to_json(self):
        edges = []
        n = len(self.vertices)
        for i in range(n):
            for j in range(i + 1, n):
                if self.adj[i] & (1 << j):
                    edges.append([self.vertices[i], self.vertices[j]])
        return json.dumps({"vertices": list(self.vertices), "edges": edges})

    # -- basic accessors ----------------------------------------------

    def __len__(self):
        return len(self.vertices)

    @property
    def full_mask(self):
        return (1 << len(self.vertices)) - 1

    def index(self, label):
        try:
            return self.vertices.index(label)
        except ValueError:
            raise InputError(f"unknown vertex {label!r}") from None

    def mask_of(self, labels):
        m = 0
        for v in labels:
            m |= 1 << self.index(v)
        return m

    def labels_of(self, mask):
        return tuple(v for i, v in enumerate(self.vertices) if mask & (1 << i))

    def adjacent(self, i, j):
        return bool(self.adj[i] & (1 << j))

    def induced(self, mask):
        """Induced subgraph on the vertices of ``mask`` (labels preserved)."""
        keep = [i for i in range(len(self.vertices)) if mask & (1 << i)]
        remap = {i: k for k, i in enumerate(keep)}
        adj = []
        for i in keep:
            m = 0
            for j in keep:
                if self.adj[i] & (1 << j):
                    m |= 1 << remap[j]
            adj.append(m)
        return SimplicialGraph(tuple(self.vertices[i] for i in keep), tuple(adj))


@dataclass(frozen=True)
class VertexSet:
    """A subset of the vertices of a graph, with set semantics."""

    graph: SimplicialGraph
    mask: int

    def __post_init__(self):
        if self.mask & ~self.graph.full_mask:
            raise InputError("vertex set not contained in graph")

    def labels(self):
        return self.graph.labels_of(self.mask)

    def __contains__(self, label):
        return bool(self.mask & (1 << self.graph.index(label)))

    def __iter__(self):
        return iter(self.labels())

    def __len__(self):
        return bin(self.mask).count("1")


# -- link / star / clique-of-stars ------------------------------------


def link(g, v):
    """Neighbours of ``v``."""
    return VertexSet(g, g.adj[g.index(v)])


def star(g, v):
    """Neighbours of ``v`` together with ``v`` itself."""
    i = g.index(v)
    return VertexSet(g, g.adj[i] | (1 << i))


def star_mask(g, i):
    return g.adj[i] | (1 << i)


def kappa(g, v):
    """Vertices ``w`` whose star contains the star of ``v``.

    Always contains ``v`` and is always a clique: two vertices with nested
    stars through ``v`` see each other.
    """
    i = g.index(v)
    sv = star_mask(g, i)
    m = 0
    for j in range(len(g)):
        if sv & ~star_mask(g, j) == 0:
            m |= 1 << j
    return VertexSet(g, m)


def star_closure_mask(g, mask):
    """Intersection of all stars containing ``mask``.

    The empty intersection (no star contains ``mask``) is the full
    vertex set by convention; this makes the closure of the empty set the
    whole graph, matching the centraliser of the trivial subgroup.
    """
    cl = g.full_mask
    for u in range(len(g)):
        su = star_mask(g, u)
        if mask & ~su == 0:
            cl &= su
    return cl


def is_intersection_of_stars(g, s):
    mask = s.mask if isinstance(s, VertexSet) else g.mask_of(s)
    return star_closure_mask(g, mask) == mask


# -- join decomposition ------------------------------------------------


def _components(adj_pred, verts):
    """Connected components of an implicit graph on the iterable ``verts``."""
    verts = list(verts)
    unseen = set(verts)
    comps = []
    while unseen:
        root = unseen.pop()
        comp = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in list(unseen):
                if adj_pred(x, y):
                    unseen.remove(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def join_decomposition(g, s):
    """Split ``s`` into its clique part and irreducible join factors.

    Computes connected components of the complement graph induced on ``s``;
    singleton components form the clique part (vertices adjacent to all other
    vertices of ``s``), the remaining components are the irreducible factors,
    ordered by least vertex index.
    """
    mask = s.mask if isinstance(s, VertexSet) else g.mask_of(s)
    if mask == 0:
        raise InputError("join_decomposition of empty set")
    verts = [i for i in range(len(g)) if mask & (1 << i)]

    def non_adjacent(x, y):
        return not g.adj[x] & (1 << y)

    comps = _components(non_adjacent, verts)
    clique = 0
    factors = []
    for comp in comps:
        m = 0
        for i in comp:
            m |= 1 << i
        if len(comp) == 1:
            clique |= m
        else:
            factors.append(m)
    factors.sort(key=lambda m: (m & -m).bit_length())
    return VertexSet(g, clique), [VertexSet(g, m) for m in factors]


def clique_part_mask(g, mask):
    """Vertices of ``mask`` adjacent to every other vertex of ``mask``."""
    out = 0
    for i in range(len(g)):
        if mask & (1 << i) and (mask & ~(1 << i)) & ~g.adj[i] == 0:
            out |= 1 << i
    return out


def is_clique(g, mask):
    return clique_part_mask(g, mask) == mask


# -- enumeration of small graphs up to isomorphism ---------------------


def _pair_index(n):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return pairs, {p: k for k, p in enumerate(pairs)}


def enumerate_graphs_up_to_iso(n):
    """All graphs on ``n`` labelled vertices up to isomorphism.

    Yields adjacency-mask tuples.  Works by marking whole permutation orbits
    of edge bitmasks, so the cost is ~``n! x (number of classes)`` and stays
    well under a second for ``n <= 6``.
    """
    if n == 0:
        yield ()
        return
    pairs, pidx = _pair_index(n)
    nbits = len(pairs)
    perm_maps = []
    for perm in permutations(range(n)):
        perm_maps.append(
            tuple(pidx[tuple(sorted((perm[i], perm[j])))] for (i, j) in pairs)
        )
    seen = bytearray(1 << nbits)
    for mask in range(1 << nbits):
        if seen[mask]:
            continue
        for pm in perm_maps:
            img = 0
            m = mask
            while m:
                b = (m & -m).bit_length() - 1
                img |= 1 << pm[b]
                m &= m - 1
            seen[img] = 1
        adj = [0] * n
        for k, (i, j) in enumerate(pairs):
            if mask & (1 << k):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
        yield tuple(adj)


def graph_from_adj(adj):
    names = tuple(chr(ord("a") + i) for i in range(len(adj)))
    return SimplicialGraph(names, tuple(adj))
