"""Exact element arithmetic in a right-angled Artin group.

Elements are held in a canonical *shuffle-reduced* normal form: the
lexicographically least word (under the vertex order) among all reduced
words obtainable by swapping adjacent commuting letters.  All length
functionals below are exact integers computed from this form or from
bounded ball searches in the Cayley graph.
"""

import json
from dataclasses import dataclass, field
from enum import Enum

from . import kernel
from .graphs import InputError, SimplicialGraph


@dataclass(frozen=True)
class NormalWord:
    """Canonical representative of a group element.

    ``letters`` uses the signed 1-based encoding: vertex ``i`` (0-based) is
    ``i + 1``, its inverse ``-(i + 1)``.  Instances are immutable and safe to
    share; construct through :func:`normalize` or the helpers below.
    """

    graph: SimplicialGraph
    letters: tuple

    def __len__(self):
        return len(self.letters)

    def is_identity(self):
        return not self.letters

    def tokens(self):
        out = []
        for l in self.letters:
            v = self.graph.vertices[abs(l) - 1]
            out.append(v if l > 0 else f"-{v}")
        return out

    def __str__(self):
        return "·".join(self.tokens()) if self.letters else "1"

    def support_mask(self):
        m = 0
        for l in self.letters:
            m |= 1 << (abs(l) - 1)
        return m


def _check_same_graph(*words):
    g = words[0].graph
    for w in words[1:]:
        if w.graph is not g and w.graph != g:
            raise InputError("words live over different graphs")
    return g


def identity(g):
    return NormalWord(g, ())


def normalize(g, raw):
    """Canonical NormalWord for a raw signed-letter sequence."""
    for l in raw:
        if l == 0 or abs(l) > len(g):
            raise InputError(f"letter {l} out of range")
    return NormalWord(g, kernel.normalize(g.adj, tuple(raw)))


def parse_word(g, text_or_tokens):
    """Wire format: JSON array of signed tokens, e.g. ["a","b","-a"]."""
    if isinstance(text_or_tokens, str):
        try:
            tokens = json.loads(text_or_tokens)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad word JSON: {exc}") from exc
    else:
        tokens = list(text_or_tokens)
    if not isinstance(tokens, list):
        raise InputError("word must be a JSON array of tokens")
    raw = []
    for tok in tokens:
        if not isinstance(tok, str) or not tok:
            raise InputError(f"bad token {tok!r}")
        if tok.startswith("-"):
            raw.append(-(g.index(tok[1:]) + 1))
        else:
            raw.append(g.index(tok) + 1)
    return normalize(g, raw)


def multiply(u, v):
    g = _check_same_graph(u, v)
    return NormalWord(g, kernel.normalize(g.adj, u.letters + v.letters))


def invert(u):
    return NormalWord(
        u.graph, kernel.normalize(u.graph.adj, tuple(-l for l in reversed(u.letters)))
    )


def conjugate(u, g_elt):
    """g u g^-1."""
    g = _check_same_graph(u, g_elt)
    raw = g_elt.letters + u.letters + tuple(-l for l in reversed(g_elt.letters))
    return NormalWord(g, kernel.normalize(g.adj, raw))


def _pile_state(g, letters):
    """Piles for a *reduced* word; used to read off movable first letters."""
    n = len(g)
    full = (1 << n) - 1
    noncomm = [(full & ~g.adj[v]) & ~(1 << v) for v in range(n)]
    piles = [[] for _ in range(n)]
    for l in letters:
        v = abs(l) - 1
        piles[v].append(1 if l > 0 else -1)
        m = noncomm[v]
        while m:
            u = (m & -m).bit_length() - 1
            piles[u].append(0)
            m &= m - 1
    return piles


def front_letters(u):
    """Signed letters that can be shuffled to the front of ``u``."""
    piles = _pile_state(u.graph, u.letters)
    out = []
    for v, pile in enumerate(piles):
        if pile and pile[0] != 0:
            out.append((v + 1) * pile[0])
    return out


def back_letters(u):
    """Signed letters that can be shuffled to the end of ``u``."""
    piles = _pile_state(u.graph, u.letters)
    out = []
    for v, pile in enumerate(piles):
        if pile and pile[-1] != 0:
            out.append((v + 1) * pile[-1])
    return out


def cyclically_reduce(u):
    """Return ``(core, conjugator)`` with ``u = conjugator core conjugator^-1``.

    Peels matching front/back letters until none remain; for RAAGs the result
    has minimal length in the conjugacy class of ``u``.
    """
    g = u.graph
    core = u
    conj_letters = []
    while True:
        fronts = set(front_letters(core))
        backs = set(back_letters(core))
        peel = None
        for l in sorted(fronts):
            if -l in backs:
                peel = l
                break
        if peel is None:
            break
        conj_letters.append(peel)
        core = NormalWord(
            g, kernel.normalize(g.adj, (-peel,) + core.letters + (peel,))
        )
    return core, normalize(g, conj_letters)


def trans_len_X(u):
    """Translation length on the Cayley graph: length of the cyclic core."""
    core, _ = cyclically_reduce(u)
    return len(core)


def trans_len_Tv(u, v):
    """Translation length on the coset tree of ``v``: v-letters in the core."""
    i = u.graph.index(v) + 1
    core, _ = cyclically_reduce(u)
    return sum(1 for l in core.letters if abs(l) == i)


def letter_count(u, v):
    """Number of v-letters (either sign) in the normal form of ``u``."""
    i = u.graph.index(v) + 1
    return sum(1 for l in u.letters if abs(l) == i)


# -- finite subsets and the displacement functionals --------------------


@dataclass(frozen=True)
class FiniteSubset:
    """A finite set of group elements, deduplicated as elements."""

    graph: SimplicialGraph
    elements: tuple  # tuple of NormalWord

    @classmethod
    def of(cls, words):
        g = _check_same_graph(*words)
        seen = {}
        for w in words:
            seen.setdefault(w.letters, w)
        elems = tuple(sorted(seen.values(), key=lambda w: (len(w), w.letters)))
        return cls(g, elems)

    @property
    def contains_identity(self):
        return any(w.is_identity() for w in self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def ell_set(omega):
    """Sum of Cayley-graph translation lengths over the set."""
    return sum(trans_len_X(w) for w in omega)


def square_set(omega):
    """All pairwise products {s s' : s, s' in omega}, deduplicated."""
    prods = []
    for a in omega:
        for b in omega:
            prods.append(multiply(a, b))
    return FiniteSubset.of(prods)


@dataclass(frozen=True)
class Displacement:
    value: int
    certified: bool
    radius: int
    minimizer_radius: int
    nodes: int


def t_displacement(omega, radius=None):
    """Least max-displacement ``min_{|x|<=R} max_s |x^-1 s x|``.

    ``radius`` defaults to the maximal element length.  ``certified`` records
    whether a minimizer was found strictly inside the search ball; whether an
    interior local optimum is always global is not settled, so the flag
    reports exactly what the search established.
    """
    elems = list(omega)
    if not elems:
        raise InputError("t_displacement of empty set")
    g = elems[0].graph
    if radius is None:
        radius = max(len(w) for w in elems)
    if radius < 0:
        raise InputError("negative radius")
    lower = max(trans_len_X(w) for w in elems) if elems else 0
    best, best_r, nodes = kernel.min_max_conj_displacement(
        g.adj, tuple(w.letters for w in elems), radius, lower
    )
    return Displacement(best, best_r <= radius - 1, radius, best_r, nodes)


# -- reference systems and the lexicographic comparison ------------------


@dataclass(frozen=True)
class ReferenceData:
    """Ordered (label, generating set) pairs; order realizes the comparison.

    Each generating set must be symmetric and contain the identity.
    """

    entries: tuple  # tuple of (label, FiniteSubset)

    def __post_init__(self):
        labels = [lab for lab, _ in self.entries]
        if len(set(labels)) != len(labels):
            raise InputError("duplicate reference labels")
        for lab, s in self.entries:
            if not s.contains_identity:
                raise InputError(f"reference set {lab!r} must contain identity")
            have = {w.letters for w in s}
            for w in s:
                if invert(w).letters not in have:
                    raise InputError(f"reference set {lab!r} not symmetric")

    def __len__(self):
        return len(self.entries)


class Comparison(Enum):
    LESS = "Less"
    EQUIVALENT = "Equivalent"
    GREATER = "Greater"


def reference_profile(image_sets, ref):
    """Squared-set lengths, in reference order, of a tuple of image sets."""
    if len(image_sets) != len(ref):
        raise InputError("image list does not match reference system")
    return tuple(ell_set(square_set(s)) for s in image_sets)


def compare_reference(phi_images, psi_images, ref):
    """Lexicographic comparison of squared-set length profiles.

    Less means some level has a strictly smaller length and every earlier
    level ties; Equivalent means all levels tie.
    """
    a = reference_profile(phi_images, ref)
    b = reference_profile(psi_images, ref)
    if a == b:
        return Comparison.EQUIVALENT
    return Comparison.LESS if a < b else Comparison.GREATER
