"""Automorphisms of a RAAG: generators, Dehn twists, and their taxonomy.

Automorphisms carry their images on the standard generators together with a
provenance tag.  Only constructor-built and composition-built maps are
supported; arbitrary endomorphisms can be loaded from the wire format but
are rejected by operations requiring a verified automorphism.
"""

import json
from dataclasses import dataclass
from enum import Enum

from .graphs import (
    InputError,
    SimplicialGraph,
    VertexSet,
    is_intersection_of_stars,
    kappa,
    link,
    star_mask,
)
from .words import NormalWord, identity, invert, multiply, normalize, parse_word


class ContractError(RuntimeError):
    """An operation was called outside its contract."""


def _components_outside_star(g, v):
    """Connected components of the graph minus the star of ``v``."""
    i = g.index(v)
    outside = g.full_mask & ~star_mask(g, i)
    comps = []
    seen = 0
    for j in range(len(g)):
        bit = 1 << j
        if not outside & bit or seen & bit:
            continue
        comp = bit
        stack = [j]
        while stack:
            x = stack.pop()
            nbrs = g.adj[x] & outside & ~comp
            while nbrs:
                y = (nbrs & -nbrs).bit_length() - 1
                comp |= 1 << y
                stack.append(y)
                nbrs &= nbrs - 1
        seen |= comp
        comps.append(comp)
    return comps


@dataclass(frozen=True)
class RaagAut:
    """Automorphism given by generator images, with provenance and status."""

    graph: SimplicialGraph
    images: tuple  # images[i] = NormalWord image of vertex i
    tag: str
    verified: bool
    inverse_images: tuple = None  # known closed-form inverse, when available

    def image_of(self, v):
        return self.images[self.graph.index(v)]

    def apply(self, u):
        """Letterwise substitution followed by normalization."""
        if u.graph != self.graph:
            raise InputError("word and automorphism over different graphs")
        raw = []
        for l in u.letters:
            img = self.images[abs(l) - 1]
            if l > 0:
                raw.extend(img.letters)
            else:
                raw.extend(-x for x in reversed(img.letters))
        return normalize(self.graph, raw)

    def is_identity_map(self):
        return all(
            img.letters == (i + 1,) for i, img in enumerate(self.images)
        )

    def to_json(self):
        return json.dumps(
            {
                "images": {
                    v: self.images[i].tokens()
                    for i, v in enumerate(self.graph.vertices)
                },
                "tag": self.tag,
            },
            sort_keys=True,
        )


def aut_from_images(g, images, tag="composite", inverse_images=None):
    """Build and verify an automorphism from generator images.

    Verification checks that every edge relation is preserved and, when an
    inverse is supplied, that both compositions fix every generator.
    """
    imgs = tuple(images)
    if len(imgs) != len(g):
        raise InputError("one image per vertex required")
    if not relations_hold(g, imgs):
        raise InputError("images do not preserve the defining relations")
    aut = RaagAut(g, imgs, tag, False, tuple(inverse_images) if inverse_images else None)
    if inverse_images is not None:
        inv = RaagAut(g, tuple(inverse_images), tag + "^-1", False, imgs)
        for i in range(len(g)):
            gen = NormalWord(g, (i + 1,))
            if inv.apply(aut.images[i]).letters != (i + 1,):
                raise InputError("claimed inverse fails on a generator")
            if aut.apply(inv.images[i]).letters != (i + 1,):
                raise InputError("claimed inverse fails on a generator")
        return RaagAut(g, imgs, tag, True, tuple(inverse_images))
    return aut


def relations_hold(g, images):
    """Do the images of adjacent generators commute (as normal forms)?"""
    n = len(g)
    for i in range(n):
        for j in range(i + 1, n):
            if not g.adjacent(i, j):
                continue
            comm = multiply(
                multiply(images[i], images[j]),
                multiply(invert(images[i]), invert(images[j])),
            )
            if not comm.is_identity():
                return False
    return True


def offending_commutator(g, images):
    """First edge whose images fail to commute, or None."""
    n = len(g)
    for i in range(n):
        for j in range(i + 1, n):
            if not g.adjacent(i, j):
                continue
            comm = multiply(
                multiply(images[i], images[j]),
                multiply(invert(images[i]), invert(images[j])),
            )
            if not comm.is_identity():
                return (g.vertices[i], g.vertices[j], comm)
    return None


def aut_from_json(g, text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad automorphism JSON: {exc}") from exc
    if not isinstance(data, dict) or "images" not in data:
        raise InputError("automorphism JSON needs an 'images' object")
    images = []
    for v in g.vertices:
        if v not in data["images"]:
            raise InputError(f"missing image for vertex {v!r}")
        images.append(parse_word(g, data["images"][v]))
    return aut_from_images(g, images, tag=data.get("tag", "wire"))


# -- constructors --------------------------------------------------------


def _gen_images(g):
    return [NormalWord(g, (i + 1,)) for i in range(len(g))]


def identity_aut(g):
    imgs = _gen_images(g)
    return RaagAut(g, tuple(imgs), "identity", True, tuple(imgs))


def inversion(g, v):
    i = g.index(v)
    imgs = _gen_images(g)
    imgs[i] = NormalWord(g, (-(i + 1),))
    return RaagAut(g, tuple(imgs), f"inversion({v})", True, tuple(imgs))


def transvection(g, v, w):
    """v -> v w, all other generators fixed; requires lk(v) within St(w)."""
    i, j = g.index(v), g.index(w)
    if i == j:
        raise InputError("transvection needs distinct vertices")
    if g.adj[i] & ~star_mask(g, j):
        raise InputError(f"transvection {v}->{v}{w} needs lk({v}) inside St({w})")
    imgs = _gen_images(g)
    imgs[i] = normalize(g, (i + 1, j + 1))
    inv_imgs = _gen_images(g)
    inv_imgs[i] = normalize(g, (i + 1, -(j + 1)))
    return RaagAut(g, tuple(imgs), f"transvection({v},{w})", True, tuple(inv_imgs))


def partial_conjugation(g, v, component_labels):
    """Conjugate the chosen components of the complement of St(v) by ``v``.

    ``component_labels`` is any nonempty union of connected components of the
    graph minus St(v).
    """
    i = g.index(v)
    mask = g.mask_of(component_labels)
    comps = _components_outside_star(g, v)
    if mask == 0:
        raise InputError("partial conjugation needs a nonempty component union")
    cover = 0
    for c in comps:
        if mask & c:
            if mask & c != c:
                raise InputError("not a union of components outside the star")
            cover |= c
    if cover != mask:
        raise InputError("not a union of components outside the star")
    imgs = _gen_images(g)
    inv_imgs = _gen_images(g)
    for j in range(len(g)):
        if mask & (1 << j):
            imgs[j] = normalize(g, (i + 1, j + 1, -(i + 1)))
            inv_imgs[j] = normalize(g, (-(i + 1), j + 1, i + 1))
    labels = ",".join(g.labels_of(mask))
    return RaagAut(
        g, tuple(imgs), f"partial_conjugation({v},{{{labels}}})", True, tuple(inv_imgs)
    )


def ls_generators(g):
    """All inversions, transvections, and partial conjugations of the graph.

    Transvections are emitted only in the right-multiplier form v -> v w;
    the left versions are compositions with inversions.  Partial conjugations
    range over all nonempty unions of components outside a star (the full
    union realizes conjugation by the vertex).
    """
    out = [inversion(g, v) for v in g.vertices]
    n = len(g)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if g.adj[i] & ~star_mask(g, j) == 0:
                out.append(transvection(g, g.vertices[i], g.vertices[j]))
    for v in g.vertices:
        comps = _components_outside_star(g, v)
        k = len(comps)
        for sub in range(1, 1 << k):
            mask = 0
            for b in range(k):
                if sub & (1 << b):
                    mask |= comps[b]
            out.append(partial_conjugation(g, v, g.labels_of(mask)))
    return out


def compose(f, h):
    """Apply ``h`` first, then ``f``."""
    if f.graph != h.graph:
        raise InputError("automorphisms over different graphs")
    imgs = tuple(f.apply(img) for img in h.images)
    inv_imgs = None
    if f.verified and h.verified and f.inverse_images and h.inverse_images:
        hinv = RaagAut(h.graph, h.inverse_images, "tmp", True, h.images)
        inv_imgs = tuple(hinv.apply(img) for img in f.inverse_images)
    return RaagAut(
        f.graph,
        imgs,
        f"compose({f.tag},{h.tag})",
        f.verified and h.verified and inv_imgs is not None,
        inv_imgs,
    )


def inverse(f):
    if not f.verified or f.inverse_images is None:
        raise ContractError("inverse requires a verified automorphism")
    return RaagAut(f.graph, f.inverse_images, f"inverse({f.tag})", True, f.images)


# -- splittings and generic Dehn twists ----------------------------------


@dataclass(frozen=True)
class SplittingSpec:
    """A one-edge splitting datum over the defining graph.

    ``kind`` is "amalgam" with two vertex sets whose intersection separates
    them, or "hnn" with a stable vertex; the edge set is the intersection,
    respectively the link of the stable vertex.
    """

    graph: SimplicialGraph
    kind: str
    side1: int = 0  # amalgam: mask of first side
    side2: int = 0  # amalgam: mask of second side
    stable: int = -1  # hnn: vertex index

    @classmethod
    def amalgam(cls, g, labels1, labels2):
        m1, m2 = g.mask_of(labels1), g.mask_of(labels2)
        if m1 | m2 != g.full_mask:
            raise InputError("amalgam sides must cover the graph")
        edge = m1 & m2
        a_only, b_only = m1 & ~edge, m2 & ~edge
        if not a_only or not b_only:
            raise InputError("amalgam sides must differ from the edge set")
        # the edge set must separate the two sides
        reach = 0
        stack = []
        for j in range(len(g)):
            if a_only & (1 << j):
                reach |= 1 << j
                stack.append(j)
        while stack:
            x = stack.pop()
            nbrs = g.adj[x] & ~edge & ~reach
            while nbrs:
                y = (nbrs & -nbrs).bit_length() - 1
                reach |= 1 << y
                stack.append(y)
                nbrs &= nbrs - 1
        if reach & b_only:
            raise InputError("edge set does not separate the amalgam sides")
        return cls(g, "amalgam", m1, m2)

    @classmethod
    def hnn(cls, g, stable_label):
        return cls(g, "hnn", stable=g.index(stable_label))

    @property
    def edge_mask(self):
        if self.kind == "amalgam":
            return self.side1 & self.side2
        return self.graph.adj[self.stable]

    def edge_set(self):
        return VertexSet(self.graph, self.edge_mask)


class TwistForm(Enum):
    AMALGAM_CONJ = "AmalgamConj"
    HNN_LEFT = "HNNLeft"
    HNN_RIGHT = "HNNRight"


def _check_multiplier(g, z, support_mask, commute_mask, who):
    if z.support_mask() & ~support_mask:
        raise InputError(f"multiplier must be supported on {who}")
    m = commute_mask
    while m:
        j = (m & -m).bit_length() - 1
        gen = NormalWord(g, (j + 1,))
        comm = multiply(multiply(z, gen), multiply(invert(z), invert(gen)))
        if not comm.is_identity():
            raise InputError(
                f"multiplier fails to centralize edge generator "
                f"{g.vertices[j]!r}: [z,{g.vertices[j]}] = {comm}"
            )
        m &= m - 1


def generic_dehn_twist(spec, form, z):
    """Dehn twist for a one-edge splitting with multiplier ``z``.

    AmalgamConj conjugates the second side by ``z`` (which must centralize
    the edge subgroup from within the second side); HNNLeft/HNNRight send the
    stable vertex to ``z v`` / ``v z`` for ``z`` centralizing the edge
    subgroup inside the vertex group (the stable vertex commutes with its
    link, so both HNN forms share the centralizing condition).
    """
    g = spec.graph
    if z.graph != g:
        raise InputError("multiplier over the wrong graph")
    imgs = _gen_images(g)
    inv_imgs = _gen_images(g)
    zinv = invert(z)
    if form is TwistForm.AMALGAM_CONJ:
        if spec.kind != "amalgam":
            raise InputError("AmalgamConj needs an amalgam splitting")
        edge = spec.edge_mask
        _check_multiplier(g, z, spec.side2, edge, "the second side")
        for j in range(len(g)):
            if spec.side2 & ~edge & (1 << j):
                gen = NormalWord(g, (j + 1,))
                imgs[j] = multiply(multiply(z, gen), zinv)
                inv_imgs[j] = multiply(multiply(zinv, gen), z)
    else:
        if spec.kind != "hnn":
            raise InputError("HNN forms need an HNN splitting")
        v = spec.stable
        vertex_group = g.full_mask & ~(1 << v)
        _check_multiplier(g, z, vertex_group, spec.edge_mask, "the vertex group")
        gen = NormalWord(g, (v + 1,))
        if form is TwistForm.HNN_LEFT:
            imgs[v] = multiply(z, gen)
            inv_imgs[v] = multiply(zinv, gen)
        else:
            imgs[v] = multiply(gen, z)
            inv_imgs[v] = multiply(gen, zinv)
    return aut_from_images(
        g, imgs, tag=f"generic_twist({form.value})", inverse_images=inv_imgs
    )


# -- taxonomy -------------------------------------------------------------


class TwistClass(Enum):
    CENTRALISER = "CentraliserTwist"
    ASCETIC = "AsceticTwist"


class DtType(Enum):
    FOLD = "Fold"
    SKEW = "Skew"
    PARTIAL_CONJUGATION = "PartialConjugation"


def classify_transvection(g, v, w):
    """Centraliser twist or ascetic twist, with a witness for the latter.

    A transvection along a dominated pair is a centraliser twist exactly when
    the link of ``v`` is an intersection of stars; for adjacent pairs this is
    the interesting condition, for non-adjacent pairs it holds automatically.
    The ascetic witness is the clique of vertices whose stars contain St(v),
    the centre of the star parabolic.
    """
    i, j = g.index(v), g.index(w)
    if i == j or g.adj[i] & ~star_mask(g, j):
        raise InputError("classify_transvection needs a dominated pair")
    lk_v = g.adj[i]
    if lk_v & ~g.adj[j] == 0:
        return TwistClass.CENTRALISER, None
    if star_mask(g, i) & ~star_mask(g, j) == 0 and is_intersection_of_stars(
        g, VertexSet(g, lk_v)
    ):
        return TwistClass.CENTRALISER, None
    return TwistClass.ASCETIC, kappa(g, v)


def dt_type(g, generator):
    """Coarse type of a standard generator, with its median-safety flag.

    Partial conjugations and folds (transvections along non-adjacent pairs)
    preserve the coarse median structure; skews (adjacent pairs) never do
    here, because the multiplier's centraliser contains the stable vertex and
    is therefore non-elliptic in the defining splitting.
    """
    if isinstance(generator, RaagAut):
        tag = generator.tag
        if tag.startswith("partial_conjugation"):
            return DtType.PARTIAL_CONJUGATION, True
        if tag.startswith("transvection"):
            inner = tag[len("transvection("):-1]
            v, w = inner.split(",")
            return dt_type(g, (v, w))
        raise InputError("not a standard generator")
    v, w = generator
    i, j = g.index(v), g.index(w)
    if i == j or g.adj[i] & ~star_mask(g, j):
        raise InputError("not a dominated pair")
    if g.adjacent(i, j):
        return DtType.SKEW, False
    return DtType.FOLD, True
