"""The Bass-Serre tree of a splitting, explored lazily over coset words.

Vertices and edges are canonical coset representatives:

* amalgam: vertices are the cosets of the two factors (types A and B),
  forward edges the cosets of the edge group; a forward edge gC runs
  from gA to gB;
* HNN: vertices are the cosets of the base group, forward edges the
  cosets of the associated subgroup; a forward edge gH runs from gG to
  g tau G.

A canonical vertex representative is an alternating word of non-trivial
coset representatives whose last syllable lies outside the vertex's own
factor (amalgam), or a word ending in a stable letter (HNN).  Reading
such a word block by block walks the unique path from the base vertex,
which makes distances and geodesics exact prefix computations with no
search and no radius.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import (
    InfiniteDegreeError,
    InfiniteIndexError,
    PresentationMismatchError,
    SizeBudgetExceededError,
)
from .groups import coset_transversal, index, left_coset_rep
from .words import (
    SIDE_A,
    SIDE_B,
    AmalgamPresentation,
    AmalgamWord,
    GroupWord,
    HnnPresentation,
    HnnWord,
    SplittingPresentation,
    multiply,
    normalize,
)

DEFAULT_VERTEX_BUDGET = 10**6

KIND_A = "A"
KIND_B = "B"
KIND_G = "G"


class Side(enum.Enum):
    SOURCE = "source"
    TERMINUS = "terminus"


@dataclass(frozen=True)
class TreeVertex:
    presentation: SplittingPresentation
    kind: str
    rep: GroupWord

    def __str__(self):
        return f"{self.kind}:{self.rep}"


@dataclass(frozen=True)
class TreeEdge:
    presentation: SplittingPresentation
    rep: GroupWord
    forward: bool = True

    def __str__(self):
        arrow = "+" if self.forward else "-"
        return f"E{arrow}:{self.rep}"


def _same_presentation(a, b):
    if a.presentation is not b.presentation:
        raise PresentationMismatchError("values over different presentations")


# -- canonical representatives ------------------------------------------------


def _amalgam_vertex_rep(p: AmalgamPresentation, w: AmalgamWord, kind: str) -> AmalgamWord:
    s = list(normalize(w).syllables)
    side_of_kind = SIDE_A if kind == KIND_A else SIDE_B
    while s:
        side, elt = s[-1]
        if side == side_of_kind or p.embedded(side).contains(elt):
            s.pop()
            continue
        fac = p.factor(side)
        s[-1] = (side, left_coset_rep(fac, p.embedded(side), elt))
        break
    return AmalgamWord(p, tuple(s), normalized=True)


def _amalgam_edge_rep(p: AmalgamPresentation, w: AmalgamWord) -> AmalgamWord:
    s = list(normalize(w).syllables)
    while s and p.embedded(s[-1][0]).contains(s[-1][1]):
        s.pop()
    if s:
        side, elt = s[-1]
        s[-1] = (side, left_coset_rep(p.factor(side), p.embedded(side), elt))
    return AmalgamWord(p, tuple(s), normalized=True)


def _hnn_vertex_rep(p: HnnPresentation, w: HnnWord) -> HnnWord:
    w = normalize(w)
    if not w.tail:
        return p.identity_word()
    tail = w.tail[:-1] + ((w.tail[-1][0], p.base.identity),)
    return HnnWord(p, w.head, tail, normalized=True)


def _hnn_edge_rep(p: HnnPresentation, w: HnnWord) -> HnnWord:
    w = normalize(w)
    if not w.tail:
        return HnnWord(p, left_coset_rep(p.base, p.assoc, w.head), (), normalized=True)
    last_eps, last_g = w.tail[-1]
    tail = w.tail[:-1] + ((last_eps, left_coset_rep(p.base, p.assoc, last_g)),)
    return HnnWord(p, w.head, tail, normalized=True)


def vertex(p: SplittingPresentation, kind: str, w: GroupWord) -> TreeVertex:
    """The vertex w * (stabilizer of `kind`), canonicalized."""
    if isinstance(p, AmalgamPresentation):
        if kind not in (KIND_A, KIND_B):
            raise ValueError("amalgam vertices have kind A or B")
        return TreeVertex(p, kind, _amalgam_vertex_rep(p, w, kind))
    if kind != KIND_G:
        raise ValueError("HNN vertices have kind G")
    return TreeVertex(p, kind, _hnn_vertex_rep(p, w))


def edge(p: SplittingPresentation, w: GroupWord, forward: bool = True) -> TreeEdge:
    if isinstance(p, AmalgamPresentation):
        return TreeEdge(p, _amalgam_edge_rep(p, w), forward)
    return TreeEdge(p, _hnn_edge_rep(p, w), forward)


def base_vertex(p: SplittingPresentation) -> TreeVertex:
    if isinstance(p, AmalgamPresentation):
        return TreeVertex(p, KIND_A, p.identity_word())
    return TreeVertex(p, KIND_G, p.identity_word())


def reverse_edge(e: TreeEdge) -> TreeEdge:
    return TreeEdge(e.presentation, e.rep, not e.forward)


def source(e: TreeEdge) -> TreeVertex:
    p = e.presentation
    if isinstance(p, AmalgamPresentation):
        kind = KIND_A if e.forward else KIND_B
        return vertex(p, kind, e.rep)
    if e.forward:
        return vertex(p, KIND_G, e.rep)
    return vertex(p, KIND_G, multiply(e.rep, _tau(p)))


def terminus(e: TreeEdge) -> TreeVertex:
    p = e.presentation
    if isinstance(p, AmalgamPresentation):
        kind = KIND_B if e.forward else KIND_A
        return vertex(p, kind, e.rep)
    if e.forward:
        return vertex(p, KIND_G, multiply(e.rep, _tau(p)))
    return vertex(p, KIND_G, e.rep)


def _tau(p: HnnPresentation) -> HnnWord:
    return HnnWord(p, p.base.identity, ((1, p.base.identity),), normalized=True)


# -- the action ----------------------------------------------------------------


def act(g: GroupWord, v: TreeVertex) -> TreeVertex:
    _same_presentation(g, v)
    return vertex(v.presentation, v.kind, multiply(g, v.rep))


def act_edge(g: GroupWord, e: TreeEdge) -> TreeEdge:
    _same_presentation(g, e)
    moved = edge(e.presentation, multiply(g, e.rep), e.forward)
    assert moved != reverse_edge(e), "tree actions have no inversions"
    return moved


# -- block structure, distances, geodesics -------------------------------------


def _blocks(v: TreeVertex) -> tuple:
    """The parent-chain address of v relative to the base vertex."""
    if isinstance(v.presentation, AmalgamPresentation):
        return v.rep.syllables
    w = v.rep
    out = []
    for i, (eps, _) in enumerate(w.tail):
        g_before = w.head if i == 0 else w.tail[i - 1][1]
        out.append((g_before, eps))
    return tuple(out)


def _type_at(v: TreeVertex, prefix_len: int) -> str:
    """Vertex type of the ancestor at a given block prefix (amalgam only)."""
    if (len(_blocks(v)) - prefix_len) % 2 == 0:
        return v.kind
    return KIND_B if v.kind == KIND_A else KIND_A


def depth(v: TreeVertex) -> int:
    """Distance from the base vertex."""
    b = _blocks(v)
    if isinstance(v.presentation, HnnPresentation):
        return len(b)
    return len(b) + (0 if _type_at(v, 0) == KIND_A else 1)


def parent(v: TreeVertex) -> Optional[Tuple[TreeEdge, TreeVertex]]:
    """(edge toward v, parent vertex), or None at the base vertex."""
    p = v.presentation
    b = _blocks(v)
    if isinstance(p, AmalgamPresentation):
        if not b:
            if v.kind == KIND_A:
                return None
            e = TreeEdge(p, p.identity_word(), forward=True)
            return e, TreeVertex(p, KIND_A, p.identity_word())
        word = AmalgamWord(p, b, normalized=True)
        up = TreeVertex(p, KIND_B if v.kind == KIND_A else KIND_A,
                        AmalgamWord(p, b[:-1], normalized=True))
        # the geometric edge between v and up is the coset word b
        e = TreeEdge(p, word, forward=(v.kind == KIND_B))
        return (e if terminus(e) == v else reverse_edge(e)), up
    if not b:
        return None
    up = TreeVertex(p, KIND_G, _word_from_blocks(p, b[:-1]))
    g_last, eps_last = b[-1]
    if eps_last == 1:
        erep = _hnn_edge_rep(p, multiply(_word_from_blocks(p, b[:-1]),
                                         HnnWord(p, g_last, (), normalized=True)))
        e = TreeEdge(p, erep, forward=True)  # source is the parent
        return e, up
    erep = _hnn_edge_rep(p, _word_from_blocks(p, b))
    e = TreeEdge(p, erep, forward=False)  # backward edge with source the parent
    return e, up


def _word_from_blocks(p: HnnPresentation, blocks: tuple) -> HnnWord:
    if not blocks:
        return p.identity_word()
    head = blocks[0][0]
    tail = []
    for i, (_, eps) in enumerate(blocks):
        nxt = blocks[i + 1][0] if i + 1 < len(blocks) else p.base.identity
        tail.append((eps, nxt))
    return HnnWord(p, head, tuple(tail), normalized=True)


def distance(u: TreeVertex, v: TreeVertex) -> int:
    _same_presentation(u, v)
    bu, bv = _blocks(u), _blocks(v)
    common = 0
    for x, y in zip(bu, bv):
        if x != y:
            break
        common += 1
    du, dv = len(bu) - common, len(bv) - common
    if isinstance(u.presentation, HnnPresentation):
        return du + dv
    tu, tv = _type_at(u, common), _type_at(v, common)
    if tu == tv:
        return du + dv
    assert common == 0, "distinct ancestor types can only happen at the empty prefix"
    return du + dv + 1


def geodesic(u: TreeVertex, v: TreeVertex, budget: int = DEFAULT_VERTEX_BUDGET) -> List[TreeVertex]:
    """The unique vertex path from u to v."""
    _same_presentation(u, v)
    if distance(u, v) + 1 > budget:
        raise SizeBudgetExceededError(budget)
    left, right = [u], [v]
    while left[-1] != right[-1]:
        a, b = left[-1], right[-1]
        if depth(a) >= depth(b):
            left.append(parent(a)[1])
        else:
            right.append(parent(b)[1])
    return left + list(reversed(right))[1:]


# -- neighbors and balls ---------------------------------------------------------


def degree(v: TreeVertex) -> Optional[int]:
    p = v.presentation
    if isinstance(p, AmalgamPresentation):
        side = SIDE_A if v.kind == KIND_A else SIDE_B
        return index(p.factor(side), p.embedded(side))
    ia, ib = index(p.base, p.assoc), index(p.base, p.theta_image)
    return None if ia is None or ib is None else ia + ib


def neighbors(v: TreeVertex) -> List[Tuple[TreeEdge, TreeVertex]]:
    """All incident edges oriented out of v, with their far endpoints."""
    p = v.presentation
    if degree(v) is None:
        raise InfiniteDegreeError("vertex has infinite degree")
    out = []
    if isinstance(p, AmalgamPresentation):
        side = SIDE_A if v.kind == KIND_A else SIDE_B
        try:
            reps = coset_transversal(p.factor(side), p.embedded(side))
        except InfiniteIndexError as exc:  # pragma: no cover - guarded by degree()
            raise InfiniteDegreeError(str(exc)) from exc
        for t in reps:
            w = multiply(v.rep, AmalgamWord(p, ((side, t),)))
            e = edge(p, w, forward=(v.kind == KIND_A))
            far = vertex(p, KIND_B if v.kind == KIND_A else KIND_A, w)
            out.append((e, far))
        return out
    tau = _tau(p)
    tau_inv = HnnWord(p, p.base.identity, ((-1, p.base.identity),), normalized=True)
    for t in coset_transversal(p.base, p.assoc):
        w = multiply(v.rep, HnnWord(p, t, (), normalized=True))
        out.append((edge(p, w, forward=True), vertex(p, KIND_G, multiply(w, tau))))
    for t in coset_transversal(p.base, p.theta_image):
        w = multiply(v.rep, HnnWord(p, t, (), normalized=True))
        moved = multiply(w, tau_inv)
        out.append((edge(p, moved, forward=False), vertex(p, KIND_G, moved)))
    return out


@dataclass(frozen=True)
class Ball:
    """An exact BFS ball; immutable once built."""

    presentation: SplittingPresentation
    center: TreeVertex
    radius: int
    order: Tuple[TreeVertex, ...]
    depths: "Dict[TreeVertex, int]"
    parents: "Dict[TreeVertex, Optional[Tuple[TreeEdge, TreeVertex]]]"
    edges: Tuple[TreeEdge, ...]

    def __contains__(self, v: TreeVertex) -> bool:
        return v in self.depths

    def __len__(self) -> int:
        return len(self.order)

    def sphere_sizes(self) -> List[int]:
        counts = [0] * (self.radius + 1)
        for v in self.order:
            counts[self.depths[v]] += 1
        return counts

    def to_adjacency(self) -> dict:
        ids = {v: i for i, v in enumerate(self.order)}
        adj = []
        for e in self.edges:
            adj.append([ids[source(e)], ids[terminus(e)], str(e.rep)])
        return {
            "center": str(self.center),
            "radius": self.radius,
            "vertices": [
                {"id": ids[v], "label": str(v), "depth": self.depths[v]}
                for v in self.order
            ],
            "edges": adj,
        }

    def to_dot(self) -> str:
        ids = {v: i for i, v in enumerate(self.order)}
        lines = ["graph ball {"]
        for v in self.order:
            lines.append(f'  n{ids[v]} [label="{v}"];')
        for e in self.edges:
            lines.append(f'  n{ids[source(e)]} -- n{ids[terminus(e)]} [label="{e.rep}"];')
        lines.append("}")
        return "\n".join(lines)


def ball(p: SplittingPresentation, center: TreeVertex, radius: int,
         max_vertices: int = DEFAULT_VERTEX_BUDGET) -> Ball:
    _same_presentation(center, base_vertex(p))
    depths = {center: 0}
    parents: dict = {center: None}
    order = [center]
    forward_edges = {}
    frontier = [center]
    for d in range(1, radius + 1):
        nxt = []
        for v in frontier:
            for e, far in neighbors(v):
                fkey = e if e.forward else reverse_edge(e)
                if far in depths:
                    if fkey not in forward_edges:
                        forward_edges[fkey] = None
                    continue
                depths[far] = d
                parents[far] = (e, v)
                order.append(far)
                forward_edges.setdefault(fkey, None)
                nxt.append(far)
                if len(order) > max_vertices:
                    raise SizeBudgetExceededError(max_vertices)
        frontier = nxt
    return Ball(p, center, radius, tuple(order), depths, parents, tuple(forward_edges))


def edge_neighborhood(e: TreeEdge, k: int,
                      max_vertices: int = DEFAULT_VERTEX_BUDGET) -> List[TreeVertex]:
    """The vertices within distance k of either endpoint of e."""
    p = e.presentation
    seen = []
    got = set()
    for end in (source(e), terminus(e)):
        for v in ball(p, end, k, max_vertices).order:
            if v not in got:
                got.add(v)
                seen.append(v)
    return seen


# -- half-trees -------------------------------------------------------------------


def halfspace_side(e: TreeEdge, v: TreeVertex) -> Side:
    """Which side of the edge the vertex lies on; never a tie in a tree."""
    dt = distance(v, terminus(e))
    ds = distance(v, source(e))
    assert dt != ds
    return Side.TERMINUS if dt < ds else Side.SOURCE


def halfspaces_disjoint(e1: TreeEdge, e2: TreeEdge) -> bool:
    """Exact test for T_e1 and T_e2 (terminus-side half-trees) being disjoint."""
    _same_presentation(e1, e2)
    if e1 == e2:
        return False
    return (
        halfspace_side(e2, terminus(e1)) is Side.SOURCE
        and halfspace_side(e1, terminus(e2)) is Side.SOURCE
    )
