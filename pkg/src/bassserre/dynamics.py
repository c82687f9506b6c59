"""Elliptic/hyperbolic classification and axis geometry on the tree.

An element is elliptic iff its cyclically reduced core has syllable
length <= 1 (amalgam) or no stable letters (HNN); otherwise it is
hyperbolic, its translation length is the core's syllable or
stable-letter count, and the conjugator transports the base vertex onto
the axis.  Actions here never invert an edge.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import (
    DegeneratePresentationError,
    NotEllipticError,
    NotHyperbolicError,
)
from .groups import coset_transversal, index
from .tree import (
    KIND_A,
    KIND_B,
    KIND_G,
    Ball,
    TreeEdge,
    TreeVertex,
    act,
    act_edge,
    ball,
    base_vertex,
    distance,
    geodesic,
    neighbors,
    source,
    terminus,
    vertex,
)
from .words import (
    SIDE_A,
    SIDE_B,
    AmalgamPresentation,
    AmalgamWord,
    GroupWord,
    HnnPresentation,
    HnnWord,
    SplittingPresentation,
    cyclically_reduce,
    invert,
    multiply,
    normalize,
    power,
    syllable_length,
    tau_count,
)

ELLIPTIC = "elliptic"
HYPERBOLIC = "hyperbolic"

TRANSVERSE = "transverse"
SHARED_END = "shared_end"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Classification:
    kind: str
    fixed_vertex: Optional[TreeVertex] = None
    translation_length: Optional[int] = None
    axis_vertex: Optional[TreeVertex] = None
    conjugator: Optional[GroupWord] = None


def classify(w: GroupWord) -> Classification:
    p = w.presentation
    core, conj = cyclically_reduce(w)
    if isinstance(p, AmalgamPresentation):
        if syllable_length(core) <= 1:
            if core.syllables and core.syllables[0][0] == SIDE_B:
                fix = act(conj, vertex(p, KIND_B, p.identity_word()))
            else:
                fix = act(conj, base_vertex(p))
            return Classification(ELLIPTIC, fixed_vertex=fix)
        length = syllable_length(core)
    else:
        if tau_count(core) == 0:
            return Classification(ELLIPTIC, fixed_vertex=act(conj, base_vertex(p)))
        length = tau_count(core)
    axis_v = act(conj, base_vertex(p))
    return Classification(
        HYPERBOLIC, translation_length=length, axis_vertex=axis_v, conjugator=conj
    )


def fixed_vertices(w: GroupWord, b: Ball) -> List[TreeVertex]:
    return [v for v in b.order if act(w, v) == v]


def axis_segment(w: GroupWord, radius: int) -> List[TreeVertex]:
    """Axis vertices within the given radius of the axis point, in line order."""
    cls = classify(w)
    if cls.kind != HYPERBOLIC:
        raise NotHyperbolicError("axis segments exist only for hyperbolic elements")
    p = w.presentation
    c0 = cls.axis_vertex
    c1 = act(w, c0)
    length = cls.translation_length
    on_axis = []
    for v in ball(p, c0, radius).order:
        if distance(v, act(w, v)) == length:
            on_axis.append(v)

    def coordinate(v):
        du, dw = distance(v, c0), distance(v, c1)
        if du - dw == -length:
            return -du
        if du - dw == length:
            return du
        return (du - dw + length) // 2

    return sorted(on_axis, key=coordinate)


@dataclass(frozen=True)
class TransversalityVerdict:
    kind: str
    certificates: Tuple[dict, ...] = ()
    witness: Optional[dict] = None
    detail: str = ""


def _axis_ray(w: GroupWord, start: TreeVertex, count: int) -> List[TreeVertex]:
    """count+1 vertices of the axis ray from a vertex on the axis toward the sink."""
    seg = geodesic(start, act(w, start))
    verts = list(seg)
    shift = w
    while len(verts) <= count:
        verts.extend(act(shift, v) for v in seg[1:])
        shift = multiply(shift, w)
    return verts[: count + 1]


def _diverges(ray1: List[TreeVertex], ray2: List[TreeVertex]) -> Optional[dict]:
    """A permanent-split certificate, if one exists within the rays' length.

    In a tree, once d(a_{n+1}, b_{n+1}) = d(a_n, b_n) + 2, both rays have
    passed their mutual projections and the distance grows forever, so the
    two rays converge to distinct ends.
    """
    prev = distance(ray1[0], ray2[0])
    for n in range(1, min(len(ray1), len(ray2))):
        cur = distance(ray1[n], ray2[n])
        if cur == prev + 2:
            return {
                "split_at": n - 1,
                "distance_before": prev,
                "distance_after": cur,
                "ray1_vertex": str(ray1[n]),
                "ray2_vertex": str(ray2[n]),
            }
        prev = cur
    return None


def are_transverse(w1: GroupWord, w2: GroupWord, depth: Optional[int] = None) -> TransversalityVerdict:
    """Certified transversality of two hyperbolic elements.

    Transverse verdicts are exact (ray splits are permanent in a tree);
    shared ends are certified algebraically for commuting elements; any
    remaining case is reported as unknown at the explored depth.
    """
    c1, c2 = classify(w1), classify(w2)
    if c1.kind != HYPERBOLIC or c2.kind != HYPERBOLIC:
        raise NotHyperbolicError("transversality is defined for hyperbolic pairs")
    comm = multiply(multiply(w1, w2), multiply(invert(w1), invert(w2)))
    if comm.is_identity():
        return TransversalityVerdict(
            SHARED_END,
            witness={"relation": "commuting hyperbolic elements share their axis"},
        )
    if depth is None:
        depth = 2 * (c1.translation_length + c2.translation_length)
        depth += distance(c1.axis_vertex, c2.axis_vertex) + 8
    rays1 = {
        "omega": _axis_ray(w1, c1.axis_vertex, depth),
        "alpha": _axis_ray(invert(w1), c1.axis_vertex, depth),
    }
    rays2 = {
        "omega": _axis_ray(w2, c2.axis_vertex, depth),
        "alpha": _axis_ray(invert(w2), c2.axis_vertex, depth),
    }
    certificates = []
    for end1, r1 in rays1.items():
        for end2, r2 in rays2.items():
            cert = _diverges(r1, r2)
            if cert is None:
                return TransversalityVerdict(
                    UNKNOWN,
                    detail=f"ends {end1}/{end2} did not split within depth {depth}",
                )
            cert["ends"] = (end1, end2)
            certificates.append(cert)
    return TransversalityVerdict(TRANSVERSE, certificates=tuple(certificates))


def _distinct_coset_elements(factor, embedded, count: int) -> List[int]:
    """Nontrivial elements of pairwise distinct nontrivial cosets mod `embedded`."""
    idx = index(factor, embedded)
    if idx is not None:
        reps = coset_transversal(factor, embedded)
        if len(reps) < count + 1:
            raise DegeneratePresentationError("factor index too small")
        return list(reps[1 : count + 1])
    return list(range(1, count + 1))


def construct_transverse_pair(p: SplittingPresentation) -> Tuple[GroupWord, GroupWord]:
    """A certified transverse pair of hyperbolic elements.

    Amalgam: with q, r in distinct nontrivial cosets of one factor and s
    outside the edge group in the other, (sqsq^-1, srsr^-1) works.  HNN:
    with r outside H and s outside theta(H), (r tau, tau s) works.
    """
    if isinstance(p, AmalgamPresentation):
        ia = index(p.factor_a, p.embedded_a)
        ib = index(p.factor_b, p.embedded_b)
        big = None
        for side, idx_side, idx_other in ((SIDE_A, ia, ib), (SIDE_B, ib, ia)):
            if (idx_side is None or idx_side >= 3) and (idx_other is None or idx_other >= 2):
                big = side
                break
        if big is None:
            raise DegeneratePresentationError(
                "need one factor index >= 3 and the other >= 2"
            )
        small = p.other(big)
        q, r = _distinct_coset_elements(p.factor(big), p.embedded(big), 2)
        (s,) = _distinct_coset_elements(p.factor(small), p.embedded(small), 1)
        fac = p.factor(big)
        w1 = p.word([(small, s), (big, q), (small, s), (big, fac.inv(q))])
        w2 = p.word([(small, s), (big, r), (small, s), (big, fac.inv(r))])
        return w1, w2
    if p.assoc.is_full() or p.theta_image.is_full():
        raise DegeneratePresentationError("ascending HNN data admit no transverse pair")
    (r,) = _distinct_coset_elements(p.base, p.assoc, 1)
    (s,) = _distinct_coset_elements(p.base, p.theta_image, 1)
    w1 = p.word([("g", r), ("t", 1)])
    w2 = p.word([("t", 1), ("g", s)])
    return w1, w2


@dataclass(frozen=True)
class ProbeResult:
    kind: str  # "shadow_not_fixed" | "exhausted"
    witness: Optional[TreeEdge] = None
    depth: int = 0


def slenderness_probe(w: GroupWord, e: TreeEdge, depth: int) -> ProbeResult:
    """Hunt, inside the half-tree behind e, for an edge the element fixes at
    its source but moves at its terminus; such an edge certifies that the
    shadow of e is not contained in the element's boundary fixed set."""
    cls = classify(w)
    if cls.kind != ELLIPTIC:
        raise NotEllipticError("the probe applies to elliptic elements")
    x0 = cls.fixed_vertex
    if not distance(x0, source(e)) < distance(x0, terminus(e)):
        raise ValueError("edge must point away from the fixed vertex")
    if act(w, terminus(e)) != terminus(e):
        return ProbeResult("shadow_not_fixed", witness=e)
    visited = {source(e), terminus(e)}
    frontier = [terminus(e)]
    for level in range(1, depth + 1):
        nxt = []
        for v in frontier:
            v_fixed = act(w, v) == v
            for f, far in neighbors(v):
                if far in visited:
                    continue
                visited.add(far)
                nxt.append(far)
                if v_fixed and act(w, far) != far:
                    witness = f if source(f) == v else f
                    return ProbeResult("shadow_not_fixed", witness=witness, depth=level)
        frontier = nxt
    return ProbeResult("exhausted", depth=depth)
