"""Subgroup chains, splitting kernels, and the decision procedures.

The amalgam chain starts at the edge group and repeatedly intersects the
normal cores of its two embedded images; the HNN chain interleaves
intersection with the theta-image, the normal core in the base group,
and the theta-compatibility filter realizing conjugation by the stable
letter inside the base group.  Either chain stabilizes on finite
carriers and its stable value is the splitting kernel: the largest
subgroup of the edge group normal in the whole group.  Triviality of a
chain value, or of one of the one-sided intersections K+/K-, certifies
the strongly-Powers conclusion; each verdict carries the criterion it
applied.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import GroupValidationError
from .groups import (
    ConcreteGroup,
    Subgroup,
    index,
    normal_core,
    subgroup_intersect,
)
from .words import AmalgamPresentation, HnnPresentation, free_product

CRITERIA = {
    "amalgam-indices": "[A:C] >= 3 and [B:C] >= 2, up to swapping the factors",
    "amalgam-chain-trivial": "C_k = {1} for some k >= 0 makes the amalgam a strongly Powers group",
    "hnn-proper": "H and theta(H) are both proper subgroups of G",
    "hnn-chain-trivial": "H_k = {1} for some k >= 0 makes the HNN extension a strongly Powers group",
    "hnn-one-sided-trivial": "K+ = {1} or K- = {1}, with H and theta(H) proper, makes the HNN extension a strongly Powers group",
    "bs-parameters": "min{|m|,|n|} >= 2 and |m| != |n|",
    "bs-solvable": "min{|m|,|n|} = 1 makes BS(m,n) solvable, hence amenable, hence not C*-simple",
    "bs-cyclic-normal": "|m| = |n| gives BS(m,n) an infinite cyclic normal subgroup, so it is not C*-simple",
    "free-product-trivial-factor": "a free product with a one-element factor is not a free product at all",
    "free-product-dihedral": "the free product of two groups of order 2 is the infinite dihedral group, which is amenable",
    "free-product-powers": "a nontrivial free product other than the infinite dihedral group is a strongly Powers group",
    "kernel-faithful": "the tree action is faithful iff the splitting kernel is trivial",
    "sbs-heredity": "the kernel of the stable-letter exponent map inherits the strongly Powers property",
}

STRONGLY_POWERS = "StronglyPowers"
NOT_CSTAR_SIMPLE = "NotCStarSimple"
CRITERION_NOT_MET = "CriterionNotMet"
INCONCLUSIVE = "Inconclusive"

AMENABLE = "Amenable"
NORMAL_AMENABLE_SUBGROUP = "NormalAmenableSubgroup"
INFINITE_DIHEDRAL = "InfiniteDihedral"


@dataclass(frozen=True)
class ChainReport:
    values: Tuple[Subgroup, ...]
    stabilized_at: Optional[int]
    first_trivial_at: Optional[int]
    kernel: Optional[Subgroup]


@dataclass(frozen=True)
class Verdict:
    kind: str
    reason: str
    details: dict = field(default_factory=dict)
    citations: Tuple[Tuple[str, str], ...] = ()

    @staticmethod
    def cite(*ids: str) -> Tuple[Tuple[str, str], ...]:
        return tuple((i, CRITERIA[i]) for i in ids)


def _run_chain(start: Subgroup, step, kmax: int) -> ChainReport:
    values = [start]
    stabilized_at = None
    for k in range(1, kmax + 1):
        nxt = step(values[-1])
        if not nxt <= values[-1]:
            raise AssertionError("chain failed to decrease")
        values.append(nxt)
        if nxt == values[-2]:
            stabilized_at = k - 1
            # one step beyond, to witness constancy
            assert step(nxt) == nxt
            break
    first_trivial = next((i for i, v in enumerate(values) if v.is_trivial()), None)
    kernel = values[stabilized_at] if stabilized_at is not None else None
    return ChainReport(tuple(values), stabilized_at, first_trivial, kernel)


def amalgam_chain(p: AmalgamPresentation, kmax: int = 32) -> ChainReport:
    """The decreasing chain of edge subgroups whose stable value is the kernel."""

    def step(c_prev: Subgroup) -> Subgroup:
        core_a = normal_core(p.factor_a, p.emb_a.image_of(c_prev))
        core_b = normal_core(p.factor_b, p.emb_b.image_of(c_prev))
        pulled_a = p.emb_a.preimage_of(core_a)
        pulled_b = p.emb_b.preimage_of(core_b)
        return subgroup_intersect(p.edge, pulled_a, pulled_b)

    return _run_chain(Subgroup.full(p.edge), step, kmax)


def _theta_stable(p: HnnPresentation, n_sub: Subgroup) -> Subgroup:
    """{n in N : theta(n) in N}, the algebraic form of N meet tau N tau^-1."""
    g = p.base
    if g.is_finite:
        return Subgroup(
            g,
            members=frozenset(
                x for x in n_sub.members if n_sub.contains(p.theta.apply(x))
            ),
        )
    s = n_sub.stride
    if s == 0:
        return n_sub
    n, m = p.theta.ratio
    big = math.lcm(s, abs(m))
    scaled = big // m * n
    t = s // math.gcd(s, abs(scaled)) if scaled else 1
    # smallest multiple sigma of lcm(s, |m|) with theta(sigma) in sZ
    return Subgroup.from_stride(g, abs(big * (s // math.gcd(s, abs(scaled)))) if scaled else big)


def hnn_chain(p: HnnPresentation, kmax: int = 32) -> ChainReport:
    """H'_k = H_{k-1} meet theta(H_{k-1}); H_k filters the normal core of H'_k
    through theta-compatibility (conjugation by the stable letter)."""

    def step(h_prev: Subgroup) -> Subgroup:
        h_primed = subgroup_intersect(p.base, h_prev, p.theta.image_of(h_prev))
        n_sub = normal_core(p.base, h_primed)
        return _theta_stable(p, n_sub)

    return _run_chain(p.assoc, step, kmax)


def hnn_k_plus_minus(p: HnnPresentation, pmax: int = 64) -> Tuple[Subgroup, Subgroup, bool]:
    """The one-sided intersections of the iterated theta images of H.

    Iterates S_{p+1} = theta(S_p meet H) from S_0 = H (and the mirror via
    theta^-1) and intersects the whole orbit.  Finite carriers repeat and
    stabilize; over the integers the orbit either repeats or the strides
    grow without bound, which is decided arithmetically: the stride map
    s -> |n| * s / gcd(s, |m|) has a fixed point iff |n| divides |m|.
    """
    g = p.base

    def one_side(forward: bool):
        if forward:
            dom, img = p.assoc, p.theta_image
            push = p.theta.apply
        else:
            dom, img = p.theta_image, p.assoc
            push = p.theta.unapply
        if g.is_finite:
            current = p.assoc
            total = p.assoc
            seen = {current}
            for _ in range(pmax):
                meet = subgroup_intersect(g, current, dom)
                current = Subgroup(g, members=frozenset(push(x) for x in meet.members))
                total = subgroup_intersect(g, total, current)
                if current in seen:
                    return total, True
                seen.add(current)
            return total, False
        n, m = p.theta.ratio
        grow_from, grow_to = (abs(m), abs(n)) if forward else (abs(n), abs(m))
        if grow_to % 1 == 0 and grow_from % grow_to != 0 and grow_to != grow_from:
            pass
        current = p.assoc.stride
        total = current
        seen = {current}
        for _ in range(pmax):
            meet = math.lcm(current, grow_from) if current else 0
            current = abs(meet // grow_from * grow_to) if meet else 0
            total = math.lcm(total, current) if current and total else 0 if current == 0 or total == 0 else total
            if current in seen:
                return Subgroup.from_stride(g, total), True
            seen.add(current)
        # strides repeat iff grow_to divides grow_from; otherwise they are unbounded
        if grow_from % grow_to != 0:
            return Subgroup.from_stride(g, 0), True
        return Subgroup.from_stride(g, total), False

    k_plus, ok_plus = one_side(True)
    k_minus, ok_minus = one_side(False)
    return k_plus, k_minus, ok_plus and ok_minus


def decide_free_product(a: ConcreteGroup, b: ConcreteGroup) -> Verdict:
    sizes = []
    for grp in (a, b):
        sizes.append(grp.order if grp.is_finite else None)
    if 1 in sizes:
        return Verdict(
            CRITERION_NOT_MET,
            "trivial free product: one factor has a single element",
            {"orders": sizes},
            Verdict.cite("free-product-trivial-factor"),
        )
    if sizes == [2, 2]:
        return Verdict(
            NOT_CSTAR_SIMPLE,
            INFINITE_DIHEDRAL,
            {"orders": sizes},
            Verdict.cite("free-product-dihedral"),
        )
    p = free_product(a, b)
    report = amalgam_chain(p, kmax=2)
    assert report.first_trivial_at == 0
    return Verdict(
        STRONGLY_POWERS,
        "nontrivial free product, not infinite dihedral",
        {"orders": sizes, "chain_trivial_at": 0},
        Verdict.cite("free-product-powers", "amalgam-chain-trivial"),
    )


def _index_pair_ok(ia: Optional[int], ib: Optional[int]) -> bool:
    def ge(x, k):
        return x is None or x >= k

    return (ge(ia, 3) and ge(ib, 2)) or (ge(ib, 3) and ge(ia, 2))


def decide_amalgam(p: AmalgamPresentation, kmax: int = 32) -> Verdict:
    ia = index(p.factor_a, p.embedded_a)
    ib = index(p.factor_b, p.embedded_b)
    report = amalgam_chain(p, kmax)
    details = {
        "indices": [ia, ib],
        "chain": report,
    }
    if not _index_pair_ok(ia, ib):
        if report.kernel is not None:
            details["kernel"] = report.kernel
        return Verdict(
            CRITERION_NOT_MET,
            "factor indices too small",
            details,
            Verdict.cite("amalgam-indices"),
        )
    if report.first_trivial_at is not None:
        details["chain_trivial_at"] = report.first_trivial_at
        return Verdict(
            STRONGLY_POWERS,
            f"edge-group chain trivial at step {report.first_trivial_at}",
            details,
            Verdict.cite("amalgam-indices", "amalgam-chain-trivial"),
        )
    if report.stabilized_at is not None:
        details["kernel"] = report.kernel
        return Verdict(
            INCONCLUSIVE,
            "chain stabilized on a nontrivial kernel; the tree action is not faithful",
            details,
            Verdict.cite("kernel-faithful"),
        )
    return Verdict(
        INCONCLUSIVE,
        f"chain did not stabilize within {kmax} steps",
        details,
        (),
    )


def decide_hnn(p: HnnPresentation, kmax: int = 32) -> Verdict:
    if p.assoc.is_full() or p.theta_image.is_full():
        return Verdict(
            CRITERION_NOT_MET,
            "ascending HNN extension: H or theta(H) is the whole base group",
            {},
            Verdict.cite("hnn-proper"),
        )
    report = hnn_chain(p, kmax)
    details = {"chain": report}
    if report.first_trivial_at is not None:
        details["chain_trivial_at"] = report.first_trivial_at
        return Verdict(
            STRONGLY_POWERS,
            f"associated-subgroup chain trivial at step {report.first_trivial_at}",
            details,
            Verdict.cite("hnn-proper", "hnn-chain-trivial"),
        )
    k_plus, k_minus, stable = hnn_k_plus_minus(p)
    details["k_plus"] = k_plus
    details["k_minus"] = k_minus
    if stable and (k_plus.is_trivial() or k_minus.is_trivial()):
        side = "K+" if k_plus.is_trivial() else "K-"
        return Verdict(
            STRONGLY_POWERS,
            f"one-sided intersection {side} is trivial",
            details,
            Verdict.cite("hnn-proper", "hnn-one-sided-trivial"),
        )
    if report.kernel is not None:
        details["kernel"] = report.kernel
        return Verdict(
            INCONCLUSIVE,
            "chain stabilized on a nontrivial kernel; the tree action is not faithful",
            details,
            Verdict.cite("kernel-faithful"),
        )
    return Verdict(INCONCLUSIVE, f"no criterion certified within {kmax} steps", details, ())


def decide_bs(m: int, n: int, kmax: int = 32) -> Verdict:
    if m == 0 or n == 0:
        raise GroupValidationError("both parameters must be nonzero")
    details = {"m": m, "n": n}
    if min(abs(m), abs(n)) == 1:
        return Verdict(
            NOT_CSTAR_SIMPLE,
            AMENABLE,
            details,
            Verdict.cite("bs-solvable"),
        )
    if abs(m) == abs(n):
        return Verdict(
            NOT_CSTAR_SIMPLE,
            NORMAL_AMENABLE_SUBGROUP,
            details,
            Verdict.cite("bs-cyclic-normal"),
        )
    p = HnnPresentation.bs(m, n)
    k_plus, k_minus, stable = hnn_k_plus_minus(p)
    assert stable and (k_plus.is_trivial() or k_minus.is_trivial())
    details["k_plus"] = k_plus
    details["k_minus"] = k_minus
    details["special_subgroup"] = (
        "the kernel of the stable-letter exponent map is strongly Powers as well"
    )
    return Verdict(
        STRONGLY_POWERS,
        "parameters satisfy the one-relator criterion",
        details,
        Verdict.cite("bs-parameters", "hnn-one-sided-trivial", "sbs-heredity"),
    )
