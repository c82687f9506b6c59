"""Concrete computable groups: finite multiplication tables and the integers.

These are the only carriers for vertex and edge groups.  Conventions used
throughout the package:

* a finite group of order n has elements 0..n-1 with the identity at
  index 0, and ``table[x][y]`` is the product x*y;
* the integers are the additive group of Python ints; their subgroups are
  exactly the strides d*Z (d == 0 is the trivial subgroup, d == 1 is Z);
* cosets are left cosets g*S unless stated otherwise, and the canonical
  transversal lists the minimal element index of each left coset, in
  increasing order (0..d-1 for the integers), so the identity comes first.

All values are immutable after construction and safe to share.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .errors import GroupValidationError, InfiniteIndexError

FINITE = "finite"
INTEGERS = "int"

DEFAULT_MAX_ORDER = 64


class ConcreteGroup:
    """A finite group given by its full multiplication table, or Z."""

    __slots__ = ("kind", "table", "order", "inverse_map", "_hash")

    def __init__(self, kind: str, table=None, max_order: int = DEFAULT_MAX_ORDER):
        if kind == INTEGERS:
            if table is not None:
                raise GroupValidationError("the integers carry no table")
            self.kind = INTEGERS
            self.table = None
            self.order = None
            self.inverse_map = None
        elif kind == FINITE:
            tbl = tuple(tuple(row) for row in table)
            _validate_table(tbl, max_order)
            self.kind = FINITE
            self.table = tbl
            self.order = len(tbl)
            self.inverse_map = _inverse_map(tbl)
        else:
            raise GroupValidationError(f"unknown group kind {kind!r}")
        self._hash = hash((self.kind, self.table))

    # -- basic structure -------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    def is_element(self, x) -> bool:
        if self.kind == INTEGERS:
            return isinstance(x, int)
        return isinstance(x, int) and 0 <= x < self.order

    def check_element(self, x) -> int:
        if not self.is_element(x):
            raise GroupValidationError(f"{x!r} is not an element of this group")
        return x

    def elements(self) -> range:
        if self.kind == INTEGERS:
            raise InfiniteIndexError("cannot enumerate the integers")
        return range(self.order)

    def mul(self, x: int, y: int) -> int:
        if self.kind == INTEGERS:
            return x + y
        return self.table[x][y]

    def inv(self, x: int) -> int:
        if self.kind == INTEGERS:
            return -x
        return self.inverse_map[x]

    def pow(self, x: int, n: int) -> int:
        if self.kind == INTEGERS:
            return x * n
        if n < 0:
            return self.pow(self.inv(x), -n)
        acc = 0
        for _ in range(n):
            acc = self.mul(acc, x)
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, ConcreteGroup)
            and self.kind == other.kind
            and self.table == other.table
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.kind == INTEGERS:
            return "ConcreteGroup(Z)"
        return f"ConcreteGroup(finite, order={self.order})"


def _validate_table(table, max_order):
    n = len(table)
    if n == 0:
        raise GroupValidationError("empty multiplication table")
    if n > max_order:
        raise GroupValidationError(f"order {n} exceeds the cap of {max_order}")
    for row in table:
        if len(row) != n or any(not (0 <= v < n) for v in row):
            raise GroupValidationError("table is not a square over 0..n-1")
    for x in range(n):
        if table[0][x] != x or table[x][0] != x:
            raise GroupValidationError("identity must sit at index 0")
    rng = range(n)
    for x in rng:
        tx = table[x]
        for y in rng:
            txy = tx[y]
            ty = table[y]
            for z in rng:
                if table[txy][z] != tx[ty[z]]:
                    raise GroupValidationError("table is not associative")


def _inverse_map(table):
    n = len(table)
    inv = [None] * n
    for x in range(n):
        for y in range(n):
            if table[x][y] == 0 and table[y][x] == 0:
                inv[x] = y
                break
        if inv[x] is None:
            raise GroupValidationError(f"element {x} has no inverse")
    return tuple(inv)


# -- standard constructions ----------------------------------------------


def integers() -> ConcreteGroup:
    return ConcreteGroup(INTEGERS)


def cyclic_group(n: int) -> ConcreteGroup:
    if n < 1:
        raise GroupValidationError("cyclic group needs order >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return ConcreteGroup(FINITE, table)


def trivial_group() -> ConcreteGroup:
    return cyclic_group(1)


def symmetric_group(n: int) -> ConcreteGroup:
    """S_n on {0..n-1}; permutations in lexicographic order, identity first."""
    perms = sorted(itertools.permutations(range(n)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [
        [idx[tuple(p[q[i]] for i in range(n))] for q in perms]
        for p in perms
    ]
    return ConcreteGroup(FINITE, table, max_order=max(DEFAULT_MAX_ORDER, len(perms)))


def direct_product(g: ConcreteGroup, h: ConcreteGroup) -> ConcreteGroup:
    if not (g.is_finite and h.is_finite):
        raise GroupValidationError("direct products only for finite tables")
    m = h.order
    n = g.order * m
    table = [
        [g.mul(a // m, b // m) * m + h.mul(a % m, b % m) for b in range(n)]
        for a in range(n)
    ]
    return ConcreteGroup(FINITE, table)


# -- subgroups -------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a carrier: an element set (finite) or a stride d*Z."""

    parent: ConcreteGroup
    members: Optional[frozenset] = None
    stride: Optional[int] = None

    @staticmethod
    def from_members(parent: ConcreteGroup, members: Iterable[int]) -> "Subgroup":
        if not parent.is_finite:
            raise GroupValidationError("member sets only make sense for finite parents")
        ms = frozenset(members)
        if parent.identity not in ms:
            raise GroupValidationError("subgroup must contain the identity")
        for x in ms:
            parent.check_element(x)
            if parent.inv(x) not in ms:
                raise GroupValidationError("subgroup not closed under inversion")
            for y in ms:
                if parent.mul(x, y) not in ms:
                    raise GroupValidationError("subgroup not closed under the product")
        return Subgroup(parent, members=ms)

    @staticmethod
    def from_generators(parent: ConcreteGroup, gens: Iterable[int]) -> "Subgroup":
        if not parent.is_finite:
            g = math.gcd(*[abs(x) for x in gens]) if gens else 0
            return Subgroup.from_stride(parent, g)
        closure = {parent.identity}
        frontier = [parent.identity]
        gen_list = [parent.check_element(g) for g in gens]
        gen_list += [parent.inv(g) for g in gen_list]
        while frontier:
            x = frontier.pop()
            for g in gen_list:
                y = parent.mul(x, g)
                if y not in closure:
                    closure.add(y)
                    frontier.append(y)
        return Subgroup(parent, members=frozenset(closure))

    @staticmethod
    def from_stride(parent: ConcreteGroup, d: int) -> "Subgroup":
        if parent.is_finite:
            raise GroupValidationError("strides only make sense over the integers")
        return Subgroup(parent, stride=abs(d))

    @staticmethod
    def trivial(parent: ConcreteGroup) -> "Subgroup":
        if parent.is_finite:
            return Subgroup(parent, members=frozenset({parent.identity}))
        return Subgroup(parent, stride=0)

    @staticmethod
    def full(parent: ConcreteGroup) -> "Subgroup":
        if parent.is_finite:
            return Subgroup(parent, members=frozenset(parent.elements()))
        return Subgroup(parent, stride=1)

    def contains(self, x: int) -> bool:
        if self.parent.is_finite:
            return x in self.members
        if self.stride == 0:
            return x == 0
        return x % self.stride == 0

    def is_trivial(self) -> bool:
        if self.parent.is_finite:
            return len(self.members) == 1
        return self.stride == 0

    def is_full(self) -> bool:
        if self.parent.is_finite:
            return len(self.members) == self.parent.order
        return self.stride == 1

    def size(self) -> Optional[int]:
        """Number of elements, or None when infinite."""
        if self.parent.is_finite:
            return len(self.members)
        return 1 if self.stride == 0 else None

    def sorted_members(self) -> tuple:
        return tuple(sorted(self.members))

    def __le__(self, other: "Subgroup") -> bool:
        if self.parent != other.parent:
            raise GroupValidationError("subgroups of different parents")
        if self.parent.is_finite:
            return self.members <= other.members
        if other.stride == 0:
            return self.stride == 0
        return self.stride != 0 and self.stride % other.stride == 0

    def __repr__(self):
        if self.parent.is_finite:
            return f"Subgroup({sorted(self.members)})"
        return f"Subgroup({self.stride}Z)"


# -- subgroup operations ----------------------------------------------------


def multiply(group: ConcreteGroup, x: int, y: int) -> int:
    group.check_element(x)
    group.check_element(y)
    return group.mul(x, y)


def _check_parent(group: ConcreteGroup, s: Subgroup):
    if s.parent != group:
        raise GroupValidationError("subgroup belongs to a different parent group")


def subgroup_intersect(group: ConcreteGroup, s: Subgroup, u: Subgroup) -> Subgroup:
    _check_parent(group, s)
    _check_parent(group, u)
    if group.is_finite:
        return Subgroup(group, members=s.members & u.members)
    if s.stride == 0 or u.stride == 0:
        return Subgroup.from_stride(group, 0)
    return Subgroup.from_stride(group, math.lcm(s.stride, u.stride))


def conjugate_subgroup(group: ConcreteGroup, s: Subgroup, g: int) -> Subgroup:
    """The subgroup g^-1 * s * g."""
    _check_parent(group, s)
    group.check_element(g)
    if not group.is_finite:
        return s
    gi = group.inv(g)
    return Subgroup(
        group, members=frozenset(group.mul(group.mul(gi, x), g) for x in s.members)
    )


def normal_core(group: ConcreteGroup, s: Subgroup) -> Subgroup:
    """The largest subgroup of s that is normal in the whole group."""
    _check_parent(group, s)
    if not group.is_finite:
        return s
    core = set(s.members)
    for g in group.elements():
        gi = group.inv(g)
        core = {x for x in core if s.contains(group.mul(group.mul(gi, x), g))}
    # one closure sanity pass; an intersection of subgroups is a subgroup
    return Subgroup(group, members=frozenset(core))


@lru_cache(maxsize=None)
def _coset_data(group: ConcreteGroup, s: Subgroup):
    """(transversal, per-element left-coset representative) for finite groups."""
    reps = []
    rep_of = [None] * group.order
    for x in group.elements():
        if rep_of[x] is None:
            reps.append(x)
            for m in s.members:
                rep_of[group.mul(x, m)] = x
    return tuple(reps), tuple(rep_of)


def coset_transversal(group: ConcreteGroup, s: Subgroup) -> tuple:
    """Canonical left-coset representatives, identity first."""
    _check_parent(group, s)
    if group.is_finite:
        return _coset_data(group, s)[0]
    if s.stride == 0:
        raise InfiniteIndexError("the trivial subgroup of Z has infinite index")
    return tuple(range(s.stride))


def left_coset_rep(group: ConcreteGroup, s: Subgroup, x: int) -> int:
    """The canonical representative r of the left coset x*S (so r^-1 x in S)."""
    _check_parent(group, s)
    group.check_element(x)
    if group.is_finite:
        return _coset_data(group, s)[1][x]
    if s.stride == 0:
        return x
    return x % s.stride


def index(group: ConcreteGroup, s: Subgroup) -> Optional[int]:
    """[G : S]; None means infinite."""
    _check_parent(group, s)
    if group.is_finite:
        return group.order // len(s.members)
    return None if s.stride == 0 else s.stride


def all_subgroups(group: ConcreteGroup) -> list:
    """Every subgroup of a small finite group, by closure enumeration."""
    if not group.is_finite:
        raise GroupValidationError("can only enumerate subgroups of finite groups")
    found = {frozenset({group.identity})}
    frontier = [frozenset({group.identity})]
    while frontier:
        base = frontier.pop()
        for g in group.elements():
            if g in base:
                continue
            grown = Subgroup.from_generators(group, tuple(base) + (g,)).members
            if grown not in found:
                found.add(grown)
                frontier.append(grown)
    return [Subgroup(group, members=m) for m in sorted(found, key=lambda m: (len(m), sorted(m)))]


# -- embeddings --------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """An injective homomorphism between carriers.

    Finite sources carry the full element map; an integer source is
    multiplication by a fixed nonzero integer (and the target is Z).
    """

    source: ConcreteGroup
    target: ConcreteGroup
    mapping: Optional[tuple] = None
    multiplier: Optional[int] = None

    def __post_init__(self):
        if self.source.is_finite:
            if self.mapping is None or len(self.mapping) != self.source.order:
                raise GroupValidationError("finite embedding needs one image per element")
            for x in self.mapping:
                self.target.check_element(x)
            if self.mapping[0] != self.target.identity:
                raise GroupValidationError("embedding must send identity to identity")
            seen = set()
            for x in self.source.elements():
                fx = self.mapping[x]
                if fx in seen:
                    raise GroupValidationError("embedding is not injective")
                seen.add(fx)
                for y in self.source.elements():
                    if self.mapping[self.source.mul(x, y)] != self.target.mul(fx, self.mapping[y]):
                        raise GroupValidationError("embedding is not a homomorphism")
        else:
            if self.target.is_finite:
                raise GroupValidationError("Z embeds in no finite table")
            if not self.multiplier:
                raise GroupValidationError("integer embedding needs a nonzero multiplier")

    def apply(self, x: int) -> int:
        if self.source.is_finite:
            return self.mapping[self.source.check_element(x)]
        return self.multiplier * x

    def section(self, y: int) -> int:
        """Inverse on the image; y must lie in the image."""
        if self.source.is_finite:
            return self.mapping.index(y)
        if y % self.multiplier:
            raise GroupValidationError(f"{y} is not in the image")
        return y // self.multiplier

    def image(self) -> Subgroup:
        if self.source.is_finite:
            return Subgroup(self.target, members=frozenset(self.mapping))
        return Subgroup.from_stride(self.target, abs(self.multiplier))

    def image_of(self, s: Subgroup) -> Subgroup:
        _check_parent(self.source, s)
        if self.source.is_finite:
            return Subgroup(self.target, members=frozenset(self.mapping[x] for x in s.members))
        return Subgroup.from_stride(self.target, abs(self.multiplier * s.stride))

    def preimage_of(self, t: Subgroup) -> Subgroup:
        _check_parent(self.target, t)
        if self.source.is_finite:
            return Subgroup(
                self.source,
                members=frozenset(x for x in self.source.elements() if t.contains(self.mapping[x])),
            )
        if t.stride == 0:
            return Subgroup.from_stride(self.source, 0)
        m = abs(self.multiplier)
        return Subgroup.from_stride(self.source, t.stride // math.gcd(t.stride, m))


@dataclass(frozen=True)
class PartialIso:
    """An isomorphism between two subgroups of one carrier group.

    Used for the stable-letter conjugation datum of an HNN splitting.  A
    finite version is a pair list over the domain; the integer version is
    the exact rule x -> x//m * n on the domain |m|*Z.
    """

    group: ConcreteGroup
    domain: Subgroup
    pairs: Optional[tuple] = None
    ratio: Optional[tuple] = None  # (n, m): x in mZ maps to x//m*n

    def __post_init__(self):
        _check_parent(self.group, self.domain)
        if self.group.is_finite:
            if self.pairs is None:
                raise GroupValidationError("finite partial isomorphism needs its pair list")
            fwd = dict(self.pairs)
            if set(fwd) != set(self.domain.members):
                raise GroupValidationError("pair list must cover exactly the domain")
            if len(set(fwd.values())) != len(fwd):
                raise GroupValidationError("partial isomorphism is not injective")
            for y in fwd.values():
                self.group.check_element(y)
            for x in fwd:
                for y in fwd:
                    xy = self.group.mul(x, y)
                    if fwd[xy] != self.group.mul(fwd[x], fwd[y]):
                        raise GroupValidationError("partial map is not a homomorphism")
            img = frozenset(fwd.values())
            Subgroup.from_members(self.group, img)  # image must itself be a subgroup
        else:
            if self.ratio is None:
                raise GroupValidationError("integer partial isomorphism needs its ratio")
            n, m = self.ratio
            if m == 0 or n == 0:
                raise GroupValidationError("ratio components must be nonzero")
            if self.domain.stride != abs(m):
                raise GroupValidationError("domain stride must match the ratio denominator")

    @staticmethod
    def from_map(group: ConcreteGroup, domain: Subgroup, images: dict) -> "PartialIso":
        return PartialIso(group, domain, pairs=tuple(sorted(images.items())))

    def _fwd(self):
        return dict(self.pairs)

    def apply(self, x: int) -> int:
        if not self.domain.contains(x):
            raise GroupValidationError(f"{x} is outside the domain")
        if self.group.is_finite:
            return self._fwd()[x]
        n, m = self.ratio
        return (x // m) * n

    def unapply(self, y: int) -> int:
        if self.group.is_finite:
            for x, fx in self.pairs:
                if fx == y:
                    return x
            raise GroupValidationError(f"{y} is outside the image")
        n, m = self.ratio
        if self.image().contains(y):
            return (y // n) * m
        raise GroupValidationError(f"{y} is outside the image")

    def image(self) -> Subgroup:
        if self.group.is_finite:
            return Subgroup(self.group, members=frozenset(dict(self.pairs).values()))
        return Subgroup.from_stride(self.group, abs(self.ratio[0]))

    def image_of(self, s: Subgroup) -> Subgroup:
        _check_parent(self.group, s)
        if self.group.is_finite:
            fwd = self._fwd()
            return Subgroup(self.group, members=frozenset(fwd[x] for x in s.members))
        n, m = self.ratio
        if s.stride == 0:
            return Subgroup.from_stride(self.group, 0)
        if s.stride % abs(m):
            raise GroupValidationError("subgroup is not inside the domain")
        return Subgroup.from_stride(self.group, abs(s.stride // m * n))

    def preimage_of(self, s: Subgroup) -> Subgroup:
        """{x in domain : apply(x) in s}."""
        _check_parent(self.group, s)
        if self.group.is_finite:
            fwd = self._fwd()
            return Subgroup(
                self.group, members=frozenset(x for x in fwd if s.contains(fwd[x]))
            )
        n, m = self.ratio
        if s.stride == 0:
            return Subgroup.from_stride(self.group, 0)
        # x = |m|k with nk = 0 mod stride
        k = s.stride // math.gcd(s.stride, abs(n))
        return Subgroup.from_stride(self.group, abs(m) * k)
