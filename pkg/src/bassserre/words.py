"""Words and canonical normal forms over a splitting presentation.

Two word shapes exist: alternating-syllable words over an amalgam, and
stable-letter words g0 t^e1 g1 ... t^ek gk over an HNN datum.  Both
normal forms are computed by a single left-to-right pass that pushes
coset residues rightward; the rightmost position absorbs the residue.

Amalgam normal form: syllables strictly alternate factors; every
syllable except the last is the canonical non-trivial left-coset
representative modulo the embedded edge group; a lone edge-group element
is tagged to factor A.  HNN normal form: no pinch t^-1 g t with g in H
and no pinch t g t^-1 with g in theta(H); each g_i before t^+1 is the
canonical left-coset representative modulo H, before t^-1 modulo
theta(H); the final g is unconstrained.  Two words are equal in the
group iff their normal forms coincide.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

from .errors import (
    GroupValidationError,
    PresentationMismatchError,
    WordDomainError,
)
from .groups import (
    ConcreteGroup,
    Embedding,
    PartialIso,
    Subgroup,
    left_coset_rep,
    trivial_group,
)

SIDE_A = "A"
SIDE_B = "B"


class SplittingPresentation:
    """Base class; see AmalgamPresentation and HnnPresentation."""

    kind: str

    def identity_word(self):
        raise NotImplementedError


class AmalgamPresentation(SplittingPresentation):
    """Two factor groups glued along an embedded common edge group."""

    kind = "amalgam"

    def __init__(self, factor_a: ConcreteGroup, factor_b: ConcreteGroup,
                 edge: ConcreteGroup, emb_a: Embedding, emb_b: Embedding):
        if emb_a.source != edge or emb_b.source != edge:
            raise GroupValidationError("embeddings must start at the edge group")
        if emb_a.target != factor_a or emb_b.target != factor_b:
            raise GroupValidationError("embeddings must land in the factors")
        self.factor_a = factor_a
        self.factor_b = factor_b
        self.edge = edge
        self.emb_a = emb_a
        self.emb_b = emb_b
        self.embedded_a = emb_a.image()
        self.embedded_b = emb_b.image()

    def factor(self, side: str) -> ConcreteGroup:
        return self.factor_a if side == SIDE_A else self.factor_b

    def emb(self, side: str) -> Embedding:
        return self.emb_a if side == SIDE_A else self.emb_b

    def embedded(self, side: str) -> Subgroup:
        return self.embedded_a if side == SIDE_A else self.embedded_b

    @staticmethod
    def other(side: str) -> str:
        return SIDE_B if side == SIDE_A else SIDE_A

    def transfer(self, elt: int, from_side: str, to_side: str) -> int:
        """Re-express an embedded edge-group element in the other factor."""
        if from_side == to_side:
            return elt
        return self.emb(to_side).apply(self.emb(from_side).section(elt))

    def word(self, syllables: Iterable[Tuple[str, int]]) -> "AmalgamWord":
        syls = []
        for side, elt in syllables:
            if side not in (SIDE_A, SIDE_B):
                raise WordDomainError(f"unknown side {side!r}")
            if not self.factor(side).is_element(elt):
                raise WordDomainError(f"{elt!r} is not in factor {side}")
            syls.append((side, elt))
        return normalize(AmalgamWord(self, tuple(syls)))

    def identity_word(self) -> "AmalgamWord":
        return AmalgamWord(self, (), normalized=True)

    def __repr__(self):
        return f"AmalgamPresentation({self.factor_a!r} *_{self.edge!r} {self.factor_b!r})"


def free_product(factor_a: ConcreteGroup, factor_b: ConcreteGroup) -> AmalgamPresentation:
    """The amalgam of two groups over the trivial edge group."""
    c1 = trivial_group()
    return AmalgamPresentation(
        factor_a, factor_b, c1,
        Embedding(c1, factor_a, mapping=(factor_a.identity,)),
        Embedding(c1, factor_b, mapping=(factor_b.identity,)),
    )


class HnnPresentation(SplittingPresentation):
    """A base group with a stable letter conjugating H onto theta(H)."""

    kind = "hnn"

    def __init__(self, base: ConcreteGroup, assoc: Subgroup, theta: PartialIso):
        if assoc.parent != base:
            raise GroupValidationError("associated subgroup must live in the base group")
        if theta.group != base or theta.domain != assoc:
            raise GroupValidationError("theta must be defined exactly on the associated subgroup")
        self.base = base
        self.assoc = assoc
        self.theta = theta
        self.theta_image = theta.image()
        self.bs_params: Optional[Tuple[int, int]] = None

    @staticmethod
    def bs(m: int, n: int) -> "HnnPresentation":
        """The one-relator datum t^-1 b^m t = b^n over the integers."""
        if m == 0 or n == 0:
            raise GroupValidationError("both parameters must be nonzero")
        z = ConcreteGroup("int")
        h = Subgroup.from_stride(z, m)
        p = HnnPresentation(z, h, PartialIso(z, h, ratio=(n, m)))
        p.bs_params = (m, n)
        return p

    def word(self, letters: Iterable[Tuple[str, int]]) -> "HnnWord":
        """Build and normalize from letters ('g', element) and ('t', +-1)."""
        checked = []
        for kind, val in letters:
            if kind == "g":
                if not self.base.is_element(val):
                    raise WordDomainError(f"{val!r} is not in the base group")
            elif kind == "t":
                if val not in (1, -1):
                    raise WordDomainError("stable letter exponent must be +1 or -1")
            else:
                raise WordDomainError(f"unknown letter kind {kind!r}")
            checked.append((kind, val))
        return _normalize_hnn_letters(self, checked)

    def identity_word(self) -> "HnnWord":
        return HnnWord(self, self.base.identity, (), normalized=True)

    def __repr__(self):
        if self.bs_params:
            return f"HnnPresentation(BS{self.bs_params})"
        return f"HnnPresentation({self.base!r}, H={self.assoc!r})"


@dataclass(frozen=True)
class AmalgamWord:
    presentation: AmalgamPresentation
    syllables: Tuple[Tuple[str, int], ...]
    normalized: bool = field(default=False, compare=False)

    def __mul__(self, other):
        return multiply(self, other)

    def inverse(self):
        return invert(self)

    def is_identity(self) -> bool:
        return not normalize(self).syllables

    def __str__(self):
        if not self.syllables:
            return "1"
        return ".".join(f"{s}{e}" for s, e in self.syllables)


@dataclass(frozen=True)
class HnnWord:
    presentation: HnnPresentation
    head: int
    tail: Tuple[Tuple[int, int], ...]  # (epsilon, following base element)
    normalized: bool = field(default=False, compare=False)

    def __mul__(self, other):
        return multiply(self, other)

    def inverse(self):
        return invert(self)

    def is_identity(self) -> bool:
        w = normalize(self)
        return not w.tail and w.head == w.presentation.base.identity

    def letters(self) -> list:
        out = [("g", self.head)] if self.head != self.presentation.base.identity else []
        for eps, g in self.tail:
            out.append(("t", eps))
            if g != self.presentation.base.identity:
                out.append(("g", g))
        return out

    def __str__(self):
        parts = []
        if self.head != 0:
            parts.append(f"g{self.head}")
        for eps, g in self.tail:
            parts.append("t" if eps == 1 else "t^-1")
            if g != 0:
                parts.append(f"g{g}")
        return ".".join(parts) if parts else "1"


GroupWord = AmalgamWord | HnnWord


def _same_presentation(w1: GroupWord, w2: GroupWord):
    if w1.presentation is not w2.presentation:
        raise PresentationMismatchError("words over different presentations")


# -- amalgam normalization ---------------------------------------------------


def _push_syllable(p: AmalgamPresentation, stack: list, side: str, elt: int):
    fac = p.factor(side)
    if elt == fac.identity:
        return
    if stack and stack[-1][0] == side:
        prev_side, prev = stack.pop()
        _push_syllable(p, stack, side, fac.mul(prev, elt))
        return
    if stack and p.embedded(stack[-1][0]).contains(stack[-1][1]):
        c_side, c = stack.pop()
        _push_syllable(p, stack, side, fac.mul(p.transfer(c, c_side, side), elt))
        return
    stack.append((side, elt))


def _normalize_amalgam(p: AmalgamPresentation, syllables: Sequence) -> AmalgamWord:
    stack: list = []
    for side, elt in syllables:
        _push_syllable(p, stack, side, elt)
    # a trailing edge-group syllable folds into the previous factor syllable
    if len(stack) >= 2 and p.embedded(stack[-1][0]).contains(stack[-1][1]):
        c_side, c = stack.pop()
        prev_side, prev = stack.pop()
        _push_syllable(
            p, stack, prev_side,
            p.factor(prev_side).mul(prev, p.transfer(c, c_side, prev_side)),
        )
    # a lone edge-group element lives canonically in factor A
    if len(stack) == 1:
        side, elt = stack[0]
        if side == SIDE_B and p.embedded_b.contains(elt):
            stack[0] = (SIDE_A, p.transfer(elt, SIDE_B, SIDE_A))
    # left-to-right coset canonicalization; the residue drifts right
    out = []
    carry = None  # edge-group element waiting to enter the next syllable
    for i, (side, elt) in enumerate(stack):
        fac = p.factor(side)
        if carry is not None:
            elt = fac.mul(p.emb(side).apply(carry), elt)
            carry = None
        if i < len(stack) - 1:
            rep = left_coset_rep(fac, p.embedded(side), elt)
            carry = p.emb(side).section(fac.mul(fac.inv(rep), elt))
            out.append((side, rep))
        else:
            out.append((side, elt))
    return AmalgamWord(p, tuple(out), normalized=True)


# -- HNN normalization -------------------------------------------------------


def _normalize_hnn_letters(p: HnnPresentation, letters: Sequence) -> HnnWord:
    base = p.base
    state_head = base.identity
    tail: list = []  # mutable [epsilon, g] blocks, pinch-free at all times

    def add_g(x):
        nonlocal state_head
        if not tail:
            state_head = base.mul(state_head, x)
        else:
            tail[-1][1] = base.mul(tail[-1][1], x)

    def add_t(eps):
        if tail:
            e_prev, g_prev = tail[-1]
            if e_prev == -eps:
                if e_prev == -1 and p.assoc.contains(g_prev):
                    tail.pop()
                    add_g(p.theta.apply(g_prev))
                    return
                if e_prev == 1 and p.theta_image.contains(g_prev):
                    tail.pop()
                    add_g(p.theta.unapply(g_prev))
                    return
        tail.append([eps, base.identity])

    for kind, val in letters:
        if kind == "g":
            add_g(val)
        else:
            add_t(val)

    # left-to-right coset canonicalization; the residue drifts right
    for i in range(len(tail)):
        eps = tail[i][0]
        sub = p.assoc if eps == 1 else p.theta_image
        g_prev = state_head if i == 0 else tail[i - 1][1]
        rep = left_coset_rep(base, sub, g_prev)
        resid = base.mul(base.inv(rep), g_prev)
        moved = p.theta.apply(resid) if eps == 1 else p.theta.unapply(resid)
        if i == 0:
            state_head = rep
        else:
            tail[i - 1][1] = rep
        tail[i][1] = base.mul(moved, tail[i][1])

    return HnnWord(p, state_head, tuple((e, g) for e, g in tail), normalized=True)


def _hnn_letters(w: HnnWord) -> list:
    out = [("g", w.head)]
    for eps, g in w.tail:
        out.append(("t", eps))
        out.append(("g", g))
    return out


def _hnn_letters_inverse(w: HnnWord) -> list:
    base = w.presentation.base
    out = []
    for eps, g in reversed(w.tail):
        out.append(("g", base.inv(g)))
        out.append(("t", -eps))
    out.append(("g", base.inv(w.head)))
    return out


# -- public operations --------------------------------------------------------


def normalize(w: GroupWord) -> GroupWord:
    """Canonical normal form; idempotent; equality of forms is group equality."""
    if w.normalized:
        return w
    if isinstance(w, AmalgamWord):
        return _normalize_amalgam(w.presentation, w.syllables)
    return _normalize_hnn_letters(w.presentation, _hnn_letters(w))


def multiply(w1: GroupWord, w2: GroupWord) -> GroupWord:
    _same_presentation(w1, w2)
    if isinstance(w1, AmalgamWord):
        return _normalize_amalgam(w1.presentation, w1.syllables + w2.syllables)
    return _normalize_hnn_letters(w1.presentation, _hnn_letters(w1) + _hnn_letters(w2))


def invert(w: GroupWord) -> GroupWord:
    if isinstance(w, AmalgamWord):
        p = w.presentation
        syls = tuple((s, p.factor(s).inv(e)) for s, e in reversed(w.syllables))
        return _normalize_amalgam(p, syls)
    return _normalize_hnn_letters(w.presentation, _hnn_letters_inverse(w))


def power(w: GroupWord, n: int) -> GroupWord:
    """w**n by repeated squaring."""
    if n < 0:
        return power(invert(w), -n)
    acc = w.presentation.identity_word()
    base = normalize(w)
    while n:
        if n & 1:
            acc = multiply(acc, base)
        base = multiply(base, base)
        n >>= 1
    return acc


def syllable_length(w: GroupWord) -> int:
    if not isinstance(w, AmalgamWord):
        raise WordDomainError("syllable length is an amalgam notion")
    return len(normalize(w).syllables)


def tau_count(w: GroupWord) -> int:
    if not isinstance(w, HnnWord):
        raise WordDomainError("stable-letter count is an HNN notion")
    return len(normalize(w).tail)


def _amalgam_cyclically_reduced(w: AmalgamWord) -> bool:
    s = w.syllables
    return len(s) <= 1 or s[0][0] != s[-1][0]


def _hnn_cyclic_pinch(w: HnnWord):
    """The rotation word to conjugate by if the cyclic reading pinches."""
    if not w.tail:
        return None
    p = w.presentation
    eps_first = w.tail[0][0]
    eps_last, g_last = w.tail[-1]
    if eps_last != -eps_first:
        return None
    seam = p.base.mul(g_last, w.head)
    if eps_last == -1 and p.assoc.contains(seam):
        pass
    elif eps_last == 1 and p.theta_image.contains(seam):
        pass
    else:
        return None
    return HnnWord(p, w.head, ((eps_first, p.base.identity),))


def cyclically_reduce(w: GroupWord) -> Tuple[GroupWord, GroupWord]:
    """(core, conjugator) with w = conjugator * core * conjugator^-1."""
    w = normalize(w)
    p = w.presentation
    conj = p.identity_word()
    if isinstance(w, AmalgamWord):
        while not _amalgam_cyclically_reduced(w):
            side, elt = w.syllables[0]
            first = AmalgamWord(p, ((side, elt),))
            w = multiply(multiply(invert(first), w), first)
            conj = multiply(conj, first)
        return w, conj
    while True:
        rot = _hnn_cyclic_pinch(w)
        if rot is None:
            return w, conj
        w = multiply(multiply(invert(rot), w), rot)
        conj = multiply(conj, rot)


def assert_normal_form(w: GroupWord):
    """Structural scan of the normal-form invariants (used by the tests)."""
    w = normalize(w)
    p = w.presentation
    if isinstance(w, AmalgamWord):
        s = w.syllables
        for i in range(len(s) - 1):
            if s[i][0] == s[i + 1][0]:
                raise AssertionError("sides fail to alternate")
        for i, (side, elt) in enumerate(s):
            if elt == p.factor(side).identity:
                raise AssertionError("identity syllable survived")
            if i < len(s) - 1:
                if p.embedded(side).contains(elt):
                    raise AssertionError("non-final syllable inside the edge group")
                if left_coset_rep(p.factor(side), p.embedded(side), elt) != elt:
                    raise AssertionError("non-final syllable is not a coset representative")
        return
    for i, (eps, g) in enumerate(w.tail):
        g_prev = w.head if i == 0 else w.tail[i - 1][1]
        sub = p.assoc if eps == 1 else p.theta_image
        if left_coset_rep(p.base, sub, g_prev) != g_prev:
            raise AssertionError("letter before the stable letter is not a coset representative")
        if i > 0 and w.tail[i - 1][0] == -eps and sub.contains(g_prev):
            raise AssertionError("pinch survived normalization")
