"""Group data for unitary similitude groups and their endoscopy bookkeeping.

Covers the tuple (n_1, ..., n_r) defining G(U*(n_1) x ... x U*(n_r)), real
signatures, elliptic endoscopic data (n_i^+, n_i^-) with even total minus
part, relative Weyl groups at split and inert places, and the stabilization
coefficients tau, k, d, iota and iota_{G,H}.  Everything is exact integer or
rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, factorial
from typing import List, Optional, Tuple

from .laurent import WeylElement, WeylShape, weyl_group


class ParityError(ValueError):
    """An endoscopic datum violates the even-minus-part constraint."""


@dataclass(frozen=True)
class GroupDatum:
    """The tuple (n_1, ..., n_r) of factor sizes, every n_i >= 1."""

    sizes: Tuple[int, ...]

    def __post_init__(self):
        if not self.sizes:
            raise ValueError("need at least one factor")
        if any(n < 1 for n in self.sizes):
            raise ValueError("factor sizes must be >= 1")
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))

    @property
    def r(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def qs(self) -> Tuple[int, ...]:
        return tuple(n // 2 for n in self.sizes)

    @property
    def all_even(self) -> bool:
        return all(n % 2 == 0 for n in self.sizes)


@dataclass(frozen=True)
class SignedGroupDatum:
    """Real signatures ((p_1,q_1),...,(p_r,q_r)) with p_i + q_i >= 1."""

    sig: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        sig = tuple((int(p), int(q)) for p, q in self.sig)
        if not sig:
            raise ValueError("need at least one factor")
        for p, q in sig:
            if p < 0 or q < 0 or p + q < 1:
                raise ValueError(f"bad signature ({p},{q})")
        object.__setattr__(self, "sig", sig)

    @property
    def datum(self) -> GroupDatum:
        return GroupDatum(tuple(p + q for p, q in self.sig))

    @property
    def r(self) -> int:
        return len(self.sig)

    @property
    def n(self) -> int:
        return sum(p + q for p, q in self.sig)


@dataclass(frozen=True)
class EndoTriple:
    """Per-factor splittings (n_i^+, n_i^-) with even total minus part."""

    nplus: Tuple[int, ...]
    nminus: Tuple[int, ...]

    def __post_init__(self):
        np_, nm = tuple(map(int, self.nplus)), tuple(map(int, self.nminus))
        if len(np_) != len(nm):
            raise ValueError("nplus and nminus must have the same length")
        if any(a < 0 for a in np_ + nm):
            raise ValueError("negative block size")
        if sum(nm) % 2 != 0:
            raise ParityError(f"sum of minus parts {sum(nm)} is odd")
        object.__setattr__(self, "nplus", np_)
        object.__setattr__(self, "nminus", nm)

    @property
    def r(self) -> int:
        return len(self.nplus)

    def sizes(self) -> Tuple[int, ...]:
        return tuple(a + b for a, b in zip(self.nplus, self.nminus))

    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(zip(self.nplus, self.nminus))

    def matches(self, g: GroupDatum) -> bool:
        return self.sizes() == g.sizes

    def group_datum(self) -> GroupDatum:
        """The datum of the endoscopic group (zero blocks contribute G_m and drop out)."""
        parts = [b for pair in self.pairs() for b in pair if b > 0]
        return GroupDatum(tuple(parts))


@dataclass(frozen=True)
class PlaceContext:
    """Local data at p: split/inert, d = [L:Q_p] and (when defined) a = [L:E_w].

    At a split place E_w = Q_p, so a = d.  At an inert place the group splits
    over L exactly when d is even, and then a = d/2; for odd d the degree a
    is undefined.
    """

    split: bool
    d: int = 1
    a: Optional[int] = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        expected = self.d if self.split else (self.d // 2 if self.d % 2 == 0 else None)
        if self.a is None:
            object.__setattr__(self, "a", expected)
        elif self.a != expected:
            raise ValueError(f"inconsistent degrees: d={self.d}, a={self.a}")

    @property
    def splits_over_l(self) -> bool:
        """Whether the unitary group splits over L (i.e. L contains E_w)."""
        return self.split or self.d % 2 == 0


def shape_for(g: GroupDatum, ctx: PlaceContext) -> WeylShape:
    return WeylShape(split=ctx.split, sizes=g.sizes)


def relative_weyl_group(g: GroupDatum, ctx: PlaceContext) -> Tuple[WeylElement, ...]:
    """All elements of the relative Weyl group of the maximal split torus.

    Split place: S_{n_1} x ... x S_{n_r}.  Inert place: the product of
    hyperoctahedral groups {+-1}^{q_i} x| S_{q_i}.
    """
    return weyl_group(shape_for(g, ctx))


# -- endoscopy ----------------------------------------------------------------


def _valid_tuples(g: GroupDatum) -> List[Tuple[Tuple[int, int], ...]]:
    choices = [[(n - m, m) for m in range(n + 1)] for n in g.sizes]
    return [t for t in product(*choices) if sum(m for _, m in t) % 2 == 0]


def _swap_class(t: Tuple[Tuple[int, int], ...]) -> List[Tuple[Tuple[int, int], ...]]:
    """All parity-valid tuples related to t by per-factor swaps."""
    out = set()
    r = len(t)
    for pattern in product((0, 1), repeat=r):
        cand = tuple((b, a) if s else (a, b) for (a, b), s in zip(t, pattern))
        if sum(m for _, m in cand) % 2 == 0:
            out.add(cand)
    return sorted(out)


def canonical_endo(t: EndoTriple) -> EndoTriple:
    """Lexicographically smallest member of the swap-isomorphism class."""
    cls = _swap_class(t.pairs())
    best = cls[0]
    return EndoTriple(tuple(a for a, _ in best), tuple(b for _, b in best))


def outer_automorphism_order(t: EndoTriple) -> int:
    """2^{|I|} where I is the set of factors with equal plus and minus parts."""
    return 2 ** sum(1 for a, b in t.pairs() if a == b)


def enumerate_endoscopic(g: GroupDatum) -> List[Tuple[EndoTriple, int]]:
    """One canonical representative per isomorphism class of elliptic data.

    Tuples are isomorphic exactly when they agree factorwise up to swapping
    (n_i^+, n_i^-); only swap combinations preserving the even total minus
    part stay inside the valid set.
    """
    seen = {}
    for t in _valid_tuples(g):
        key = _swap_class(t)[0]
        if key not in seen:
            trip = EndoTriple(tuple(a for a, _ in key), tuple(b for _, b in key))
            seen[key] = (trip, outer_automorphism_order(trip))
    return [seen[k] for k in sorted(seen)]


# -- numerical invariants -------------------------------------------------------


def tamagawa(g: GroupDatum) -> int:
    """2^r when all factor sizes are even, else 2^{r-1}."""
    return 2**g.r if g.all_even else 2 ** (g.r - 1)


def k_invariant(g: SignedGroupDatum) -> int:
    """2^{n-r-1} when all factor sizes are even, else 2^{n-r}."""
    d = g.datum
    return 2 ** (g.n - g.r - 1) if d.all_even else 2 ** (g.n - g.r)


def packet_size(p: int, q: int) -> int:
    """Number of discrete-series members sharing a parameter for GU(p, q)."""
    if p < 0 or q < 0 or p + q < 1:
        raise ValueError("need p, q >= 0 with p + q >= 1")
    if p != q:
        return comb(p + q, q)
    return factorial(2 * q) // (2 * factorial(q) ** 2)


def packet_size_signed(g: SignedGroupDatum) -> int:
    out = 1
    for p, q in g.sig:
        out *= packet_size(p, q)
    return out


def iota(g: GroupDatum, h: EndoTriple) -> Fraction:
    """tau(G) / (tau(H) * #outer automorphisms of the datum)."""
    if not h.matches(g):
        raise ValueError(f"endoscopic datum {h} does not match {g}")
    tau_h = tamagawa(h.group_datum())
    return Fraction(tamagawa(g), tau_h * outer_automorphism_order(h))


def pi0_symmetric_space(g: SignedGroupDatum) -> int:
    """Component count of the symmetric space: one factor 2 per p_i = q_i block."""
    return 2 ** sum(1 for p, q in g.sig if p == q and p + q >= 2)


def _signed_subset_sum(n_pos: int, n_neg: int, size: int) -> int:
    """Sum over subsets I of {1..n_pos+n_neg} of given size of (-1)^{|I ∩ minus block|}."""
    total = 0
    for k in range(size + 1):
        if k <= n_neg and size - k <= n_pos:
            total += (-1) ** k * comb(n_pos, size - k) * comb(n_neg, k)
    return total


def iota_gh(g: SignedGroupDatum, h: EndoTriple) -> Fraction:
    """The rational stabilization coefficient weighting each endoscopic group.

    iota(G,H) divided by the component count of the symmetric space, times
    the signed sum over per-factor index subsets of size p_i, each subset
    signed by the parity of its overlap with the minus block.
    """
    datum = g.datum
    if not h.matches(datum):
        raise ValueError(f"endoscopic datum {h} does not match {g}")
    sign_sum = 1
    for (p, _q), (npl, _nm) in zip(g.sig, h.pairs()):
        n_i = p + _q
        sign_sum *= _signed_subset_sum(npl, n_i - npl, p)
    return iota(datum, h) * Fraction(sign_sum, pi0_symmetric_space(g))


def brute_force_endoscopic_classes(g: GroupDatum) -> List[List[Tuple[Tuple[int, int], ...]]]:
    """Oracle: group all parity-valid tuples by pairwise factorwise equal-or-swap."""

    def related(t1, t2):
        return all(p1 == p2 or p1 == (p2[1], p2[0]) for p1, p2 in zip(t1, t2))

    tuples = _valid_tuples(g)
    classes: List[List[Tuple[Tuple[int, int], ...]]] = []
    for t in tuples:
        for cls in classes:
            if related(t, cls[0]):
                cls.append(t)
                break
        else:
            classes.append([t])
    return classes
