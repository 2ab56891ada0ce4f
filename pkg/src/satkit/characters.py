"""Discrete-series combinatorics: signed partition identities, Kostant
cohomology with weight truncation, Weyl characters, endoscopic weight
transfer and the Frobenius-trace subset sums.

All weight bookkeeping is integral: the half-sum of positive roots is
stored doubled (2*rho), and the truncation pairings are evaluated on
doubled weight vectors, so every comparison is exact integer arithmetic.
Conventions: positive roots are e_i - e_j for i < j, dominant weights are
non-increasing within each block, and the minimal-length coset
representatives are the permutations whose inverse is increasing on each
Levi block.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .laurent import QVAR, SIM, LaurentPoly, Var, tor
from .rootdata import EndoTriple, PlaceContext, SignedGroupDatum


class HypothesisError(ValueError):
    """The vector violates the positivity hypothesis of the rotation lemma."""


class WallError(ValueError):
    """A truncation pairing vanished; the weight sits on a wall."""


class UnsupportedCaseError(ValueError):
    """The requested case has undetermined signs and is deliberately not modelled."""


# -- signed partition identities ------------------------------------------------


def _scale_to_ints(lam: Sequence) -> List[int]:
    """Clear denominators: an exact positive rescaling preserving all sign tests."""
    fracs = [Fraction(x) for x in lam]
    denom = 1
    for x in fracs:
        denom = denom * x.denominator // _gcd(denom, x.denominator)
    return [int(x * denom) for x in fracs]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _prefix_positive_mask(v: Sequence[int]) -> int:
    """Bitmask with bit r-1 set iff v_1 + ... + v_r > 0."""
    mask = 0
    run = 0
    for r, x in enumerate(v):
        run += x
        if run > 0:
            mask |= 1 << r
    return mask


def partial_sum_signature(lam: Sequence) -> Fraction:
    """The weighted signed count of permutations with positive partial sums.

    Sum over subsets S of {1..n} containing n of (-1)^{|S|} / w_S times the
    number of permutations sigma with sum_{i<=r} sigma(lam)_i > 0 for every
    r in S, where w_S = r_1! * prod (r_{i+1} - r_i)!.  Exact rational
    evaluation; equals (-1)^n when every entry is positive and 0 otherwise.
    """
    lam = _scale_to_ints(lam)
    n = len(lam)
    if n == 0:
        raise ValueError("empty vector")
    mask_counts: Dict[int, int] = {}
    for p in permutations(lam):
        m = _prefix_positive_mask(p)
        mask_counts[m] = mask_counts.get(m, 0) + 1
    total = Fraction(0)
    for bits in range(2 ** (n - 1)):
        s_set = [r + 1 for r in range(n - 1) if bits >> r & 1] + [n]
        s_mask = 0
        for r in s_set:
            s_mask |= 1 << (r - 1)
        count = sum(c for m, c in mask_counts.items() if m & s_mask == s_mask)
        if count:
            w = factorial(s_set[0])
            for a, b in zip(s_set, s_set[1:]):
                w *= factorial(b - a)
            total += Fraction((-1) ** len(s_set) * count, w)
    return total


def ordered_partition_sum(lam: Sequence) -> int:
    """Signed count of ordered set partitions with positive prefix block sums.

    Each ordered partition (I_1, ..., I_k) of {1..n} whose block-sum vector
    has all prefix sums positive contributes (-1)^k.
    """
    lam = _scale_to_ints(lam)
    n = len(lam)
    if n == 0:
        raise ValueError("empty vector")

    def rec(remaining: Tuple[int, ...], running: int, blocks: int) -> int:
        if not remaining:
            return (-1) ** blocks
        total = 0
        for k in range(1, len(remaining) + 1):
            for block in combinations(remaining, k):
                sub = running + sum(lam[i] for i in block)
                if sub > 0:
                    left = tuple(i for i in remaining if i not in block)
                    total += rec(left, sub, blocks + 1)
        return total

    return rec(tuple(range(n)), 0, 0)


def two_partition_hypothesis(lam: Sequence) -> bool:
    """True when the total is positive and no 2-partition has both sums positive."""
    lam = _scale_to_ints(lam)
    n = len(lam)
    if sum(lam) <= 0:
        return False
    for bits in range(1, 2 ** (n - 1)):
        s1 = sum(lam[i] for i in range(n) if bits >> i & 1)
        s2 = sum(lam) - s1
        if s1 > 0 and s2 > 0:
            return False
    return True


def rotation_orbit_hits(lam: Sequence) -> int:
    """Number of cyclic rotations of lam with all prefix sums positive."""
    lam = _scale_to_ints(lam)
    n = len(lam)
    hits = 0
    for k in range(1, n + 1):
        rot = lam[k:] + lam[:k]
        if _prefix_positive_mask(rot) == (1 << n) - 1:
            hits += 1
    return hits


def positive_rotation_count(lam: Sequence) -> int:
    """Count permutations with all prefix sums positive; (n-1)! under the hypothesis.

    Requires a positive total and no 2-partition with both block sums
    positive (HypothesisError otherwise).
    """
    lam = _scale_to_ints(lam)
    if not lam:
        raise ValueError("empty vector")
    if not two_partition_hypothesis(lam):
        raise HypothesisError("total <= 0 or a 2-partition with positive parts exists")
    full = (1 << len(lam)) - 1
    return sum(1 for p in permutations(lam) if _prefix_positive_mask(p) == full)


# -- weights ---------------------------------------------------------------------


@dataclass(frozen=True)
class Weight:
    """A similitude weight together with one integer vector per factor."""

    a: int
    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(int(x) for x in b) for b in self.blocks))

    def is_dominant(self) -> bool:
        return all(all(b[i] >= b[i + 1] for i in range(len(b) - 1)) for b in self.blocks)

    def is_regular(self) -> bool:
        return all(all(b[i] > b[i + 1] for i in range(len(b) - 1)) for b in self.blocks)

    def block_total(self) -> int:
        return sum(sum(b) for b in self.blocks)


# -- Kostant cohomology with truncation -------------------------------------------


def _perm_parity(w: Sequence[int]) -> int:
    inv = 0
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            if w[i] > w[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _perm_inverse(w: Sequence[int]) -> Tuple[int, ...]:
    out = [0] * len(w)
    for pos, val in enumerate(w, start=1):
        out[val - 1] = pos
    return tuple(out)


def _apply_perm(w: Sequence[int], v: Sequence[int]) -> Tuple[int, ...]:
    """(w.v)_i = v_{w^{-1}(i)}."""
    inv = _perm_inverse(w)
    return tuple(v[inv[i] - 1] for i in range(len(v)))


def levi_blocks(n: int, s_set: Iterable[int]) -> List[List[int]]:
    """Position blocks of the standard Levi attached to a subset of {1..q}."""
    rs = sorted(set(int(r) for r in s_set))
    if any(r < 1 or 2 * r > n for r in rs):
        raise ValueError(f"invalid Levi subset {rs} for n={n}")
    cuts = [0] + rs
    blocks = [list(range(a + 1, b + 1)) for a, b in zip(cuts, cuts[1:])]
    top = rs[-1] if rs else 0
    middle = list(range(top + 1, n - top + 1))
    mirror = [[n + 1 - j for j in reversed(b)] for b in reversed(blocks)]
    out = blocks + ([middle] if middle else []) + mirror
    return [b for b in out if b]


def rho2(n: int) -> Tuple[int, ...]:
    """Twice the half-sum of positive roots: (n-1, n-3, ..., 1-n)."""
    return tuple(n - 1 - 2 * i for i in range(n))


def pairing_pi(vec: Sequence[int], r: int) -> int:
    """Pairing with the coweight diag(t I_r, 1, t^{-1} I_r): prefix minus mirrored suffix."""
    n = len(vec)
    return sum(vec[:r]) - sum(vec[n - r :])


def pairing_coroot(vec: Sequence[int], r: int) -> int:
    """Pairing with the r-th real coroot: vec_r - vec_{n+1-r}."""
    return vec[r - 1] - vec[len(vec) - r]


@dataclass(frozen=True)
class KostantDatum:
    """GU(p, q) together with a Levi subset S' of {1..q}."""

    p: int
    q: int
    s_set: frozenset

    def __post_init__(self):
        object.__setattr__(self, "s_set", frozenset(int(r) for r in self.s_set))
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise ValueError("need p + q >= 1")
        if any(r < 1 or r > self.q for r in self.s_set):
            raise ValueError(f"S'={sorted(self.s_set)} not inside 1..{self.q}")

    @property
    def n(self) -> int:
        return self.p + self.q

    def blocks(self) -> List[List[int]]:
        return levi_blocks(self.n, self.s_set)

    def levi_order(self) -> int:
        out = 1
        for b in self.blocks():
            out *= factorial(len(b))
        return out

    def coset_reps(self) -> List[Tuple[int, ...]]:
        """Permutations whose inverse is increasing on each Levi block."""
        blocks = self.blocks()
        reps = []
        for w in permutations(range(1, self.n + 1)):
            inv = _perm_inverse(w)
            ok = True
            for b in blocks:
                for x, y in zip(b, b[1:]):
                    if inv[x - 1] > inv[y - 1]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                reps.append(w)
        return reps

    def levi_group(self) -> List[Tuple[Tuple[int, ...], int]]:
        """Block permutations with their signs."""
        blocks = self.blocks()
        out = []
        for combo in product(*[list(permutations(b)) for b in blocks]):
            img = list(range(1, self.n + 1))
            det = 1
            for b, perm in zip(blocks, combo):
                for pos, val in zip(b, perm):
                    img[pos - 1] = val
                det *= _perm_parity([b.index(v) + 1 for v in perm])
            out.append((tuple(img), det))
        return out


@dataclass(frozen=True)
class KostantEntry:
    """One cohomology summand: the coset representative, its length, and the
    doubled highest weight 2(w(lambda) - rho) together with 2 w(lambda)."""

    degree: int
    omega: Tuple[int, ...]
    weight2: Tuple[int, ...]
    shifted2: Tuple[int, ...]

    @property
    def det(self) -> int:
        return _perm_parity(self.omega)


def _length(w: Sequence[int]) -> int:
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def kostant_cohomology(kd: KostantDatum, weight: Weight) -> List[KostantEntry]:
    """Kostant's decomposition of the nilpotent-radical cohomology.

    The input weight is the rho-shifted infinitesimal character (dominant
    regular); each minimal-length coset representative w contributes the
    Levi-dominant summand with doubled highest weight 2 w(weight) - 2 rho
    in degree equal to the length of w.
    """
    if len(weight.blocks) != 1 or len(weight.blocks[0]) != kd.n:
        raise ValueError("weight must have a single block of length p + q")
    if not (weight.is_dominant() and weight.is_regular()):
        raise ValueError("weight must be dominant regular")
    lam2 = tuple(2 * x for x in weight.blocks[0])
    r2 = rho2(kd.n)
    out = []
    for w in kd.coset_reps():
        shifted2 = _apply_perm(w, lam2)
        weight2 = tuple(x - y for x, y in zip(shifted2, r2))
        out.append(KostantEntry(_length(w), w, weight2, shifted2))
    out.sort(key=lambda e: (e.degree, e.omega))
    return out


def truncate_cohomology(
    entries: Sequence[KostantEntry], s_set: Iterable[int], direction: str
) -> List[KostantEntry]:
    """Keep entries whose shifted weight pairs strictly positively (or
    negatively) with every truncation coweight indexed by S'.

    A vanishing pairing is a wall collision and raises WallError.
    """
    if direction not in (">", "<"):
        raise ValueError("direction must be '>' or '<'")
    rs = sorted(set(int(r) for r in s_set))
    kept = []
    for e in entries:
        ok = True
        for r in rs:
            val = pairing_pi(e.shifted2, r)
            if val == 0:
                raise WallError(f"pairing with coweight {r} vanishes for {e.omega}")
            if (val > 0) != (direction == ">"):
                ok = False
                break
        if ok:
            kept.append(e)
    return kept


# -- the signed weight-sum identity engine ----------------------------------------


class SignedWeightSum:
    """Finite multiset of weight vectors with exact signed multiplicities."""

    def __init__(self):
        self._entries: Dict[Tuple[int, ...], Fraction] = {}

    def add(self, vec: Tuple[int, ...], coeff) -> None:
        c = self._entries.get(vec, Fraction(0)) + Fraction(coeff)
        if c:
            self._entries[vec] = c
        else:
            self._entries.pop(vec, None)

    def items(self):
        return sorted(self._entries.items())

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        return isinstance(other, SignedWeightSum) and self._entries == other._entries

    def difference(self, other: "SignedWeightSum") -> List[Tuple[Tuple[int, ...], Fraction]]:
        keys = set(self._entries) | set(other._entries)
        out = []
        for k in sorted(keys):
            d = self._entries.get(k, Fraction(0)) - other._entries.get(k, Fraction(0))
            if d:
                out.append((k, d))
        return out


def _sigma_act(vec: Sequence[int], sigma: Sequence[int], s: int) -> Tuple[int, ...]:
    """Permute the first s linear slots and their mirrors simultaneously."""
    n = len(vec)
    inv = _perm_inverse(sigma)
    out = list(vec)
    for j in range(1, s + 1):
        src = inv[j - 1]
        out[j - 1] = vec[src - 1]
        out[n - j] = vec[n - src]
    return tuple(out)


def _w_s(rs: Sequence[int]) -> int:
    out = factorial(rs[0])
    for a, b in zip(rs, rs[1:]):
        out *= factorial(b - a)
    return out


def verify_phi_identity(p: int, q: int, s: int, weight: Weight, direction: str = ">") -> Dict:
    """Exact multiset identity between the truncated-Kostant side and the
    coroot-filtered Weyl sum.

    Side A: over Levi subsets S' of {1..s} containing s, with sign
    (-1)^{s-|S'|} and weight 1/w_{S'}, the Weyl-orbit expansions of the
    truncated Kostant entries, summed over the translates of the evaluation
    point by the linear-slot permutations (which act with determinant one,
    moving a slot together with its mirror).  Side B: the full Weyl sum
    filtered by strict positivity (resp. negativity) of the pairings with
    the first s real coroots.  The report records the exact difference.
    """
    if direction not in (">", "<"):
        raise ValueError("direction must be '>' or '<'")
    n = p + q
    if not 1 <= s <= q:
        raise ValueError("need 1 <= s <= q")
    if len(weight.blocks) != 1 or len(weight.blocks[0]) != n:
        raise ValueError("weight must have a single block of length p + q")
    if not (weight.is_dominant() and weight.is_regular()):
        raise ValueError("weight must be dominant regular")
    lam2 = tuple(2 * x for x in weight.blocks[0])
    want_pos = direction == ">"

    side_a = SignedWeightSum()
    for bits in range(2 ** (s - 1)):
        rs = sorted([r + 1 for r in range(s - 1) if bits >> r & 1] + [s])
        kd = KostantDatum(p, q, frozenset(rs))
        entries = kostant_cohomology(kd, weight)
        survivors = truncate_cohomology(entries, rs, direction)
        levi = kd.levi_group()
        coeff_base = Fraction((-1) ** (s - len(rs)), _w_s(rs))
        for e in survivors:
            for w_m, det_m in levi:
                expanded = _apply_perm(w_m, e.shifted2)
                coeff = coeff_base * det_m * e.det
                for sigma in permutations(range(1, s + 1)):
                    side_a.add(_sigma_act(expanded, sigma, s), coeff)

    side_b = SignedWeightSum()
    for w in permutations(range(1, n + 1)):
        v = _apply_perm(w, lam2)
        ok = True
        for r in range(1, s + 1):
            val = pairing_coroot(v, r)
            if val == 0:
                raise WallError(f"coroot wall at r={r}")
            if (val > 0) != want_pos:
                ok = False
                break
        if ok:
            side_b.add(v, _perm_parity(w))

    diff = side_a.difference(side_b)
    return {
        "p": p,
        "q": q,
        "s": s,
        "direction": direction,
        "side_a_terms": len(side_a),
        "side_b_terms": len(side_b),
        "equal": not diff,
        "differences": [(list(k), str(c)) for k, c in diff],
    }


# -- Weyl characters ----------------------------------------------------------------


def _alternant(exps: Sequence[int], vars_: Sequence[Var]) -> LaurentPoly:
    n = len(vars_)
    total = LaurentPoly.zero()
    for w in permutations(range(n)):
        sign = _perm_parity([i + 1 for i in w])
        mono = {vars_[i]: exps[w[i]] for i in range(n) if exps[w[i]]}
        total = total + LaurentPoly.monomial(mono, coeff=sign)
    return total


def _lex_lead(f: LaurentPoly, vars_: Sequence[Var]):
    best = None
    for m, c in f.terms():
        d = dict(m)
        key = tuple(d.get(v, 0) for v in vars_)
        if best is None or key > best[0]:
            best = (key, m, c)
    return best


def exact_divide(num: LaurentPoly, den: LaurentPoly, vars_: Sequence[Var]) -> LaurentPoly:
    """Exact division of Laurent polynomials by lex-leading-term reduction."""
    quot = LaurentPoly.zero()
    rem = num
    lead_den = _lex_lead(den, vars_)
    if lead_den is None:
        raise ZeroDivisionError("division by zero polynomial")
    dkey, dmono, dcoeff = lead_den
    while not rem.is_zero():
        rkey, rmono, rcoeff = _lex_lead(rem, vars_)
        qexps = {v: rk - dk for v, rk, dk in zip(vars_, rkey, dkey) if rk - dk}
        term = LaurentPoly.monomial(qexps, coeff=rcoeff / dcoeff)
        quot = quot + term
        rem = rem - term * den
    return quot


def weyl_character(
    size: int, block_weight: Sequence[int], vars_: Optional[Sequence[Var]] = None
) -> LaurentPoly:
    """Schur-type character of the dominant block weight as a Laurent polynomial.

    Computed as the bialternant quotient; the division is exact precisely
    for dominant weights, and a non-dominant input raises ValueError.
    """
    lam = tuple(int(x) for x in block_weight)
    if len(lam) != size:
        raise ValueError("weight length must equal the block size")
    if any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError("weight must be dominant (non-increasing)")
    if vars_ is None:
        vars_ = [tor(1, j) for j in range(1, size + 1)]
    delta = tuple(range(size - 1, -1, -1))
    num = _alternant([l + d for l, d in zip(lam, delta)], vars_)
    den = _alternant(delta, vars_)
    return exact_divide(num, den, list(vars_))


# -- endoscopic weight transfer -------------------------------------------------------


def endoscopic_weight_transfer(
    weight: Weight, h: EndoTriple, omega, c_odd: int
) -> Weight:
    """Transfer a dominant highest weight along an endoscopic datum.

    omega supplies, per factor, the sorted index subset routed to the plus
    block; the transferred entries are shifted by the slot displacement and
    the odd parameter C:

        a+_{i,s} = a_{i,j_s} + s - j_s + n_i^-(1-C)/2
        a-_{i,t} = a_{i,k_t} + t - k_t + n_i^+(1+C)/2.

    The output interleaves plus and minus blocks; it is dominant, strictly
    so when the input is regular, and preserves the total block sum.
    """
    if c_odd % 2 == 0:
        raise ValueError("the parameter C must be odd")
    if len(weight.blocks) != h.r:
        raise ValueError("one block per factor required")
    if not weight.is_dominant():
        raise ValueError("weight must be dominant")
    out_blocks: List[Tuple[int, ...]] = []
    for i, ((npl, nmi), block) in enumerate(zip(h.pairs(), weight.blocks)):
        n_i = npl + nmi
        if len(block) != n_i:
            raise ValueError(f"block {i + 1} has wrong length")
        subset = tuple(sorted(int(x) for x in omega[i]))
        if len(subset) != npl or any(x < 1 or x > n_i for x in subset):
            raise ValueError(f"omega[{i}] must be a size-{npl} subset of 1..{n_i}")
        if len(set(subset)) != npl:
            raise ValueError("omega subsets must have distinct entries")
        complement = tuple(j for j in range(1, n_i + 1) if j not in set(subset))
        plus = tuple(
            block[j - 1] + s - j + nmi * (1 - c_odd) // 2
            for s, j in enumerate(subset, start=1)
        )
        minus = tuple(
            block[k - 1] + t - k + npl * (1 + c_odd) // 2
            for t, k in enumerate(complement, start=1)
        )
        out_blocks.extend([plus, minus])
    return Weight(weight.a, tuple(out_blocks))


# -- Frobenius traces -----------------------------------------------------------------


def frobenius_trace(
    g: SignedGroupDatum,
    m: int,
    ctx: PlaceContext,
    field: str = "E",
    params: Optional[Mapping[Var, Fraction]] = None,
):
    """Subset-sum expansion of the trace of the m-th Frobenius power on the
    minuscule representation attached to the signature.

    Returns z^{-m} times the sum over per-factor subsets J_i of size p_i of
    the products of z_{i,j}^{-m deg}, with deg the local degree of the
    reflex field.  Only the all-plus-signs case is modelled: for the
    rational reflex field at an inert place with odd m the signs are not
    pinned down, and UnsupportedCaseError is raised.
    """
    if field not in ("Q", "E"):
        raise ValueError("field must be 'Q' or 'E'")
    if field == "Q" and not ctx.split and m % 2 != 0:
        raise UnsupportedCaseError(
            "inert place, rational reflex field and odd power: signs undetermined"
        )
    deg = 2 if (field == "E" and not ctx.split) else 1
    total = LaurentPoly.zero()
    subset_choices = [combinations(range(1, p + q + 1), p) for p, q in g.sig]
    for subsets in product(*subset_choices):
        exps: Dict[Var, int] = {SIM: -m}
        for i, subset in enumerate(subsets, start=1):
            for j in subset:
                exps[tor(i, j)] = -m * deg
        total = total + LaurentPoly.monomial(exps)
    if params is None:
        return total
    assign = dict(params)
    assign.setdefault(QVAR, Fraction(1))
    return total.evaluate(assign)


# -- nonsingular incidence subsets ------------------------------------------------------


def _det_bareiss(rows: List[List[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(rows)
    a = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def nonsingular_subsets(n: int, p: int) -> Tuple[List[Tuple[int, ...]], int]:
    """n subsets of {1..n}, each of size p, with nonsingular incidence matrix.

    Built by the inductive construction: for p <= n-2 prepend {1..p} and
    recurse on {2..n}; for p = n-1 take all complements of singletons.  The
    exact determinant of the 0/1 incidence matrix is returned alongside.
    """
    if not 1 <= p <= max(1, n - 1):
        raise ValueError(f"need 1 <= p <= max(1, n-1), got p={p}, n={n}")

    def build(size: int, k: int, offset: int) -> List[Tuple[int, ...]]:
        if size == 1:
            return [(offset + 1,)]
        if k == size - 1:
            return [
                tuple(offset + j for j in range(1, size + 1) if j != i)
                for i in range(1, size + 1)
            ]
        head = tuple(offset + j for j in range(1, k + 1))
        return [head] + build(size - 1, k, offset + 1)

    subsets = build(n, p, 0)
    rows = [[1 if j in s else 0 for j in range(1, n + 1)] for s in subsets]
    return subsets, _det_bareiss(rows)
