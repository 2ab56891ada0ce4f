"""Exact multivariate Laurent polynomial arithmetic with Weyl-group actions.

Polynomials have coefficients in Q adjoined a formal invertible symbol q
(standing for p^{1/2}, so half-integral powers of p are always integral in
q).  Internally q is carried as a reserved variable, which keeps all ring
operations uniform; the canonical JSON form pulls it back out into each
term's coefficient.

Variables are identified by small tuples:

    QVAR            = ("q",)        the formal half-power symbol
    SIM             = ("s",)        the global similitude variable (X, X', Z)
    sim_factor(i)   = ("sf", i)     per-factor similitude, used at inert places
    tor(i, j)       = ("t", i, j)   the torus variable X_{i,j}

Tuple comparison realises the canonical variable order
Sim < SimFactor(1) < ... < Tor(1,1) < Tor(1,2) < ...
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Tuple

INT32_MAX = 2**31 - 1

Var = Tuple
Monomial = Tuple  # sorted tuple of (Var, int) pairs with nonzero exponents

QVAR: Var = ("q",)
SIM: Var = ("s",)


def sim_factor(i: int) -> Var:
    return ("sf", i)


def tor(i: int, j: int) -> Var:
    return ("t", i, j)


class ExponentOverflowError(OverflowError):
    """An exponent left the checked 32-bit range."""


class SubstitutionError(ValueError):
    """A substitution map is missing a variable or has a non-monomial image."""


def _check_exp(e: int) -> int:
    if abs(e) > INT32_MAX:
        raise ExponentOverflowError(f"exponent {e} exceeds 32-bit range")
    return e


def _mono(pairs: Iterable[Tuple[Var, int]]) -> Monomial:
    acc: dict = {}
    for v, e in pairs:
        acc[v] = acc.get(v, 0) + e
    return tuple(sorted((v, _check_exp(e)) for v, e in acc.items() if e != 0))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return _mono(list(a) + list(b))


def mono_pow(a: Monomial, k: int) -> Monomial:
    return _mono((v, e * k) for v, e in a)


class LaurentPoly:
    """Immutable Laurent polynomial; terms map monomials to rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Fraction]] = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({(): Fraction(1)})

    @staticmethod
    def const(c) -> "LaurentPoly":
        return LaurentPoly({(): Fraction(c)})

    @staticmethod
    def var(v: Var, e: int = 1) -> "LaurentPoly":
        return LaurentPoly({_mono([(v, e)]): Fraction(1)})

    @staticmethod
    def monomial(exps: Mapping[Var, int], coeff=1, q_exp: int = 0) -> "LaurentPoly":
        pairs = list(exps.items())
        if q_exp:
            pairs.append((QVAR, q_exp))
        return LaurentPoly({_mono(pairs): Fraction(coeff)})

    @staticmethod
    def q_power(k: int) -> "LaurentPoly":
        return LaurentPoly.var(QVAR, k)

    # -- inspection --------------------------------------------------------

    def terms(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_term(self) -> bool:
        return len(self._terms) == 1

    def variables(self, include_q: bool = False):
        out = set()
        for m in self._terms:
            for v, _ in m:
                if include_q or v != QVAR:
                    out.add(v)
        return out

    def coeff(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_term():
                raise ValueError("negative power of a non-monomial")
            ((m, c),) = self._terms.items()
            if c * c != 1:
                raise ValueError("negative power needs a unit coefficient")
            return LaurentPoly({mono_pow(m, k): c**k})
        out = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        return f"LaurentPoly({pretty(self)!r})"

    def evaluate(self, assign: Mapping[Var, Fraction]) -> Fraction:
        """Evaluate at exact rational values (every variable incl. q needs a value)."""
        total = Fraction(0)
        for m, c in self._terms.items():
            val = c
            for v, e in m:
                if v not in assign:
                    raise KeyError(f"no value for variable {v}")
                val *= Fraction(assign[v]) ** e
            total += val
        return total


# -- substitution -----------------------------------------------------------


def _split_term(p: LaurentPoly) -> Tuple[Fraction, int, Monomial]:
    """Decompose a single-term polynomial into (coeff, q_exp, q-free monomial)."""
    if not p.is_term():
        raise SubstitutionError("image is not a single term")
    ((m, c),) = p.terms()
    q_exp = 0
    rest = []
    for v, e in m:
        if v == QVAR:
            q_exp = e
        else:
            rest.append((v, e))
    return c, q_exp, tuple(rest)


def substitute(f: LaurentPoly, images: Mapping[Var, LaurentPoly]) -> LaurentPoly:
    """Apply the ring homomorphism sending each variable to a signed q-monomial.

    Every non-q variable of f must have an image; images must be single terms
    with coefficient +-1 times a power of q.  q itself maps to q.
    """
    table = {}
    for v, img in images.items():
        c, qe, m = _split_term(img)
        if c * c != 1:
            raise SubstitutionError(f"image of {v} has non-unit coefficient {c}")
        table[v] = (c, qe, m)
    out: dict = {}
    for m, c in f.terms():
        coeff = c
        q_exp = 0
        parts = []
        for v, e in m:
            if v == QVAR:
                q_exp += e
                continue
            if v not in table:
                raise SubstitutionError(f"no image for variable {v}")
            ic, iq, im = table[v]
            coeff *= ic**e
            q_exp += iq * e
            parts.extend((w, we * e) for w, we in im)
        if q_exp:
            parts.append((QVAR, q_exp))
        mono = _mono(parts)
        s = out.get(mono, Fraction(0)) + coeff
        if s:
            out[mono] = s
        else:
            out.pop(mono, None)
    return LaurentPoly(out)


# -- Weyl elements and actions -----------------------------------------------


@dataclass(frozen=True)
class WeylShape:
    """Ambient data for a relative Weyl group: factor sizes and the place type."""

    split: bool
    sizes: Tuple[int, ...]

    @property
    def qs(self) -> Tuple[int, ...]:
        return tuple(n // 2 for n in self.sizes)

    @property
    def all_even(self) -> bool:
        return all(n % 2 == 0 for n in self.sizes)

    def order(self) -> int:
        out = 1
        if self.split:
            for n in self.sizes:
                out *= _fact(n)
        else:
            for q in self.qs:
                out *= 2**q * _fact(q)
        return out


def _fact(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


@dataclass(frozen=True)
class WeylElement:
    """Per-factor permutation, with a sign vector per factor at inert places."""

    split: bool
    perms: Tuple[Tuple[int, ...], ...]  # one-line notation, 1-based images
    signs: Optional[Tuple[Tuple[int, ...], ...]] = None  # entries +-1, inert only

    @staticmethod
    def identity(shape: WeylShape) -> "WeylElement":
        degs = shape.sizes if shape.split else shape.qs
        perms = tuple(tuple(range(1, d + 1)) for d in degs)
        signs = None if shape.split else tuple(tuple(1 for _ in range(d)) for d in degs)
        return WeylElement(shape.split, perms, signs)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        if self.split != other.split:
            raise ValueError("mixed split/inert Weyl elements")
        perms = tuple(
            tuple(p1[p2[j] - 1] for j in range(len(p1)))
            for p1, p2 in zip(self.perms, other.perms)
        )
        if self.split:
            return WeylElement(True, perms)
        signs = []
        for p1, e1, e2 in zip(self.perms, self.signs, other.signs):
            # (e1, p1)(e2, p2) = (e1 * p1(e2), p1 p2)
            inv1 = _inv_perm(p1)
            signs.append(tuple(e1[k] * e2[inv1[k] - 1] for k in range(len(e1))))
        return WeylElement(False, perms, tuple(signs))

    def inverse(self) -> "WeylElement":
        perms = tuple(_inv_perm(p) for p in self.perms)
        if self.split:
            return WeylElement(True, perms)
        signs = tuple(
            tuple(e[p[k] - 1] for k in range(len(e)))
            for p, e in zip(self.perms, self.signs)
        )
        return WeylElement(False, perms, signs)


def _inv_perm(p: Tuple[int, ...]) -> Tuple[int, ...]:
    out = [0] * len(p)
    for j, img in enumerate(p, start=1):
        out[img - 1] = j
    return tuple(out)


def weyl_group(shape: WeylShape) -> Tuple[WeylElement, ...]:
    """Enumerate the full relative Weyl group for the given shape."""
    factors = []
    if shape.split:
        for n in shape.sizes:
            factors.append([tuple(p) for p in permutations(range(1, n + 1))])
        return tuple(
            WeylElement(True, combo) for combo in product(*factors)
        )
    for q in shape.qs:
        opts = []
        for p in permutations(range(1, q + 1)):
            for s in product((1, -1), repeat=q):
                opts.append((tuple(p), tuple(s)))
        factors.append(opts)
    out = []
    for combo in product(*factors):
        perms = tuple(c[0] for c in combo)
        signs = tuple(c[1] for c in combo)
        out.append(WeylElement(False, perms, signs))
    return tuple(out)


def _act_monomial(w: WeylElement, m: Monomial, shape: WeylShape) -> Monomial:
    pairs = []
    for v, e in m:
        if v == QVAR:
            pairs.append((v, e))
        elif v[0] == "t":
            i, j = v[1], v[2]
            p = w.perms[i - 1]
            img = p[j - 1]
            if shape.split:
                pairs.append((tor(i, img), e))
            else:
                pairs.append((tor(i, img), e * w.signs[i - 1][img - 1]))
        elif v[0] == "sf":
            i = v[1]
            pairs.append((v, e))
            if not shape.split and shape.sizes[i - 1] % 2 == 0:
                for j, s in enumerate(w.signs[i - 1], start=1):
                    if s == -1:
                        pairs.append((tor(i, j), -e))
        else:  # SIM
            pairs.append((v, e))
            if not shape.split and shape.all_even:
                for i, eps in enumerate(w.signs, start=1):
                    for j, s in enumerate(eps, start=1):
                        if s == -1:
                            pairs.append((tor(i, j), -e))
    return _mono(pairs)


def group_act(w: WeylElement, f: LaurentPoly, shape: WeylShape) -> LaurentPoly:
    """Act by a Weyl element; a ring automorphism of the ambient Laurent ring.

    Split factors permute the torus variables.  Inert factors act by signed
    permutations; a sign flip at slot j inverts X_{i,j} and multiplies the
    relevant similitude variable by X_{i,j}^{-1} (per-factor variables for
    even-size factors, the global variable only when every factor is even).
    """
    out: dict = {}
    for m, c in f.terms():
        mono = _act_monomial(w, m, shape)
        s = out.get(mono, Fraction(0)) + c
        if s:
            out[mono] = s
        else:
            out.pop(mono, None)
    return LaurentPoly(out)


def symmetrize(f: LaurentPoly, group: Sequence[WeylElement], shape: WeylShape) -> LaurentPoly:
    """Orbit sum: each term is replaced by the sum of its distinct group images.

    Each orbit element appears once (no averaging), matching the convention
    where a spherical function's Satake transform is the plain sum over the
    Weyl translates of a cocharacter.
    """
    out: dict = {}
    for m, c in f.terms():
        orbit = {_act_monomial(w, m, shape) for w in group}
        for mono in orbit:
            s = out.get(mono, Fraction(0)) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
    return LaurentPoly(out)


def is_invariant(f: LaurentPoly, group: Sequence[WeylElement], shape: WeylShape) -> bool:
    return all(group_act(w, f, shape) == f for w in group)


# -- canonical serialization --------------------------------------------------


def _var_name(v: Var) -> str:
    if v == SIM:
        return "X"
    if v[0] == "sf":
        return f"X_{v[1]}"
    if v[0] == "t":
        return f"X_{v[1]}_{v[2]}"
    raise ValueError(f"unnamed variable {v}")


_NAME_RE = re.compile(r"^X(?:_(\d+))?(?:_(\d+))?$")


def _parse_name(name: str) -> Var:
    m = _NAME_RE.match(name)
    if not m:
        raise ValueError(f"bad variable name {name!r}")
    i, j = m.group(1), m.group(2)
    if i is None:
        return SIM
    if j is None:
        return sim_factor(int(i))
    return tor(int(i), int(j))


def _term_record(m: Monomial, c: Fraction):
    q_exp = 0
    exps = []
    for v, e in m:
        if v == QVAR:
            q_exp = e
        else:
            exps.append((v, e))
    exps.sort()
    return {
        "q": q_exp,
        "num": c.numerator,
        "den": c.denominator,
        "exps": {_var_name(v): e for v, e in exps},
    }


def _term_sort_key(poly_vars):
    def key(item):
        m, _ = item
        d = dict(m)
        vec = tuple(d.get(v, 0) for v in poly_vars)
        return (vec, d.get(QVAR, 0))

    return key


def serialize_poly(f: LaurentPoly) -> str:
    """Canonical JSON text: a sorted array of term records."""
    poly_vars = sorted(f.variables())
    items = sorted(f.terms(), key=_term_sort_key(poly_vars))
    return json.dumps([_term_record(m, c) for m, c in items], separators=(",", ":"))


def parse_poly(text: str) -> LaurentPoly:
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("polynomial JSON must be an array of terms")
    total = LaurentPoly.zero()
    for rec in data:
        exps = {_parse_name(k): int(e) for k, e in rec["exps"].items()}
        c = Fraction(int(rec["num"]), int(rec["den"]))
        total = total + LaurentPoly.monomial(exps, coeff=c, q_exp=int(rec.get("q", 0)))
    return total


def pretty(f: LaurentPoly) -> str:
    """Human-readable rendering, in the canonical term order."""
    if f.is_zero():
        return "0"
    poly_vars = sorted(f.variables())
    parts = []
    for m, c in sorted(f.terms(), key=_term_sort_key(poly_vars)):
        d = dict(m)
        q_exp = d.pop(QVAR, 0)
        factors = []
        if c == -1 and (d or q_exp):
            sign = "-"
        else:
            sign = ""
            if c != 1 or (not d and not q_exp):
                factors.append(str(c))
        if q_exp:
            factors.append("q" if q_exp == 1 else f"q^{q_exp}")
        for v in sorted(d):
            e = d[v]
            factors.append(_var_name(v) if e == 1 else f"{_var_name(v)}^{e}")
        parts.append(sign + "*".join(factors))
    out = " + ".join(parts)
    return out.replace("+ -", "- ")
