"""Spherical function formulas, the four morphism families and the
constant-term compatibility square."""

import random
from itertools import combinations

import pytest

from satkit.laurent import (
    SIM,
    LaurentPoly,
    is_invariant,
    substitute,
    symmetrize,
    tor,
)
from satkit.rootdata import EndoTriple, GroupDatum, PlaceContext
from satkit.satake import (
    HeckeRing,
    LeviDatum,
    PlaceError,
    base_change_map,
    default_generators,
    exponent_identity_holds,
    hecke_ring,
    kottwitz_function,
    levi_constant_term,
    levi_kottwitz_function,
    levi_sign_data,
    levi_twisted_transfer,
    norm_similitude,
    transfer_map,
    twisted_transfer_map,
    verify_transfer_square,
)

SPLIT = PlaceContext(split=True, d=1)
INERT1 = PlaceContext(split=False, d=1)
INERT2 = PlaceContext(split=False, d=2)


def mono(exps, coeff=1, q=0):
    return LaurentPoly.monomial(exps, coeff=coeff, q_exp=q)


# -- rings ------------------------------------------------------------------


def test_hecke_ring_variables_and_groups():
    r = hecke_ring(GroupDatum((2,)), SPLIT)
    assert r.variables() == [SIM, tor(1, 1), tor(1, 2)]
    assert len(r.weyl()) == 2

    ri = hecke_ring(GroupDatum((2,)), INERT1)
    assert ri.variables() == [SIM, tor(1, 1)]
    assert len(ri.weyl()) == 2

    ri3 = hecke_ring(GroupDatum((3,)), INERT1)
    assert ri3.variables() == [SIM, tor(1, 1)]
    assert len(ri3.weyl()) == 2


def test_ring_contains():
    r = hecke_ring(GroupDatum((2,)), SPLIT)
    f = kottwitz_function(GroupDatum((2,)), (1,), SPLIT)
    assert r.contains(f)
    assert not r.contains(LaurentPoly.var(tor(1, 1)))
    assert not r.contains(LaurentPoly.var(tor(2, 1)))  # stray variable


# -- basic spherical functions -------------------------------------------------


def test_kottwitz_display_example():
    f = kottwitz_function(GroupDatum((2,)), (1,), SPLIT)
    want = mono({SIM: -1, tor(1, 1): -1}, q=1) + mono({SIM: -1, tor(1, 2): -1}, q=1)
    assert f == want


def test_kottwitz_degenerate_cases():
    for n in (1, 2, 3):
        assert kottwitz_function(GroupDatum((n,)), (0,), PlaceContext(True, 2)) == mono({SIM: -1})
    f = kottwitz_function(GroupDatum((3,)), (3,), PlaceContext(True, 2))
    assert f == mono({SIM: -1, tor(1, 1): -1, tor(1, 2): -1, tor(1, 3): -1})


def test_kottwitz_needs_split_over_l():
    with pytest.raises(PlaceError):
        kottwitz_function(GroupDatum((2,)), (1,), PlaceContext(split=False, d=3))


@pytest.mark.parametrize("sizes", [(2,), (4,), (5,), (2, 3), (3, 2)])
@pytest.mark.parametrize("d", [1, 2])
def test_kottwitz_equals_orbit_sum(sizes, d):
    g = GroupDatum(sizes)
    ctx = PlaceContext(split=True, d=d)
    ring = hecke_ring(g, ctx, "source")
    group, shape = ring.weyl(), ring.shape
    for s_vec in _s_choices(sizes):
        exps = {SIM: -1}
        for i, s in enumerate(s_vec, start=1):
            for j in range(1, s + 1):
                exps[tor(i, j)] = -1
        seed = mono(exps, q=d * sum(s * (n - s) for s, n in zip(s_vec, sizes)))
        assert kottwitz_function(g, s_vec, ctx) == symmetrize(seed, group, shape)


def _s_choices(sizes):
    out = [()]
    for n in sizes:
        out = [acc + (s,) for acc in out for s in range(n + 1)]
    return out


# -- base change -----------------------------------------------------------------


def test_base_change_inert_not_split_over_l():
    bc = base_change_map(GroupDatum((2,)), PlaceContext(split=False, d=3))
    assert bc.images[SIM] == mono({SIM: 3})
    assert bc.images[tor(1, 1)] == mono({tor(1, 1): 3})


def test_base_change_inert_split_over_l():
    bc = base_change_map(GroupDatum((2,)), INERT2)
    assert bc.images[SIM] == mono({SIM: 2, tor(1, 1): -1})
    assert bc.images[tor(1, 1)] == mono({tor(1, 1): 1})
    assert bc.images[tor(1, 2)] == mono({tor(1, 1): -1})


def test_base_change_split_identity():
    bc = base_change_map(GroupDatum((1,)), SPLIT)
    assert bc.images[SIM] == LaurentPoly.var(SIM)
    assert bc.images[tor(1, 1)] == LaurentPoly.var(tor(1, 1))


def test_base_change_middle_index_for_odd_factor():
    bc = base_change_map(GroupDatum((3,)), INERT2)
    assert bc.images[tor(1, 2)] == LaurentPoly.one()
    assert bc.images[tor(1, 3)] == mono({tor(1, 1): -1})
    assert bc.images[SIM] == LaurentPoly.var(SIM)  # odd factor: central global variable


def test_base_change_lands_in_invariants():
    for g, ctx in [
        (GroupDatum((2,)), INERT2),
        (GroupDatum((3,)), INERT2),
        (GroupDatum((4,)), PlaceContext(split=False, d=4)),
        (GroupDatum((2,)), PlaceContext(split=False, d=3)),
        (GroupDatum((3,)), PlaceContext(split=True, d=2)),
    ]:
        bc = base_change_map(g, ctx)
        target = hecke_ring(g, ctx, "target")
        if ctx.splits_over_l:
            for alpha in range(g.sizes[0] - g.qs[0], g.sizes[0] + 1):
                assert target.contains(bc(kottwitz_function(g, (alpha,), ctx)))
        else:
            src = hecke_ring(g, ctx, "source")
            for _, f in _inert_invariants(src):
                assert target.contains(bc(f))


def _inert_invariants(ring):
    group, shape = ring.weyl(), ring.shape
    gens = [("norm", norm_similitude(ring))]
    q1 = ring.datum.qs[0]
    if q1 >= 1:
        gens.append(("orbit t11", symmetrize(LaurentPoly.var(tor(1, 1)), group, shape)))
        gens.append(
            ("orbit sim*t11", symmetrize(norm_similitude(ring) * LaurentPoly.var(tor(1, 1)), group, shape))
        )
    return gens


# -- transfer -----------------------------------------------------------------------


def test_transfer_split_example():
    tr = transfer_map(GroupDatum((3,)), EndoTriple((1,), (2,)), SPLIT)
    assert tr.images[SIM] == LaurentPoly.var(SIM)
    assert tr.images[tor(1, 1)] == LaurentPoly.var(tor(1, 1))
    assert tr.images[tor(1, 2)] == LaurentPoly.var(tor(2, 1))
    assert tr.images[tor(1, 3)] == LaurentPoly.var(tor(2, 2))


def test_transfer_trivial_datum():
    tr = transfer_map(GroupDatum((2,)), EndoTriple((2,), (0,)), SPLIT)
    assert tr.images[tor(1, 1)] == LaurentPoly.var(tor(1, 1))
    assert tr.images[tor(1, 2)] == LaurentPoly.var(tor(1, 2))


def test_transfer_inert_blockwise():
    tr = transfer_map(GroupDatum((4,)), EndoTriple((2,), (2,)), INERT1)
    assert tr.images[SIM] == LaurentPoly.var(SIM)
    assert tr.images[tor(1, 1)] == LaurentPoly.var(tor(1, 1))
    assert tr.images[tor(1, 2)] == LaurentPoly.var(tor(2, 1))


def test_transfer_image_invariant():
    for n in range(1, 5):
        g = GroupDatum((n,))
        for n2 in range(0, n + 1, 2):
            h = EndoTriple((n - n2,), (n2,))
            target = HeckeRing(h.group_datum(), split_presentation=True)
            tr = transfer_map(g, h, SPLIT)
            for _, f in default_generators(g, SPLIT):
                assert is_invariant(tr(f), target.weyl(), target.shape)


def test_transfer_inert_image_invariant():
    g = GroupDatum((4,))
    h = EndoTriple((2,), (2,))
    tr = transfer_map(g, h, INERT1)
    src = hecke_ring(g, INERT1, "target")
    target = HeckeRing(h.group_datum(), split_presentation=False)
    for _, f in _inert_invariants(src):
        assert target.contains(tr(f))


# -- twisted transfer ------------------------------------------------------------------


def test_twisted_transfer_split_example():
    tw = twisted_transfer_map(GroupDatum((4,)), EndoTriple((2,), (2,)), SPLIT)
    assert tw.images[SIM] == LaurentPoly.var(SIM)
    assert tw.images[tor(1, 1)] == LaurentPoly.var(tor(1, 1))
    assert tw.images[tor(1, 2)] == LaurentPoly.var(tor(1, 2))
    assert tw.images[tor(1, 3)] == mono({tor(2, 1): 1}, coeff=-1)
    assert tw.images[tor(1, 4)] == mono({tor(2, 2): 1}, coeff=-1)


def test_twisted_transfer_no_second_block():
    tw = twisted_transfer_map(GroupDatum((2,)), EndoTriple((2,), (0,)), SPLIT)
    assert all(c > 0 for img in tw.images.values() for _, c in img.terms())


def test_twisted_transfer_rejects_inert_over_l():
    with pytest.raises(PlaceError):
        twisted_transfer_map(GroupDatum((4,)), EndoTriple((2,), (2,)), PlaceContext(split=False, d=3))


def test_twisted_sign_count_pattern():
    """Image of the alpha=1 function carries (-1)^{n(I)} per singleton subset."""
    g = GroupDatum((4,))
    h = EndoTriple((2,), (2,))
    tw = twisted_transfer_map(g, h, SPLIT)
    f = kottwitz_function(g, (1,), SPLIT)
    img = tw(f)
    want = LaurentPoly.zero()
    for i in range(1, 5):
        n_i = 1 if i > 2 else 0
        block, pos = (1, i) if i <= 2 else (2, i - 2)
        want = want + mono({SIM: -1, tor(block, pos): -1}, coeff=(-1) ** n_i, q=3)
    assert img == want


@pytest.mark.parametrize("r1,r2", [(1, 0), (0, 1)])
@pytest.mark.parametrize("alpha", [2, 3, 4])
def test_twisted_block_factorization(r1, r2, alpha):
    """The image of a basic function factors through linear/Hermitian blocks."""
    n = 4
    g = GroupDatum((n,))
    h = EndoTriple((2,), (2,))
    n1, n2 = 2, 2
    tw = twisted_transfer_map(g, h, SPLIT)
    got = tw(kottwitz_function(g, (alpha,), SPLIT))

    a_l1 = list(range(1, r1 + 1)) + list(range(n1 + 1 - r1, n1 + 1))
    a_l2 = [n1 + j for j in range(1, r2 + 1)] + list(range(n + 1 - r2, n + 1))
    a_l = a_l1 + a_l2
    a_h = [i for i in range(1, n + 1) if i not in a_l]

    def image_var(i):
        return (1, i) if i <= n1 else (2, i - n1)

    total = LaurentPoly.zero()
    for k in range(alpha + 1):
        lin = LaurentPoly.zero()
        for i_l in combinations(a_l, k):
            sign = (-1) ** sum(1 for i in i_l if i > n1)
            lin = lin + mono({tor(*image_var(i)): -1 for i in i_l}, coeff=sign)
        herm = LaurentPoly.zero()
        for i_h in combinations(a_h, alpha - k):
            sign = (-1) ** sum(1 for i in i_h if i > n1)
            exps = {SIM: -1}
            exps.update({tor(*image_var(i)): -1 for i in i_h})
            herm = herm + mono(exps, coeff=sign)
        total = total + lin * herm
    total = LaurentPoly.q_power(alpha * (n - alpha)) * total
    assert got == total


# -- Levi operations ----------------------------------------------------------------------


def test_levi_kottwitz_examples():
    g = GroupDatum((3,))
    assert levi_kottwitz_function(g, LeviDatum(1), 3, SPLIT) == mono(
        {SIM: -1, tor(1, 1): -1, tor(1, 2): -1, tor(1, 3): -1}
    )
    assert levi_kottwitz_function(g, LeviDatum(1), 2, SPLIT) == mono(
        {SIM: -1, tor(1, 1): -1, tor(1, 2): -1}
    )
    g4 = GroupDatum((4,))
    want = mono({SIM: -1, tor(1, 1): -1, tor(1, 2): -1}, q=1) + mono(
        {SIM: -1, tor(1, 1): -1, tor(1, 3): -1}, q=1
    )
    assert levi_kottwitz_function(g4, LeviDatum(1), 2, SPLIT) == want


def test_levi_kottwitz_oracle_via_hermitian_block():
    """phi^M = (Z Z_1...Z_s)^{-1} times the size-(n-2s) basic function, reindexed."""
    for n in range(2, 6):
        for s in range(1, n // 2 + 1):
            m = n - 2 * s
            if m == 0:
                continue
            g = GroupDatum((n,))
            gm = GroupDatum((m,))
            for alpha in range(n - n // 2, n - s + 1):
                inner = kottwitz_function(gm, (alpha - s,), PlaceContext(True, 2))
                shift = {tor(1, j): LaurentPoly.var(tor(1, j + s)) for j in range(1, m + 1)}
                shift[SIM] = mono({SIM: 1, **{tor(1, j): 1 for j in range(1, s + 1)}})
                expect = substitute(inner, shift)
                got = levi_kottwitz_function(g, LeviDatum(s), alpha, PlaceContext(True, 2))
                assert got == expect


def test_levi_sign_data_validation():
    g = GroupDatum((3,))
    h = EndoTriple((1,), (2,))
    with pytest.raises(ValueError):
        levi_sign_data(g, h, LeviDatum(1), [])  # forces a linear pair into GU*(1)
    sd = levi_sign_data(g, h, LeviDatum(1), [1])
    assert (sd.m1, sd.m2) == (1, 0)


def test_levi_twisted_transfer_table():
    g = GroupDatum((3,))
    h = EndoTriple((1,), (2,))
    levi = LeviDatum(1)
    sd = levi_sign_data(g, h, levi, [1])
    bp = levi_twisted_transfer(g, h, levi, sd, SPLIT, variant="s'_M")
    assert bp.images[tor(1, 1)] == LaurentPoly.var(tor(2, 1))
    assert bp.images[tor(1, 3)] == LaurentPoly.var(tor(2, 2))
    assert bp.images[tor(1, 2)] == LaurentPoly.var(tor(1, 1))
    bm = levi_twisted_transfer(g, h, levi, sd, SPLIT, variant="s_M")
    assert bm.images[tor(1, 1)] == mono({tor(2, 1): 1}, coeff=-1)
    assert bm.images[tor(1, 3)] == mono({tor(2, 2): 1}, coeff=-1)
    assert bm.images[tor(1, 2)] == LaurentPoly.var(tor(1, 1))


def test_levi_twisted_trivial_datum_all_positive():
    g = GroupDatum((2,))
    h = EndoTriple((2,), (0,))
    sd = levi_sign_data(g, h, LeviDatum(1), [])
    bm = levi_twisted_transfer(g, h, LeviDatum(1), sd, SPLIT, variant="s_M")
    for img in bm.images.values():
        assert all(c > 0 for _, c in img.terms())


def test_constant_term_checks_invariance():
    g = GroupDatum((3,))
    f = kottwitz_function(g, (2,), SPLIT)
    assert levi_constant_term(f, g, LeviDatum(1), SPLIT) == f
    with pytest.raises(ValueError):
        levi_constant_term(LaurentPoly.var(tor(1, 1)), g, LeviDatum(1), SPLIT)


# -- the compatibility square ---------------------------------------------------------------


def test_transfer_square_trivial():
    rep = verify_transfer_square(
        GroupDatum((2,)), EndoTriple((2,), (0,)), LeviDatum(1), [], SPLIT
    )
    assert rep["failures"] == []


def test_transfer_square_examples():
    rep = verify_transfer_square(
        GroupDatum((3,)), EndoTriple((1,), (2,)), LeviDatum(1), [1], SPLIT
    )
    assert rep["failures"] == []
    rep = verify_transfer_square(
        GroupDatum((4,)), EndoTriple((2,), (2,)), LeviDatum(1), [], SPLIT
    )
    assert rep["failures"] == []
    rep = verify_transfer_square(
        GroupDatum((4,)), EndoTriple((2,), (2,)), LeviDatum(1), [1], SPLIT
    )
    assert rep["failures"] == []


def test_maps_are_homomorphisms_on_products():
    rng = random.Random(99)
    g = GroupDatum((3,))
    h = EndoTriple((1,), (2,))
    tw = twisted_transfer_map(g, h, SPLIT)
    gens = [f for _, f in default_generators(g, SPLIT)]
    for _ in range(20):
        f1, f2 = rng.choice(gens), rng.choice(gens)
        assert tw(f1 * f2) == tw(f1) * tw(f2)


def test_exponent_identity():
    for n in range(1, 21):
        for r in range(1, n // 2 + 1):
            for alpha in range(n // 2, n + 1):
                assert exponent_identity_holds(n, alpha, r)


def test_twisted_inert_image_invariant():
    """Images at an even-degree inert place land in the H-invariants."""
    ctx = INERT2
    for n, pairs in [(3, ((1,), (2,))), (4, ((2,), (2,))), (4, ((0,), (4,))), (2, ((0,), (2,)))]:
        g = GroupDatum((n,))
        h = EndoTriple(*pairs)
        tw = twisted_transfer_map(g, h, ctx)
        target = HeckeRing(h.group_datum(), split_presentation=False)
        for _, f in default_generators(g, ctx):
            assert target.contains(tw(f))


def test_levi_kottwitz_invariant_under_levi_weyl():
    from satkit.laurent import group_act
    from satkit.satake import levi_weyl_m

    for n in range(2, 6):
        g = GroupDatum((n,))
        for s in range(1, n // 2 + 1):
            group = levi_weyl_m(g, LeviDatum(s))
            ring = hecke_ring(g, SPLIT, "source")
            for alpha in range(n - n // 2, n + 1):
                f = levi_kottwitz_function(g, LeviDatum(s), alpha, SPLIT)
                assert all(group_act(w, f, ring.shape) == f for w in group)


def test_levi_twisted_image_invariant_under_mh_weyl():
    """b_{s_M} images are invariant under the Hermitian-block Weyl of M_H."""
    from itertools import permutations as iperms

    from satkit.laurent import WeylElement, group_act

    g = GroupDatum((4,))
    h = EndoTriple((2,), (2,))
    levi = LeviDatum(1)
    for A in ([], [1]):
        sd = levi_sign_data(g, h, levi, A)
        bm = levi_twisted_transfer(g, h, levi, sd, SPLIT, variant="s_M")
        target = HeckeRing(h.group_datum(), split_presentation=True)
        lin = {1: 1 - len(A), 2: len(A)}
        elements = []
        sizes = target.datum.sizes
        middles = [
            list(range(lin[k] + 1, sizes[k - 1] - lin[k] + 1)) for k in (1, 2)
        ]
        for p1 in iperms(middles[0]):
            for p2 in iperms(middles[1]):
                imgs = []
                for k, perm, middle in ((1, p1, middles[0]), (2, p2, middles[1])):
                    img = list(range(1, sizes[k - 1] + 1))
                    for pos, val in zip(middle, perm):
                        img[pos - 1] = val
                    imgs.append(tuple(img))
                elements.append(WeylElement(True, tuple(imgs)))
        for _, f in default_generators(g, SPLIT):
            img = bm(levi_constant_term(f, g, levi, SPLIT, check=False))
            assert all(group_act(w, img, target.shape) == img for w in elements)


def test_transfer_two_factor_routing():
    g = GroupDatum((2, 2))
    h = EndoTriple((1, 1), (1, 1))
    tr = transfer_map(g, h, SPLIT)
    assert tr.images[tor(1, 1)] == LaurentPoly.var(tor(1, 1))
    assert tr.images[tor(1, 2)] == LaurentPoly.var(tor(2, 1))
    assert tr.images[tor(2, 1)] == LaurentPoly.var(tor(3, 1))
    assert tr.images[tor(2, 2)] == LaurentPoly.var(tor(4, 1))
    ring = hecke_ring(g, SPLIT, "source")
    target = HeckeRing(h.group_datum(), split_presentation=True)
    f = kottwitz_function(g, (1, 1), SPLIT)
    assert target.contains(tr(f))


def test_base_change_mixed_parity_multi_factor():
    g = GroupDatum((2, 3))
    ctx = PlaceContext(split=False, d=2)
    bc = base_change_map(g, ctx)
    # mixed parity: the global variable is already the central element
    assert bc.images[SIM] == LaurentPoly.var(SIM)
    assert bc.images[tor(2, 2)] == LaurentPoly.one()  # odd middle index
    target = hecke_ring(g, ctx, "target")
    for alpha1 in range(3):
        f = kottwitz_function(g, (alpha1, 1), ctx)
        assert target.contains(bc(f))


def test_m_ring_weyl_is_levi_group():
    from satkit.satake import m_ring

    g = GroupDatum((4,))
    ring = m_ring(g, LeviDatum(1))
    assert len(ring.weyl()) == 2  # permutes the middle block {2,3} only
    f = levi_kottwitz_function(g, LeviDatum(1), 2, SPLIT)
    assert ring.contains(f)
    assert not ring.contains(LaurentPoly.var(tor(1, 2)))


def test_levi_twisted_target_ring_contains_images():
    for n, pairs in [(3, ((1,), (2,))), (4, ((2,), (2,))), (4, ((0,), (4,)))]:
        g = GroupDatum((n,))
        h = EndoTriple(*pairs)
        for s in range(1, n // 2 + 1):
            for bits in range(2**s):
                A = [j + 1 for j in range(s) if bits >> j & 1]
                try:
                    sd = levi_sign_data(g, h, LeviDatum(s), A)
                except ValueError:
                    continue
                bm = levi_twisted_transfer(g, h, LeviDatum(s), sd, SPLIT)
                for _, f in default_generators(g, SPLIT):
                    assert bm.target.contains(bm(f))


def test_transfer_square_inert_even_degree():
    """The compatibility also holds at an inert place of even degree."""
    ctx = INERT2
    for n, pairs in [(3, ((1,), (2,))), (4, ((2,), (2,)))]:
        g = GroupDatum((n,))
        h = EndoTriple(*pairs)
        for s in range(1, n // 2 + 1):
            for bits in range(2**s):
                A = [j + 1 for j in range(s) if bits >> j & 1]
                try:
                    sd = levi_sign_data(g, h, LeviDatum(s), A)
                except ValueError:
                    continue
                bm = levi_twisted_transfer(g, h, LeviDatum(s), sd, ctx)
                bt = twisted_transfer_map(g, h, ctx)
                for _, f in default_generators(g, ctx):
                    assert bm(f) == bt(f)
                    assert bm.target.contains(bm(f))
