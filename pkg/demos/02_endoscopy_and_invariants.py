"""Endoscopic data of unitary similitude groups and their coefficients.

The group G(U*(n_1) x ... x U*(n_r)) has elliptic endoscopic data indexed
by per-factor splittings (n_i^+, n_i^-) with even total minus part, up to
swapping the two parts of each factor.  The stabilization coefficients
tau, k and iota are small powers of two and exact rationals.
"""

from satkit.rootdata import (
    EndoTriple,
    GroupDatum,
    SignedGroupDatum,
    enumerate_endoscopic,
    iota,
    iota_gh,
    k_invariant,
    packet_size,
    pi0_symmetric_space,
    tamagawa,
)

for n in (3, 4, 6):
    g = GroupDatum((n,))
    print(f"GU*({n}): tau = {tamagawa(g)}")
    for triple, outer in enumerate_endoscopic(g):
        print(f"   class {triple.pairs()}  outer order {outer}  iota = {iota(g, triple)}")

# A two-factor example: the parity constraint couples the factors.
g = GroupDatum((2, 2))
print("G(U*(2) x U*(2)) classes:")
for triple, outer in enumerate_endoscopic(g):
    print("  ", triple.pairs(), "outer order", outer)

# Real-form invariants: the product k(G) tau(G) is always 2^{n-1}.
for sig in [((3, 0),), ((2, 1),), ((1, 1), (1, 1)), ((2, 2),)]:
    sg = SignedGroupDatum(sig)
    k = k_invariant(sg)
    t = tamagawa(sg.datum)
    print(f"GU{sig}: k = {k}, tau = {t}, k*tau = {k * t} = 2^{sg.n - 1}")

# Discrete-series packet sizes are binomial numbers.
print("packet sizes:", [(p, q, packet_size(p, q)) for p, q in [(2, 1), (1, 1), (3, 2)]])

# The signed coefficient weighting an endoscopic group in the stabilized
# trace: it vanishes for GU(2,2) against the balanced splitting.
g22 = SignedGroupDatum(((2, 2),))
h = EndoTriple((2,), (2,))
print("pi0 of the symmetric space:", pi0_symmetric_space(g22))
print("iota_GH for GU(2,2), (2,2):", iota_gh(g22, h))
print("iota_GH for GU(3,1), (2,2):", iota_gh(SignedGroupDatum(((3, 1),)), h))
