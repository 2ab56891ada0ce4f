"""Discrete-series combinatorics: partition lemmas, Kostant truncation,
Weyl characters and weight transfer.

Everything is exact: weights are stored doubled where half-integers would
appear, and the identity engine compares signed multisets of weight
vectors with rational multiplicities.
"""

from satkit.characters import (
    KostantDatum,
    Weight,
    endoscopic_weight_transfer,
    frobenius_trace,
    kostant_cohomology,
    nonsingular_subsets,
    ordered_partition_sum,
    partial_sum_signature,
    positive_rotation_count,
    truncate_cohomology,
    verify_phi_identity,
    weyl_character,
)
from satkit.laurent import pretty
from satkit.rootdata import EndoTriple, PlaceContext, SignedGroupDatum

# The signed ordered-partition identity: the weighted permutation count
# collapses to (-1)^n exactly when every entry is positive.
for lam in [(1, 1), (2, -1), (3, 1, 2)]:
    print(
        f"lambda={lam}: signature {partial_sum_signature(lam)}, "
        f"partition sum {ordered_partition_sum(lam)}"
    )

# Under the no-positive-2-partition hypothesis exactly (n-1)! orderings
# keep all prefix sums positive.
print("rotation count for (3,-1,-1):", positive_rotation_count((3, -1, -1)))

# Kostant cohomology of a nilpotent radical, then weight truncation.
kd = KostantDatum(2, 1, frozenset({1}))
weight = Weight(0, ((3, 1, -2),))
entries = kostant_cohomology(kd, weight)
print(f"GU(2,1), S'={{1}}: {len(entries)} summands, degrees",
      sorted(e.degree for e in entries))
kept = truncate_cohomology(entries, {1}, ">")
print("surviving the upper truncation:", [e.omega for e in kept])

# The identity behind the discrete-series constant-term formula: the
# truncated Kostant side equals the coroot-filtered Weyl sum, as signed
# multisets of weight vectors.
report = verify_phi_identity(2, 2, 2, Weight(0, ((13, 5, -2, -9),)))
print("phi identity GU(2,2), s=2:", "equal" if report["equal"] else "FAILED",
      f"({report['side_b_terms']} filtered terms)")

# Weyl characters are Schur-type Laurent polynomials.
print("character of weight (2,1,0) for GL_3:")
print("  ", pretty(weyl_character(3, (2, 1, 0))))

# Transfer of a highest weight along an endoscopic datum preserves the
# total and dominance.
h = EndoTriple((1,), (2,))
out = endoscopic_weight_transfer(Weight(0, ((2, 1, 0),)), h, [(1,)], 1)
print("weight (2,1,0) transferred along (1,2):", out.blocks)

# Frobenius traces on the minuscule representation: subset sums.
sg = SignedGroupDatum(((1, 1),))
print("Frobenius trace, GU(1,1), m=1, split place:")
print("  ", pretty(frobenius_trace(sg, 1, PlaceContext(split=True), field="E")))

# Incidence systems with exact nonzero determinant.
subsets, det = nonsingular_subsets(4, 3)
print(f"subsets for (n,p)=(4,3): {subsets}, det = {det}")
