"""Hunting for small supports of blackbox polynomials.

A degree-d polynomial that is not identically zero has a monomial
touching at most d variables.  The greedy search below finds such a
set by deleting coordinates one at a time and probing randomly to see
whether the polynomial survived.  The subspace variant does the same
for a polynomial evaluated on tuples of vectors, one tuple slot at a
time.
"""

from trc.certify import grassmann_support, greedy_support
from trc.field import DEFAULT_PRIME


def product_of_three(x):
    return x[1] * x[2] * x[3] % DEFAULT_PRIME


res = greedy_support(product_of_three, 10, 3, seed=5)
print("polynomial x1*x2*x3 in 10 variables, degree 3")
print(f"  support found: {sorted(res.support)}")
print(f"  probes spent:  {res.probes}")
print(f"  chance any deletion was wrongly accepted: < {float(res.failure_bound):.2e}")

print()


def det_of_first_two(x):
    return (x[0] * x[3] - x[1] * x[2]) % DEFAULT_PRIME


res = greedy_support(det_of_first_two, 6, 2, seed=5)
print("2x2 determinant in 6 variables, degree 2")
print(f"  support found: {sorted(res.support)} (either diagonal works)")

print()


def two_disjoint_minors(vs):
    a1, a2 = vs
    m01 = a1[0] * a2[1] - a1[1] * a2[0]
    m23 = a1[2] * a2[3] - a1[3] * a2[2]
    return (m01 * m23) % DEFAULT_PRIME


res = grassmann_support(two_disjoint_minors, 6, 2, 2, seed=11)
print("product of disjoint 2x2 minors on pairs of vectors in 6 coordinates")
print(f"  union support:   {sorted(res.support)}")
print(f"  per-slot pieces: {[sorted(s) for s in res.per_copy]}")
print("  4 coordinates = degree * slots, so the generic guarantee is sharp here")
