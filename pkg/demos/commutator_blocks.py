"""The block anatomy of a wedge flattening when the first slice is I.

With slices (I, X1, X2) the 6x6 flattening carries the identity in two
blocks, and eliminating them squeezes the whole determinant into the
single commutator X1 X2 - X2 X1.  At the next wedge power the same
elimination leaves a 4x4 grid of blocks that are each zero or a signed
commutator [Xi, Xj].
"""

from fractions import Fraction

import numpy as np

from trc.field import RATIONAL, Rng
from trc.flattening import (
    build_koszul,
    commutator_block,
    commutator_sign_pattern,
    det_flattening,
)
from trc.rank_engine import det_exact
from trc.tensor import tensor_from_slices


def small_matrix(rng, b):
    return np.array(
        [[Fraction(rng.below(7) - 3) for _ in range(b)] for _ in range(b)]
    )


def identity(b):
    m = np.full((b, b), Fraction(0), dtype=object)
    for i in range(b):
        m[i, i] = Fraction(1)
    return m


def as_ints(m):
    return np.vectorize(int)(m)


rng = Rng(12)
b = 2
x1, x2 = small_matrix(rng, b), small_matrix(rng, b)
print("X1 =")
print(as_ints(x1))
print("X2 =")
print(as_ints(x2))

flat = build_koszul(tensor_from_slices([identity(b), x1, x2], RATIONAL), 1)
print()
print("full 6x6 flattening (slices I, X1, X2):")
print(as_ints(flat.matrix.to_dense()))

comm = x1.dot(x2) - x2.dot(x1)
print()
print("X1 X2 - X2 X1 =")
print(as_ints(comm))
lhs = abs(det_flattening(flat))
rhs = abs(det_exact(commutator_block([x1, x2], 1)))
print(f"|det flattening| = {lhs}, |det commutator| = {rhs}, equal: {lhs == rhs}")

print()
print("two wedge levels up, the eliminated matrix is a 4x4 block grid;")
print("entry (row, col) -> signed commutator, diagonal identically zero:")
for (u, v), val in sorted(commutator_sign_pattern(2).items()):
    if val is None:
        print(f"  block ({u},{v}): 0")
    else:
        i, j, sign = val
        sgn = "+" if sign > 0 else "-"
        print(f"  block ({u},{v}): {sgn}[X{i}, X{j}]")

xs = [small_matrix(rng, 3) for _ in range(4)]
full = build_koszul(tensor_from_slices([identity(3)] + xs, RATIONAL), 2)
block = commutator_block(xs, 2)
print()
print(f"check at b = 3: |det| of the 30x30 flattening = {abs(det_flattening(full))}")
print(f"                |det| of the 12x12 block grid = {abs(det_exact(block))}")
