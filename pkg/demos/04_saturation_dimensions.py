"""Dimension of the conjugation sweep of each catalog subalgebra.

Sweeping the parabolic indexed (i, j) with the block-diagonal group produces
a set of dimension n^2 - n + 1 + (j - i); sweeping a nilradical produces one
of dimension n^2 - 2n + 1.  The dimension is read off numerically as the rank
of the tangent space at a generic point: bracket the point with the
block-diagonal subalgebra and stack the result on the subalgebra itself.
"""

from gzcut import (
    SeededRng,
    all_orbit_indices,
    estimate_dim,
    nilradical_n,
    parabolic_p,
)

n = 4
repeats = 5
print(f"n = {n}: saturation dimensions from tangent ranks ({repeats} generic samples)\n")

print("parabolic saturations (formula n^2 - n + 1 + (j - i)):")
stream = 0
for idx in all_orbit_indices(n):
    got = estimate_dim(parabolic_p(idx, n), repeats, SeededRng(1, stream))
    stream += repeats
    want = n * n - n + 1 + idx.length
    print(f"  ({idx.i},{idx.j}): estimated {got}, formula {want}, match {got == want}")

print("\nnilradical saturations (formula n^2 - 2n + 1):")
for i in range(1, n + 1):
    got = estimate_dim(nilradical_n(i, n), repeats, SeededRng(1, stream))
    stream += repeats
    want = n * n - 2 * n + 1
    print(f"  component {i}: estimated {got}, formula {want}, match {got == want}")

print(
    "\nsum rule: the closed-orbit saturation exceeds its nilradical"
    f" counterpart by the diagonal rank n = {n}:",
    (n * n - n + 1) - (n * n - 2 * n + 1) == n,
)
