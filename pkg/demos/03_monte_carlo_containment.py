"""Monte Carlo check of the containment behind the stratification.

Take any element of the catalog parabolic indexed (i, j), conjugate it by a
random block-diagonal group element, and count coincidences: the count can
never fall below n - 1 - (j - i).  The statement is exact, so the sampled
violation count must be exactly zero; anything else is a bug, not noise.
"""

from gzcut import SeededRng, Tolerances, all_orbit_indices, verify_containment

n = 4
trials = 400
tol = Tolerances(eig_match=1e-6)

print(f"n = {n}, {trials} seeded trials per orbit index\n")
print(f"{'(i,j)':>8} {'bound':>6} {'violations':>11} {'min l seen':>11} {'worst residual':>15}")
stream = 0
for idx in all_orbit_indices(n):
    rep = verify_containment(idx, n, trials, SeededRng(7, stream), tol)
    stream += trials
    print(
        f"({idx.i},{idx.j})".rjust(8),
        f"{n - 1 - idx.length:>6}",
        f"{rep.violations:>11}",
        f"{rep.min_observed_l:>11}",
        f"{rep.worst_residual:>15.3e}",
    )

print(
    "\nclosed orbits (i = j) must share the entire cutoff spectrum; the open"
    "\norbit (1, n) has a vacuous bound; the others interpolate."
)
