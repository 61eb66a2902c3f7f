"""The one-letter bridge to moment sequences on [0, 1].

Moments of a positive measure form a Hankel kernel that is automatically
positive and one-step dominant, and whose alternating finite differences
are nonnegative. The extension pipeline then reproduces the moments on
the interior. A sequence failing the difference test is rejected with the
offending difference located.

Run:  python demos/05_hausdorff_moments.py
"""

import numpy as np

from fsk import (
    AtomicMeasure,
    build_dilation,
    build_space,
    check_complete_monotone,
    check_dominance,
    compressed_shifts,
    extend_kernel,
    hankel_kernel,
    moments,
)

mu = AtomicMeasure(atoms=((0.25, 0.4), (0.9, 0.6)))
print("measure: atoms", mu.atoms)
s = moments(mu, 8)
print("moments s_0..s_8:", np.round(s, 6))

ok, worst = check_complete_monotone(s)
print("completely monotone:", ok, " smallest signed difference:", worst)

K = hankel_kernel(s, 4)
report = check_dominance(K)
print("Hankel kernel positive:", report.pd_full, " dominant:", report.dominance)

space = build_space(K)
print("Kolmogorov rank:", space.rank, "(one dimension per atom)")
shifts = compressed_shifts(space, K)
print("shift column norm:", round(shifts.column_norm, 6), "(largest atom location)")

dil = build_dilation(shifts, K.N + 2, base_vector=space.v_interior(()))
words = [(1,) * k for k in range(K.N)]
values = extend_kernel(dil, space, [(a, b) for a in words for b in words])
print("interior recovery of the moments:")
for m in range(K.N):
    for n in range(m, K.N):
        got = values[((1,) * m, (1,) * n)][0, 0].real
        print(f"  K~({m},{n}) = {got:.9f}   s_{m + n} = {s[m + n]:.9f}")

print()
print("and a sequence that is NOT a moment sequence:")
bad = [1.0, 0.9, 0.5]
ok, worst = check_complete_monotone(bad)
k, j, value = worst
print(f"(1, 0.9, 0.5) accepted: {ok}; order-{k} difference at offset {j} equals {value:.3f}")
