"""Kolmogorov factorization, graded subspaces, and the compressed shifts.

The Gram matrix of a truncated kernel factors as V^* V; each word owns a
column block, the length filtration gives nested subspaces, and on the
level-(N-1) space the shifts "append a letter" and annihilate the top
graded layer. Their column Gram is the interior density: a positive
contraction reproducing the shifted kernel on the deepest interior.

Run:  python demos/02_kolmogorov_space.py
"""

import numpy as np

from fsk import (
    build_space,
    compressed_shifts,
    fixtures,
    graded_projector,
    interior_density,
    shifted_kernel,
)

for name in ("d1", "d2"):
    K = fixtures.EXAMPLES[name]()
    space = build_space(K)
    print(f"== kernel {name}: rank {space.rank}, graded ranks {space.graded_ranks} ==")
    for level in range(K.N + 1):
        P = graded_projector(space, level)
        print(f"  projector onto level <= {level}: rank {int(round(np.trace(P).real))}")
    if name == "d2":
        v12 = space.v_block((1, 2))
        P1 = graded_projector(space, 1)
        print(
            "  the word-12 column leaves the level-1 span; its projection "
            f"there has norm {np.linalg.norm(P1 @ v12):.1e}"
        )
    print()

print("== compressed shifts of the first kernel ==")
K = fixtures.example_d1()
space = build_space(K)
shifts = compressed_shifts(space, K)
print("column norm (must be <= 1 under dominance):", round(shifts.column_norm, 12))
density = interior_density(shifts, space, shifted_kernel(K))
print("interior density spectrum:", np.round(density.spectrum, 12))
print("reproducing identity deviation:", density.max_identity_dev)
print()
print("The density is the positive operator through which the shifted")
print("kernel factors on the deepest interior block.")
