"""Bundled kernels and randomized kernel generators.

The two d = 2 showcase kernels are regenerated from their defining vector
families (not stored as matrices), so the fixtures themselves exercise
the Gram-rule constructor. The random generators produce dominance-
enforced populations for property suites: generic vector draws with
decaying level norms plus a boundary scaling loop, and shift-consistent
kernels generated by a random row contraction acting on a seed column.
"""

import numpy as np

from .kernel import TruncatedKernel, check_dominance
from .hausdorff import AtomicMeasure, hankel_kernel, moments
from .kolmogorov import build_space
from .numerics import DEFAULT_TOL, ToleranceConfig
from .words import enumerate_words, lambda_count


def example_d1() -> TruncatedKernel:
    """d = 2, N = 2 scalar kernel with a shift-consistent boundary.

    Column family in C^3: the empty word is a unit vector, the two letters
    are halved orthogonal directions, and every length-2 column vanishes.
    Interior Gram diag(1, 1/4, 1/4); shifted kernel diag(1/2, 0, 0).
    """
    e = np.eye(3, dtype=complex)
    zero = np.zeros(3, dtype=complex)
    vectors = {
        (): e[:, 0],
        (1,): 0.5 * e[:, 1],
        (2,): 0.5 * e[:, 2],
        (1, 1): zero,
        (1, 2): zero,
        (2, 1): zero,
        (2, 2): zero,
    }
    return TruncatedKernel.from_vectors(2, 2, vectors, dim_h=1)


def example_d2() -> TruncatedKernel:
    """d = 2, N = 2 scalar kernel whose boundary is not shift-consistent.

    Same interior as example_d1, but the column of word 12 is a fresh
    quarter-length direction in C^4, so the level-2 data leave the
    level-1 span and the boundary Gram cannot be reproduced inside it.
    """
    e = np.eye(4, dtype=complex)
    zero = np.zeros(4, dtype=complex)
    vectors = {
        (): e[:, 0],
        (1,): 0.5 * e[:, 1],
        (2,): 0.5 * e[:, 2],
        (1, 1): zero,
        (1, 2): 0.25 * e[:, 3],
        (2, 1): zero,
        (2, 2): zero,
    }
    return TruncatedKernel.from_vectors(2, 2, vectors, dim_h=1)


def delta_half_measure() -> AtomicMeasure:
    return AtomicMeasure(atoms=((0.5, 1.0),))


def delta_half_kernel(N: int = 2) -> TruncatedKernel:
    """Hankel kernel of the unit point mass at 1/2: K(m, n) = 2^-(m+n)."""
    return hankel_kernel(moments(delta_half_measure(), 2 * N), N)


EXAMPLES = {
    "d1": example_d1,
    "d2": example_d2,
    "delta-half": delta_half_kernel,
}


def _complex_gaussian(rng, rows, cols, scale=1.0):
    g = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    return scale * g / np.sqrt(2.0 * rows)


def random_dominant_kernel(
    rng,
    d: int,
    N: int,
    dim_h: int = 1,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> TruncatedKernel:
    """Random vector-family kernel with one-step dominance enforced.

    Columns are drawn with per-level decay 1/(2 sqrt(d)), then the
    boundary columns are halved until check_dominance passes; if thirty
    halvings do not suffice (possible for unlucky interiors), the whole
    level profile is steepened and the loop retried.
    """
    ws = enumerate_words(d, N)
    ambient = dim_h * len(ws)
    decay = 1.0 / (2.0 * np.sqrt(d))
    base = {w: _complex_gaussian(rng, ambient, dim_h, decay ** len(w)) for w in ws}
    for steep in range(4):
        profile = {w: base[w] * (0.5 ** (steep * len(w))) for w in ws}
        t = 1.0
        for _ in range(31):
            vecs = {
                w: (t * profile[w] if len(w) == N else profile[w]) for w in ws
            }
            K = TruncatedKernel.from_vectors(d, N, vecs, dim_h=dim_h)
            report = check_dominance(K, cfg)
            if report.pd_full and report.dominance:
                return K
            t *= 0.5
    raise RuntimeError("failed to enforce dominance on the random draw")


def random_shift_consistent_kernel(
    rng,
    d: int,
    N: int,
    dim_h: int = 1,
    rho: float = 0.9,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> TruncatedKernel:
    """Kernel generated by a random row contraction, hence shift consistent.

    Columns are the orbit of a random seed block under a d-tuple scaled to
    column norm rho < 1; dominance and all boundary matching conditions
    hold by construction. Draws are retried until the interior columns
    span the whole ambient space, so the generating tuple acts on the
    kernel's own level-(N-1) space.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    ambient = dim_h * lambda_count(d, N - 1)
    ws = enumerate_words(d, N)
    for _ in range(25):
        tuple_ops = [_complex_gaussian(rng, ambient, ambient) for _ in range(d)]
        col = sum(T.conj().T @ T for T in tuple_ops)
        lam = float(np.linalg.eigvalsh(0.5 * (col + col.conj().T))[-1])
        tuple_ops = [T * (rho / np.sqrt(lam)) for T in tuple_ops]
        vecs = {(): _complex_gaussian(rng, ambient, dim_h)}
        for w in ws:
            if w:
                vecs[w] = tuple_ops[w[-1] - 1] @ vecs[w[:-1]]
        K = TruncatedKernel.from_vectors(d, N, vecs, dim_h=dim_h)
        space = build_space(K, cfg)
        if space.graded_ranks[N - 1] == ambient:
            return K
    raise RuntimeError("interior span never filled the ambient space")


def random_atomic_measure(rng, max_atoms: int = 4) -> AtomicMeasure:
    """Random measure with up to max_atoms distinct atoms in [0, 1]."""
    k = int(rng.integers(1, max_atoms + 1))
    while True:
        locs = np.sort(rng.uniform(0.0, 1.0, size=k))
        if k == 1 or np.min(np.diff(locs)) > 1e-3:
            break
    weights = rng.uniform(0.1, 1.0, size=k)
    return AtomicMeasure(atoms=tuple(zip(locs.tolist(), weights.tolist())))
