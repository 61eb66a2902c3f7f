"""Kolmogorov space of a truncated kernel and its compressed shifts.

The rank-revealed factorization Gram = V^* V turns each word into a
column block V_a with V_a^* V_b = K(a, b). The graded subspaces are the
column spans of the length-filtered blocks; the compressed shifts act on
the level-(N-1) subspace by sending V_a to V_{a i} on Lambda_{N-2} and
annihilating the orthocomplement of the level-(N-2) subspace.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ContractivityFailure,
    IdentityMismatch,
    WellDefinednessFailure,
)
from .kernel import TruncatedKernel, gram
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    orthonormal_range,
    pinv_solve_right,
    psd_factor,
)
from .words import Word


@dataclass(frozen=True)
class KolmogorovSpace:
    """Coordinates for the Kolmogorov space of a level-N kernel.

    factor is the (rank x n*m) matrix V with V^* V = Gram(K, Lambda_N);
    the block of columns belonging to word a is the canonical map
    V_a : C^m -> C^rank. graded_bases[l] is an orthonormal basis (in the
    C^rank coordinates) of the span of {V_a : |a| <= l}.
    """

    kernel: TruncatedKernel
    rank: int
    factor: np.ndarray
    graded_ranks: tuple[int, ...]
    graded_bases: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def d(self) -> int:
        return self.kernel.d

    @property
    def N(self) -> int:
        return self.kernel.N

    def v_block(self, w: Word) -> np.ndarray:
        m = self.kernel.dim_h
        j = self.kernel.word_set.index(tuple(w))
        return self.factor[:, j * m : (j + 1) * m]

    def interior_basis(self) -> np.ndarray:
        """Orthonormal basis of the level-(N-1) subspace, shape (rank, q)."""
        return self.graded_bases[self.N - 1] if self.N >= 1 else self.graded_bases[0]

    def interior_dim(self) -> int:
        return self.interior_basis().shape[1]

    def v_interior(self, w: Word) -> np.ndarray:
        """Coordinates of V_w in the level-(N-1) basis; |w| <= N-1 required
        for the coordinates to be lossless."""
        return self.interior_basis().conj().T @ self.v_block(w)


@dataclass(frozen=True)
class ShiftSystem:
    """A d-tuple of square matrices on the level-(N-1) coordinates.

    kind is "compressed-B" for the canonical interior shifts or
    "boundary-T" for solved boundary operators. column_norm is
    lambda_max(sum_i ops_i^* ops_i)^(1/2).
    """

    kind: str
    ops: tuple[np.ndarray, ...]
    column_norm: float
    build_residual: float = 0.0

    @property
    def d(self) -> int:
        return len(self.ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0] if self.ops else 0

    def column_gram(self) -> np.ndarray:
        A = sum(op.conj().T @ op for op in self.ops)
        return 0.5 * (A + A.conj().T)


@dataclass(frozen=True)
class InteriorDensity:
    """The positive operator sum_i B_i^* B_i on the level-(N-1) space."""

    A: np.ndarray
    spectrum: np.ndarray
    max_identity_dev: float


def build_space(
    K: TruncatedKernel, cfg: ToleranceConfig = DEFAULT_TOL
) -> KolmogorovSpace:
    """Factor the full Gram and record the graded subspace bases."""
    G = gram(K, K.words)
    rank, V = psd_factor(G, cfg)
    dev = float(np.linalg.norm(V.conj().T @ V - G))
    if dev > 1e-9 * max(1.0, float(np.linalg.norm(G))):
        raise IdentityMismatch("Kolmogorov factorization", "Lambda_N", dev)
    m = K.dim_h
    ranks, bases = [], []
    for level in range(K.N + 1):
        count = len(K.word_set.up_to(level))
        Q = orthonormal_range(V[:, : count * m], cfg)
        bases.append(Q)
        ranks.append(Q.shape[1])
    return KolmogorovSpace(
        kernel=K,
        rank=rank,
        factor=V,
        graded_ranks=tuple(ranks),
        graded_bases=tuple(bases),
    )


def graded_projector(space: KolmogorovSpace, level: int) -> np.ndarray:
    """Orthogonal projector (in C^rank coordinates) onto the span of the
    columns of length <= level."""
    if not 0 <= level <= space.N:
        raise ValueError(f"level {level} not in [0, {space.N}]")
    Q = space.graded_bases[level]
    P = Q @ Q.conj().T
    return 0.5 * (P + P.conj().T)


def compressed_shifts(
    space: KolmogorovSpace,
    K: TruncatedKernel,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> ShiftSystem:
    """Canonical interior shifts B_i on the level-(N-1) coordinates.

    B_i is the minimal-norm solution of B_i V_a = V_{a i} over
    a in Lambda_{N-2}, which automatically annihilates the orthocomplement
    of the level-(N-2) subspace. Well-definedness of the linear extension
    is certified by the solve residual; it can only fail when one-step
    dominance fails.
    """
    if K is not space.kernel and not (
        K.words == space.kernel.words and np.array_equal(K.data, space.kernel.data)
    ):
        raise ValueError("shift construction needs the space's own kernel")
    N = space.N
    Q1 = space.interior_basis()
    q = Q1.shape[1]
    inner = K.word_set.up_to(N - 2) if N >= 2 else ()
    m = K.dim_h
    if not inner:
        ops = tuple(np.zeros((q, q), dtype=complex) for _ in range(K.d))
        return ShiftSystem(kind="compressed-B", ops=ops, column_norm=0.0)
    C = np.hstack([space.v_interior(a) for a in inner])
    scale = max(1.0, K.scale())
    ops = []
    worst = 0.0
    for i in range(1, K.d + 1):
        D = np.hstack([space.v_interior(a + (i,)) for a in inner])
        X, residual = pinv_solve_right(C, D, cfg)
        if residual > cfg.residual_tol * scale:
            raise WellDefinednessFailure(i, residual)
        worst = max(worst, residual)
        ops.append(X)
        # defensive: images of interior columns must already lie in the
        # level-(N-1) subspace (no projection loss)
        for a in inner:
            full = space.v_block(a + (i,))
            loss = float(np.linalg.norm(full - Q1 @ (Q1.conj().T @ full)))
            if loss > 1e-9 * scale:
                raise IdentityMismatch("interior image containment", a + (i,), loss)
    # annihilation of the orthocomplement of the level-(N-2) subspace
    Q2 = space.graded_bases[N - 2]
    P2 = (Q1.conj().T @ Q2) @ (Q2.conj().T @ Q1)
    for i, X in enumerate(ops, start=1):
        dev = float(np.linalg.norm(X @ (np.eye(q) - P2)))
        if dev > 1e-9 * scale:
            raise IdentityMismatch("top-layer annihilation", i, dev)
    A = sum(X.conj().T @ X for X in ops)
    lam = float(np.linalg.eigvalsh(0.5 * (A + A.conj().T))[-1]) if q else 0.0
    return ShiftSystem(
        kind="compressed-B",
        ops=tuple(ops),
        column_norm=float(np.sqrt(max(lam, 0.0))),
        build_residual=worst,
    )


def interior_density(
    shifts: ShiftSystem,
    space: KolmogorovSpace,
    K_sigma: TruncatedKernel,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> InteriorDensity:
    """A = sum_i B_i^* B_i, verified against the shifted kernel.

    Checks 0 <= A <= I (within psd_tol) and the reproducing identity
    V_a^* A V_b = K_Sigma(a, b) for all a, b in Lambda_{N-2}.
    """
    if shifts.dim != space.interior_dim():
        raise ValueError("shift system does not act on the space's interior")
    A = shifts.column_gram()
    spectrum = np.linalg.eigvalsh(A) if A.size else np.zeros(0)
    if A.size:
        if spectrum[0] < -cfg.psd_tol or spectrum[-1] > 1.0 + cfg.psd_tol:
            raise ContractivityFailure(float(spectrum[-1]))
    N = space.N
    inner = space.kernel.word_set.up_to(N - 2) if N >= 2 else ()
    scale = max(1.0, K_sigma.scale())
    worst, where = 0.0, None
    for a in inner:
        Va = space.v_interior(a)
        for b in inner:
            got = Va.conj().T @ A @ space.v_interior(b)
            dev = float(np.max(np.abs(got - K_sigma.block(a, b))))
            if dev > worst:
                worst, where = dev, (a, b)
    if worst > 1e-9 * scale:
        raise IdentityMismatch("interior density identity", where, worst)
    return InteriorDensity(A=A, spectrum=spectrum, max_identity_dev=worst)
