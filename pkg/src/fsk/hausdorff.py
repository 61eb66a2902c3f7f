"""Commutative (d = 1) bridge: atomic measures on [0,1], moment sequences,
Hankel kernels, and complete-monotonicity feasibility checks.

A moment sequence of a positive measure on [0,1] yields a Hankel kernel
K(m, n) = s_{m+n} that is automatically positive and one-step dominant,
so measure-generated data feed the full extension pipeline. The inverse
problem (recovering a measure) is out of scope; only feasibility via
alternating finite differences is provided.
"""

from dataclasses import dataclass

import numpy as np

from .kernel import TruncatedKernel
from .numerics import DEFAULT_TOL, ToleranceConfig
from .words import enumerate_words

MomentSequence = np.ndarray


@dataclass(frozen=True)
class AtomicMeasure:
    """Finitely many atoms (location, weight) with locations in [0,1],
    pairwise distinct, and strictly positive weights."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        locs = [x for x, _ in self.atoms]
        if any(not (0.0 <= x <= 1.0) for x in locs):
            raise ValueError("atom locations must lie in [0, 1]")
        if any(w <= 0 for _, w in self.atoms):
            raise ValueError("atom weights must be strictly positive")
        if len(set(locs)) != len(locs):
            raise ValueError("atom locations must be pairwise distinct")

    def total_mass(self) -> float:
        return sum(w for _, w in self.atoms)


def moments(mu: AtomicMeasure, k_max: int) -> MomentSequence:
    """Power moments s_k = sum of w * x^k for k = 0..k_max (0^0 = 1)."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    s = np.zeros(k_max + 1)
    s[0] = mu.total_mass()
    for k in range(1, k_max + 1):
        s[k] = sum(w * x**k for x, w in mu.atoms)
    return s


def hankel_kernel(s, N: int) -> TruncatedKernel:
    """Scalar d = 1 kernel on {0..N} with K(m, n) = s_{m+n}.

    Needs moments s_0..s_{2N}, i.e. len(s) >= 2N + 1.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 1 or len(s) < 2 * N + 1:
        raise ValueError(f"need at least {2 * N + 1} moments for level {N}, got {len(s)}")
    ws = enumerate_words(1, N)
    data = np.array(
        [[s[m + n] for n in range(N + 1)] for m in range(N + 1)], dtype=complex
    )
    return TruncatedKernel(d=1, N=N, dim_h=1, word_set=ws, data=data)


def check_complete_monotone(s, cfg: ToleranceConfig = DEFAULT_TOL):
    """Alternating finite differences test for Hausdorff feasibility.

    Computes (-1)^k Delta^k s_j for all k + j <= M and accepts iff every
    value is >= -psd_tol * max(1, s_0). Returns (ok, (k, j, value)) where
    the triple locates the minimal value encountered.
    """
    s = np.asarray_chkfinite(s, dtype=float)
    if s.ndim != 1 or len(s) == 0:
        raise ValueError("moment sequence must be a nonempty 1-D array")
    floor = -cfg.psd_tol * max(1.0, float(s[0]))
    worst = (0, 0, float(s[0]))
    row = s.copy()
    for k in range(len(s)):
        signed = ((-1.0) ** k) * row
        j = int(np.argmin(signed))
        if signed[j] < worst[2]:
            worst = (k, j, float(signed[j]))
        row = np.diff(row)
    return worst[2] >= floor, worst
