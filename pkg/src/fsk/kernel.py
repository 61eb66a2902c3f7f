"""Truncated operator-valued kernels on Lambda_N x Lambda_N.

A kernel assigns an m x m complex block to every ordered pair of words of
length <= N. Storage is one Hermitian block matrix over the canonical
length-lex word order, so the Gram matrix of any word list is a block
gather and PSD questions reduce to eigenvalue checks.
"""

from dataclasses import dataclass

import numpy as np

from .errors import MissingEntry, ShapeMismatch, SymmetryViolation, WordOutOfRange
from .numerics import DEFAULT_TOL, ToleranceConfig, check_psd, require_hermitian
from .words import Word, WordSet, enumerate_words

BLOCK_SYMMETRY_ATOL = 1e-12


@dataclass(frozen=True)
class TruncatedKernel:
    """Level-N kernel data K(a, b) in L(C^m), Hermitian-symmetric.

    data holds the full block matrix over the canonical word order of
    Lambda_N; block (j, k) of size dim_h x dim_h is K(words[j], words[k]).
    """

    d: int
    N: int
    dim_h: int
    word_set: WordSet
    data: np.ndarray

    @property
    def words(self) -> tuple[Word, ...]:
        return self.word_set.words

    def block(self, row: Word, col: Word) -> np.ndarray:
        m = self.dim_h
        j = self.word_set.index(tuple(row))
        k = self.word_set.index(tuple(col))
        return self.data[j * m : (j + 1) * m, k * m : (k + 1) * m]

    def scale(self) -> float:
        """Largest block entry in absolute value (0 for the zero kernel)."""
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    @staticmethod
    def from_entries(d, N, dim_h, entries) -> "TruncatedKernel":
        """Build from a map (row word, col word) -> block.

        Only canonically ordered pairs (row <= col in length-lex order)
        are required; missing adjoint pairs are filled as conjugate
        transposes. Pairs given twice must agree up to adjoint within
        1e-12 or a SymmetryViolation is raised.
        """
        ws = enumerate_words(d, N)
        m = int(dim_h)
        if m < 1:
            raise ShapeMismatch(f"coefficient dimension must be >= 1, got {dim_h}")
        norm = {}
        for (row, col), blk in entries.items():
            row, col = tuple(row), tuple(col)
            arr = np.asarray_chkfinite(blk, dtype=complex)
            if arr.shape != (m, m):
                raise ShapeMismatch(
                    f"block ({row}, {col}) has shape {arr.shape}, expected {(m, m)}"
                )
            ws.index(row), ws.index(col)  # raises WordOutOfRange on bad words
            norm[(row, col)] = arr
        n = len(ws)
        data = np.zeros((n * m, n * m), dtype=complex)
        for j, row in enumerate(ws):
            for k in range(j, n):
                col = ws[k]
                lower = norm.get((row, col))
                upper = norm.get((col, row))
                if lower is None and upper is None:
                    raise MissingEntry(row, col)
                if lower is not None and upper is not None:
                    dev = float(np.max(np.abs(lower - upper.conj().T)))
                    if dev > BLOCK_SYMMETRY_ATOL * max(
                        1.0, float(np.max(np.abs(lower)))
                    ):
                        raise SymmetryViolation(row, col, dev)
                blk = lower if lower is not None else upper.conj().T
                if j == k:
                    dev = float(np.max(np.abs(blk - blk.conj().T)))
                    if dev > BLOCK_SYMMETRY_ATOL * max(1.0, float(np.max(np.abs(blk)))):
                        raise SymmetryViolation(row, col, dev)
                    blk = 0.5 * (blk + blk.conj().T)
                data[j * m : (j + 1) * m, k * m : (k + 1) * m] = blk
                if k != j:
                    data[k * m : (k + 1) * m, j * m : (j + 1) * m] = blk.conj().T
        return TruncatedKernel(d=d, N=N, dim_h=m, word_set=ws, data=data)

    @staticmethod
    def from_vectors(d, N, vectors, dim_h=None) -> "TruncatedKernel":
        """Gram-rule kernel K(a, b) = V_a^* V_b from explicit columns.

        vectors maps each word of Lambda_N to an (ambient x m) array
        (1-D arrays are read as single columns, m = 1).
        """
        ws = enumerate_words(d, N)
        cols = {}
        m = dim_h
        for w in ws:
            if tuple(w) not in vectors:
                raise MissingEntry(w, w)
            arr = np.asarray(vectors[tuple(w)], dtype=complex)
            if arr.ndim == 1:
                arr = arr[:, None]
            if m is None:
                m = arr.shape[1]
            if arr.shape[1] != m:
                raise ShapeMismatch(
                    f"column block for {w} has {arr.shape[1]} columns, expected {m}"
                )
            cols[tuple(w)] = arr
        stacked = np.hstack([cols[w] for w in ws])
        data = stacked.conj().T @ stacked
        data = 0.5 * (data + data.conj().T)
        return TruncatedKernel(d=d, N=N, dim_h=m, word_set=ws, data=data)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    n_words: int
    dim_h: int
    max_hermitian_dev: float


@dataclass(frozen=True)
class DominanceReport:
    """PSD verdict for K on Lambda_N and for K - K_Sigma on Lambda_{N-1}."""

    pd_full: bool
    pd_full_min_eig: float
    dominance: bool
    dominance_min_eig: float
    difference_spectrum: np.ndarray
    psd_tol: float


def validate_kernel(K: TruncatedKernel) -> ValidationReport:
    """Re-check completeness, block sizes and Hermitian symmetry of an
    assembled kernel; raises on structural violations."""
    n, m = len(K.word_set), K.dim_h
    if K.data.shape != (n * m, n * m):
        raise ShapeMismatch(
            f"kernel data has shape {K.data.shape}, expected {(n * m, n * m)}"
        )
    dev = float(np.max(np.abs(K.data - K.data.conj().T))) if K.data.size else 0.0
    if dev > BLOCK_SYMMETRY_ATOL * max(1.0, K.scale()):
        raise SymmetryViolation(K.words[0], K.words[0], dev)
    return ValidationReport(ok=True, n_words=n, dim_h=m, max_hermitian_dev=dev)


def gram(K: TruncatedKernel, word_list) -> np.ndarray:
    """Block Gram matrix of K over an ordered word list inside Lambda_N."""
    m = K.dim_h
    idx = [K.word_set.index(tuple(w)) for w in word_list]
    if not idx:
        return np.zeros((0, 0), dtype=complex)
    sel = np.concatenate([np.arange(j * m, (j + 1) * m) for j in idx])
    return K.data[np.ix_(sel, sel)]


def shifted_kernel(K: TruncatedKernel) -> TruncatedKernel:
    """One-step shifted kernel (sum over letters of K(a i, b i)) at level N-1."""
    if K.N < 1:
        raise WordOutOfRange("cannot shift a level-0 kernel (no room to shift)")
    ws = enumerate_words(K.d, K.N - 1)
    m = K.dim_h
    n = len(ws)
    data = np.zeros((n * m, n * m), dtype=complex)
    for j, a in enumerate(ws):
        for k, b in enumerate(ws):
            acc = np.zeros((m, m), dtype=complex)
            for i in range(1, K.d + 1):
                acc += K.block(a + (i,), b + (i,))
            data[j * m : (j + 1) * m, k * m : (k + 1) * m] = acc
    data = 0.5 * (data + data.conj().T)
    return TruncatedKernel(d=K.d, N=K.N - 1, dim_h=m, word_set=ws, data=data)


def check_dominance(
    K: TruncatedKernel, cfg: ToleranceConfig = DEFAULT_TOL
) -> DominanceReport:
    """Test positivity of K on Lambda_N and of K - K_Sigma on Lambda_{N-1}."""
    validate_kernel(K)
    if K.N < 1:
        raise WordOutOfRange("dominance needs N >= 1")
    pd_ok, pd_min = check_psd(gram(K, K.words), cfg)
    interior = K.word_set.up_to(K.N - 1)
    diff = gram(K, interior) - gram(shifted_kernel(K), interior)
    dom_ok, dom_min = check_psd(diff, cfg)
    spectrum = np.linalg.eigvalsh(require_hermitian(diff)) if diff.size else np.zeros(0)
    return DominanceReport(
        pd_full=pd_ok,
        pd_full_min_eig=pd_min,
        dominance=dom_ok,
        dominance_min_eig=dom_min,
        difference_spectrum=spectrum,
        psd_tol=cfg.psd_tol,
    )
