"""Truncated dilation: structural invariants, extension evaluation, depth
stability, and dominance of the extension.

Derived expectations and their oracles:
    - first showcase kernel at (111,111): the shift chain kills every
      word of length >= 2, so the value is 0 (direct matrix evaluation
      agrees)
    - delta-half kernel: extension values are the point-mass moments
      2^-(m+n); the defect slot is sqrt(1 - 1/4) = sqrt(3)/2
"""

import numpy as np
import pytest

from fsk import (
    build_dilation,
    build_space,
    compressed_shifts,
    extend_kernel,
    solve_boundary_shifts,
    verify_extension,
)
from fsk.dilation import _transport
from fsk.errors import ContractivityFailure, WordOutOfRange
from fsk.kolmogorov import ShiftSystem
from fsk.words import enumerate_words


def zero_shift_system(d, q):
    return ShiftSystem(
        kind="compressed-B",
        ops=tuple(np.zeros((q, q), dtype=complex) for _ in range(d)),
        column_norm=0.0,
    )


def test_zero_tuple_dilation(cfg):
    dil = build_dilation(zero_shift_system(2, 1), 2, cfg)
    # defect of the zero tuple is the identity
    S1 = dil.S[0].toarray()
    assert abs(S1[dil.level_offsets[0], 0] - 1.0) < 1e-15
    # adjoints annihilate the base
    J = dil.J.toarray()
    for S in dil.S:
        assert np.linalg.norm(S.toarray().conj().T @ J) < 1e-15
    assert dil.range_dev <= 1e-10


def test_invariants_on_first_example(kernel_d1, cfg):
    sp = build_space(kernel_d1, cfg)
    B = compressed_shifts(sp, kernel_d1, cfg)
    dil = build_dilation(B, 3, cfg, base_vector=sp.v_interior(()))
    J = dil.J.toarray()
    eye_safe = np.eye(dil.dim, dil.safe_dim)
    for i, Si in enumerate(dil.S):
        Sid = Si.toarray()
        # intertwining, recomputed directly
        assert np.linalg.norm(Sid.conj().T @ J - J @ B.ops[i]) <= 1e-12
        for j, Sj in enumerate(dil.S):
            prod = (Sid.conj().T @ Sj.toarray())[:, : dil.safe_dim]
            target = eye_safe if i == j else 0.0
            assert np.linalg.norm(prod - target) <= 1e-12
    assert np.linalg.norm(J.conj().T @ J - np.eye(dil.base_dim)) <= 1e-12


def test_delta_half_defect_slot(kernel_delta_half, cfg):
    sp = build_space(kernel_delta_half, cfg)
    B = compressed_shifts(sp, kernel_delta_half, cfg)
    dil = build_dilation(B, 4, cfg, base_vector=sp.v_interior(()))
    S = dil.S[0].toarray()
    assert abs(S[dil.level_offsets[0], 0] - np.sqrt(3.0) / 2.0) < 1e-12
    assert dil.intertwine_dev <= 1e-12 and dil.range_dev <= 1e-12


def test_contractivity_failure(cfg):
    bad = ShiftSystem(
        kind="boundary-T", ops=(2.0 * np.eye(2, dtype=complex),), column_norm=2.0
    )
    with pytest.raises(ContractivityFailure):
        build_dilation(bad, 2, cfg)


def test_extension_values_first_example(kernel_d1, cfg):
    sp = build_space(kernel_d1, cfg)
    B = compressed_shifts(sp, kernel_d1, cfg)
    dil = build_dilation(B, 4, cfg, base_vector=sp.v_interior(()))
    vals = extend_kernel(
        dil, sp, [((1,), (2,)), ((1,), (1,)), ((1, 1, 1), (1, 1, 1))]
    )
    assert abs(vals[((1,), (2,))][0, 0]) < 1e-14
    assert abs(vals[((1,), (1,))][0, 0] - 0.25) < 1e-14
    assert abs(vals[((1, 1, 1), (1, 1, 1))][0, 0]) < 1e-14


def test_extension_values_delta_half(kernel_delta_half, cfg):
    sp = build_space(kernel_delta_half, cfg)
    B = compressed_shifts(sp, kernel_delta_half, cfg)
    dil = build_dilation(B, 5, cfg, base_vector=sp.v_interior(()))
    words = [(), (1,), (1, 1), (1, 1, 1)]
    vals = extend_kernel(dil, sp, [(a, b) for a in words for b in words])
    for (a, b), blk in vals.items():
        assert abs(blk[0, 0] - 2.0 ** -(len(a) + len(b))) < 1e-12


def test_word_longer_than_depth_rejected(kernel_d1, cfg):
    sp = build_space(kernel_d1, cfg)
    B = compressed_shifts(sp, kernel_d1, cfg)
    dil = build_dilation(B, 2, cfg, base_vector=sp.v_interior(()))
    with pytest.raises(WordOutOfRange):
        extend_kernel(dil, sp, [((1, 1, 1), ())])


def test_depth_stability(kernel_d1, kernel_delta_half, dominant_population, cfg):
    sample = [kernel_d1, kernel_delta_half, *dominant_population[:4]]
    for K in sample:
        sp = build_space(K, cfg)
        B = compressed_shifts(sp, K, cfg)
        L = K.N + 2
        words = enumerate_words(K.d, L).words
        pairs = [(a, b) for a in words for b in words]
        d1 = build_dilation(B, L, cfg, base_vector=sp.v_interior(()))
        d2 = build_dilation(B, L + 2, cfg, base_vector=sp.v_interior(()))
        v1 = extend_kernel(d1, sp, pairs)
        v2 = extend_kernel(d2, sp, pairs)
        worst = max(float(np.max(np.abs(v1[p] - v2[p]))) for p in pairs)
        assert worst <= 1e-12


def test_word_identity_through_the_dilation(kernel_d1, dominant_population, cfg):
    # pulling the transported column back through J recovers the
    # interior coordinates of the word's Kolmogorov column
    for K in [kernel_d1, *dominant_population[:4]]:
        sp = build_space(K, cfg)
        B = compressed_shifts(sp, K, cfg)
        dil = build_dilation(B, K.N + 2, cfg, base_vector=sp.v_interior(()))
        interior = K.word_set.up_to(K.N - 1)
        cache = _transport(dil, interior)
        for w in interior:
            got = (dil.J.conj().T.tocsr() @ cache[w]).toarray()
            assert np.max(np.abs(got - sp.v_interior(w))) <= 1e-9


def test_extension_gram_is_psd(dominant_population, cfg):
    from fsk.numerics import check_psd

    for K in dominant_population[:4]:
        sp = build_space(K, cfg)
        B = compressed_shifts(sp, K, cfg)
        dil = build_dilation(B, K.N + 2, cfg, base_vector=sp.v_interior(()))
        words = enumerate_words(K.d, K.N + 1).words
        vals = extend_kernel(dil, sp, [(a, b) for a in words for b in words])
        m = K.dim_h
        n = len(words)
        G = np.zeros((n * m, n * m), dtype=complex)
        for j, a in enumerate(words):
            for k, b in enumerate(words):
                G[j * m : (j + 1) * m, k * m : (k + 1) * m] = vals[(a, b)]
        ok, _ = check_psd(0.5 * (G + G.conj().T), cfg)
        assert ok


def test_verify_extension_boundary_mode(kernel_d1, cfg):
    sp = build_space(kernel_d1, cfg)
    rep = solve_boundary_shifts(kernel_d1, sp, cfg)
    dil = build_dilation(rep.ts, 4, cfg, base_vector=sp.v_interior(()))
    ver = verify_extension(kernel_d1, dil, sp, "boundary", kernel_d1.words, cfg)
    assert ver.ok
    assert ver.e1_max_dev <= 1e-12
    assert ver.e3_max_dev <= 1e-12
    assert ver.e2_min_eig >= -1e-10


def test_verify_extension_interior_mode(kernel_d2, cfg):
    sp = build_space(kernel_d2, cfg)
    B = compressed_shifts(sp, kernel_d2, cfg)
    dil = build_dilation(B, 4, cfg, base_vector=sp.v_interior(()))
    test_words = enumerate_words(2, 3).words
    ver = verify_extension(kernel_d2, dil, sp, "interior", test_words, cfg)
    assert ver.ok
    assert ver.e1_max_dev <= 1e-12
    assert ver.e2_min_eig >= -1e-10
    assert ver.e3_max_dev is None


def test_tampered_extension_is_detected(kernel_d1, cfg):
    sp = build_space(kernel_d1, cfg)
    B = compressed_shifts(sp, kernel_d1, cfg)
    dil = build_dilation(B, 4, cfg, base_vector=sp.v_interior(()))
    tampered = {((), ()): kernel_d1.block((), ()) + 1.0}
    ver = verify_extension(
        kernel_d1, dil, sp, "interior", kernel_d1.word_set.up_to(1), cfg,
        extended=tampered,
    )
    assert not ver.ok
    assert ver.e1_max_dev == pytest.approx(1.0, abs=1e-12)


def test_test_words_must_fit_below_depth(kernel_d1, cfg):
    sp = build_space(kernel_d1, cfg)
    B = compressed_shifts(sp, kernel_d1, cfg)
    dil = build_dilation(B, 2, cfg, base_vector=sp.v_interior(()))
    with pytest.raises(WordOutOfRange):
        verify_extension(kernel_d1, dil, sp, "interior", kernel_d1.words, cfg)
