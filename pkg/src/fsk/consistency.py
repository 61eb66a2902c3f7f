"""Shift-consistency of level-N boundary data.

The boundary operators T_i on the level-(N-1) space are determined by the
pairing equations <V_a, T_i V_b> = K(a, b i); the solver recovers them via
minimal-norm Gram solves, assembles operator matrices, and then checks, in
order: pairing residuals (b2), interior anchors, boundary Gram matching
(b3), the row-contraction bound, and the compression identity against the
interior density. All violations are collected; there is no early exit.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch
from .kernel import TruncatedKernel, gram
from .kolmogorov import KolmogorovSpace, ShiftSystem, compressed_shifts
from .numerics import DEFAULT_TOL, ToleranceConfig, gram_solve, pinv_solve_right


@dataclass(frozen=True)
class Violation:
    """One failed check: kind in {b2-residual, interior-anchor,
    b3-mismatch, contraction, compression}, location names the words and
    letters involved, magnitude is the raw deviation."""

    kind: str
    location: tuple
    magnitude: float


@dataclass(frozen=True)
class ConsistencyReport:
    feasible: bool
    ts: ShiftSystem | None
    candidate_ops: tuple[np.ndarray, ...]
    violations: tuple[Violation, ...]
    lambda_max: float
    compression_check: float
    b2_max_residual: float
    anchor_max_dev: float
    b3_max_dev: float
    b3_argmax: tuple | None
    assembly_residual: float
    residual_tol: float
    psd_tol: float


def check_row_contraction(shifts, cfg: ToleranceConfig = DEFAULT_TOL):
    """(ok, lambda_max) for the column operator of a d-tuple.

    Accepts a ShiftSystem or a plain sequence of square matrices.
    """
    ops = shifts.ops if isinstance(shifts, ShiftSystem) else tuple(
        np.asarray(op, dtype=complex) for op in shifts
    )
    if not ops:
        return True, 0.0
    shape = ops[0].shape
    if any(op.shape != shape for op in ops) or shape[0] != shape[1]:
        raise ShapeMismatch("operator tuple has mismatched shapes")
    if shape[0] == 0:
        return True, 0.0
    A = sum(op.conj().T @ op for op in ops)
    lam = float(np.linalg.eigvalsh(0.5 * (A + A.conj().T))[-1])
    return lam <= 1.0 + cfg.psd_tol, lam


def solve_boundary_shifts(
    K: TruncatedKernel,
    space: KolmogorovSpace,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> ConsistencyReport:
    """Decide shift-consistency of the level-N boundary data.

    Infeasibility is a report outcome, never an exception; structural
    errors (kernel/space mismatch) raise.
    """
    if K is not space.kernel and not (
        K.words == space.kernel.words
        and K.dim_h == space.kernel.dim_h
        and np.array_equal(K.data, space.kernel.data)
    ):
        raise ValueError("kernel and Kolmogorov space do not match")
    N, m, d = K.N, K.dim_h, K.d
    interior = K.word_set.up_to(N - 1)
    inner = K.word_set.up_to(N - 2) if N >= 2 else ()
    q = space.interior_dim()
    scale = max(1.0, K.scale())
    violations: list[Violation] = []

    vt = {a: space.v_interior(a) for a in interior}
    C1 = (
        np.hstack([vt[a] for a in interior])
        if interior
        else np.zeros((q, 0), dtype=complex)
    )
    G1 = gram(K, interior)

    # pairing solves, eq (b2): one vector T_i V_b per letter and word
    b2_max = 0.0
    Y = {}
    for i in range(1, d + 1):
        for b in interior:
            t = np.vstack([K.block(a, b + (i,)) for a in interior])
            c, res = gram_solve(G1, t, cfg)
            Y[(i, b)] = C1 @ c
            b2_max = max(b2_max, res)
            if res > cfg.residual_tol * max(1.0, float(np.linalg.norm(t))):
                violations.append(Violation("b2-residual", (b, i), res))

    # operator assembly: T_i C1 = [Y_{i,b}]_b, minimal norm
    assembly = 0.0
    ops = []
    for i in range(1, d + 1):
        Yi = (
            np.hstack([Y[(i, b)] for b in interior])
            if interior
            else np.zeros((q, 0), dtype=complex)
        )
        Ti, res = pinv_solve_right(C1, Yi, cfg)
        assembly = max(assembly, res)
        ops.append(Ti)
    ops = tuple(ops)

    # interior anchors: T_i V_a = V_{a i} on Lambda_{N-2}
    anchor_max = 0.0
    for i in range(1, d + 1):
        for a in inner:
            dev = float(np.max(np.abs(ops[i - 1] @ vt[a] - vt[a + (i,)])))
            anchor_max = max(anchor_max, dev)
            if dev > cfg.residual_tol * scale:
                violations.append(Violation("interior-anchor", (a, i), dev))

    # boundary Gram matching, eq (b3)
    b3_max, b3_arg = 0.0, None
    for i in range(1, d + 1):
        for a in interior:
            lhs_i = ops[i - 1] @ vt[a]
            for j in range(1, d + 1):
                for b in interior:
                    got = lhs_i.conj().T @ (ops[j - 1] @ vt[b])
                    dev = float(np.max(np.abs(got - K.block(a + (i,), b + (j,)))))
                    if dev > b3_max:
                        b3_max, b3_arg = dev, (a, i, b, j)
                    if dev > cfg.residual_tol * scale:
                        violations.append(Violation("b3-mismatch", (a, i, b, j), dev))

    # row-contraction bound
    _, lam = check_row_contraction(ops, cfg)
    if lam > 1.0 + cfg.psd_tol:
        violations.append(Violation("contraction", (), lam - 1.0))

    # compression identity against the interior density
    if inner:
        A_T = sum(op.conj().T @ op for op in ops)
        A_B = compressed_shifts(space, K, cfg).column_gram()
        Q1 = space.interior_basis()
        Q2 = space.graded_bases[N - 2]
        R = Q2.conj().T @ Q1
        comp_dev = float(np.max(np.abs(R @ (A_T - A_B) @ R.conj().T)))
    else:
        comp_dev = 0.0
    if comp_dev > 1e-9 * scale:
        violations.append(Violation("compression", (), comp_dev))

    feasible = not violations
    ts = (
        ShiftSystem(
            kind="boundary-T",
            ops=ops,
            column_norm=float(np.sqrt(max(lam, 0.0))),
            build_residual=max(b2_max, assembly),
        )
        if feasible
        else None
    )
    return ConsistencyReport(
        feasible=feasible,
        ts=ts,
        candidate_ops=ops,
        violations=tuple(violations),
        lambda_max=lam,
        compression_check=comp_dev,
        b2_max_residual=b2_max,
        anchor_max_dev=anchor_max,
        b3_max_dev=b3_max,
        b3_argmax=b3_arg,
        assembly_residual=assembly,
        residual_tol=cfg.residual_tol,
        psd_tol=cfg.psd_tol,
    )
