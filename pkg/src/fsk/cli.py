"""Batch front end.

Usage:
    fsk check       input.json   validate + positivity + dominance
    fsk analyze     input.json   space ranks, shift spectrum, interior density
    fsk consistency input.json   boundary shift-consistency report
    fsk extend      input.json   extended-kernel values on word pairs
    fsk verify      input.json   interior/boundary extension certificates
    fsk hausdorff   input.json   moment-sequence feasibility pipeline
    fsk example     d1|d2|delta-half   regenerate a bundled kernel, full pipeline

Inputs are JSON documents with "kind" one of kernel | measure | moments;
kernel entries may list only canonically ordered word pairs (adjoints are
filled in), complex scalars are [re, im] pairs or bare reals, words are
arrays of integers. Exit status: 0 all checks passed, 1 an analytic
check said no (report still complete), 2 input or usage error.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import fixtures
from .consistency import ConsistencyReport, solve_boundary_shifts
from .dilation import build_dilation, extend_kernel, verify_extension
from .errors import FskError, InputFormatError
from .hausdorff import AtomicMeasure, check_complete_monotone, hankel_kernel, moments
from .kernel import (
    TruncatedKernel,
    check_dominance,
    gram,
    shifted_kernel,
    validate_kernel,
)
from .kolmogorov import build_space, compressed_shifts, interior_density
from .numerics import ToleranceConfig
from .words import enumerate_words

GUARDRAILS = {"d": 4, "N": 6, "depth": 12}

_OPTION_KEYS = {"depth", "psd_tol", "rank_tol", "residual_tol", "test_max_len", "N"}


@dataclass(frozen=True)
class ProblemSpec:
    kind: str
    kernel: TruncatedKernel | None = None
    measure: AtomicMeasure | None = None
    moment_seq: np.ndarray | None = None
    options: dict = field(default_factory=dict)


@dataclass
class RunReport:
    command: str
    exit_status: int
    stages: dict

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "exit_status": self.exit_status,
            "stages": self.stages,
        }
        return json.dumps(doc, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# JSON input


def _complex_scalar(v, where):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(
        isinstance(x, (int, float)) for x in v
    ):
        return complex(v[0], v[1])
    raise InputFormatError(f"{where}: complex scalars are numbers or [re, im]")


def _word(v, where):
    if not isinstance(v, list) or any(not isinstance(a, int) for a in v):
        raise InputFormatError(f"{where}: words are arrays of integers")
    return tuple(v)


def _require_keys(doc, allowed, required, where):
    unknown = set(doc) - allowed
    if unknown:
        raise InputFormatError(f"{where}: unknown fields {sorted(unknown)}")
    missing = required - set(doc)
    if missing:
        raise InputFormatError(f"{where}: missing fields {sorted(missing)}")


def _parse_options(doc) -> dict:
    if not isinstance(doc, dict):
        raise InputFormatError("options must be an object")
    unknown = set(doc) - _OPTION_KEYS
    if unknown:
        raise InputFormatError(f"options: unknown fields {sorted(unknown)}")
    out = {}
    for key, val in doc.items():
        if key in ("depth", "test_max_len", "N"):
            if not isinstance(val, int) or val < 0:
                raise InputFormatError(f"options.{key} must be a nonnegative integer")
        else:
            if not isinstance(val, (int, float)) or val <= 0:
                raise InputFormatError(f"options.{key} must be a positive number")
        out[key] = val
    return out


def _check_guardrails(options, d=None, N=None, force=False):
    if force:
        return
    limits = []
    if d is not None and d > GUARDRAILS["d"]:
        limits.append(f"d={d} > {GUARDRAILS['d']}")
    if N is not None and N > GUARDRAILS["N"]:
        limits.append(f"N={N} > {GUARDRAILS['N']}")
    depth = options.get("depth")
    if depth is not None and depth > GUARDRAILS["depth"]:
        limits.append(f"depth={depth} > {GUARDRAILS['depth']}")
    if limits:
        raise InputFormatError(
            "guardrail violation (" + ", ".join(limits) + "); pass --force to override"
        )


def parse_input(text: str, force: bool = False) -> ProblemSpec:
    """Parse and fully validate a JSON problem document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputFormatError("document must be an object with a 'kind' field")
    kind = doc["kind"]
    options = _parse_options(doc.get("options", {}))
    if kind == "kernel":
        _require_keys(
            doc,
            {"kind", "d", "N", "dim_h", "entries", "options"},
            {"d", "N", "dim_h", "entries"},
            "kernel",
        )
        d, N, m = doc["d"], doc["N"], doc["dim_h"]
        for name, val in (("d", d), ("N", N), ("dim_h", m)):
            if not isinstance(val, int) or val < (1 if name != "N" else 0):
                raise InputFormatError(f"kernel.{name} must be a positive integer")
        _check_guardrails(options, d=d, N=N, force=force)
        entries = {}
        if not isinstance(doc["entries"], list):
            raise InputFormatError("kernel.entries must be an array")
        for pos, entry in enumerate(doc["entries"]):
            where = f"entries[{pos}]"
            if not isinstance(entry, dict):
                raise InputFormatError(f"{where}: must be an object")
            _require_keys(entry, {"row", "col", "block"}, {"row", "col", "block"}, where)
            row = _word(entry["row"], where)
            col = _word(entry["col"], where)
            blk = entry["block"]
            if not isinstance(blk, list) or len(blk) != m or any(
                not isinstance(r, list) or len(r) != m for r in blk
            ):
                raise InputFormatError(f"{where}: block must be a {m}x{m} array")
            mat = np.array(
                [[_complex_scalar(v, where) for v in r] for r in blk], dtype=complex
            )
            if (row, col) in entries:
                raise InputFormatError(f"{where}: duplicate pair ({row}, {col})")
            entries[(row, col)] = mat
        kernel = TruncatedKernel.from_entries(d, N, m, entries)
        return ProblemSpec(kind="kernel", kernel=kernel, options=options)
    if kind == "measure":
        _require_keys(doc, {"kind", "atoms", "options"}, {"atoms"}, "measure")
        if not isinstance(doc["atoms"], list) or not doc["atoms"]:
            raise InputFormatError("measure.atoms must be a nonempty array")
        atoms = []
        for pos, atom in enumerate(doc["atoms"]):
            where = f"atoms[{pos}]"
            if not isinstance(atom, dict):
                raise InputFormatError(f"{where}: must be an object")
            _require_keys(atom, {"x", "w"}, {"x", "w"}, where)
            if not all(isinstance(atom[k], (int, float)) for k in ("x", "w")):
                raise InputFormatError(f"{where}: x and w must be numbers")
            atoms.append((float(atom["x"]), float(atom["w"])))
        try:
            measure = AtomicMeasure(atoms=tuple(atoms))
        except ValueError as exc:
            raise InputFormatError(f"measure: {exc}") from exc
        _check_guardrails(options, N=options.get("N"), force=force)
        return ProblemSpec(kind="measure", measure=measure, options=options)
    if kind == "moments":
        _require_keys(doc, {"kind", "s", "options"}, {"s"}, "moments")
        s = doc["s"]
        if (
            not isinstance(s, list)
            or not s
            or any(not isinstance(v, (int, float)) for v in s)
        ):
            raise InputFormatError("moments.s must be a nonempty numeric array")
        _check_guardrails(options, N=options.get("N"), force=force)
        return ProblemSpec(
            kind="moments", moment_seq=np.array(s, dtype=float), options=options
        )
    raise InputFormatError(f"unknown kind {kind!r}")


def serialize_spec(spec: ProblemSpec) -> str:
    """Canonical JSON for a parsed spec; parse_input(serialize_spec(s))
    reproduces s exactly."""
    if spec.kind == "kernel":
        K = spec.kernel
        entries = []
        for j, row in enumerate(K.words):
            for k in range(j, len(K.words)):
                col = K.words[k]
                blk = K.block(row, col)
                entries.append(
                    {
                        "row": list(row),
                        "col": list(col),
                        "block": [
                            [[float(z.real), float(z.imag)] for z in r] for r in blk
                        ],
                    }
                )
        doc = {
            "kind": "kernel",
            "d": K.d,
            "N": K.N,
            "dim_h": K.dim_h,
            "entries": entries,
            "options": spec.options,
        }
    elif spec.kind == "measure":
        doc = {
            "kind": "measure",
            "atoms": [{"x": x, "w": w} for x, w in spec.measure.atoms],
            "options": spec.options,
        }
    else:
        doc = {
            "kind": "moments",
            "s": [float(v) for v in spec.moment_seq],
            "options": spec.options,
        }
    return json.dumps(doc, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# report helpers


def _judged(value, tol, ok):
    return {"value": value, "tol": tol, "ok": bool(ok)}


def _reals(arr):
    return [float(v) for v in np.asarray(arr).real]

def _location(loc):
    return [list(x) if isinstance(x, tuple) else x for x in loc]


def _block_json(M):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


def _cfg_from_options(options) -> ToleranceConfig:
    kw = {
        k: options[k]
        for k in ("psd_tol", "rank_tol", "residual_tol")
        if k in options
    }
    return ToleranceConfig(**kw)


def _to_kernel(spec: ProblemSpec) -> TruncatedKernel:
    if spec.kind == "kernel":
        return spec.kernel
    if spec.kind == "measure":
        N = spec.options.get("N", 2)
        return hankel_kernel(moments(spec.measure, 2 * N), N)
    N = spec.options.get("N", (len(spec.moment_seq) - 1) // 2)
    return hankel_kernel(spec.moment_seq, N)


def _consistency_json(rep: ConsistencyReport) -> dict:
    return {
        "feasible": rep.feasible,
        "lambda_max": _judged(rep.lambda_max, 1.0 + rep.psd_tol, rep.lambda_max <= 1.0 + rep.psd_tol),
        "b2_max_residual": _judged(
            rep.b2_max_residual, rep.residual_tol, rep.b2_max_residual <= rep.residual_tol
        ),
        "anchor_max_dev": _judged(
            rep.anchor_max_dev, rep.residual_tol, rep.anchor_max_dev <= rep.residual_tol
        ),
        "b3_max_dev": _judged(
            rep.b3_max_dev, rep.residual_tol, rep.b3_max_dev <= rep.residual_tol
        ),
        "b3_argmax": _location(rep.b3_argmax) if rep.b3_argmax else None,
        "compression_check": _judged(
            rep.compression_check, 1e-9, rep.compression_check <= 1e-9
        ),
        "assembly_residual": rep.assembly_residual,
        "violations": [
            {"kind": v.kind, "location": _location(v.location), "magnitude": v.magnitude}
            for v in rep.violations
        ],
    }


# ---------------------------------------------------------------------------
# pipeline stages


def _stage_check(K, cfg):
    val = validate_kernel(K)
    dom = check_dominance(K, cfg)
    stage = {
        "validation": {
            "ok": val.ok,
            "n_words": val.n_words,
            "dim_h": val.dim_h,
            "max_hermitian_dev": val.max_hermitian_dev,
        },
        "dominance": {
            "pd_full": _judged(dom.pd_full_min_eig, -cfg.psd_tol, dom.pd_full),
            "dominance": _judged(dom.dominance_min_eig, -cfg.psd_tol, dom.dominance),
            "difference_spectrum": _reals(dom.difference_spectrum),
        },
    }
    return stage, dom


def _stage_analyze(K, space, cfg):
    shifts = compressed_shifts(space, K, cfg)
    density = interior_density(shifts, space, shifted_kernel(K), cfg)
    stage = {
        "rank": space.rank,
        "graded_ranks": list(space.graded_ranks),
        "shift_column_norm": _judged(
            shifts.column_norm, 1.0 + cfg.psd_tol, shifts.column_norm <= 1.0 + cfg.psd_tol
        ),
        "density_spectrum": _reals(density.spectrum),
        "density_identity_dev": _judged(
            density.max_identity_dev, 1e-9, density.max_identity_dev <= 1e-9
        ),
    }
    return stage, shifts, density


def _extension_json(rep) -> dict:
    out = {
        "mode": rep.mode,
        "e1_max_dev": _judged(rep.e1_max_dev, rep.dev_tol, rep.e1_ok),
        "e2_min_eig": _judged(rep.e2_min_eig, -rep.psd_tol, rep.e2_ok),
        "ok": rep.ok,
    }
    if rep.e3_max_dev is not None:
        out["e3_max_dev"] = _judged(rep.e3_max_dev, rep.dev_tol, rep.e3_ok)
    return out


def _precondition_failure(command, stage, reason) -> RunReport:
    return RunReport(
        command=command,
        exit_status=2,
        stages={"error": {"stage": stage, "reason": reason}},
    )


def run(spec: ProblemSpec, command: str, mode=None, pairs=None, stage=None) -> RunReport:
    """Dispatch one command over a parsed spec; never raises for analytic
    negatives, which are reported with exit_status 1."""
    cfg = _cfg_from_options(spec.options)

    if command == "hausdorff":
        if spec.kind == "kernel":
            return _precondition_failure(
                command, "hausdorff", "needs a measure or moments payload"
            )
        if spec.kind == "measure":
            N = spec.options.get("N", 2)
            s = moments(spec.measure, 2 * N)
        else:
            s = spec.moment_seq
            N = spec.options.get("N", (len(s) - 1) // 2)
            if len(s) < 2 * N + 1:
                return _precondition_failure(
                    command, "hausdorff", f"need {2 * N + 1} moments for level {N}"
                )
        ok_cm, worst = check_complete_monotone(s, cfg)
        K = hankel_kernel(s, N)
        stages = {
            "moments": {"s": [float(v) for v in s], "level": N},
            "complete_monotonicity": {
                "ok": ok_cm,
                "worst": {"k": worst[0], "j": worst[1], "value": worst[2]},
                "tol": -cfg.psd_tol * max(1.0, float(s[0])),
            },
        }
        chk, dom = _stage_check(K, cfg)
        stages.update(chk)
        status = 0 if (ok_cm and dom.pd_full and dom.dominance) else 1
        return RunReport(command=command, exit_status=status, stages=stages)

    K = _to_kernel(spec)
    stages, dom = _stage_check(K, cfg)
    if command == "check":
        status = 0 if (dom.pd_full and dom.dominance) else 1
        return RunReport(command=command, exit_status=status, stages=stages)

    if not (dom.pd_full and dom.dominance):
        return _precondition_failure(
            command, command, "dominance precondition not met (run `check`)"
        )

    space = build_space(K, cfg)
    if command == "analyze":
        try:
            analyze, _, _ = _stage_analyze(K, space, cfg)
        except FskError as exc:
            stages["analyze"] = {"error": str(exc)}
            return RunReport(command=command, exit_status=1, stages=stages)
        stages["analyze"] = analyze
        return RunReport(command=command, exit_status=0, stages=stages)

    if command == "consistency":
        rep = solve_boundary_shifts(K, space, cfg)
        stages["consistency"] = _consistency_json(rep)
        return RunReport(
            command=command, exit_status=0 if rep.feasible else 1, stages=stages
        )

    if command in ("extend", "verify"):
        depth = spec.options.get("depth", K.N + 2)
        rep = solve_boundary_shifts(K, space, cfg)
        stages["consistency"] = _consistency_json(rep)
        use_boundary = mode == "boundary" and rep.feasible
        shifts = rep.ts if use_boundary else compressed_shifts(space, K, cfg)
        used = "boundary" if use_boundary else "interior"
        dil = build_dilation(shifts, depth, cfg, base_vector=space.v_interior(()))
        if command == "extend":
            if pairs is None:
                pairs = [(a, b) for a in K.words for b in K.words]
            values = extend_kernel(dil, space, pairs)
            stages["extension"] = {
                "mode": used,
                "depth": depth,
                "values": [
                    {"row": list(a), "col": list(b), "block": _block_json(v)}
                    for (a, b), v in sorted(
                        values.items(), key=lambda kv: (len(kv[0][0]), kv[0][0], len(kv[0][1]), kv[0][1])
                    )
                ],
            }
            return RunReport(command=command, exit_status=0, stages=stages)
        max_len = spec.options.get("test_max_len", min(K.N + 1, depth - 1))
        if max_len > depth - 1:
            return _precondition_failure(
                command, "verify", f"test_max_len {max_len} exceeds depth-1 = {depth - 1}"
            )
        test_words = enumerate_words(K.d, max_len).words
        ver = verify_extension(K, dil, space, used, test_words, cfg)
        stages["verification"] = _extension_json(ver)
        stages["verification"]["depth"] = depth
        stages["verification"]["test_max_len"] = max_len
        return RunReport(
            command=command, exit_status=0 if ver.ok else 1, stages=stages
        )

    raise InputFormatError(f"unknown command {command!r}")


def run_example(name: str, stage: str = "all", cfg: ToleranceConfig | None = None) -> RunReport:
    """Regenerate a bundled kernel from its defining data and run the full
    pipeline (or one named stage of it)."""
    if name not in fixtures.EXAMPLES:
        raise InputFormatError(
            f"unknown example {name!r}; choose from {sorted(fixtures.EXAMPLES)}"
        )
    cfg = cfg or ToleranceConfig()
    K = fixtures.EXAMPLES[name]()
    command = f"example {name}"
    stages, dom = _stage_check(K, cfg)
    analytic_ok = dom.pd_full and dom.dominance
    if stage == "check" or not analytic_ok:
        return RunReport(
            command=command, exit_status=0 if analytic_ok else 1, stages=stages
        )

    if name == "delta-half":
        s = moments(fixtures.delta_half_measure(), 2 * K.N)
        ok_cm, worst = check_complete_monotone(s, cfg)
        stages["complete_monotonicity"] = {
            "ok": ok_cm,
            "worst": {"k": worst[0], "j": worst[1], "value": worst[2]},
        }
        analytic_ok = analytic_ok and ok_cm

    space = build_space(K, cfg)
    interior_gram = gram(K, K.word_set.up_to(K.N - 1))
    stages["interior_gram_diag"] = _reals(np.diag(interior_gram))
    stages["shifted_diag"] = _reals(
        np.diag(gram(shifted_kernel(K), K.word_set.up_to(K.N - 1)))
    )
    analyze, shifts, _ = _stage_analyze(K, space, cfg)
    stages["analyze"] = analyze
    if stage == "analyze":
        return RunReport(command=command, exit_status=0, stages=stages)

    rep = solve_boundary_shifts(K, space, cfg)
    stages["consistency"] = _consistency_json(rep)
    if stage == "consistency":
        return RunReport(
            command=command, exit_status=0 if rep.feasible else 1, stages=stages
        )
    analytic_ok = analytic_ok and rep.feasible

    depth = K.N + 2
    used = "boundary" if rep.feasible else "interior"
    chosen = rep.ts if rep.feasible else shifts
    dil = build_dilation(chosen, depth, cfg, base_vector=space.v_interior(()))
    test_words = enumerate_words(K.d, K.N if used == "boundary" else K.N + 1).words
    ver = verify_extension(K, dil, space, used, test_words, cfg)
    stages["verification"] = _extension_json(ver)
    stages["verification"]["depth"] = depth
    analytic_ok = analytic_ok and ver.ok
    if stage == "verify":
        return RunReport(command=command, exit_status=0 if ver.ok else 1, stages=stages)
    return RunReport(
        command=command, exit_status=0 if analytic_ok else 1, stages=stages
    )


# ---------------------------------------------------------------------------
# entry point


def _summary_lines(report: RunReport) -> list[str]:
    lines = [f"{report.command}: exit {report.exit_status}"]

    def walk(prefix, obj):
        if isinstance(obj, dict):
            if set(obj) == {"value", "tol", "ok"}:
                mark = "ok" if obj["ok"] else "FAIL"
                lines.append(f"  {prefix}: {obj['value']:.6g} (tol {obj['tol']:.3g}) {mark}")
            else:
                for key in obj:
                    walk(f"{prefix}.{key}" if prefix else key, obj[key])
        elif isinstance(obj, bool):
            lines.append(f"  {prefix}: {'ok' if obj else 'FAIL'}")

    walk("", report.stages)
    return lines


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fsk", description="truncated kernels on the free semigroup"
    )
    parser.add_argument(
        "command",
        choices=["check", "analyze", "consistency", "extend", "verify", "hausdorff", "example"],
    )
    parser.add_argument("input", help="problem JSON file, or example name")
    parser.add_argument("--depth", type=int, default=None, help="dilation depth override")
    parser.add_argument("--psd-tol", type=float, default=None)
    parser.add_argument("--rank-tol", type=float, default=None)
    parser.add_argument("--residual-tol", type=float, default=None)
    parser.add_argument("--pairs", default=None, help="JSON file of word pairs for extend")
    parser.add_argument("--out", default=None, help="write the JSON report here")
    parser.add_argument("--mode", choices=["interior", "boundary"], default=None)
    parser.add_argument(
        "--stage",
        choices=["all", "check", "analyze", "consistency", "verify"],
        default="all",
        help="for `example`: stop after this stage",
    )
    parser.add_argument("--json", action="store_true", help="print the JSON report")
    parser.add_argument("--force", action="store_true", help="override guardrails")
    args = parser.parse_args(argv)

    try:
        overrides = {
            "depth": args.depth,
            "psd_tol": args.psd_tol,
            "rank_tol": args.rank_tol,
            "residual_tol": args.residual_tol,
        }
        overrides = {k: v for k, v in overrides.items() if v is not None}
        if args.command == "example":
            cfg_kw = {k: v for k, v in overrides.items() if k != "depth"}
            report = run_example(
                args.input, stage=args.stage, cfg=ToleranceConfig(**cfg_kw)
            )
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
            spec = parse_input(text, force=args.force)
            options = dict(spec.options)
            options.update(overrides)
            _check_guardrails(options, force=args.force)
            spec = ProblemSpec(
                kind=spec.kind,
                kernel=spec.kernel,
                measure=spec.measure,
                moment_seq=spec.moment_seq,
                options=options,
            )
            pairs = None
            if args.pairs is not None:
                with open(args.pairs, encoding="utf-8") as fh:
                    pdoc = json.load(fh)
                if not isinstance(pdoc, dict) or "pairs" not in pdoc:
                    raise InputFormatError("pairs file must be {'pairs': [[row, col], ...]}")
                pairs = [
                    (_word(p[0], "pairs"), _word(p[1], "pairs")) for p in pdoc["pairs"]
                ]
            report = run(spec, args.command, mode=args.mode, pairs=pairs)
    except (OSError, FskError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for line in _summary_lines(report):
        print(line)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    if args.json:
        print(report.to_json())
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
