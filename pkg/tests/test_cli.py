"""CLI: parsing, guardrails, exit-code taxonomy, report determinism.

Exit contract: 0 all checks pass, 1 analytic negative with a complete
report, 2 input or usage errors (including unmet stage preconditions).
"""

import json

import numpy as np
import pytest

from fsk import fixtures
from fsk.cli import (
    ProblemSpec,
    main,
    parse_input,
    run,
    run_example,
    serialize_spec,
)
from fsk.errors import InputFormatError


def kernel_doc(K, options=None):
    return serialize_spec(
        ProblemSpec(kind="kernel", kernel=K, options=options or {})
    )


@pytest.fixture(scope="module")
def d1_doc():
    return kernel_doc(fixtures.example_d1())


def test_parse_round_trip(d1_doc):
    spec = parse_input(d1_doc)
    again = parse_input(serialize_spec(spec))
    assert spec.kind == again.kind == "kernel"
    assert spec.kernel.words == again.kernel.words
    assert np.array_equal(spec.kernel.data, again.kernel.data)
    assert spec.options == again.options


def test_parse_accepts_bare_reals_and_pairs():
    doc = {
        "kind": "kernel",
        "d": 1,
        "N": 1,
        "dim_h": 1,
        "entries": [
            {"row": [], "col": [], "block": [[1.0]]},
            {"row": [], "col": [1], "block": [[[0.5, 0.25]]]},
            {"row": [1], "col": [1], "block": [[0.5]]},
        ],
    }
    spec = parse_input(json.dumps(doc))
    assert spec.kernel.block((), (1,))[0, 0] == 0.5 + 0.25j
    assert spec.kernel.block((1,), ())[0, 0] == 0.5 - 0.25j


def test_parse_measure_and_moments():
    spec = parse_input('{"kind": "measure", "atoms": [{"x": 1, "w": 1}]}')
    assert spec.measure.atoms == ((1.0, 1.0),)
    spec = parse_input('{"kind": "moments", "s": [1, 0.5, 0.25]}')
    assert np.allclose(spec.moment_seq, [1, 0.5, 0.25])


def test_parse_rejects_malformed_json():
    with pytest.raises(InputFormatError):
        parse_input("not json")


def test_parse_rejects_unknown_fields():
    with pytest.raises(InputFormatError):
        parse_input('{"kind": "moments", "s": [1], "extra": 2}')
    with pytest.raises(InputFormatError):
        parse_input('{"kind": "measure", "atoms": [{"x": 1, "w": 1, "y": 0}]}')


def test_parse_rejects_unknown_kind():
    with pytest.raises(InputFormatError):
        parse_input('{"kind": "mystery"}')


def test_parse_rejects_bad_measures():
    with pytest.raises(InputFormatError):
        parse_input('{"kind": "measure", "atoms": [{"x": 2.0, "w": 1}]}')


def test_guardrails(d1_doc):
    doc = json.loads(d1_doc)
    doc["options"] = {"depth": 99}
    with pytest.raises(InputFormatError):
        parse_input(json.dumps(doc))
    spec = parse_input(json.dumps(doc), force=True)
    assert spec.options["depth"] == 99


def test_run_check_passes(d1_doc):
    rep = run(parse_input(d1_doc), "check")
    assert rep.exit_status == 0
    assert rep.stages["dominance"]["dominance"]["ok"]


def test_run_check_analytic_negative():
    doc = {
        "kind": "kernel",
        "d": 1,
        "N": 1,
        "dim_h": 1,
        "entries": [
            {"row": [], "col": [], "block": [[1.0]]},
            {"row": [], "col": [1], "block": [[0.0]]},
            {"row": [1], "col": [1], "block": [[2.0]]},
        ],
    }
    rep = run(parse_input(json.dumps(doc)), "check")
    assert rep.exit_status == 1
    assert not rep.stages["dominance"]["dominance"]["ok"]
    # dominance-requiring stages refuse with a usage error instead
    rep = run(parse_input(json.dumps(doc)), "extend")
    assert rep.exit_status == 2
    assert rep.stages["error"]["stage"] == "extend"


def test_run_analyze(d1_doc):
    rep = run(parse_input(d1_doc), "analyze")
    assert rep.exit_status == 0
    assert rep.stages["analyze"]["graded_ranks"] == [1, 3, 3]


def test_run_consistency_exit_codes(d1_doc):
    rep = run(parse_input(d1_doc), "consistency")
    assert rep.exit_status == 0
    d2_doc = kernel_doc(fixtures.example_d2())
    rep = run(parse_input(d2_doc), "consistency")
    assert rep.exit_status == 1
    viol = rep.stages["consistency"]["violations"]
    assert viol == [
        {
            "kind": "b3-mismatch",
            "location": [[1], 2, [1], 2],
            "magnitude": pytest.approx(1.0 / 16.0, abs=1e-12),
        }
    ]


def test_run_extend_and_verify(d1_doc):
    spec = parse_input(d1_doc)
    rep = run(spec, "extend", mode="boundary", pairs=[((), ()), ((1, 2), (2, 1))])
    assert rep.exit_status == 0
    values = rep.stages["extension"]["values"]
    assert values[0]["block"] == [[[1.0, 0.0]]]
    assert rep.stages["extension"]["mode"] == "boundary"
    rep = run(spec, "verify", mode="boundary")
    assert rep.exit_status == 0
    assert rep.stages["verification"]["e1_max_dev"]["ok"]
    assert rep.stages["verification"]["e3_max_dev"]["ok"]


def test_run_verify_falls_back_to_interior():
    spec = parse_input(kernel_doc(fixtures.example_d2()))
    rep = run(spec, "verify", mode="boundary")
    assert rep.exit_status == 0
    assert rep.stages["verification"]["mode"] == "interior"
    assert "e3_max_dev" not in rep.stages["verification"]


def test_run_hausdorff():
    rep = run(parse_input('{"kind": "measure", "atoms": [{"x": 0.5, "w": 1}]}'), "hausdorff")
    assert rep.exit_status == 0
    rep = run(parse_input('{"kind": "moments", "s": [1, 0.9, 0.5]}'), "hausdorff")
    assert rep.exit_status == 1
    worst = rep.stages["complete_monotonicity"]["worst"]
    assert worst["k"] == 2 and worst["j"] == 0
    assert worst["value"] == pytest.approx(-0.3, abs=1e-12)
    rep = run(parse_input('{"kind": "kernel", "d": 1, "N": 0, "dim_h": 1, "entries": [{"row": [], "col": [], "block": [[1.0]]}]}'), "hausdorff")
    assert rep.exit_status == 2


def test_run_example_stages():
    rep = run_example("d1")
    assert rep.exit_status == 0
    assert rep.stages["interior_gram_diag"] == [1.0, 0.25, 0.25]
    assert rep.stages["shifted_diag"] == [0.5, 0.0, 0.0]
    rep = run_example("d2", stage="consistency")
    assert rep.exit_status == 1
    rep = run_example("d2")
    assert rep.exit_status == 1  # infeasible boundary is an analytic negative
    assert rep.stages["verification"]["ok"]  # but the interior extension passes
    rep = run_example("delta-half")
    assert rep.exit_status == 0
    assert rep.stages["complete_monotonicity"]["ok"]
    with pytest.raises(InputFormatError):
        run_example("nope")


def test_report_determinism(d1_doc):
    a = run(parse_input(d1_doc), "verify", mode="boundary").to_json()
    b = run(parse_input(d1_doc), "verify", mode="boundary").to_json()
    assert a == b


def test_main_end_to_end(tmp_path, capsys):
    path = tmp_path / "d1.json"
    path.write_text(kernel_doc(fixtures.example_d1()), encoding="utf-8")
    out = tmp_path / "report.json"
    code = main(["verify", str(path), "--mode", "boundary", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["exit_status"] == 0
    assert report["stages"]["verification"]["e3_max_dev"]["ok"]
    assert "verify: exit 0" in capsys.readouterr().out


def test_main_pairs_file(tmp_path, capsys):
    path = tmp_path / "d1.json"
    path.write_text(kernel_doc(fixtures.example_d1()), encoding="utf-8")
    pairs = tmp_path / "pairs.json"
    pairs.write_text('{"pairs": [[[1], [1]]]}', encoding="utf-8")
    code = main(["extend", str(path), "--pairs", str(pairs), "--json"])
    assert code == 0
    out = capsys.readouterr().out
    payload = json.loads(out[out.index("{") :])
    vals = payload["stages"]["extension"]["values"]
    assert vals == [{"row": [1], "col": [1], "block": [[[0.25, 0.0]]]}]


def test_bundled_documents_match_regenerated_fixtures():
    import pathlib

    data = pathlib.Path(__file__).parent.parent / "demos" / "data"
    spec = parse_input((data / "example_d1.json").read_text(encoding="utf-8"))
    assert (spec.kind, spec.kernel.d, spec.kernel.N, spec.kernel.dim_h) == (
        "kernel",
        2,
        2,
        1,
    )
    assert np.array_equal(spec.kernel.data, fixtures.example_d1().data)
    spec = parse_input((data / "example_d2.json").read_text(encoding="utf-8"))
    assert np.array_equal(spec.kernel.data, fixtures.example_d2().data)
    spec = parse_input((data / "delta_half_measure.json").read_text(encoding="utf-8"))
    assert spec.measure.atoms == ((0.5, 1.0),)
    rep = run(spec, "verify", mode="boundary")
    assert rep.exit_status == 0


def test_test_max_len_option(d1_doc):
    doc = json.loads(d1_doc)
    doc["options"] = {"test_max_len": 1, "depth": 5}
    rep = run(parse_input(json.dumps(doc)), "verify", mode="interior")
    assert rep.exit_status == 0
    assert rep.stages["verification"]["test_max_len"] == 1
    doc["options"] = {"test_max_len": 9, "depth": 5}
    rep = run(parse_input(json.dumps(doc)), "verify", mode="interior")
    assert rep.exit_status == 2


def test_main_example_and_errors(tmp_path, capsys):
    assert main(["example", "d1"]) == 0
    assert main(["example", "d2", "--stage", "consistency"]) == 1
    assert main(["example", "unknown"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("not json", encoding="utf-8")
    assert main(["check", str(bad)]) == 2
    assert main(["check", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()
