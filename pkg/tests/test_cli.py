from __future__ import annotations

import io
import json

from zeta3cf.cli import main


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def run_json(argv):
    code, text = run(argv + ["--format", "json"])
    return code, json.loads(text)


def csv_rows(text):
    lines = [line for line in text.strip().splitlines() if line]
    return [line.split(",") for line in lines]


def test_eval_n_depth_6():
    code, doc = run_json(["eval", "N", "--depth", "6", "--digits", "10"])
    assert code == 0
    payload = doc["payload"]
    assert payload["fraction"] == "351/146"
    assert payload["decimal"] == "2.4041095890"
    assert payload["target"] == "TWO_ZETA3"


def test_eval_apery_depth_1():
    code, doc = run_json(["eval", "APERY", "--depth", "1", "--digits", "10"])
    assert code == 0
    assert doc["payload"]["fraction"] == "12/5"
    assert doc["payload"]["decimal"] == "2.4000000000"


def test_eval_unknown_stage_exits_2():
    code, text = run(["eval", "BOGUS"])
    assert code == 2
    assert "unknown stage" in text
    assert "status: error" in text


def test_eval_derived_stage_backward_path():
    code, doc = run_json(["eval", "U", "--depth", "12", "--digits", "12"])
    assert code == 0
    assert doc["payload"]["method"] == "backward-truncation"
    assert doc["payload"]["kind"] == "derived"


def test_convergents_table():
    code, doc = run_json(["convergents", "N", "--n-max", "6", "--digits", "8"])
    assert code == 0
    rows = doc["payload"]["convergents"]
    assert rows[2]["p"] == 24 and rows[2]["q"] == 10
    assert rows[6]["value"] == "351/146"
    assert rows[6]["decimal"] == "2.40410958"


def test_verify_chain_exit_0():
    code, doc = run_json(["verify-chain"])
    assert code == 0
    assert doc["status"] == "ok"
    assert doc["payload"]["passed"] is True
    steps = doc["payload"]["steps"]
    assert [s["step"] for s in steps] == ["A5", "W", "U", "P", "Q", "Z", "H", "G", "N"]
    assert all(s["symbolic"] == "pass" for s in steps)


def test_verify_chain_injected_sigma_exit_1():
    code, doc = run_json(["verify-chain", "--hook-break-sigma", "W"])
    assert code == 1
    assert doc["status"] == "fail"


def test_rate_apery():
    code, doc = run_json(["rate", "APERY", "--n-max", "25", "--window", "5:25"])
    assert code == 0
    slope = float(doc["payload"]["slope"])
    assert 2.9 <= slope <= 3.2


def test_rate_n_window():
    code, doc = run_json(
        ["rate", "N", "--n-max", "100", "--window", "20:100", "--ref-digits", "120"]
    )
    assert code == 0
    slope = float(doc["payload"]["slope"])
    assert 0.70 <= slope <= 0.85


def test_rate_insufficient_data_exits_2():
    code, text = run(["rate", "N", "--n-max", "1"])
    assert code == 2
    assert "status: error" in text


def test_rate_unflattenable_exits_2():
    code, text = run(["rate", "Q", "--n-max", "10"])
    assert code == 2


def test_gutnik_50_rows_exit_0():
    code, doc = run_json(["gutnik", "--v-max", "50"])
    assert code == 0
    rows = doc["payload"]["alignment"]
    assert len(rows) == 50
    assert all(r["equal"] == "true" for r in rows)


def test_gutnik_csv_header_plus_rows():
    code, text = run(["gutnik", "--v-max", "2", "--format", "csv"])
    assert code == 0
    rows = csv_rows(text)
    assert rows[0] == [
        "v", "nes_index", "apery_index", "equal", "nes_value", "apery_value",
        "nes_gcd", "offset_nes", "offset_apery",
    ]
    assert len(rows) == 3
    assert rows[1][4] == "12/5" and rows[2][4] == "351/146"


def test_gutnik_perturbed_exit_1():
    code, _ = run(["gutnik", "--v-max", "3", "--hook-perturb"])
    assert code == 1


def test_ref_seven_digits():
    code, doc = run_json(["ref", "--digits", "7"])
    assert code == 0
    assert doc["payload"]["zeta3"] == "1.2020569"
    assert doc["payload"]["two_zeta3"] == "2.4041138"
    assert doc["payload"]["oracles_agree"] is True


def test_ref_guard_exits_2():
    for digits in ("0", "1001"):
        code, _ = run(["ref", "--digits", digits])
        assert code == 2


def test_catalog_lists_all_stages():
    code, doc = run_json(["catalog"])
    assert code == 0
    names = [row["name"] for row in doc["payload"]["catalog"]]
    for name in ("APERY", "A5", "A6", "W", "U", "U4", "P", "Q", "Q12",
                 "Z", "H", "G", "G16", "G17", "N"):
        assert name in names
    assert "N.derived" in names
    byname = {row["name"]: row for row in doc["payload"]["catalog"]}
    assert byname["Q12"]["status"] == "MISMATCH"
    assert byname["U4"]["status"] == "match"
    assert "T" in byname["W"]["note"]


def test_format_equivalence_eval():
    _, text = run(["eval", "N", "--depth", "6", "--digits", "10"])
    _, doc = run_json(["eval", "N", "--depth", "6", "--digits", "10"])
    code, csv_text = run(["eval", "N", "--depth", "6", "--digits", "10", "--format", "csv"])
    assert code == 0
    payload = doc["payload"]
    assert f"fraction: {payload['fraction']}" in text
    assert f"decimal: {payload['decimal']}" in text
    rows = csv_rows(csv_text)
    record = dict(zip(rows[0], rows[1]))
    assert record["fraction"] == payload["fraction"]
    assert record["decimal"] == payload["decimal"]
    assert record["abs_error"] == payload["abs_error"]


def test_format_equivalence_gutnik():
    _, doc = run_json(["gutnik", "--v-max", "3"])
    _, csv_text = run(["gutnik", "--v-max", "3", "--format", "csv"])
    rows = csv_rows(csv_text)
    json_rows = doc["payload"]["alignment"]
    for csv_row, json_row in zip(rows[1:], json_rows):
        record = dict(zip(rows[0], csv_row))
        assert record["nes_value"] == json_row["nes_value"]
        assert record["apery_value"] == json_row["apery_value"]
        assert int(record["nes_gcd"]) == json_row["nes_gcd"]
        assert int(record["offset_nes"]) == doc["payload"]["offset_nes"]


def test_format_equivalence_rate():
    _, doc = run_json(["rate", "APERY", "--n-max", "12", "--window", "3:12"])
    _, csv_text = run(
        ["rate", "APERY", "--n-max", "12", "--window", "3:12", "--format", "csv"]
    )
    rows = csv_rows(csv_text)
    assert rows[0] == ["record", "n", "value"]
    slope_rows = [r for r in rows if r[0] == "slope"]
    assert len(slope_rows) == 1
    assert slope_rows[0][2] == doc["payload"]["slope"]
    point_rows = [r for r in rows if r[0] == "point"]
    json_points = doc["payload"]["points"]
    assert [r[2] for r in point_rows] == [p["accurate_digits"] for p in json_points]


def test_format_equivalence_verify_chain():
    _, doc = run_json(["verify-chain"])
    _, csv_text = run(["verify-chain", "--format", "csv"])
    rows = csv_rows(csv_text)
    by_step = {r[0]: r for r in rows[1:]}
    assert by_step["(chain)"][1] == "pass"
    for step in doc["payload"]["steps"]:
        assert by_step[step["step"]][4] == step["residual"]
    for variant in doc["payload"]["variants"]:
        assert by_step[f"variant:{variant['variant']}"][2] == variant["claimed"]


def test_json_output_byte_stable():
    _, first = run(["verify-chain", "--format", "json"])
    _, second = run(["verify-chain", "--format", "json"])
    assert first == second
    _, third = run(["catalog", "--format", "json"])
    _, fourth = run(["catalog", "--format", "json"])
    assert third == fourth


def test_global_flags_accepted_before_subcommand():
    code, doc = run(["--format", "json", "ref", "--digits", "7"])
    assert code == 0
    assert json.loads(doc)["payload"]["zeta3"] == "1.2020569"


def test_hooks_hidden_from_help():
    import subprocess
    import sys

    result = subprocess.run(
        [sys.executable, "-m", "zeta3cf.cli", "verify-chain", "--help"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "hook" not in result.stdout
