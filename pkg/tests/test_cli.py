import json
from pathlib import Path

import pytest

from riskcomb.cli import RunConfig, WorkspaceError, load_workspace, main, run

DATA = Path(__file__).resolve().parent.parent / "data"
CSV = str(DATA / "canonical.csv")
SPECS = str(DATA / "specs.json")


def _write(tmp_path, text):
    p = tmp_path / "ws.csv"
    p.write_text(text)
    return p


def test_load_canonical():
    ws = load_workspace(CSV, SPECS)
    assert set(ws.scenarios) == {"base", "q2"}
    assert list(ws.positions) == ["X", "Y"]
    assert ws.space.n == 4
    assert "blend" in ws.combination_specs


def test_sum_too_far_from_one(tmp_path):
    p = _write(tmp_path, "outcome_id,base_prob,pos:X\na,0.45,1\nb,0.45,2\n")
    with pytest.raises(WorkspaceError, match="sum"):
        load_workspace(p)


def test_small_deviation_renormalized(tmp_path):
    p = _write(tmp_path, "outcome_id,base_prob,pos:X\na,0.5,1\nb,0.5000000005,2\n")
    ws = load_workspace(p)
    assert ws.warnings and sum(ws.space.base_probs) == pytest.approx(1, abs=1e-15)


def test_duplicate_id(tmp_path):
    p = _write(tmp_path, "outcome_id,base_prob,pos:X\na,0.5,1\na,0.5,2\n")
    with pytest.raises(WorkspaceError, match="row 3"):
        load_workspace(p)


def test_bad_field(tmp_path):
    p = _write(tmp_path, "outcome_id,base_prob,pos:X\na,0.5,1\nb,0.5,oops\n")
    with pytest.raises(WorkspaceError, match="pos:X"):
        load_workspace(p)


def test_short_row(tmp_path):
    p = _write(tmp_path, "outcome_id,base_prob,pos:X\na,0.5,1\nb,0.5\n")
    with pytest.raises(WorkspaceError, match="row 3"):
        load_workspace(p)


def test_eval_prints_value(capsys):
    assert main(["eval", "--workspace", CSV, "--measure", "ES:0.5", "--position", "X", "--scenario", "base"]) == 0
    out = capsys.readouterr().out
    assert "7.5" in out


def test_eval_structured(capsys):
    main(["eval", "--workspace", CSV, "--measure", "ES:0.5", "--position", "X", "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"][0]["value"] == 7.5


def test_dual_check_mix(capsys):
    code = main(["dual-check", "--workspace", CSV, "--combine", str(DATA / "mix.json"),
                 "--positions", "all", "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert all(r["gap"] <= 1e-8 for r in doc["results"])


def test_unknown_flag():
    with pytest.raises(SystemExit) as e:
        main(["eval", "--measure", "EL", "--nope"])
    assert e.value.code == 2


def test_data_error_exit(capsys):
    assert main(["eval", "--measure", "ES:7"]) == 2
    assert main(["eval", "--measure", "EL", "--position", "Z"]) == 2


def test_failed_check_exit(tmp_path, capsys):
    p = _write(tmp_path, "outcome_id,base_prob,q1,q2,pos:X\na,0.5,0.5,0.1,0\nb,0.5,0.5,0.9,10\n")
    code = main(["elicit", "--workspace", str(p), "--position", "X", "--scenarios", "q1,q2",
                 "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 1
    assert doc["agrees"] is False and doc["per_scenario"] == [-5.0, -9.0]


def test_axiom_witness(capsys):
    code = main(["axioms", "--combine", "WorstCase", "--measures", "VaR:0.5", "--axioms", "Convexity",
                 "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 1
    assert doc["results"][0]["witness"]


def test_deterministic_output(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"o{k}.json"
        cfg = RunConfig("axioms", CSV, SPECS, seed=7, out=str(out), format="structured",
                        options={"combine": "stress", "trials": 300, "axioms": "all", "level": "rho"})
        run(cfg)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("argv", [
    ["combine", "--specs", SPECS, "--combine", "blend"],
    ["kusuoka-check", "--specs", SPECS, "--combine", "stress"],
    ["dominance", "--workspace", CSV, "--positions", "Y,X", "--order", "2:set", "--scenarios", "base,q2"],
    ["elicit", "--position", "X", "--scoring", "pinball:0.25", "--scenarios", "base,q2"],
])
def test_commands_pass(argv, capsys):
    assert main(argv) == 0
