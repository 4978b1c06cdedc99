import json

import pytest

from chancelogic import cli
from chancelogic.examples import NAMES, fixture_text, mutated_fixture
from chancelogic.model import dump_model


def run(capsys, *argv, as_json=True):
    code = cli.main((["--json"] if as_json else []) + list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if as_json and out.out else out.out), out.err


def test_check_clean(capsys):
    code, out, _ = run(capsys, "check", "coin", "--coherence")
    assert code == 0 and out["constraints"]["clean"] and out["coherence"]["clean"]


def test_check_flags_violations_with_exit_1(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(dump_model(mutated_fixture("C4"))))
    code, out, _ = run(capsys, "check", str(path))
    assert code == 1 and out["constraints"]["violations"][0]["constraint"] == "C4"


def test_strict_c3_on_carry(capsys):
    code, out, _ = run(capsys, "check", "carry", "--strict-c3")
    assert code == 1 and {v["constraint"] for v in out["constraints"]["violations"]} == {"C3"}


def test_eval_and_prob(capsys):
    code, out, _ = run(capsys, "eval", "carry", "--world", "w6", "--formula", "OCC(t1,t2,carry-b1) & OCC(t1,t2,carry-b2)")
    assert code == 0 and out["value"] is True
    code, out, _ = run(capsys, "prob", "coin", "--time", "t0", "--world", "fair-heads", "--formula", "OCC(t1,t2,heads)")
    assert code == 0 and out["exact"] == "3/5" and out["decimal"] == 0.6


def test_expect(capsys):
    argv = ("expect", "coin", "--time", "t0", "--future", "t1", "--world", "fair-tails", "--formula", "OCC(t1,t2,heads)")
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out["exact"] == "3/5" and out["identity"]
    code, _, err = run(capsys, "expect", "coin", "--time", "t2", "--future", "t0", "--world", "fair-tails", "--formula", "OCC(t1,t2,heads)")
    assert code == 2 and "precedes" in err


def test_schema_on_model_and_random(capsys):
    code, out, _ = run(capsys, "schema", "miller", "--model", "coin", "--formula", "OCC(t1,t2,heads)", "--alpha", "7/10")
    assert code == 0 and out["instances"] > 0 and out["counterexamples"] == []
    for schema in ("past-determined", "inevitable-certain", "inevitability-persists", "detachment", "miller"):
        code, out, _ = run(capsys, "schema", schema, "--random", "--trials", "3", "--max-worlds", "3")
        assert code == 0 and out["models"] == 3 and out["instances"] > 0, schema


def test_schema_usage_errors(capsys):
    assert run(capsys, "schema", "miller", "--model", "coin", "--random")[0] == 2
    assert run(capsys, "schema", "telepathy", "--model", "coin")[0] == 2


def test_cause(capsys):
    code, out, _ = run(capsys, "cause", "car", "--world", "cold-key-start", "--cause", "turn-key@ts,tsp", "--effect", "start@ts,tsp")
    assert code == 0 and out["cond1"] and out["cond2"] and not out["cond3"]
    code, _, err = run(capsys, "cause", "car", "--world", "cold-key-start", "--cause", "turn-key", "--effect", "start@ts,tsp")
    assert code == 2 and "EVENT@t1,t2" in err


def test_sat_writes_a_loadable_model(capsys, tmp_path):
    path = tmp_path / "found.json"
    code, out, _ = run(capsys, "sat", "--formula", "P[t0](OCC(t0,t1,e)) >= 1/2", "--out", str(path))
    assert code == 0 and out["result"] == "sat"
    code, check, _ = run(capsys, "check", str(path))
    assert code == 0 and check["constraints"]["clean"]
    code, ev, _ = run(capsys, "eval", str(path), "--world", out["world"], "--formula", "P[t0](OCC(t0,t1,e)) >= 1/2")
    assert ev["value"] is True


def test_sat_unknown_exits_1(capsys):
    code, out, _ = run(capsys, "sat", "--formula", "P[t](HOLDS(t,t,f)) >= 2", "--budget", "100")
    assert code == 1 and out["result"] == "unknown"


@pytest.mark.parametrize("name", NAMES)
def test_examples_pass(capsys, name):
    code, out, _ = run(capsys, "example", name)
    assert code == 0 and out["ok"]
    assert all(c["ok"] for c in out["premises"] + out["conclusions"])


def test_car_example_text(capsys):
    code, text, _ = run(capsys, "example", "car", as_json=False)
    assert code == 0 and "11/25" in text and "6/25" in text


def test_parse_error_position(capsys):
    code, _, err = run(capsys, "eval", "coin", "--world", "fair-heads", "--formula", "HOLDS(t1,")
    assert code == 2 and "1:10" in err


def test_bad_model_file(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(fixture_text("coin").replace('"worlds"', '"wrolds"'))
    code, _, err = run(capsys, "check", str(path))
    assert code == 2 and "worlds" in err


def test_build_error_lists_violations(capsys, tmp_path):
    raw = json.loads(fixture_text("coin"))
    raw["prob"]["t1"][0]["dist"] = {"fair-heads": "1/2", "biased-heads": "1/2"}
    path = tmp_path / "leaky.json"
    path.write_text(json.dumps(raw))
    code, _, err = run(capsys, "eval", str(path), "--world", "fair-heads", "--formula", "t0 = t0")
    assert code == 2 and "C5" in err


def test_unknown_world_and_model(capsys):
    assert run(capsys, "eval", "coin", "--world", "mars", "--formula", "t0 = t0")[0] == 2
    assert run(capsys, "check", "no-such-model")[0] == 2


def test_argparse_errors_exit_2(capsys):
    assert cli.main(["prob", "coin"]) == 2
    assert cli.main([]) == 2
    capsys.readouterr()


def test_generator_flags_are_validated(capsys):
    assert run(capsys, "schema", "miller", "--random", "--max-worlds", "0")[0] == 2
