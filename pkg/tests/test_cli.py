import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from widemorita.cli import BUNDLE_COMMANDS, main

REPORT_SCHEMA = json.loads(resources.files("widemorita").joinpath("schemas", "report.schema.json").read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def bundles(tmp_path_factory):
    d = tmp_path_factory.mktemp("bundles")
    paths = {}
    for gen, extra in (
        ("matrix-morita", []),
        ("corpus", ["--samples", "3"]),
        ("negatives", []),
        ("sweedler-context", []),
    ):
        p = d / f"{gen}.json"
        assert main(["gen", gen, "--out", str(p), *extra]) == 0
        paths[gen] = p
    return paths


def test_check_context_matrix(capsys, bundles):
    code, out, _ = run(capsys, "check-context", bundles["matrix-morita"])
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "pass"
    jsonschema.validate(doc, REPORT_SCHEMA)


def test_corrupted_context_names_side(capsys, bundles):
    code, out, _ = run(capsys, "check-context", bundles["negatives"])
    doc = json.loads(out)
    assert code == 1 and doc["status"] == "fail"
    fails = [c for c in doc["checks"] if c["status"] == "fail"]
    assert fails and all({"side", "row", "col"} <= set(c["witness"]) for c in fails)
    jsonschema.validate(doc, REPORT_SCHEMA)


def test_negative_corings_fail(capsys, bundles):
    code, out, _ = run(capsys, "check-coring", bundles["negatives"])
    assert code == 1
    assert json.loads(out)["summary"]["fail"] > 0


@pytest.mark.parametrize("command", sorted(BUNDLE_COMMANDS))
def test_every_command_passes_on_corpus(capsys, bundles, command):
    code, out, _ = run(capsys, command, bundles["corpus"])
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert code == 0, [c for c in doc["checks"] if c["status"] != "pass"]
    assert doc["command"] == command and doc["field"] == "Fp:101"


def test_sweedler_bundle(capsys, bundles):
    for command in ("check-wrem", "check-cat-context", "reconstruct"):
        code, out, _ = run(capsys, command, bundles["sweedler-context"])
        assert code == 0, out


@pytest.mark.parametrize("instance", ["bim", "w", "rem"])
def test_bicat_axioms(capsys, instance):
    code, out, _ = run(capsys, "bicat-axioms", "--instance", instance, "--samples", "3", "--seed", "5")
    assert code == 0
    jsonschema.validate(json.loads(out), REPORT_SCHEMA)


def test_reports_are_deterministic(capsys, bundles):
    a = run(capsys, "mul-contexts", bundles["corpus"], "--seed", "3")[1]
    b = run(capsys, "mul-contexts", bundles["corpus"], "--seed", "3")[1]
    assert a == b
    assert "timing" not in json.loads(a)
    c = json.loads(run(capsys, "mul-contexts", bundles["corpus"], "--timing")[1])
    assert c["timing"]["seconds"] >= 0


def test_gen_is_deterministic(capsys):
    a = run(capsys, "gen", "corpus", "--seed", "9", "--samples", "2")[1]
    b = run(capsys, "gen", "corpus", "--seed", "9", "--samples", "2")[1]
    c = run(capsys, "gen", "corpus", "--seed", "10", "--samples", "2")[1]
    assert a == b != c


@pytest.mark.parametrize(
    "argv",
    [
        ["check-context", "{missing}"],
        ["check-context", "{bad}"],
        ["check-context", "{matrix}", "--name", "nope"],
        ["check-context", "{matrix}", "--field", "Q"],
        ["check-context", "{matrix}", "--field", "Fp:4"],
        ["gen", "nonsense"],
        ["gen"],
        ["check-context"],
    ],
    ids=["missing-file", "bad-json", "unknown-name", "field-clash", "bad-field", "unknown-generator", "gen-no-target", "no-bundle"],
)
def test_usage_errors_exit_2(capsys, bundles, tmp_path, argv):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    subs = {"{missing}": str(tmp_path / "none.json"), "{bad}": str(bad), "{matrix}": str(bundles["matrix-morita"])}
    code, _, err = run(capsys, *[subs.get(a, a) for a in argv])
    assert code == 2 and err.startswith("error:")


def test_verbose_lists_checks(capsys, bundles):
    _, _, err = run(capsys, "check-context", bundles["matrix-morita"], "--verbose")
    assert "f-side" in err and "pass" in err


def test_out_file(tmp_path, bundles):
    p = tmp_path / "r.json"
    assert main(["epi-iso", str(bundles["matrix-morita"]), "--out", str(p)]) == 0
    assert json.loads(p.read_text())["status"] == "pass"


def test_module_entry_point(bundles):
    r = subprocess.run(
        [sys.executable, "-m", "widemorita", "check-context", str(bundles["matrix-morita"])],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0 and json.loads(r.stdout)["status"] == "pass"
