from __future__ import annotations

import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from mcpvi.catalog import ENV_VAR, catalog_dir
from mcpvi.cli import EXIT_HYPOTHESIS, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, main, run
from mcpvi.io import read_tuple, write_tuple

DOCS = Path(__file__).resolve().parents[1] / "docs" / "tuples"
SCALAR = str(DOCS / "scalar.json")
IDENTITY = str(DOCS / "identity_sl2.json")
MINUS_IDENTITY = str(DOCS / "minus_identity_sl2.json")


def report(*argv):
    code, text, _ = run(list(argv) + ["--no-timing"])
    assert not text.startswith("error:"), text
    return code, json.loads(text)


def sample_file(tmp_path, *argv, name="sample.json"):
    code, text, _ = run(["sample", *argv])
    assert code == EXIT_OK
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# -- mc ---------------------------------------------------------------------------

def test_mc_scalar_example():
    code, doc = report("mc", SCALAR, "--lambda", "5", "--check-dim", "--jordan")
    assert code == EXIT_OK
    out = doc["outputs"]
    assert out["result"]["dimension"] == 2
    assert out["check_dim"]["pass"] and out["check_dim"]["formula"] == 2
    assert all(c["pass"] for c in out["jordan"])
    assert [c["position"] for c in out["jordan"]] == ["1", "2", "infinity"]


def test_mc_identity_is_degenerate():
    code, doc = report("mc", IDENTITY, "--lambda", "1")
    assert doc["outputs"]["result"]["dimension"] == 0
    assert doc["outputs"]["result"]["degenerate"] is True
    assert doc["warnings"]


def test_mc_klein_lambda_search():
    code, doc = report("mc", "catalog:klein", "--lambda-search", "--check-dim")
    assert code == EXIT_OK
    out = doc["outputs"]
    assert out["result"]["dimension"] == 2 and out["check_dim"]["pass"]
    attempts = out["lambda_search"]["attempts"]
    assert len(attempts) == 6
    assert {a["dimension"] for a in attempts if a["source"].startswith("inverse")} == {2}


def test_mc_needs_lambda():
    code, text, _ = run(["mc", SCALAR])
    assert code == EXIT_USAGE and text.startswith("error:")


# -- orbit ------------------------------------------------------------------------

def test_orbit_minus_identity():
    code, doc = report("orbit", MINUS_IDENTITY)
    assert code == EXIT_OK and doc["outputs"]["size"] == 1


def test_orbit_cap_hit_exit_code(tmp_path):
    path = sample_file(tmp_path, "--kind", "sl2", "--seed", "3")
    code, doc = report("orbit", path, "--cap", "20")
    assert code == EXIT_INCONCLUSIVE and doc["outputs"]["cap_hit"] is True


def test_orbit_custom_generators():
    code, doc = report("orbit", "catalog:a3", "--generators", "[[2],[1]]")
    assert code == EXIT_OK and doc["outputs"]["generator_set"] == "custom"
    assert doc["outputs"]["size"] == 4


def test_orbit_bad_generators():
    code, _, _ = run(["orbit", MINUS_IDENTITY, "--generators", "nonsense"])
    assert code == EXIT_USAGE


# -- verify -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def klein_verify():
    return report("verify", "klein")


def test_verify_klein(klein_verify):
    code, doc = klein_verify
    assert code == EXIT_OK and doc["outputs"]["verdict"] is True


def test_verify_braided_same_verdict(klein_verify):
    code, doc = report("verify", "klein", "--braid", "1,-2", "--scalings", "det_normalized")
    assert code == klein_verify[0]
    assert doc["outputs"]["verdict"] == klein_verify[1]["outputs"]["verdict"]
    assert doc["outputs"]["braid"] == [1, -2]


def test_verify_degenerate():
    code, doc = report("verify", "degenerate")
    assert code == EXIT_HYPOTHESIS and doc["outputs"]["verdict"] is False


def test_verify_missing_entry():
    code, text, _ = run(["verify", "no_such_entry"])
    assert code == EXIT_USAGE and "no catalog entry" in text


def test_traces_of_verify_image_match(klein_verify, tmp_path):
    out = klein_verify[1]["outputs"]
    path = tmp_path / "image.json"
    path.write_text(json.dumps(out["phi_image"]))
    code, doc = report("traces", str(path))
    assert code == EXIT_OK
    assert doc["outputs"]["traces"] == out["phi_image_traces"]
    assert doc["outputs"]["fricke_residual"] == "0"


# -- traces, phi, jordan, catalog -------------------------------------------------------

def test_traces_identity():
    code, doc = report("traces", IDENTITY)
    assert set(doc["outputs"]["traces"].values()) == {"2"}
    assert doc["outputs"]["fricke_residual"] == "0"


def test_traces_rejects_non_sl2():
    code, _, _ = run(["traces", SCALAR])
    assert code == EXIT_USAGE


def test_phi_klein():
    code, doc = report("phi", "catalog:klein")
    assert code == EXIT_OK and doc["outputs"]["root_choices"] == 192


def test_jordan_infinity():
    code, doc = report("jordan", SCALAR, "--matrix", "infinity")
    blocks = doc["outputs"]["jordan"]["blocks"]
    assert [(b["eigenvalue"], b["length"]) for b in blocks] == [("6", 1)]
    code, _, _ = run(["jordan", SCALAR, "--matrix", "7"])
    assert code == EXIT_USAGE


def test_catalog_list_and_show():
    code, doc = report("catalog", "list")
    assert "klein" in [e["name"] for e in doc["outputs"]["entries"]]
    code, doc = report("catalog", "show", "klein")
    assert doc["outputs"]["field_order"] == 7 and len(doc["outputs"]["reflections"]) == 3


def test_catalog_env_override(tmp_path, monkeypatch):
    shutil.copy(catalog_dir() / "a3.json", tmp_path / "mine.json")
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    code, doc = report("catalog", "list")
    assert [e["name"] for e in doc["outputs"]["entries"]] == ["mine"]


# -- formats, errors, determinism -----------------------------------------------------------

def test_common_flags_before_or_after_subcommand():
    a = run(["--no-timing", "traces", IDENTITY])[1]
    b = run(["traces", IDENTITY, "--no-timing"])[1]
    assert a == b and "timing" not in json.loads(a)
    assert "timing" in json.loads(run(["traces", IDENTITY])[1])


def test_table_format():
    code, text, _ = run(["traces", IDENTITY, "--format", "table"])
    assert text.splitlines()[0].split() == ["m1", "2"]


def test_output_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["traces", IDENTITY, "--no-timing", "-o", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["command"] == "traces"


def test_parse_error_has_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format_version": "1", "field_order": 1,\n "matrices": [oops]}')
    code, text, _ = run(["traces", str(bad)])
    assert code == EXIT_USAGE and "line" in text


def test_unknown_subcommand_exits_one():
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_sample_round_trip(tmp_path):
    for kind in ("sl2", "tuple", "reflection"):
        path = sample_file(tmp_path, "--kind", kind, "--seed", "5", "--order", "4", name=f"{kind}.json")
        text = Path(path).read_text()
        t, meta = read_tuple(text)
        assert meta["seed"] == "5"
        assert write_tuple(t, meta) == text


@pytest.mark.parametrize("argv", [
    ["mc", SCALAR, "--lambda", "5", "--check-dim", "--jordan"],
    ["orbit", "catalog:a3"],
    ["traces", IDENTITY],
    ["phi", "catalog:a3"],
    ["jordan", SCALAR],
    ["catalog", "list"],
    ["sample", "--seed", "9"],
])
def test_byte_identical_reruns(argv):
    first = run(argv + ["--no-timing"])
    second = run(argv + ["--no-timing"])
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mcpvi", "traces", IDENTITY, "--no-timing"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["outputs"]["fricke_residual"] == "0"
    proc = subprocess.run([sys.executable, "-m", "mcpvi", "verify", "degenerate"], capture_output=True, text=True)
    assert proc.returncode == 2 and "hypothesis" in proc.stderr
