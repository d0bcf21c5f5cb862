import json
import shutil
import subprocess

import pytest

from pseudodet import __version__
from pseudodet.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, main
from pseudodet.fixtures import resolve


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def test_validate_bundled(capsys):
    code, payload, err = run(capsys, "validate", "s3-level23-p2")
    assert code == EXIT_OK and payload["status"] == "ok"
    assert payload["report"]["axiom_violations"] == []
    assert payload["metadata"] == {"command": "validate", "version": __version__}
    code, payload, _ = run(capsys, "validate", "weight2-level46-mod2")
    assert code == EXIT_OK and payload["report"]["dimension"] == 8


def test_validate_malformed_and_missing(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    code, payload, err = run(capsys, "validate", str(bad))
    assert code == EXIT_INVALID and payload["status"] == "invalid" and "error" in payload
    obj = json.loads(resolve("s3-level23-p2").read_text())
    obj["group"]["perm_gens"][0] = [0, 0, 2]
    bad.write_text(json.dumps(obj))
    assert run(capsys, "validate", str(bad))[0] == EXIT_INVALID
    code, payload, err = run(capsys, "validate", str(tmp_path / "nope.json"))
    assert code == EXIT_IO and payload["status"] == "io-error" and "nope.json" in err


def test_certify_doubling_is_unramified(capsys):
    code, payload, err = run(capsys, "certify", "s3-level23-p2", "--doubling")
    assert code == EXIT_OK
    rep = payload["report"]
    assert rep["certificate"]["verdict"] == "Unramified"
    assert rep["doubling"] == {"rank": 2, "free_rank_two": True}
    assert "Unramified" in err


def test_certify_ramified_control(capsys):
    code, payload, err = run(capsys, "certify", "ramified-control")
    assert code == EXIT_OK
    assert payload["report"]["certificate"]["verdict"] == "Undetermined"
    assert "direct test ramified" in err


def test_certify_bad_alpha(capsys):
    code, payload, err = run(capsys, "certify", "s3-level23-p2", "--doubling", "--alpha", "1,0")
    assert code == EXIT_INVALID
    kinds = [v["kind"] for v in payload["report"]["violations"]]
    assert any(k.startswith("condition (2)") for k in kinds)


def test_main_theorem(capsys):
    code, payload, err = run(capsys, "main-theorem", "--level", "23", "--prime", "2", "--m", "1", "--bound", "100")
    assert code == EXIT_OK
    mt = payload["report"]["main_theorem"]
    assert mt["ok"] and mt["mismatches"] == [] and len(mt["rows"]) == 24
    assert "<- p" in err and "0 mismatches" in err


def test_output_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["-q", "-o", str(a), "main-theorem"]) == EXIT_OK
    assert main(["-q", "-o", str(b), "main-theorem"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr() == ("", "")


def test_missing_basis_names_the_file(capsys):
    code, payload, err = run(capsys, "main-theorem", "--level", "23", "--prime", "2", "--basis", "weight2-level23-mod4")
    assert code == EXIT_IO and "weight2-level23-mod4" in err


def test_weight1_and_doubling(capsys):
    code, payload, _ = run(capsys, "weight1")
    assert code == EXIT_OK and payload["report"]["computed_dimension"] == 2
    code, payload, _ = run(capsys, "doubling")
    assert code == EXIT_OK and payload["report"]["free_rank_two"]


def test_stabilize(capsys):
    code, payload, err = run(capsys, "stabilize", "--level", "11", "--prime", "3", "--m", "2")
    assert code == EXIT_OK and payload["report"]["alpha"] == [2] and payload["report"]["checked_to"] == 161
    assert "holds" in err


def test_timings_are_opt_in(capsys):
    _, payload, _ = run(capsys, "--timings", "main-theorem")
    assert "timings" in payload["report"]


@pytest.mark.parametrize("argv", [["main-theorem", "--bound", "1"], ["bogus"], ["stabilize", "--eta", "x"]])
def test_bad_arguments_exit_two(capsys, argv):
    assert main(argv) == EXIT_INVALID


def test_version(capsys):
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


@pytest.mark.skipif(shutil.which("pseudodet") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["pseudodet", "-q", "validate", "ramified-control"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["status"] == "ok"
