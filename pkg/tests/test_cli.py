import gzip
import json
from pathlib import Path

import pytest

from fusiongraphs.cli import EXIT_INVALID, EXIT_OK, EXIT_UNRESOLVED, EXIT_USAGE, main, unresolved_graphs
from fusiongraphs.fusionring import ring_h4, ring_save, ring_to_dict

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ring_show_h6(capsys):
    code, out, _ = run(capsys, "ring", "show", "--ring", "h6")
    assert code == EXIT_OK
    rows = {line.split()[0]: line.split()[1:] for line in out.splitlines()[2:8]}
    assert rows["ξ"] == ["ξ", "α²ξ", "αξ", "1+ξ+αξ+α²ξ", "α²+ξ+αξ+α²ξ", "α+ξ+αξ+α²ξ"]
    assert rows["α"] == ["α", "α²", "1", "αξ", "α²ξ", "ξ"]


def test_ring_show_h4_dims(capsys):
    code, out, _ = run(capsys, "ring", "show", "--ring", "h4")
    assert code == EXIT_OK
    assert "(1+√13)/2" in out and "(5+√13)/2" in out


def test_ring_validate(capsys):
    code, out, _ = run(capsys, "ring", "validate", "--ring", "i2:9")
    assert code == EXIT_OK
    assert out.count("PASS") == 7


def test_ring_validate_corrupt_file(capsys, tmp_path):
    data = ring_to_dict(ring_h4())
    data["N"][1][1][1] = 3
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    code, _, err = run(capsys, "ring", "validate", "--ring", str(p))
    assert code == EXIT_INVALID
    assert "invalid ring" in err


def test_ring_save_matches_codec(capsys, tmp_path):
    p = tmp_path / "h4.json"
    code, _, _ = run(capsys, "ring", "save", "--ring", "h4", "--out", str(p))
    assert code == EXIT_OK
    q = tmp_path / "ref.json"
    ring_save(ring_h4(), q)
    assert p.read_bytes() == q.read_bytes()


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["scan"])
    assert info.value.code == EXIT_USAGE
    code, _, err = run(capsys, "scan", "--ring", "nope")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "identities", "--n", "4")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "scan", "--ring", "h4", "--max-index", "sqrt(")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "conjecture", "--ring", "h6")
    assert code == EXIT_USAGE


def test_scan_refuses_large_ring(capsys):
    code, _, err = run(capsys, "scan", "--ring", "i2:7")
    assert code == EXIT_USAGE
    assert "--max-index" in err


def test_scan_h4_summary_and_outputs(capsys, tmp_path):
    out_json = tmp_path / "r.json"
    dot_dir = tmp_path / "dot"
    code, out, _ = run(capsys, "scan", "--ring", "h4", "--out", str(out_json), "--dot", str(dot_dir))
    assert code == EXIT_OK
    assert "7 surviving graphs" in out
    assert len(list(dot_dir.glob("*.dot"))) == 7
    assert json.loads(out_json.read_text())["ring"] == "h4"


def test_scan_unresolved_exit(capsys):
    code, out, _ = run(capsys, "scan", "--ring", "h4", "--no-expressibility", "--no-jones")
    assert code == EXIT_UNRESOLVED
    assert "UNRESOLVED" in out


def test_unresolved_helper():
    assert unresolved_graphs("custom", []) is None
    assert unresolved_graphs("h4", []) == []


@pytest.mark.parametrize("ring, golden", [("h4", "scan_h4.json"), ("h6", "scan_h6.json"),
                                          ("i2:5", "scan_i2_5.json.gz")])
def test_golden_reports(capsys, tmp_path, ring, golden):
    out = tmp_path / "report.json"
    code, _, _ = run(capsys, "scan", "--ring", ring, "--out", str(out))
    assert code == EXIT_OK
    path = GOLDEN / golden
    expected = gzip.decompress(path.read_bytes()) if golden.endswith(".gz") else path.read_bytes()
    assert out.read_bytes() == expected


def test_identities(capsys):
    code, out, _ = run(capsys, "identities", "--n", "5")
    assert code == EXIT_OK
    assert out.count("PASS") == 3
    code, out, _ = run(capsys, "identities", "--n", "3", "--json")
    assert json.loads(out)["index"] == "12+3*sqrt(13)"


def test_saturated(capsys, tmp_path):
    code, out, _ = run(capsys, "saturated", "--ring", "i2:5")
    assert code == EXIT_OK
    assert "weight^2 5" in out
    assert "(135+25√29)/2" in out
    code, out, _ = run(capsys, "saturated", "--ring", "h4", "--json")
    rec = json.loads(out)
    assert rec["verdict"] == "eliminated" and rec["witness_target"] == "2"


def test_lattice(capsys, tmp_path):
    dot = tmp_path / "lat.dot"
    code, out, _ = run(capsys, "lattice", "--index", "(33+9*sqrt(13))/2", "--galois", "3", "3", "3",
                       "--dot", str(dot))
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("necessary conditions only")
    assert "[M:P]=3 " in out and "[P:N]=(11+3√13)/2" in out
    assert out.rstrip().endswith("9")
    assert dot.read_text().count("N -> P") == 4
    code, out, _ = run(capsys, "lattice", "--index", "(33+9*sqrt(13))/2", "--json")
    assert sum(not p["trivial"] for p in json.loads(out)["pairs"]) == 4


def test_conjecture(capsys, tmp_path):
    p = tmp_path / "h4.json"
    ring_save(ring_h4(), p)
    code, out, _ = run(capsys, "conjecture", "--ring", str(p))
    assert code == EXIT_OK
    assert "1+ν+μ" in out and "feasible" in out


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "fusiongraphs", "identities", "--n", "7"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "PASS" in res.stdout
