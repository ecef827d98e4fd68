import json
import shutil
import subprocess

import pytest

from lfsr_debruijn import cli
from lfsr_debruijn import oracles


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "-n", "6")
    assert code == 0
    assert "components: 2; cycles: [0], [0,1,1]; trees: 4 × depth 3 (15 vertices)" in out
    assert "adjacency edges: 0" in out


def test_analyze_json_schema(capsys):
    code, out, _ = run(capsys, "analyze", "-n", "6", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["ok"]
    assert sorted(body) == ["adjacency_edges", "checks", "components", "leaves", "n",
                            "ok", "schema", "states", "trees", "trigeminal"]
    assert body["schema"] == 1
    assert [c["ring"] for c in body["components"]] == ["[0]", "[0,1,1]"]
    assert [c["size"] for c in body["components"]] == [16, 48]
    assert sorted(t["root"] for t in body["trees"]) == ["001101", "010110", "100000", "111011"]
    assert {(t["depth"], t["vertices"]) for t in body["trees"]} == {(3, 15)}
    assert body["adjacency_edges"] == []


@pytest.mark.parametrize("argv", [
    ["analyze", "-n", "2"],
    ["analyze"],
    ["analyze", "-n", "29"],
    ["analyze", "-n", "6", "--format", "dot"],
    ["analyze", "-n", "6", "--workers", "0"],
    ["construct", "-n", "6", "--policy", "bogus"],
    ["construct", "-n", "6", "--policy", "random:x"],
    ["export", "-n", "11"],
    ["verify", "0001011x"],
    ["verify", "000101"],
    ["verify", "00010111", "-n", "4"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "error" in err


def test_construct_table1_json(capsys):
    code, out, _ = run(capsys, "construct", "-n", "6", "--policy", "table1-script", "--format", "json")
    body = json.loads(out)
    assert code == 0
    assert [len(c) for c in body["cycles"]] == [26, 6]
    first = body["cycles"][0][0]
    assert (first["tail"], first["length"]) == ("111111", 4)
    assert first["states"] == ["111111", "111110", "111101", "111011", "110110"]
    moved = {m["state"]: m for m in body["modified_successor"]}
    assert all(m["old_successor"] != m["new_successor"] for m in moved.values())


def test_construct_text(capsys):
    code, out, _ = run(capsys, "construct", "-n", "4")
    assert code == 0
    assert out.startswith("n: 4  policy: lex  paths: 8")


def test_pairs_table3(capsys):
    code, out, _ = run(capsys, "pairs", "-n", "6", "--policy", "table1-script", "--format", "json")
    body = json.loads(out)
    got = {frozenset((p["z"], p["z_hat"])) for p in body["pairs"]}
    assert code == 0
    assert got == {frozenset(p) for p in [("101000", "001000"), ("110001", "010001"),
                                          ("000010", "100010"), ("101001", "001001"),
                                          ("110010", "010010")]}
    code, out, _ = run(capsys, "pairs", "-n", "6", "--policy", "table1-script")
    assert out.splitlines()[0] == "5 conjugate pairs across 2 cycles"


@pytest.mark.parametrize("n,policy", [(3, "lex"), (6, "table1-script"), (10, "random:4")])
def test_debruijn_bits(capsys, n, policy):
    code, out, _ = run(capsys, "debruijn", "-n", str(n), "--policy", policy)
    seq = out.strip()
    assert code == 0
    assert oracles.is_de_bruijn(seq, n)


def test_debruijn_formats(capsys):
    _, bits, _ = run(capsys, "debruijn", "-n", "4")
    code, text, _ = run(capsys, "debruijn", "-n", "4", "--format", "text")
    lines = text.splitlines()
    assert code == 0 and lines[0] == bits.strip() and len(lines) == 17
    assert lines[1].split() == ["0", "0000"]
    code, out, _ = run(capsys, "debruijn", "-n", "4", "--format", "json")
    body = json.loads(out)
    assert body["verified"] and body["sequence"] == bits.strip()
    assert len(body["joins"]) == body["cycles"] - 1


def test_debruijn_n16(capsys):
    code, out, _ = run(capsys, "debruijn", "-n", "16")
    assert code == 0 and len(out.strip()) == 1 << 16
    assert oracles.is_de_bruijn(out.strip(), 16)


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "00010111")
    assert code == 0 and out == "de Bruijn sequence of order 3\n"
    code, out, _ = run(capsys, "verify", "00010110")
    assert code == 1 and out == "not de Bruijn: window 000 repeats at position 7\n"
    code, out, _ = run(capsys, "verify", "00010110", "--format", "json")
    assert code == 1
    assert json.loads(out)["repeated_window"] == {"position": 7, "word": "000"}


def test_verify_stdin(capsys, monkeypatch):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO("0000100110101111\n"))
    code, out, _ = run(capsys, "verify", "-", "-n", "4")
    assert code == 0


def test_export_dot(capsys):
    code, out, _ = run(capsys, "export", "-n", "4")
    assert code == 0
    assert out.startswith("digraph") and out.rstrip().endswith("}")
    assert out.count(" -> ") == 16
    assert "cluster_G1" in out and "cluster_G2" in out


def test_export_force_lifts_cap(capsys):
    code, out, _ = run(capsys, "export", "-n", "11", "--force")
    assert code == 0 and out.count(" -> ") == 1 << 11


def test_out_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(capsys, "debruijn", "-n", "5", "--out", "sub/seq.txt")
    assert code == 0 and out == ""
    assert oracles.is_de_bruijn((tmp_path / "sub" / "seq.txt").read_text().strip(), 5)
    target = tmp_path / "abs.dot"
    run(capsys, "export", "-n", "3", "--out", str(target))
    assert target.read_text().startswith("digraph")


def test_deterministic_output(capsys):
    first = run(capsys, "debruijn", "-n", "11", "--policy", "random:7")
    second = run(capsys, "debruijn", "-n", "11", "--policy", "random:7")
    assert first == second


@pytest.mark.skipif(shutil.which("lfsr-debruijn") is None, reason="console script not installed")
def test_console_script():
    done = subprocess.run(["lfsr-debruijn", "verify", "00010111"], capture_output=True, text=True)
    assert done.returncode == 0
    done = subprocess.run(["lfsr-debruijn", "analyze", "-n", "2"], capture_output=True, text=True)
    assert done.returncode == 2
