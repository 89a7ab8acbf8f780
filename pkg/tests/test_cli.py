import json

import pytest

from sutured import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("diagram, want", [("k=2; 0-3 1-2", "±x"), ("k=2; 0-1 2-3", "±y"), ("k=1; 0-1", "±1")])
def test_element(capsys, diagram, want):
    code, out, _ = run(capsys, "element", diagram)
    assert code == 0 and out.strip() == want


def test_parse_error_exit(capsys):
    code, _, err = run(capsys, "element", "xy")
    assert code == cli.EXIT_PARSE and "parse error" in err


def test_crossing_exit(capsys):
    code, _, err = run(capsys, "element", "k=2; 0-2 1-3")
    assert code == cli.EXIT_INVARIANT and "cross" in err


def test_glue_torus(capsys):
    code, out, _ = run(capsys, "glue", "k=3; 0-1 2-3 4-5", "--torus", "1,1")
    assert code == 0
    assert "BpArc(+)" in out and "±(0,0,0,1)" in out


def test_glue_torus_orders_agree(capsys):
    outs = [run(capsys, "glue", "k=3; 0-5 1-2 3-4", "--torus", "1,1", "--order", o)[1] for o in ("LR", "TB")]
    assert outs[0] == outs[1]


def test_glue_annulus(capsys):
    code, out, _ = run(capsys, "glue", "k=3; 0-5 1-2 3-4", "--annulus", "1")
    assert code == 0 and out.strip()


def test_glue_size_mismatch(capsys):
    code, _, _ = run(capsys, "glue", "k=2; 0-1 2-3", "--annulus", "1")
    assert code == cli.EXIT_INVARIANT


def test_verify_disc_text(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "disc", "--max-chords", "4")
    assert code == 0
    assert "catalan-counts" in out and "0 failed" in out


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "annulus", "--json", "--max-chords", "4")
    data = json.loads(out)
    assert code == 0
    assert {"id", "status", "witness"} <= set(data["claims"][0])
    assert all(c["status"] == "verified" for c in data["claims"])


def test_cache_roundtrip(capsys, tmp_path):
    path = tmp_path / "tables.json"
    assert run(capsys, "cache", "write", str(path), "--max-chords", "4")[0] == 0
    first = path.read_text()
    code, out, _ = run(capsys, "cache", "read", str(path))
    assert code == 0 and "k=4: 14 diagrams" in out
    assert run(capsys, "cache", "check", str(path))[1].strip() == "no drift"
    path2 = tmp_path / "again.json"
    run(capsys, "cache", "write", str(path2), "--max-chords", "4")
    assert path2.read_text() == first


def test_cache_version_mismatch(capsys, tmp_path):
    path = tmp_path / "tables.json"
    run(capsys, "cache", "write", str(path), "--max-chords", "2")
    data = json.loads(path.read_text())
    data["version"] += 1
    path.write_text(json.dumps(data))
    assert run(capsys, "cache", "read", str(path))[0] == cli.EXIT_VERSION


def test_cache_tampered(capsys, tmp_path):
    path = tmp_path / "tables.json"
    run(capsys, "cache", "write", str(path), "--max-chords", "3")
    data = json.loads(path.read_text())
    data["tables"]["3"][0][1] = "2" + data["tables"]["3"][0][1].lstrip("-")
    path.write_text(json.dumps(data))
    assert run(capsys, "cache", "check", str(path))[0] in (cli.EXIT_FAILED, cli.EXIT_INVARIANT)


def test_verify_with_cache(capsys, tmp_path):
    path = tmp_path / "tables.json"
    run(capsys, "cache", "write", str(path), "--max-chords", "3")
    code, out, _ = run(capsys, "verify", "--scope", "disc", "--max-chords", "3", "--cache", str(path))
    assert code == 0 and "cache-consistency" in out
