import json

import networkx as nx

from ncplink.cli import run

# the diamond M3 (modular) and the pentagon N5 (not modular)
M3 = "0 < a\n0 < b\n0 < c\na < 1\nb < 1\nc < 1\n"
N5 = "0 < a\na < b\nb < 1\n0 < c\nc < 1\n"
# three lines of GF(2)^2, lifted to V in GF(2)^3 by the loader
M3_EMB = "0:\na: 1 0\nb: 0 1\nc: 1 1\n1: 1 0; 0 1\n"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_json_and_exit_code(capsys):
    code, out, _ = call(capsys, "verify", "--lemma", "points-ncp3", "--n", "3")
    assert code == 0
    d = json.loads(out)
    assert d["status"] == "pass" and d["statistics"]["vertices"] == 3 and d["elapsed_ms"] == 0


def test_verify_markdown_to_file(tmp_path, capsys):
    out_file = tmp_path / "r.md"
    code, out, _ = call(capsys, "verify", "--lemma", "girth-ncp4", "--n", "4", "--format", "md", "--output", str(out_file))
    assert code == 0 and out == ""
    assert "girth-ncp4" in out_file.read_text()


def test_usage_errors_exit_2(capsys):
    assert call(capsys, "verify", "--lemma", "nope", "--n", "4")[0] == 2
    assert call(capsys, "verify", "--lemma", "girth-ncp4", "--n", "9")[0] == 2
    assert call(capsys, "verify", "--lemma", "duality", "--n", "4", "--field", "gf:4")[0] == 2
    assert call(capsys, "dual", "--n", "4", "--partition", "1,3|2,4")[0] == 2
    assert call(capsys, "dual", "--n", "4", "--partition", "1,2|3|4|5")[0] == 2
    assert call(capsys, "verify", "--lemma", "duality", "--n", "4", "--jobs", "0")[0] == 2


def test_dual_and_embed(capsys):
    code, out, _ = call(capsys, "dual", "--n", "4", "--partition", "1,2|3|4")
    assert code == 0 and out.strip() == "1|2,3,4"
    code, out, _ = call(capsys, "embed", "--n", "4", "--partition", "1,2|3|4", "--field", "gf:2")
    assert code == 0 and out.splitlines()[0] == "dim 1"


def test_enumerate_counts(capsys):
    code, out, _ = call(capsys, "enumerate", "--what", "trees", "--n", "6")
    assert code == 0 and len(out.splitlines()) == 273
    assert len(call(capsys, "enumerate", "--what", "ncp", "--n", "5")[1].splitlines()) == 42
    assert len(call(capsys, "enumerate", "--what", "candidates", "--n", "5")[1].splitlines()) == 10


def test_girth_ncp4_and_heawood(tmp_path, capsys):
    code, out, _ = call(capsys, "girth", "--n", "4")
    assert code == 0 and out.startswith("girth 6 edges = 2pi")
    f = tmp_path / "heawood.txt"
    f.write_text("\n".join(f"{u} {w}" for u, w in nx.heawood_graph().edges()))
    code, out, _ = call(capsys, "girth", "--graph", str(f))
    assert code == 0 and out.startswith("girth 6")
    assert call(capsys, "girth", "--n", "5")[0] == 2


def test_lattice_check_modular_with_embedding(tmp_path, capsys):
    lf, ef = tmp_path / "m3.txt", tmp_path / "m3.emb"
    lf.write_text(M3)
    ef.write_text(M3_EMB)
    code, out, _ = call(capsys, "lattice-check", "--file", str(lf), "--embedding", str(ef), "--field", "gf:2")
    d = json.loads(out)
    assert code == 0
    assert d["statistics"]["modular"] == 1 and d["statistics"]["failing_pairs"] == 0


def test_lattice_check_pentagon(tmp_path, capsys):
    lf = tmp_path / "n5.txt"
    lf.write_text(N5)
    code, out, _ = call(capsys, "lattice-check", "--file", str(lf))
    d = json.loads(out)
    assert code == 0 and d["statistics"]["modular"] == 0
    assert d["table"][0]["item"] == "modularity-witness"


def test_lattice_check_bad_embedding(tmp_path, capsys):
    lf, ef = tmp_path / "m3.txt", tmp_path / "bad.emb"
    lf.write_text(M3)
    ef.write_text("0:\na: 1 0\n")
    assert call(capsys, "lattice-check", "--file", str(lf), "--embedding", str(ef))[0] == 2


def test_figure_dir_writes_pngs(tmp_path, capsys):
    code, _, err = call(capsys, "verify", "--lemma", "turning-ncp5", "--n", "5", "--figure-dir", str(tmp_path))
    assert code == 0
    pngs = sorted(tmp_path.glob("*.png"))
    assert pngs and all(p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n" for p in pngs)
    assert "figure:" in err
    code, _, _ = call(capsys, "girth", "--n", "4", "--figure-dir", str(tmp_path))
    assert (tmp_path / "ncp4-link.png").exists()


def test_classify_markdown(capsys):
    code, out, _ = call(capsys, "classify", "--n", "5", "--format", "md")
    assert code == 0 and "classify-turning" in out and "| orbit |" in out
