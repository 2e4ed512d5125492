import json

import pytest

from crystalforge.cli import run
from crystalforge.digraph_lab import Digraph, clique, digraph_from_json, digraph_to_json
from crystalforge.shadow_realiser import increasing_tuples, ShadowSystem, system_to_json
from crystalforge.tensor_core import IntTensor, loads_st, project, read_st, write_st


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_graph(path, g):
    path.write_text(digraph_to_json(g))
    return str(path)


# -- crystal ----------------------------------------------------------------


def test_crystal_mine_verify_round_trip(tmp_path, capsys):
    out = tmp_path / "c.st"
    code, _, _ = invoke(capsys, "crystal", "mine", "--k", "3", "-o", str(out))
    assert code == 0
    t = read_st(out)
    assert t.shape == (6, 6, 6)
    code, stdout, _ = invoke(capsys, "crystal", "verify", "--k", "3", str(out))
    assert code == 0 and stdout == "YES\n"


def test_crystal_verify_rejects_wrong_k(tmp_path, capsys):
    out = tmp_path / "c.st"
    invoke(capsys, "crystal", "mine", "--k", "2", "-o", str(out))
    code, stdout, err = invoke(capsys, "crystal", "verify", "--k", "3", str(out))
    assert code == 1 and stdout == "NO\n" and err


def test_crystal_shadow_and_crystalise(tmp_path, capsys):
    mined = tmp_path / "u.st"
    invoke(capsys, "crystal", "mine", "--k", "2", "-o", str(mined))
    lifted = tmp_path / "c.st"
    code, _, _ = invoke(capsys, "crystal", "crystalise", "--q", "4", str(mined), "-o", str(lifted))
    assert code == 0
    code, stdout, _ = invoke(capsys, "crystal", "shadow", "--k", "2", str(lifted))
    assert code == 0
    assert loads_st(stdout) == read_st(mined)


def test_crystal_mine_deterministic(tmp_path, capsys):
    _, out1, _ = invoke(capsys, "crystal", "mine", "--k", "3")
    _, out2, _ = invoke(capsys, "crystal", "mine", "--k", "3")
    assert out1 == out2


# -- shadows ----------------------------------------------------------------


def system_file(tmp_path, c, p):
    q = c.dim
    sys = ShadowSystem(p, c.shape, {i: project(c, i) for i in increasing_tuples(q, p)})
    f = tmp_path / "sys.json"
    f.write_text(system_to_json(sys))
    return str(f), sys


def test_shadows_check_and_realise(tmp_path, capsys):
    c = IntTensor((2, 2, 2), {(1, 2, 1): 3, (2, 1, 2): -1})
    path, sys = system_file(tmp_path, c, 2)
    code, stdout, _ = invoke(capsys, "shadows", "check", path)
    assert code == 0 and stdout == "YES\n"
    out = tmp_path / "w.st"
    code, _, _ = invoke(capsys, "shadows", "realise", path, "-o", str(out))
    assert code == 0
    w = read_st(out)
    for i in increasing_tuples(3, 2):
        assert project(w, i) == sys.shadows[i]


def test_shadows_check_unrealistic(tmp_path, capsys):
    doc = {
        "p": 1,
        "widths": [2, 2],
        "shadows": [
            {"axes": [1], "tensor": "st 1\ndims 1\nwidths 2\nentries 1\n1 1\n"},
            {"axes": [2], "tensor": "st 1\ndims 1\nwidths 2\nentries 1\n1 2\n"},
        ],
    }
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(doc))
    code, stdout, err = invoke(capsys, "shadows", "check", str(f))
    assert code == 1 and stdout == "NO\n" and "compatibility" in err
    code, _, err = invoke(capsys, "shadows", "realise", str(f))
    assert code == 1 and "not realistic" in err


# -- digraph / hom ----------------------------------------------------------


def test_digraph_commands(tmp_path, capsys):
    code, stdout, _ = invoke(capsys, "digraph", "clique", "--q", "3")
    assert code == 0 and digraph_from_json(stdout) == clique(3)

    k3 = write_graph(tmp_path / "k3.json", clique(3))
    code, stdout, _ = invoke(capsys, "digraph", "linegraph", k3)
    assert code == 0 and digraph_from_json(stdout).vertex_count == 6

    code, stdout, _ = invoke(capsys, "digraph", "shift", "--q", "3", "--i", "1")
    lg = digraph_from_json(stdout)
    assert code == 0 and lg.vertex_count == 6


def test_hom_yes_prints_colouring(tmp_path, capsys):
    cyc = Digraph(3, frozenset({(1, 2), (2, 3), (3, 1)}))
    x = write_graph(tmp_path / "c3.json", cyc)
    a = write_graph(tmp_path / "k3.json", clique(3))
    code, stdout, _ = invoke(capsys, "hom", x, a)
    assert code == 0
    f = {int(u): v for u, v in json.loads(stdout).items()}
    assert all((f[u], f[v]) in clique(3).edges for u, v in cyc.edges)


def test_hom_no(tmp_path, capsys):
    x = write_graph(tmp_path / "k4.json", clique(4))
    a = write_graph(tmp_path / "k3.json", clique(3))
    code, stdout, _ = invoke(capsys, "hom", x, a)
    assert code == 1 and stdout == "NO\n"


# -- relax ------------------------------------------------------------------


def test_relax_verbs(tmp_path, capsys):
    k4 = write_graph(tmp_path / "k4.json", clique(4))
    k3 = write_graph(tmp_path / "k3.json", clique(3))
    code, stdout, _ = invoke(capsys, "relax", "ba", "--k", "2", k4, k3)
    assert code == 0 and stdout == "YES\n"
    code, stdout, _ = invoke(capsys, "relax", "aip", "--k", "1", k4, k3)
    assert code == 0 and stdout == "YES\n"
    code, stdout, _ = invoke(capsys, "relax", "blp", "--k", "1", k4, k3)
    assert code == 0 and stdout == "YES\n"


# -- cert -------------------------------------------------------------------


def test_cert_pipeline(tmp_path, capsys):
    cst = tmp_path / "c.st"
    invoke(capsys, "crystal", "mine", "--k", "2", "-o", str(cst))
    lifted = tmp_path / "c4.st"
    invoke(capsys, "crystal", "crystalise", "--q", "4", str(cst), "-o", str(lifted))
    k4 = write_graph(tmp_path / "k4.json", clique(4))
    cert = tmp_path / "cert.json"
    code, _, _ = invoke(capsys, "cert", "from-crystal", "--k", "2", str(lifted), k4, "-o", str(cert))
    assert code == 0
    code, stdout, _ = invoke(capsys, "cert", "verify", str(cert))
    assert code == 0 and stdout == "YES\n"

    # push along the inclusion K_3 -> K_4 and re-verify
    fmap = tmp_path / "f.json"
    fmap.write_text(json.dumps({"1": 1, "2": 2, "3": 3}))
    pushed = tmp_path / "pushed.json"
    code, _, _ = invoke(capsys, "cert", "push-hom", str(cert), str(fmap), k4, "-o", str(pushed))
    assert code == 0
    code, stdout, _ = invoke(capsys, "cert", "verify", str(pushed))
    assert code == 0 and stdout == "YES\n"


def test_cert_verify_rejects_tampering(tmp_path, capsys):
    cst = tmp_path / "c.st"
    invoke(capsys, "crystal", "mine", "--k", "2", "-o", str(cst))
    lifted = tmp_path / "c4.st"
    invoke(capsys, "crystal", "crystalise", "--q", "4", str(cst), "-o", str(lifted))
    k4 = write_graph(tmp_path / "k4.json", clique(4))
    cert = tmp_path / "cert.json"
    invoke(capsys, "cert", "from-crystal", "--k", "2", str(lifted), k4, "-o", str(cert))
    doc = json.loads(cert.read_text())
    # bump one entry of one image, keeping the payload well-formed
    from crystalforge.tensor_core import dumps_st

    t = loads_st(doc["zeta"][3]["tensor"])
    entries = dict(t.entries)
    idx = sorted(entries)[0]
    entries[idx] += 1
    doc["zeta"][3]["tensor"] = dumps_st(IntTensor(t.shape, entries))
    cert.write_text(json.dumps(doc))
    code, stdout, err = invoke(capsys, "cert", "verify", str(cert))
    assert code == 1 and stdout == "NO\n" and err


# -- fool -------------------------------------------------------------------


def test_fool_params(capsys):
    code, stdout, _ = invoke(capsys, "fool", "params", "--c", "4", "--d", "4", "--k", "2")
    assert code == 0
    assert stdout == (
        "i 3\nq_bits 65537\nq -\nb_iterates 6 20 184756\nthresholds 16 64 256\n"
    )


# -- plumbing ---------------------------------------------------------------


def test_usage_errors_exit_2(tmp_path, capsys):
    assert invoke(capsys, "crystal", "mine")[0] == 2  # missing --k
    assert invoke(capsys, "nonsense")[0] == 2
    bad = tmp_path / "bad.st"
    bad.write_text("not a tensor\n")
    code, _, err = invoke(capsys, "crystal", "verify", "--k", "2", str(bad))
    assert code == 2 and "error" in err
    code, _, err = invoke(capsys, "hom", str(tmp_path / "missing.json"), str(bad))
    assert code == 2


def test_jobs_flag_accepted(capsys):
    code, stdout, _ = invoke(capsys, "--jobs", "2", "fool", "params", "--c", "4", "--d", "4", "--k", "2")
    assert code == 0 and stdout.startswith("i 3\n")
    assert invoke(capsys, "--jobs", "0", "fool", "params", "--c", "4", "--d", "4", "--k", "2")[0] == 2
