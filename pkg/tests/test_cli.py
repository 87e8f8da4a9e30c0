
from kneser_homotopy.cli import main
from kneser_homotopy.graph_core import graph_from_text, mapping_to_text
from kneser_homotopy.homotopy import base_table, hompath_from_text, twist
from kneser_homotopy.witness import load_bundle


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_graph_command(capsys, tmp_path):
    code, out, _ = run(capsys, "graph", "SG(2,1)")
    G = graph_from_text(out)
    assert code == 0 and G.vertex_count == 5 and G.edge_count == 5
    assert "l 0 0,2" in out
    code, out, _ = run(capsys, "graph", "SG(2,3)")
    assert graph_from_text(out).vertex_count == 14
    code, out, _ = run(capsys, "graph", "K(5)")
    assert graph_from_text(out).edge_count == 10
    target = tmp_path / "c7.graph"
    assert run(capsys, "graph", "C(7)", "--out", target)[0] == 0
    assert graph_from_text(target.read_text()).edge_count == 7
    assert run(capsys, "graph", "SG(2")[0] == 2
    assert run(capsys, "graph", "SG(0,3)")[0] == 2


def test_graph_output_deterministic(capsys):
    assert run(capsys, "graph", "SSG(3,2)")[1] == run(capsys, "graph", "SSG(3,2)")[1]


def test_path_table(capsys):
    code, out, _ = run(capsys, "path", "--n", 2, "--k", 1, "--target", "(0 1 2)")
    assert code == 0
    assert list(hompath_from_text(out).entries) == base_table()


def test_path_refuses_k1_tau(capsys):
    code, _, err = run(capsys, "path", "--n", 2, "--k", 1, "--target", "tau")
    assert code == 3
    assert "sign(rho_bar) = -1" in err


def test_path_targets(capsys, tmp_path):
    for target in ("tau", "rho", "dihedral 3 1", "dihedral -2 0"):
        out = tmp_path / "p.hompath"
        code, _, _ = run(capsys, "path", "--n", 2, "--k", 3, "--target", target, "--out", out)
        assert code == 0
        assert run(capsys, "check", "SG(2,3)", out)[0] == 0
    code, out, _ = run(capsys, "path", "--n", 2, "--k", 3, "--target", "perm 1 2 3 4 0", "--kind", "semi-stable")
    assert code == 0 and hompath_from_text(out).kind == "semi-stable"
    assert run(capsys, "path", "--n", 2, "--k", 3, "--target", "(0 1)")[0] == 3
    assert run(capsys, "path", "--n", 2, "--k", 3, "--target", "(0 9 1)")[0] == 2
    assert run(capsys, "path", "--n", 2, "--k", 3, "--target", "sideways")[0] == 2
    assert run(capsys, "path", "--k", 3, "--target", "tau")[0] == 2


def test_path_round_trip_byte_for_byte(capsys, tmp_path):
    out = tmp_path / "tau.hompath"
    run(capsys, "path", "--n", 3, "--k", 3, "--target", "tau", "--out", out)
    first = out.read_bytes()
    run(capsys, "path", "--n", 3, "--k", 3, "--target", "tau", "--out", out)
    assert out.read_bytes() == first
    code, stdout, _ = run(capsys, "path", "--n", 3, "--k", 3, "--target", "tau")
    assert stdout.encode() == first
    assert run(capsys, "check", "SG(3,3)", out)[0] == 0


def test_check_exit_codes(capsys, tmp_path):
    table = tmp_path / "table.hompath"
    run(capsys, "path", "--n", 2, "--k", 1, "--target", "(0 1 2)", "--out", table)
    graph = tmp_path / "sg21.graph"
    run(capsys, "graph", "SG(2,1)", "--out", graph)
    assert run(capsys, "check", graph, table)[0] == 0

    lines = table.read_text().splitlines()
    lines[3] = "0 0 0 0 0"
    bad = tmp_path / "bad.hompath"
    bad.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "check", graph, bad)
    assert code == 1 and "entry 2" in err

    lines = table.read_text().splitlines()
    lines[0] = lines[0].replace(" 3 6", " 4 6")
    wrong = tmp_path / "wrong.hompath"
    wrong.write_text("\n".join(lines) + "\n")
    assert run(capsys, "check", graph, wrong)[0] == 2
    assert run(capsys, "check", "SG(2,3)", table)[0] == 2
    assert run(capsys, "check", graph, tmp_path / "missing")[0] == 2


def test_witness_commands(capsys, tmp_path):
    d = tmp_path / "bundle"
    code, out, _ = run(capsys, "witness", "build", "--n", 2, "--k", 3, "--out", d)
    assert code == 0
    assert len(list(d.glob("cert_*.hompath"))) == 14
    assert run(capsys, "witness", "verify", d)[0] == 0

    bundle = load_bundle(d)
    rho = bundle.automorphisms[bundle.names.index("t0r")]
    gmap = tmp_path / "g.map"
    gmap.write_text(mapping_to_text(twist(bundle.j, rho)))
    cert = tmp_path / "g.hompath"
    assert run(capsys, "witness", "certify", d, gmap, "--out", cert)[0] == 0
    path = hompath_from_text(cert.read_text())
    assert path.entries[0] == twist(bundle.j, rho) and path.entries[-1] == bundle.j
    assert run(capsys, "check", d / "T.graph", cert, "--target", d / "G.graph")[0] == 0
    assert run(capsys, "check", d / "T.graph", d / "cert_t3.hompath", "--target", d / "G.graph")[0] == 0
    assert run(capsys, "check", d / "T.graph", cert)[0] == 2

    fbar = (d / "fbar.map").read_text().split()
    fbar[0] = str((int(fbar[0]) + 1) % 5)
    (d / "fbar.map").write_text(" ".join(fbar) + "\n")
    code, _, err = run(capsys, "witness", "verify", d)
    assert code == 1 and "fbar" in err

    assert run(capsys, "witness", "build", "--n", 2, "--k", 1, "--out", tmp_path / "x")[0] == 3
    assert run(capsys, "witness", "verify", tmp_path / "nowhere")[0] == 2


def test_oracle_commands(capsys):
    code, out, _ = run(capsys, "oracle", "chromatic", "SG(2,3)")
    assert code == 0 and out.strip() == "chromatic 5"
    code, out, _ = run(capsys, "oracle", "automorphisms", "SG(2,3)")
    assert out.splitlines()[0] == "automorphisms 14" and len(out.splitlines()) == 15
    code, out, _ = run(capsys, "oracle", "flip-components", "C(5)", "--palette", 3)
    assert out.splitlines()[0] == "colourings 30"
    code, out, _ = run(capsys, "oracle", "mixtures", "C(5)", "--palette", 3)
    assert code == 0 and out.strip() == "pairs 900 agree 900"
    assert run(capsys, "oracle", "chromatic", "C(70)")[0] == 2
    assert run(capsys, "oracle", "chromatic", "C(71)", "--force")[1].strip() == "chromatic 3"
    assert run(capsys, "oracle", "mixtures", "SG(2,3)", "--palette", 5)[0] == 2
    assert run(capsys, "oracle", "flip-components", "C(5)")[0] == 2


def test_oracle_reads_graph_files(capsys, tmp_path):
    f = tmp_path / "g.graph"
    run(capsys, "graph", "KG(2,1)", "--out", f)
    assert run(capsys, "oracle", "chromatic", f)[1].strip() == "chromatic 3"
