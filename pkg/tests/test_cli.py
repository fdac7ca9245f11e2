"""Command-line interface: dispatch, formats, determinism, exit codes."""

import json

from leafatlas.cli import run


def run_cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_leaves_zero_b2(capsys):
    code, out, _ = run_cli(capsys, "leaves-zero", "--group", "B2", "--tau", "identity",
                           "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["leaf_count"] == 4
    assert [leaf["dim"] for leaf in data["leaves"]] == [4, 2, 2, 0]


def test_catalog_b_table(capsys):
    code, out, _ = run_cli(capsys, "catalog-B", "--n", "4", "--m", "0")
    assert code == 0
    data = json.loads(out)
    assert [row["r"] for row in data["rows"]] == [0, 1, 2]
    assert [row["dim"] for row in data["rows"]] == [8, 6, 0]


def test_catalog_b_smoothness(capsys):
    code, out, _ = run_cli(capsys, "catalog-B", "--n", "3", "--ratio", "1")
    assert json.loads(out)["smooth"] is False
    code, out, _ = run_cli(capsys, "catalog-B", "--n", "3", "--ratio", "1/2")
    assert json.loads(out)["smooth"] is True


def test_catalog_d(capsys):
    code, out, _ = run_cli(capsys, "catalog-D", "--n", "5")
    assert code == 0
    data = json.loads(out)
    assert [row["dim"] for row in data["rows"]] == [10, 2]
    assert data["twist_report"]["n"] == 5


def test_catalog_dihedral(capsys):
    code, out, _ = run_cli(capsys, "catalog-dihedral", "--d", "4")
    assert code == 0
    data = json.loads(out)
    assert data["undeformed_twisted_atlas"]["leaf_count"] == 2


def test_cherednik_check(capsys):
    code, out, _ = run_cli(capsys, "cherednik-check", "--group", "cyclic2",
                           "--k", "0,1")
    assert code == 0
    data = json.loads(out)
    assert data["gamma"] == "1"
    assert data["b_over_difference"] == "1/2"
    code, out, _ = run_cli(capsys, "cherednik-check", "--group", "cyclic2", "--k", "zero")
    assert json.loads(out)["gamma"] == "0"


def test_poisson_command(capsys):
    code, out, _ = run_cli(capsys, "poisson", "--group", "cyclic2", "--k", "zero",
                           "--z1", "x1^2", "--z2", "y1^2")
    assert code == 0
    data = json.loads(out)
    assert data["euler_degree"] == 0
    assert "x1" in data["bracket"]


def test_reflections_csv(capsys):
    code, out, _ = run_cli(capsys, "reflections", "--group", "dihedral4",
                           "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("alpha,")
    assert len(lines) == 5


def test_text_format(capsys):
    code, out, _ = run_cli(capsys, "parabolics", "--group", "B2", "--format", "text")
    assert code == 0
    assert "class_count: 4" in out


def test_verify_suite_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--group", "B2", "--tau", "identity",
                           "--k", "1,0;0,0")
    assert code == 0
    data = json.loads(out)
    assert data["fail_count"] == 0
    assert data["pass_count"] >= 10
    ids = {r["id"] for r in data["invariants"]}
    assert "tau.lsp-hyperplanes" in ids
    assert "cherednik.pbw-associativity" in ids


def test_corrupt_group_file_exit2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"generators": [[["1","oops"],["0","1"]]]}')
    code, _, err = run_cli(capsys, "reflections", "--group", f"@{bad}")
    assert code == 2
    assert "error" in err


def test_missing_group_exit2(capsys):
    code, _, err = run_cli(capsys, "reflections", "--group", "nonsense99")
    assert code == 2


def test_cap_exit3(capsys):
    code, _, err = run_cli(capsys, "reflections", "--group", "B4", "--cap", "10")
    assert code == 3


def test_cap_env_override(capsys, monkeypatch):
    monkeypatch.setenv("LEAFATLAS_CAP", "10")
    code, _, _ = run_cli(capsys, "reflections", "--group", "B4")
    assert code == 3
    monkeypatch.delenv("LEAFATLAS_CAP")


def test_group_json_inline(capsys):
    code, out, _ = run_cli(capsys, "reflections", "--group", '{"name": "B2"}')
    assert code == 0
    assert json.loads(out)["reflection_count"] == 4


def test_group_generator_file(tmp_path, capsys):
    spec = {"generators": [[["-1"]]]}
    path = tmp_path / "gen.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run_cli(capsys, "reflections", "--group", f"@{path}")
    assert code == 0
    assert json.loads(out)["order"] == 2


def test_tau_word_spec(capsys):
    code, out, _ = run_cli(capsys, "lehrer-springer", "--group", "B3",
                           "--tau", '{"word": [], "zeta": "2/1"}')
    assert code == 0
    data = json.loads(out)
    assert data["tau_full_adjusted"] is True     # -id sits inside the group
    assert data["induced_order"] == 48


def test_no_make_full_rejects(capsys):
    code, _, err = run_cli(capsys, "lehrer-springer", "--group", "B3",
                           "--tau", '{"word": [], "zeta": "2/1"}', "--no-make-full")
    assert code == 2


def test_config_precedence(tmp_path, capsys):
    conf = tmp_path / "conf.txt"
    conf.write_text("# defaults\ngroup = B2\nformat = json\n")
    code, out, _ = run_cli(capsys, "parabolics", "--config", str(conf))
    assert code == 0
    assert json.loads(out)["group"] == "B2"
    code, out, _ = run_cli(capsys, "parabolics", "--config", str(conf),
                           "--group", "dihedral3")
    assert json.loads(out)["group"] == "dihedral3"


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "parabolics", "--group", "B2",
                           "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["class_count"] == 4


def test_byte_determinism_across_threads(tmp_path):
    outputs = []
    for threads in ("1", "4"):
        for rep in range(2):
            path = tmp_path / f"out-{threads}-{rep}.json"
            code = run(["leaves-zero", "--group", "dihedral4", "--tau", "swap",
                        "--threads", threads, "--output", str(path)])
            assert code == 0
            outputs.append(path.read_bytes())
    assert len(set(outputs)) == 1


def test_verify_flag_appends_invariants(capsys):
    code, out, _ = run_cli(capsys, "leaves-zero", "--group", "dihedral3",
                           "--tau", "swap", "--verify")
    assert code == 0
    data = json.loads(out)
    assert all(r["status"] == "pass" for r in data["invariants"])
