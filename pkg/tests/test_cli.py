import json


from ssmod.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_oracle_tau(capsys):
    code, out = run_cli(capsys, "oracle", "tau", "--upto", "7", "--mod", "11")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == "ssmod/1"
    # tau(2) = -24, tau(3) = 252, tau(5) = 4830 reduced mod 11
    assert data["tau"]["2"] == (-24) % 11 == 9
    assert data["tau"]["3"] == 252 % 11 == 10
    assert data["tau"]["5"] == 4830 % 11 == 1


def test_eigensystems_deterministic(capsys):
    code, out1 = run_cli(capsys, "eigensystems", "--p", "11")
    assert code == 0
    code, out2 = run_cli(capsys, "eigensystems", "--p", "11")
    assert out1 == out2  # byte-identical on identical config
    data = json.loads(out1)
    values = sorted(tuple(s["values"]) for s in data["systems"])
    assert values == [[3, 4, 6, 8], [9, 10, 1, 9]] or \
        values == [(3, 4, 6, 8), (9, 10, 1, 9)]


def test_dieudonne_verify_exit_codes(capsys):
    code, out = run_cli(capsys, "dieudonne", "verify",
                        "--p", "5", "--n", "2", "--g", "1")
    assert code == 0
    data = json.loads(out)
    assert all(c["ok"] for c in data["checks"])


def test_invalid_p_exits_2(capsys):
    code = main(["ssgraph", "--p", "4"])
    assert code == 2
    err = capsys.readouterr().err
    assert "p must be prime" in err


def test_coset_counts(capsys):
    code, out = run_cli(capsys, "coset", "--group", "gsp",
                        "--g", "2", "--ell", "3", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 40
    assert len(data["representatives"]) == 40
    code, out = run_cli(capsys, "coset", "--group", "gl2", "--ell", "5")
    assert json.loads(out)["count"] == 6


def test_ssgraph_json(capsys):
    code, out = run_cli(capsys, "ssgraph", "--p", "11", "--ell", "2,3")
    assert code == 0
    data = json.loads(out)
    assert data["mass"] == "5/12"
    assert len(data["classes"]) == 2
    T2 = data["adjacency"]["2"]
    assert len(T2) == 2


def test_hermitian_diagonalize_subcommand(tmp_path, capsys):
    form = {"p": 11, "gram": [[["2", "0", "0", "0"], ["0", "0", "0", "0"]],
                              [["0", "0", "0", "0"], ["2", "0", "0", "0"]]]}
    path = tmp_path / "form.json"
    path.write_text(json.dumps(form))
    code, out = run_cli(capsys, "hermitian", "diagonalize",
                        "--input", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["verified"] is True
    assert data["algebra"] == ["-1", "-11"]
    assert len(data["transform"]) == 2


def test_csv_output(tmp_path, capsys):
    prefix = str(tmp_path / "mats")
    code, out = run_cli(capsys, "eigensystems", "--p", "11",
                        "--ell", "2", "--format", "csv", "--out", prefix)
    assert code == 0
    text = (tmp_path / "mats_T2.csv").read_text().splitlines()
    assert text[0] == "ell=2,k=0,p=11,N=1"
    assert len(text) == 3  # header + 2 rows


def test_selftest_subset(capsys):
    code, out = run_cli(capsys, "selftest", "--only", "local-degrees")
    assert code == 0
    assert "PASS" in out
