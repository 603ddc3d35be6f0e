"""End-to-end command line behavior and exit codes."""

from math import comb

import pytest

from cliqueperc.cli import main
from cliqueperc.experiments import TOOL_VERSION


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_theory_subcommand(capsys):
    code, out, err = run(
        ["theory", "--variant", "shared", "--n", "3000", "--k", "3",
         "--ell", "2", "--mu", "2"],
        capsys,
    )
    assert code == 0
    assert "critical_p" in out and "sigma" in out
    assert "mu           2.0" in out


def test_simulate_writes_csv_to_stdout(capsys):
    argv = ["simulate", "--n", "200", "--k", "3", "--ell", "2",
            "--p", "0.05", "--trials", "2", "--seed", "9"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("variant,k,ell,n,p,mu")
    assert len(lines) == 3
    # byte-identical rerun
    code2, out2, _ = run(argv, capsys)
    assert out2 == out


def test_simulate_requires_seed(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--n", "100", "--k", "3", "--ell", "2", "--p", "0.1"])
    assert exc.value.code == 2


def test_simulate_output_file(tmp_path, capsys):
    out_path = tmp_path / "rows.csv"
    code, out, _ = run(
        ["simulate", "--n", "150", "--k", "3", "--ell", "2", "--mu", "1.0",
         "--seed", "4", "--output", str(out_path)],
        capsys,
    )
    assert code == 0 and out == ""
    assert out_path.read_text().startswith("variant,")


def test_simulate_json_format(capsys):
    code, out, _ = run(
        ["simulate", "--n", "100", "--k", "3", "--ell", "2", "--p", "0.03",
         "--seed", "1", "--format", "json"],
        capsys,
    )
    assert code == 0
    assert '"tool_version"' in out and '"rng_algorithm"' in out


def test_invalid_parameters_exit_2(capsys):
    code, _, err = run(
        ["simulate", "--n", "100", "--k", "3", "--ell", "5", "--p", "0.1",
         "--seed", "1"],
        capsys,
    )
    assert code == 2 and "error" in err


def test_resource_guard_exit_3(capsys):
    code, _, err = run(
        ["simulate", "--n", "1000000", "--k", "3", "--ell", "2", "--p", "0.5",
         "--seed", "1"],
        capsys,
    )
    assert code == 3 and "error" in err


def test_sweep_with_threshold_estimate(capsys):
    code, out, err = run(
        ["sweep", "--n", "300", "--k", "3", "--ell", "2", "--seed", "5",
         "--trials", "2", "--mu", "1", "--mu-grid", "0.5,3.0",
         "--estimate-threshold", "0.5"],
        capsys,
    )
    assert code == 0
    assert "estimated threshold p" in err
    # csv on stdout unpolluted: 1 header + 2 points x 2 trials
    assert len(out.splitlines()) == 5


def test_sweep_no_crossing_exit_2(capsys):
    code, _, err = run(
        ["sweep", "--n", "200", "--k", "3", "--ell", "2", "--seed", "5",
         "--trials", "1", "--mu", "1", "--mu-grid", "0.1,0.2",
         "--estimate-threshold", "0.99"],
        capsys,
    )
    assert code == 2 and "error" in err


def test_sweep_bad_grid_exit_2(capsys):
    code, _, err = run(
        ["sweep", "--n", "200", "--k", "3", "--ell", "2", "--seed", "5",
         "--mu", "1", "--mu-grid", "a,b"],
        capsys,
    )
    assert code == 2


def test_communities_complete_graph(tmp_path, capsys):
    n, k = 6, 3
    lines = [f"v{u} v{v}" for u in range(n) for v in range(u + 1, n)]
    path = tmp_path / "complete.txt"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(
        ["communities", "--input", str(path), "--k", str(k)], capsys
    )
    assert code == 0
    rows = out.splitlines()
    assert len(rows) == 1
    assert len(rows[0].split()) == comb(n, k)
    assert rows[0].split()[0] == "v0,v1,v2"


def test_communities_two_groups(tmp_path, capsys):
    text = "a b\nb c\na c\nx y\ny z\nx z\n"
    path = tmp_path / "two.txt"
    path.write_text(text)
    code, out, _ = run(["communities", "--input", str(path)], capsys)
    assert code == 0
    assert out.splitlines() == ["a,b,c", "x,y,z"]


def test_communities_parse_error_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("a b\noops\n")
    code, _, err = run(["communities", "--input", str(path)], capsys)
    assert code == 2 and "line 2" in err


def test_communities_missing_file_exit_2(tmp_path, capsys):
    code, _, err = run(
        ["communities", "--input", str(tmp_path / "nope.txt")], capsys
    )
    assert code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert TOOL_VERSION in capsys.readouterr().out
