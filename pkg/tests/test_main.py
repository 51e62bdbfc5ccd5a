import orjson
import pytest

from analysis.degree import theoretical_degree_pmf
from graph.main import EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def cycle4_file(tmp_path):
    path = tmp_path / "cycle4.txt"
    path.write_text("0 1\n1 2\n2 3\n0 3\n")
    return path


def test_generate_se_a(capsys, tmp_path):
    out = tmp_path / "g.txt"
    code, stdout, _ = run(capsys, "generate", "--n", "1000", "--seed", "1", "--out", str(out))
    assert code == EXIT_OK
    assert "n=1000 edges=1997" in stdout
    assert len(out.read_text().splitlines()) == 1997


def test_generate_is_reproducible(capsys, tmp_path):
    paths = [tmp_path / "a.txt", tmp_path / "b.txt"]
    for path in paths:
        code, _, _ = run(capsys, "generate", "--algorithm", "se-c", "--n", "500", "--m", "4", "--z", "4",
                         "--seed", "123", "--out", str(path))
        assert code == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_generate_dumps_tableau(capsys, tmp_path):
    out, dump = tmp_path / "g.txt", tmp_path / "t.txt"
    code, _, _ = run(capsys, "generate", "--algorithm", "se-b", "--n", "50", "--m", "3", "--z", "3",
                     "--seed", "5", "--out", str(out), "--dump-tableau", str(dump))
    assert code == EXIT_OK
    rows = [list(map(int, line.split())) for line in dump.read_text().splitlines()]
    assert all(len(row) == 3 and row == sorted(row) for row in rows)


def test_generate_infeasible_initial_graph(capsys, tmp_path):
    code, _, stderr = run(capsys, "generate", "--algorithm", "se-c", "--n", "50", "--m", "4", "--z", "4",
                          "--initial", "complete:6", "--seed", "1", "--out", str(tmp_path / "g.txt"))
    assert code == EXIT_INFEASIBLE
    assert "divisibility" in stderr


def test_generate_bad_config(capsys, tmp_path):
    code, _, stderr = run(capsys, "generate", "--algorithm", "se-a", "--n", "50", "--m", "3",
                          "--seed", "1", "--out", str(tmp_path / "g.txt"))
    assert code == EXIT_USAGE
    assert "invalid configuration" in stderr


def test_generate_bad_initial_spec(capsys, tmp_path):
    code, _, _ = run(capsys, "generate", "--n", "50", "--initial", "wheel:5", "--out", str(tmp_path / "g.txt"))
    assert code == EXIT_USAGE


def test_missing_seed_is_printed(capsys, tmp_path):
    code, _, stderr = run(capsys, "generate", "--n", "20", "--out", str(tmp_path / "g.txt"))
    assert code == EXIT_OK
    assert stderr.startswith("seed: ")
    assert int(stderr.split()[1]) < 2**64


def test_analyze_triangle(capsys, tmp_path):
    path = tmp_path / "k3.txt"
    path.write_text("0 1\n1 2\n0 2\n")
    hist = tmp_path / "hist.csv"
    code, stdout, _ = run(capsys, "analyze", "--in", str(path), "--clustering", "--degree-hist", str(hist))
    assert code == EXIT_OK
    summary = orjson.loads(stdout)
    assert summary["vertices"] == 3
    assert summary["edges"] == 3
    assert summary["clustering"]["mean"] == 1.0
    assert summary["clustering"]["triangles"] == 1
    assert "fit" not in summary
    assert hist.read_text().splitlines()[1] == "2,3,1.0,"


def test_analyze_fit(capsys, tmp_path):
    graph, hist = tmp_path / "g.txt", tmp_path / "hist.csv"
    run(capsys, "generate", "--n", "5000", "--seed", "2", "--out", str(graph))
    code, stdout, _ = run(capsys, "analyze", "--in", str(graph), "--m", "2", "--degree-hist", str(hist))
    assert code == EXIT_OK
    fit = orjson.loads(stdout)["fit"]
    assert fit["m"] == 2
    first = hist.read_text().splitlines()[1].split(",")
    assert first[0] == "2"
    assert float(first[3]) == theoretical_degree_pmf(2, 2)


def test_analyze_fit_needs_enough_vertices(capsys, tmp_path):
    path = tmp_path / "k3.txt"
    path.write_text("0 1\n1 2\n0 2\n")
    code, _, _ = run(capsys, "analyze", "--in", str(path), "--m", "2")
    assert code == EXIT_USAGE


def test_analyze_rejects_bad_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0 1\n1 1\n")
    code, _, stderr = run(capsys, "analyze", "--in", str(path))
    assert code == EXIT_USAGE
    assert "self-loop" in stderr


def test_analyze_reports_non_ascii_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_bytes(b"0 1\n1 \xc3\xa92\n")
    code, _, stderr = run(capsys, "analyze", "--in", str(path))
    assert code == EXIT_USAGE
    assert stderr.startswith("error: line 2: non-ASCII")


def test_verify_inclusion(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, _, _ = run(capsys, "verify", "--mode", "inclusion", "--algorithm", "se-b", "--n", "4", "--m", "2",
                     "--z", "3", "--initial", "complete:4", "--seed", "3", "--trials", "20000",
                     "--workers", "2", "--alpha", "0.0001", "--out", str(out))
    assert code == EXIT_OK
    report = orjson.loads(out.read_bytes())
    assert report["summary"]["pass"] is True
    assert [v["target"] for v in report["vertices"]] == [0.5] * 4


def test_verify_joint_non_edge(capsys, cycle4_file):
    code, stdout, _ = run(capsys, "verify", "--mode", "joint", "--n", "4", "--z", "1",
                          "--initial", f"file:{cycle4_file}", "--seed", "1", "--trials", "5000",
                          "--set", "0,2", "--workers", "1")
    assert code == EXIT_OK
    report = orjson.loads(stdout)
    assert report["hits"] == 0
    assert report["exact"] == 0.0


def test_verify_joint_needs_a_valid_set(capsys, cycle4_file):
    base = ["verify", "--mode", "joint", "--n", "4", "--initial", f"file:{cycle4_file}", "--seed", "1",
            "--trials", "10", "--workers", "1"]
    assert run(capsys, *base)[0] == EXIT_USAGE
    assert run(capsys, *base, "--set", "0,x")[0] == EXIT_USAGE
    assert run(capsys, *base, "--set", "0,9")[0] == EXIT_USAGE


def test_verify_invariants(capsys):
    code, stdout, _ = run(capsys, "verify", "--mode", "invariants", "--algorithm", "se-b-star", "--n", "100",
                          "--m", "3", "--z", "3", "--seed", "8")
    assert code == EXIT_OK
    report = orjson.loads(stdout)
    assert report["passed"] is True
    assert report["invariant3_scanned"] is True


def test_selftest_command(capsys, tmp_path):
    out = tmp_path / "selftest.json"
    code, _, _ = run(capsys, "selftest", "--seed", "1", "--out", str(out))
    assert code == EXIT_OK
    report = orjson.loads(out.read_bytes())
    assert report["passed"] is True
    assert {c["name"] for c in report["checks"]} == {
        "rss-marginals",
        "rsp-validity",
        "invariant-harness",
        "se-a-clustering",
        "infeasibility",
    }
