import json

import pytest

from degseq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_k4(capsys):
    code, out, _ = run(capsys, "gen", "--degrees", "3,3,3,3", "--seed", "7", "--samples", "1", "--format", "edgelist")
    assert code == 0
    assert out.splitlines() == ["0 1", "0 2", "0 3", "1 2", "1 3", "2 3"]


def test_gen_bipartite_files(capsys, tmp_path):
    (tmp_path / "s.txt").write_text("2 2\n")
    (tmp_path / "t.txt").write_text("2\n2\n")
    code, out, _ = run(capsys, "gen", "--bipartite", str(tmp_path / "s.txt"), str(tmp_path / "t.txt"))
    assert code == 0
    assert out.splitlines() == ["0 2", "0 3", "1 2", "1 3"]


def test_verify_report(capsys):
    code, out, _ = run(capsys, "verify", "--degrees", "2,2,2,2", "--samples", "30000", "--alpha", "0.001", "--seed", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["df"] == 2 and rep["pass"] is True and sum(rep["observed"]) == 30000


def test_multiple_samples_formats(capsys):
    _, out, _ = run(capsys, "gen", "--regular", "2", "--n", "5", "--samples", "3", "--seed", "4")
    blocks = out.split("\n\n")
    assert len(blocks) == 3
    for b in blocks:
        lines = b.strip().splitlines()
        assert len(lines) == 5
        assert lines == sorted(lines, key=lambda s: tuple(map(int, s.split())))
    _, out, _ = run(capsys, "gen", "--regular", "2", "--n", "5", "--samples", "3", "--seed", "4", "--format", "jsonl")
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["seed_index"] for r in recs] == [0, 1, 2]
    edgelists = ["".join(f"{u} {v}\n" for u, v in r["edges"]) for r in recs]
    assert edgelists == [b if b.endswith("\n") else b + "\n" for b in blocks]


def test_output_is_byte_reproducible(tmp_path, capsys):
    paths = [tmp_path / "a.txt", tmp_path / "b.txt"]
    for p in paths:
        assert main(["gen", "--regular", "4", "--n", "3000", "--samples", "3", "--seed", "99", "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_worker_count_does_not_change_output(capsys):
    argv = ["gen", "--regular", "3", "--n", "200", "--samples", "6", "--seed", "5", "--format", "jsonl"]
    _, one, _ = run(capsys, *argv, "--workers", "1")
    _, four, _ = run(capsys, *argv, "--workers", "4")
    assert one == four


def test_env_seed(monkeypatch, capsys):
    argv = ["gen", "--regular", "3", "--n", "100"]
    monkeypatch.setenv("DEGSEQ_SEED", "17")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--seed", "17")
    _, c, _ = run(capsys, *argv, "--seed", "18")
    assert a == b != c


def test_bench_records(capsys):
    code, out, _ = run(capsys, "bench", "--regular", "4", "--n", "500", "--samples", "3")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["run"] for r in recs] == [0, 1, 2]
    assert {"wall_time", "restarts_initial", "switching_steps_d", "n"} <= set(recs[0])


@pytest.mark.parametrize(
    "argv,code",
    [
        (["gen", "--degrees-file", "/nonexistent/degrees.txt"], 2),
        (["gen", "--degrees", "1,x,2"], 2),
        (["gen", "--degrees", "2,-1,1"], 2),
        (["gen", "--degrees", "3,1"], 3),
        (["gen", "--degrees", "1,1,1"], 3),
        (["gen", "--degrees", "2,2", "--regular", "2", "--n", "3"], 2),
        (["gen", "--regular", "2"], 2),
        (["verify", "--degrees", "2,2,2,2", "--samples", "6"], 2),
        (["verify", "--degrees", "1", "--samples", "6"], 3),
        (["gen", "--degrees", "2,2,2,2", "--max-restarts", "0", "--seed", "3"], 4),
    ],
)
def test_exit_codes(argv, code, capsys):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("degseq:")
