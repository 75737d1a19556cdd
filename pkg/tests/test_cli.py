from __future__ import annotations

import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import fixture, fixture_path, mat, random_exact, random_float
from pathsum.cli import JobSpec, execute, main, parse_matrix, parse_matrix_text, parse_partition, run, serialize_matrix
from pathsum.errors import BadDims, BadGroups, ParseError, UsageError
from pathsum.matrixcore import Mat
from pathsum.scalars import GaussRat


def test_parse_identity():
    M = parse_matrix_text("matrix 2 2 exact\n1 0\n0 1\n")
    assert M == Mat.identity(2)


def test_parse_fixture_is_exact():
    M = parse_matrix(fixture_path("defective_power.txt"))
    assert M[1, 2] == GaussRat(6) and isinstance(M[1, 2], GaussRat)
    L = parse_matrix(fixture_path("defective_log.txt"))
    assert all(isinstance(x, GaussRat) for x in L.entries)


def test_parse_complex_and_comments():
    M = parse_matrix_text("# a comment\nmatrix 1 3 exact\n1/2+3i -2/3i 0.25  # trailing\n")
    assert M == mat([["1/2+3i", "-2/3i", "1/4"]])
    F = parse_matrix_text("matrix 1 2 float\n0.5 1-2i\n")
    assert F[0, 0] == 0.5 and F[0, 1] == 1 - 2j


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        parse_matrix_text("matrix 2 2 exact\n1 0\n0   1/\n")
    assert (info.value.line, info.value.column) == (3, 5)
    assert "line 3, column 5" in str(info.value)


@pytest.mark.parametrize("text", ["", "matrix 2 2\n1 0\n0 1\n", "matrix 2 2 exact\n1 0\n",
                                  "matrix 2 2 exact\n1 0 0\n0 1\n", "matrix 1 1 exact\n1\n2\n",
                                  "matrix 1 1 weird\n1\n"])
def test_parse_malformed(text):
    with pytest.raises(ParseError):
        parse_matrix_text(text)


def test_parse_partition_forms():
    assert parse_partition("{1,3,4},{2}", 4) == [[0, 2, 3], [1]]
    assert parse_partition("singletons", 3) == [[0], [1], [2]]
    assert parse_partition("trivial", 3) == [[0, 1, 2]]
    assert parse_partition("tensor:2x2:2", 4) == [[0, 1], [2, 3]]
    assert parse_partition(" { 1 , 2 } , { 3 } ", 3) == [[0, 1], [2]]


def test_parse_partition_file(tmp_path):
    p = tmp_path / "groups.txt"
    p.write_text("{1},{3,5},{2,4}\n")
    assert parse_partition(str(p), 5) == [[0], [2, 4], [1, 3]]


@pytest.mark.parametrize("spec", ["{1,2", "{0,1}", "tensor:2x:1", "{a}"])
def test_parse_partition_errors(spec):
    with pytest.raises(BadGroups):
        parse_partition(spec, 2)
    with pytest.raises(BadDims):
        parse_partition("tensor:2x3:1", 4)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5), st.integers(1, 5))
def test_round_trip_exact(seed, r, c):
    M = random_exact(random.Random(seed), r, c, lo=-50, hi=50)
    M = M.map(lambda x: x / random.Random(seed).randint(1, 97))
    assert parse_matrix_text(serialize_matrix(M)) == M


def test_round_trip_float():
    M = random_float(random.Random(8), 3)
    assert parse_matrix_text(serialize_matrix(M)) == M


def test_inverse_job_matches_fixture(tmp_path):
    out = tmp_path / "inv.txt"
    code = main(["inverse", "--matrix", fixture_path("galois_matrix.txt"),
                 "--partition", "{1},{3,5},{2,4}", "--out", str(out)])
    assert code == 0
    assert out.read_bytes() == open(fixture_path("galois_inverse.txt"), "rb").read()


def test_determinism(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"exp{k}.txt"
        assert main(["exp", "--matrix", fixture_path("tensor_exp.txt"), "--partition", "tensor:2x2:2",
                     "--t", "1/2", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_power_and_log_jobs(tmp_path):
    out = tmp_path / "d.txt"
    assert main(["power", "--matrix", fixture_path("defective_power.txt"), "--partition", "{1,2},{3,4,5}",
                 "--q", "-1", "--out", str(out)]) == 0
    D = parse_matrix(str(out))
    assert max(abs(complex(a) - complex(b)) for a, b in
               zip(D.entries, fixture("defective_drazin.txt").entries)) < 1e-10
    assert main(["log", "--matrix", fixture_path("defective_log.txt"), "--partition", "{1,3,4},{2,5}",
                 "--quad", "16", "--out", str(out)]) == 0
    assert parse_matrix(str(out)).rows == 5


def test_resolvent_job_exact(capsys):
    assert main(["resolvent", "--matrix", fixture_path("walk_graph.txt"), "--partition", "singletons",
                 "--s", "2+i"]) == 0
    R = parse_matrix_text(capsys.readouterr().out)
    M = fixture("walk_graph.txt")
    s = GaussRat(2, 1)
    assert (Mat.identity(4).scale(s) - M) @ R == Mat.identity(4)


def test_cost_job(capsys):
    job = JobSpec("cost", fixture_path("five_vertex_tree.txt"), "singletons", alpha=3)
    assert run(job) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "inv=5 mul=8 add=4"
    assert lines[1] == "flops=17 d=1"
    assert lines[2] == "measured inv=5 mul=8 add=4"


def test_graph_job(capsys):
    assert main(["graph", "--matrix", fixture_path("walk_graph.txt"), "--partition", "{1,2},{3},{4}"]) == 0
    text = capsys.readouterr().out
    edges = [line for line in text.splitlines() if "->" in line]
    assert len(edges) == 6
    assert "1 -> 1 [loop]" in edges and "2 -> 2 [loop]" in edges


def test_usage_errors(capsys):
    assert main(["exp", "--matrix", fixture_path("tensor_exp.txt")]) == 1
    assert main(["inverse", "--matrix", "/nonexistent/file"]) == 1
    assert main(["frobnicate", "--matrix", "x"]) == 1
    assert main(["inverse", "--matrix", fixture_path("tensor_exp.txt"), "--partition", "{1,2}"]) == 1
    err = capsys.readouterr().err
    assert "--t is required" in err
    with pytest.raises(UsageError):
        execute(JobSpec("cost", fixture_path("five_vertex_tree.txt"), "singletons"))


def test_numerical_failure_exit_code(tmp_path):
    p = tmp_path / "sing.txt"
    p.write_text(serialize_matrix(mat([[1, 2], [2, 4]])))
    stderr = io.StringIO()
    assert run(JobSpec("inverse", str(p), "singletons"), stderr=stderr) == 2
    assert "numerical failure" in stderr.getvalue()
