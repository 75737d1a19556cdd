from __future__ import annotations

import ast
import cmath
import math
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pathsum.reference as reference
from _support import fixture, mat, max_abs_diff, random_exact, random_float
from pathsum.errors import Singular
from pathsum.functions import PowerFamily, ps_log
from pathsum.matrixcore import Mat, mat_mul
from pathsum.reference import check_identity_suite, ref_exp, ref_power_int


def test_exp_zero_and_diagonal():
    assert max_abs_diff(ref_exp(Mat.zeros(3, 3)), Mat.identity(3)) == 0
    E = ref_exp(mat([[2, 0], [0, "-1/2"]]), 1.5)
    assert abs(E[0, 0] - cmath.exp(3)) < 1e-12 * abs(cmath.exp(3))
    assert abs(E[1, 1] - cmath.exp(-0.75)) < 1e-12
    assert E[0, 1] == 0 and E[1, 0] == 0


def test_exp_nilpotent():
    E = ref_exp(mat([[0, 1], [0, 0]]), 2.5)
    assert max_abs_diff(E, Mat.from_rows([[1, 2.5], [0, 1]])) < 1e-15


def test_exp_large_norm_is_scaled():
    # rotation generator: exp(t J) is a rotation by t radians
    E = ref_exp(mat([[0, -1], [1, 0]]), 20.0)
    expected = Mat.from_rows([[math.cos(20), -math.sin(20)], [math.sin(20), math.cos(20)]])
    assert max_abs_diff(E, expected) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_exp_additivity(seed, a, b):
    M = random_float(random.Random(seed), 4, 0.5)
    lhs = ref_exp(M, a) @ ref_exp(M, b)
    assert max_abs_diff(lhs, ref_exp(M, a + b)) <= 1e-10


def test_power_int():
    rng = random.Random(2)
    M = random_exact(rng, 4)
    assert ref_power_int(M, 0) == Mat.identity(4)
    assert ref_power_int(M, 1) == M
    naive = M
    for _ in range(4):
        naive = mat_mul(naive, M)
    assert ref_power_int(M, 5) == naive
    assert ref_power_int(M, -2) @ ref_power_int(M, 2) == Mat.identity(4)
    with pytest.raises(Singular):
        ref_power_int(mat([[1, 1], [1, 1]]), -1)


def test_identity_suite_drazin_exact():
    M = fixture("defective_power.txt")
    report = check_identity_suite(M, drazin=fixture("defective_drazin.txt"), flat=fixture("defective_flat.txt"))
    assert report and all(v == 0 for v in report.values())


def test_identity_suite_sqrt_and_log():
    fam = PowerFamily(fixture("defective_power.txt"), [[0, 1], [2, 3, 4]])
    report = check_identity_suite(fixture("defective_power.txt"), sqrt=fam(0.5))
    assert report["sqrt^2=M"] <= 1e-9
    L = fixture("defective_log.txt")
    report = check_identity_suite(L, log=ps_log(L, [[0, 2, 3], [1, 4]]))
    assert report["exp(log)=M"] <= 1e-8


def test_identity_suite_reports_failures():
    report = check_identity_suite(mat([[2, 0], [0, 3]]), inverse=mat([[1, 0], [0, 1]]))
    assert report["M.inv=I"] == 2


def test_oracle_independence():
    # the oracle must not import the graph, walk, dressing or function modules
    tree = ast.parse(Path(reference.__file__).read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
        elif isinstance(node, ast.Import):
            imported.update(a.name for a in node.names)
    forbidden = {"partition", "walks", "dressing", "functions", "structured"}
    assert not any(name.split(".")[-1] in forbidden for name in imported)
