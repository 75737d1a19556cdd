from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import pytest

from _support import fixture, mat, max_abs_diff, random_exact, random_float, random_groups
from pathsum.errors import NilpotentUnsupported, NonConvergence, NotStrictlyProper
from pathsum.functions import (PowerFamily, _self_test_z_calibration, invert_Laplace, invert_Z,
                               laplace_forms, ps_exp, ps_inverse, ps_log, ps_power, ps_resolvent,
                               ps_resolvent_symbolic, ps_walk_exp)
from pathsum.matrixcore import Mat, dense_inverse, evaluate
from pathsum.reference import ref_exp, ref_power_int
from pathsum.scalars import GaussRat, Poly, RatFn, _series_div

POWER_GROUPS = [[0, 1], [2, 3, 4]]
GALOIS_GROUPS = [[0], [2, 4], [1, 3]]
TENSOR_GROUPS = [[0, 1], [2, 3]]
LOG_GROUPS = [[0, 2, 3], [1, 4]]

# printed (e^M)_11 block; exact closed form evaluated to six figures in the text
PRINTED_EXP_BLOCK = [[2.05220 - 3.19611j, 0], [-0.442190 - 0.283927j, 3.99232 - 6.21768j]]
PRINTED_WALK_BLOCK = [[2.05083 - 3.19398j, 0], [-0.441354 - 0.283390j, 3.99232 - 6.21768j]]


@pytest.fixture(scope="module")
def power_family():
    return PowerFamily(fixture("defective_power.txt"), POWER_GROUPS)


def _block_err(A: Mat, printed) -> float:
    return max(abs(complex(A[i, j]) - printed[i][j]) for i in range(2) for j in range(2))


def _sig_digits_match(x: float, printed: float, digits: int = 6) -> bool:
    if printed == 0:
        return abs(x) < 1e-12
    unit = 10.0 ** (math.floor(math.log10(abs(printed))) - digits + 1)
    return abs(x - printed) <= 0.5 * unit * (1 + 1e-9)


def _block_matches(A: Mat, printed) -> bool:
    return all(_sig_digits_match(complex(A[i, j]).real, printed[i][j].real if printed[i][j] else 0)
               and _sig_digits_match(complex(A[i, j]).imag, complex(printed[i][j]).imag)
               for i in range(2) for j in range(2))


# inverse and resolvent --------------------------------------------------------------


def test_inverse_example():
    assert ps_inverse(fixture("galois_matrix.txt"), GALOIS_GROUPS) == fixture("galois_inverse.txt")


def test_inverse_identity():
    I5 = Mat.identity(5)
    assert ps_inverse(I5, [[0, 3], [1], [2, 4]]) == I5


def test_inverse_random_8x8():
    rng = random.Random(88)
    M = random_exact(rng, 8)
    assert ps_inverse(M, random_groups(rng, 8, 3)) == dense_inverse(M)


def test_resolvent_points():
    assert ps_resolvent(Mat.zeros(2, 2), [[0], [1]], GaussRat(1)) == Mat.identity(2)
    R = ps_resolvent(mat([[1, 0], [0, 2]]), [[0], [1]], GaussRat(3))
    assert R == mat([["1/2", 0], [0, 1]])
    M = fixture("tensor_exp.txt")
    s = GaussRat(1, 1)
    assert ps_resolvent(M, TENSOR_GROUPS, s) == dense_inverse(Mat.identity(4).scale(s) - M)


def test_resolvent_float_point():
    rng = random.Random(3)
    M = random_float(rng, 5)
    s = 2.5 - 0.5j
    R = ps_resolvent(M, random_groups(rng, 5, 3), s)
    assert max_abs_diff((Mat.identity(5).scale(s) - M) @ R, Mat.identity(5)) < 1e-10


def test_resolvent_symbolic_example_entries():
    s = RatFn.var()
    R = ps_resolvent_symbolic(fixture("tensor_exp.txt"), TENSOR_GROUPS)
    i = GaussRat(0, 1)
    assert R[0, 0] == (s + i) / (s * s - (1 - 2 * i) * s - (2 + i))
    assert R[1, 0] == -i / (3 * s * s * s - (9 - 9 * i) * s * s - (6 + 18 * i) * s + 15)
    assert R[1, 1] == 1 / (s - (2 - i))
    assert not R[0, 1]


def test_resolvent_symbolic_small_and_random():
    R = ps_resolvent_symbolic(mat([[5]]), [[0]])
    assert R[0, 0] == 1 / (RatFn.var() - 5)
    rng = random.Random(4)
    M = random_exact(rng, 4)
    groups = random_groups(rng, 4, 2)
    s0 = GaussRat(2, 1)
    assert evaluate(ps_resolvent_symbolic(M, groups), s0) == ps_resolvent(M, groups, s0)


# exponential -------------------------------------------------------------------------


def test_exp_zero_time():
    assert ps_exp(fixture("tensor_exp.txt"), TENSOR_GROUPS, 0) == Mat.identity(4)


def test_exp_example_block():
    E = ps_exp(fixture("tensor_exp.txt"), TENSOR_GROUPS, 1)
    assert _block_matches(E, PRINTED_EXP_BLOCK)


def test_exp_random_vs_reference():
    rng = random.Random(57)
    M = random_exact(rng, 5)
    E = ps_exp(M, random_groups(rng, 5, 3), Fraction(7, 10))
    ref = ref_exp(M, 0.7)
    scale = max(abs(x) for x in ref.entries)
    assert max_abs_diff(E, ref) <= 1e-9 * scale


def test_exp_float_input_is_rationalized():
    M = Mat.from_rows([[0.1, 0.25], [-0.5, 0.3]])
    assert max_abs_diff(ps_exp(M, [[0], [1]], 1.5), ref_exp(M, 1.5)) < 1e-11


def test_exp_ode():
    rng = random.Random(6)
    M = random_exact(rng, 4, lo=-2, hi=2)
    forms = laplace_forms(M, [[0, 1], [2, 3]])
    h = 1e-4

    def at(t):
        return Mat.from_rows([[f(t) for f in row] for row in forms])

    deriv = (at(1 + h) - at(1 - h)).scale(1 / (2 * h))
    assert max_abs_diff(deriv, M @ at(1)) < 1e-6


# walk sums ---------------------------------------------------------------------------------


def test_walk_exp_zero_length():
    M = fixture("tensor_exp.txt")
    W = ps_walk_exp(M, TENSOR_GROUPS, 1, 0)
    assert max_abs_diff(W.submatrix([0, 1], [0, 1]), ref_exp(M.submatrix([0, 1], [0, 1]), 1)) < 1e-13
    assert max_abs_diff(W.submatrix([2, 3], [0, 1]), Mat.zeros(2, 2)) == 0


def test_walk_exp_example_truncation():
    # the printed truncation keeps the three displayed terms: walks of 0, 2 and 4 links
    M = fixture("tensor_exp.txt")
    E = ps_exp(M, TENSOR_GROUPS, 1).submatrix([0, 1], [0, 1])
    W = ps_walk_exp(M, TENSOR_GROUPS, 1, 4).submatrix([0, 1], [0, 1])
    assert _block_matches(W, PRINTED_WALK_BLOCK)
    err = max_abs_diff(W, E)
    assert 1e-3 <= err <= 5e-3


def test_walk_exp_monotone_refinement():
    M = fixture("tensor_exp.txt")
    E = ps_exp(M, TENSOR_GROUPS, 1)
    errs = [max_abs_diff(ps_walk_exp(M, TENSOR_GROUPS, 1, L), E) for L in (0, 2, 4)]
    assert errs[0] >= errs[1] >= errs[2]
    assert max_abs_diff(ps_walk_exp(M, TENSOR_GROUPS, 1, 12), E) < 1e-6


# logarithm --------------------------------------------------------------------------------


def test_log_identity():
    L = ps_log(Mat.identity(3), [[0], [1, 2]])
    assert max(abs(x) for x in L.entries) < 1e-14


def test_log_example():
    M = fixture("defective_log.txt")
    expected = fixture("defective_log_part.txt") + Mat.identity(5).scale(cmath.log(6))
    assert max_abs_diff(ps_log(M, LOG_GROUPS), expected) <= 1e-9


def test_log_exp_roundtrip():
    rng = random.Random(13)
    A = random_float(rng, 4, 0.3)
    L = ps_log(ref_exp(A, 1), [[0, 1], [2, 3]])
    assert max_abs_diff(L, A) < 1e-8
    assert max_abs_diff(ps_exp(L, [[0], [1, 2, 3]], 1), ref_exp(A, 1)) < 1e-8


def test_log_parallel_matches_serial():
    M = fixture("defective_log.txt")
    assert ps_log(M, LOG_GROUPS, workers=4) == ps_log(M, LOG_GROUPS)


def test_log_nonconvergence():
    with pytest.raises(NonConvergence):
        ps_log(fixture("defective_log.txt"), LOG_GROUPS, 1, tol=1e-30, max_order=4)


# powers -----------------------------------------------------------------------------------


def test_z_calibration():
    _self_test_z_calibration()
    z = Poly.x()
    form = invert_Z(RatFn(z, Poly([1, 4])))
    assert form(1) == -4


def test_invert_z_monomial():
    form = invert_Z(RatFn.var())
    assert form.terms == () and form.kronecker == ((0, 1),)
    assert form(0) == 1 and form(1) == 0


def test_invert_z_double_pole_series():
    z = Poly.x()
    one = Poly.const(1)
    r = RatFn(z * z, (one - z) * (one - z))
    form = invert_Z(r)
    coeffs = [form(n) for n in range(-1, 10)]
    assert coeffs == [0, 0] + list(range(1, 10))


def test_invert_z_matches_long_division():
    rng = random.Random(17)
    for _ in range(5):
        num = Poly([GaussRat(rng.randint(-3, 3)) for _ in range(rng.randint(1, 5))])
        den = Poly([GaussRat(rng.randint(1, 3))] + [GaussRat(rng.randint(-3, 3), rng.randint(-1, 1))
                                                     for _ in range(3)])
        r = RatFn(num, den)
        form = invert_Z(r)
        series = _series_div(list(r.num.coeffs), list(r.den.coeffs), 11)
        for n in range(10):
            assert abs(complex(form(n)) - complex(series[n + 1])) < 1e-9 * (1 + abs(complex(series[n + 1])))
            assert form.series_coefficient(n) == series[n + 1]


def test_power_drazin_and_flat(power_family):
    assert power_family(-1) == fixture("defective_drazin.txt")
    assert power_family(0) == fixture("defective_flat.txt")


def test_drazin_axioms(power_family):
    M = fixture("defective_power.txt")
    D, F = power_family(-1), power_family(0)
    assert M @ D @ M == M
    assert D @ M @ D == D
    assert D @ M == M @ D == F
    for k in (1, 2, 3):
        Mk = power_family(k)
        assert F @ Mk == Mk == Mk @ F
        assert D @ Mk == power_family(k - 1)


def test_square_root(power_family):
    M = fixture("defective_power.txt")
    R = power_family(Fraction(1, 2))
    assert max_abs_diff(R @ R, M) < 1e-12
    # principal branch of (-4)^(1/2) is 2i, opposite to the printed root
    printed = mat([[32, 0, 4, 0, 4], [0, 16, -47, 16, -31], [-32, -16, -9, 16, -25],
                   [0, 0, 4, 32, 4], [32, 16, 41, -16, 57]]).scale(GaussRat(0, Fraction(-1, 16)))
    assert max_abs_diff(R, -printed) < 1e-12


def _power_closed_form(q) -> Mat:
    # (M^q) = (-4)^q / 8 * C(q) with the principal branch of (-4)^q
    p = q * (q - 2)
    C = [[8, 0, 2 * q, 0, 2 * q],
         [8 * q - 4, 4, p - 11, 4, p - 7],
         [-8 * q - 4, -4, -p - 3, 4, -p - 7],
         [0, 0, 2 * q, 8, 2 * q],
         [8 * q + 4, 4, p + 11, -4, p + 15]]
    f = cmath.exp(q * cmath.log(-4)) / 8
    return Mat.from_rows([[f * c for c in row] for row in C])


@pytest.mark.parametrize("q", [0.3 + 0.7j, -1.5, 2.25 - 0.5j, 1j, -1j])
def test_power_general_q(power_family, q):
    assert max_abs_diff(power_family(q), _power_closed_form(q)) < 1e-10


def test_semigroup(power_family):
    rng = random.Random(41)
    for _ in range(5):
        q = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1, 1))
        qq = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1, 1))
        lhs = power_family(q) @ power_family(qq)
        assert max_abs_diff(lhs, power_family(q + qq)) <= 1e-8


def test_integer_power_consistency():
    rng = random.Random(23)
    for _ in range(2):
        M = random_exact(rng, 4)
        fam = PowerFamily(M, random_groups(rng, 4, 2))
        for k in range(1, 5):
            assert fam(k) == ref_power_int(M, k)


def test_negative_integer_power_is_inverse():
    M = fixture("galois_matrix.txt")
    assert max_abs_diff(ps_power(M, GALOIS_GROUPS, -1), fixture("galois_inverse.txt")) < 1e-10


def test_nilpotent_rejected():
    with pytest.raises(NilpotentUnsupported):
        ps_power(mat([[0, 1], [0, 0]]), [[0], [1]], Fraction(1, 2))


def test_invert_laplace():
    s = RatFn.var()
    f = invert_Laplace(1 / (s - 2))
    assert abs(f(0.7) - cmath.exp(1.4)) < 1e-13
    i = GaussRat(0, 1)
    f = invert_Laplace(1 / (s - (2 - i)))
    assert abs(f(1.0) - cmath.exp(2 - 1j)) < 1e-13
    f = invert_Laplace(1 / (s * s))
    h = 1e-5
    for t in (0.5, 1.0, 2.0):
        assert abs(f(t) - t) < 1e-13
        assert abs((f(t + h) - f(t - h)) / (2 * h) - 1) < 1e-8
    with pytest.raises(NotStrictlyProper):
        invert_Laplace(s / (s - 1))


def test_partition_independence_of_functions():
    rng = random.Random(99)
    M = random_exact(rng, 4, lo=-2, hi=2).scale(Fraction(1, 3)) + Mat.identity(4).scale(3)
    partitions = [[[0, 1, 2, 3]], [[0, 2], [1, 3]], [[0], [1], [2, 3]]]
    exps = [ps_exp(M, g, 1) for g in partitions]
    logs = [ps_log(M, g) for g in partitions]
    pows = [ps_power(M, g, 0.5 + 0.25j) for g in partitions]
    for family in (exps, logs, pows):
        for other in family[1:]:
            assert max_abs_diff(family[0], other) <= 1e-9
