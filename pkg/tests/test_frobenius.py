"""Frobenius bases: exact series construction, normalization, evaluation.

The strong oracle here is the operator itself: apply_operator checks the
recurrence exactly in rationals, and the numeric evaluations are plugged
into the d/dt form of the operator to confirm they satisfy the ODE."""

import mpmath as mp
import pytest
from gmpy2 import mpq

from fuchsmon.errors import GeometryError, PrecisionError
from fuchsmon.frobenius import (CONIFOLD_NORMALIZED, MUM_NORMALIZED,
                                apply_operator, default_order, evaluate_basis,
                                frame_matrix, frobenius_basis, normalize_mum,
                                normalize_conifold, to_mpc, _mpq_to_mpf)
from fuchsmon.operators import parse_operator

OP217 = parse_operator("T^4 - 2^4*t*(2*T+1)^2*(8*T^2+8*T+3) "
                       "+ 2^12*t^2*(2*T+1)^2*(2*T+3)^2")
OP_N1 = parse_operator("T^4 - 2^4*t*(2*T+1)^4")

ORDER = 40


@pytest.fixture(scope="module")
def raw0():
    return frobenius_basis(OP217, 0, ORDER)


@pytest.fixture(scope="module")
def raws():
    return frobenius_basis(OP217, mpq(1, 256), ORDER)


# -- construction ---------------------------------------------------------------

def test_raw_basis_has_four_solutions(raw0):
    assert len(raw0.solutions) == 4
    assert raw0.truncation == ORDER


def test_mum_pivots(raw0):
    assert sorted(s.pivot for s in raw0.solutions) == \
        [(mpq(0), 0), (mpq(0), 1), (mpq(0), 2), (mpq(0), 3)]


def test_conifold_pivots(raws):
    assert sorted(s.pivot for s in raws.solutions) == \
        [(mpq(0), 0), (mpq(1, 2), 0), (mpq(1, 2), 1), (mpq(1), 0)]


def test_recurrence_residual_vanishes_exactly(raw0, raws):
    # the defining property of a Frobenius solution, checked in rationals
    for basis in (raw0, raws):
        for sol in basis.solutions:
            assert apply_operator(basis.local_op, sol) == {}


def test_irregular_point_rejected():
    op = parse_operator("t^2*T^4 + T")
    with pytest.raises(GeometryError):
        frobenius_basis(op, 0, 10)


# -- normalization ----------------------------------------------------------------

def test_normalize_mum_structure(raw0):
    fm = normalize_mum(raw0)
    assert fm.kind == MUM_NORMALIZED
    y1 = fm.solutions[0]
    assert y1.coeffs[0] == [mpq(1), mpq(0), mpq(0), mpq(0)]
    for j, sol in enumerate(fm.solutions):
        assert sol.pivot == (mpq(0), j)
        assert sol.prefactor == (mpq(1), j, mpq(0))


def test_normalize_mum_rejects_conifold(raws):
    with pytest.raises(GeometryError):
        normalize_mum(raws)


def test_normalize_conifold_structure(raws):
    fc = normalize_conifold(raws)
    assert fc.kind == CONIFOLD_NORMALIZED
    assert (fc.n, fc.k) == (2, 1)
    y1, y2, y3, y4 = fc.solutions
    assert (y1.exponent, y2.exponent, y3.exponent, y4.exponent) == \
        (0, mpq(1, 2), mpq(1, 2), 1)
    # y3 carries the 1/(2 pi i zeta) prefactor, zeta = exp(2 pi i k/n)
    assert y3.prefactor == (mpq(1), 1, mpq(1, 2))
    for sol in (y1, y2, y4):
        assert all(row[b] == 0 for row in sol.coeffs for b in (1, 2, 3))


def test_normalize_conifold_type_check(raws):
    with pytest.raises(GeometryError):
        normalize_conifold(raws, n=4)


def test_normalize_conifold_integer_ladder():
    # n = 1: exponents (0, 1, 1, 2) share one ladder and the echelon y1
    # carries removable log terms; normalization must clear them exactly
    raw = frobenius_basis(OP_N1, mpq(1, 256), ORDER)
    fc = normalize_conifold(raw)
    assert (fc.n, fc.k) == (1, 1)
    y1 = fc.solutions[0]
    assert y1.coeffs[0][0] == 1
    assert all(row[b] == 0 for row in y1.coeffs for b in (1, 2, 3))
    # the cleaned solution still satisfies the recurrence exactly
    assert apply_operator(fc.local_op, y1) == {}


# -- evaluation --------------------------------------------------------------------

def ode_residual(op, basis, t, dps):
    """max_i |sum_j b_j(t) y_i^(j)(t)| for the exact d/dt form b of op."""
    b = op.canonical().d_form()
    with mp.workdps(dps + 10):
        vals, err = evaluate_basis(basis, t, dps, derivatives_up_to=4)
        z = to_mpc(t)
        bv = [mp.fsum(_mpq_to_mpf(c) * z ** k for k, c in enumerate(p))
              for p in b]
        worst = mp.mpf(0)
        scale = mp.mpf(1)
        for i in range(4):
            acc = mp.fsum(bv[j] * vals[i, j] for j in range(5))
            worst = max(worst, abs(acc))
            scale = max(scale, abs(vals[i, 4]))
        return worst / scale


def test_mum_solutions_satisfy_ode(raw0):
    fm = normalize_mum(raw0)
    res = ode_residual(OP217, fm, mpq(1, 4096) * 3, 30)
    assert res < mp.mpf(10) ** (-25)


def test_conifold_solutions_satisfy_ode(raws):
    fc = normalize_conifold(raws)
    res = ode_residual(OP217, fc, mpq(1, 256) - mpq(1, 4096), 30)
    assert res < mp.mpf(10) ** (-25)


def test_holomorphic_value_matches_exact_partial_sum(raw0):
    # y1 at t: independent exact-rational summation of the same series
    fm = normalize_mum(raw0)
    y1 = fm.solutions[0]
    t = mpq(1, 1000)
    exact = sum(row[0] * t ** k for k, row in enumerate(y1.coeffs))
    with mp.workdps(40):
        vals, _ = evaluate_basis(fm, t, 30)
        got = vals[0, 0]
        want = mp.mpf(exact.numerator) / mp.mpf(exact.denominator)
        # difference is the series tail beyond order 40
        assert abs(got - want) < mp.mpf(10) ** (-25)


def test_evaluate_refuses_outside_radius(raw0):
    with pytest.raises(PrecisionError):
        evaluate_basis(raw0, mpq(1, 300), 30, radius=mp.mpf(1) / 256)


def test_frame_matrix_is_transposed_evaluation(raw0):
    fm = normalize_mum(raw0)
    with mp.workdps(40):
        vals, _ = evaluate_basis(fm, mpq(1, 2048), 30)
        F, _ = frame_matrix(fm, mpq(1, 2048), 30)
        assert max(abs(F[i, j] - vals[j, i])
                   for i in range(4) for j in range(4)) == 0


def test_default_order_grows_with_precision():
    assert default_order(60) < default_order(120) < default_order(200)
    assert default_order(60) > 60
