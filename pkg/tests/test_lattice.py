"""Monodromy words, integer-relation detection, Q-span ranks and constant
recognition.  Planted-relation tests use independently constructed values;
pipeline tests cross-check the exact rational sandwich against fully numeric
continuation."""

from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from fuchsmon.dmbasis import qmat, qmat_mul, qmat_to_mp
from fuchsmon.errors import PrecisionError
from fuchsmon.lattice import (IDENTITY_WORD, PeriodGroup, Recognition,
                              Unidentified, commensurability_factors,
                              conifold_values, direct_word_value,
                              enumerate_words, integer_relation, power_words,
                              q_span_rank, qmat_inv, random_words,
                              recognize_constant, tr1_alpha, tr1_word_value,
                              word_label, word_matrix, _row_space_rank)


# -- words ------------------------------------------------------------------------

def test_word_labels():
    assert word_label(IDENTITY_WORD) == "Id"
    assert word_label((("M0", 3),)) == "M0^3"
    assert word_label((("M0", 1), ("Ms", -2))) == "M0*Ms^-2"


def test_power_words():
    words = power_words(-2, 2)
    assert words[2] == IDENTITY_WORD
    assert words[0] == (("M0", -2),)
    assert words[-1] == (("M0", 2),)


def test_enumerate_words_counts_and_reduction():
    words = enumerate_words(2)
    assert len(words) == 1 + 4 + 12
    assert len(set(words)) == len(words)
    for w in words:
        for (g1, e1), (g2, e2) in zip(w, w[1:]):
            assert not (g1 == g2 and e1 == -e2)
    assert enumerate_words(2) == words   # deterministic


def test_random_words_seeded():
    a = random_words(10, 4, seed=7)
    assert random_words(10, 4, seed=7) == a
    assert random_words(10, 4, seed=8) != a
    assert all(1 <= len(w) <= 4 for w in a)


# -- exact matrix words --------------------------------------------------------------

def test_qmat_inv_roundtrip():
    A = qmat([[1, 2, 0, 0], [0, 1, (0, 1), 0],
              [(0, Fraction(1, 2)), 0, 1, 3], [0, 0, Fraction(2, 5), 1]])
    I = qmat([[1 if i == j else 0 for j in range(4)] for i in range(4)])
    P = qmat_mul(A, qmat_inv(A))
    assert all(P[i][j] == I[i][j] for i in range(4) for j in range(4))


def test_qmat_inv_rejects_singular():
    Z = qmat([[0] * 4 for _ in range(4)])
    with pytest.raises(ZeroDivisionError):
        qmat_inv(Z)


def test_word_matrix_inverses(pipe217):
    dm = pipe217.dm
    I = qmat([[1 if i == j else 0 for j in range(4)] for i in range(4)])
    for g in ("M0", "Ms"):
        P = qmat_mul(word_matrix(dm, ((g, 2),)), word_matrix(dm, ((g, -2),)))
        assert all(P[i][j] == I[i][j] for i in range(4) for j in range(4))
    assert word_matrix(dm, IDENTITY_WORD) == I


# -- integer relations ---------------------------------------------------------------

def test_integer_relation_simple():
    assert integer_relation([1, 2], 120) in ((-2, 1), (2, -1))


def test_integer_relation_with_pi():
    with mp.workdps(140):
        vals = [3 * mp.pi / 7 - mp.mpf(2) / 7, mp.pi, mp.mpf(1)]
        rel = integer_relation(vals, 120)
    a, b, c = rel
    assert (a, b, c) == (7, -3, 2) or (a, b, c) == (-7, 3, -2)


def test_integer_relation_none_for_independent():
    with mp.workdps(140):
        assert integer_relation([mp.pi, mp.mpf(1)], 120,
                                coeff_bound=10 ** 4) is None


def test_integer_relation_refuses_low_precision():
    with pytest.raises(PrecisionError):
        integer_relation([1, 2, 3], 40, coeff_bound=10 ** 6)


@settings(max_examples=15, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 50))
def test_integer_relation_planted(p, q):
    with mp.workdps(140):
        x = mp.mpf(p) / q * mp.pi
        rel = integer_relation([x, mp.pi], 120, coeff_bound=10 ** 4)
    assert rel is not None
    a, b = rel
    assert a * p + b * q == 0 and a != 0


def test_row_space_rank():
    assert _row_space_rank([], 4) == (0, [])
    rank, pivots = _row_space_rank([[1, 0, 2, 0], [0, 1, 1, 0],
                                    [1, 1, 3, 0]], 4)
    assert rank == 2 and pivots == [0, 1]


# -- Q-span rank on planted values -----------------------------------------------------

def test_q_span_rank_planted():
    with mp.workdps(140):
        v1 = mp.pi + 0j
        v2 = mp.sqrt(2) * 1j
        group = PeriodGroup((((("a", 1),), v1), ((("b", 1),), v2),
                             ((("c", 1),), 2 * v1 + 3 * v2)),
                            "Lfull", None, 120)
    rep = q_span_rank(group, precision=120)
    assert rep.rank == 2 and not rep.uncertain
    assert len(rep.relation_basis) == 1
    a = rep.relation_basis[0]
    assert a[0] + 2 * a[2] == 0 and a[1] + 3 * a[2] == 0


def test_q_span_rank_full_rank():
    with mp.workdps(140):
        group = PeriodGroup((((("a", 1),), mp.pi + 0j),
                             ((("b", 1),), mp.e + 0j)), "Lfull", None, 120)
    rep = q_span_rank(group, precision=120)
    assert rep.rank == 2 and rep.relation_basis == ()
    assert rep.as_dict()["rank"] == 2


def test_commensurability_planted(sv81):
    with mp.workdps(140):
        L1 = mp.mpc(sv81.L1)
        L2o = mp.mpc(sv81.L2) / (2j * mp.pi)
        group = PeriodGroup((((("a", 1),), L1), ((("b", 1),), 3 * L2o),
                             ((("c", 1),), L1 / 2 + L2o),
                             ((("d", 1),), mp.pi + 0j),
                             ((("e", 1),), mp.mpc(0))), "Lfull", None, 120)
        out = commensurability_factors(group, L1, L2o, precision=120)
    assert out["a"] == ("1", "0")
    assert out["b"] == ("0", "3")
    assert out["c"] == ("1/2", "1")
    assert out["d"] is None
    assert out["e"] == (0, 0)


# -- constant recognition ---------------------------------------------------------------

@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=-50, max_value=50, max_denominator=20).filter(
    lambda q: q != 0))
def test_recognize_rational_pi_multiple(q):
    with mp.workdps(120):
        x = mp.mpf(q.numerator) / q.denominator * mp.pi
        rec = recognize_constant(x, [("pi", mp.pi)], field="Q", dps=120)
    assert rec.identified
    assert rec.combination == (("pi", "1", q),)


def test_recognize_gaussian_combination():
    with mp.workdps(120):
        x = (mp.mpf(3) / 8 - 2j) * mp.pi + mp.mpc(0, "0.25") * mp.log(2)
        rec = recognize_constant(x, [("pi", mp.pi), ("log2", mp.log(2))],
                                 field="Q[i]", dps=120)
    assert rec.identified
    combo = dict(((n, b), q) for n, b, q in rec.combination)
    assert combo[("pi", "1")] == Fraction(3, 8)
    assert combo[("pi", "i")] == Fraction(-2)
    assert combo[("log2", "i")] == Fraction(1, 4)


def test_recognize_sqrt2_field():
    with mp.workdps(120):
        x = mp.sqrt(2) * mp.pi / 4
        assert not recognize_constant(x, [("pi", mp.pi)], field="Q",
                                      dps=120).identified
        rec = recognize_constant(x, [("pi", mp.pi)], field="Q[sqrt2,i]",
                                 dps=120)
    assert rec.identified
    assert rec.combination == (("pi", "sqrt2", Fraction(1, 4)),)


def test_recognize_zero_and_unidentified():
    with mp.workdps(120):
        zero = recognize_constant(mp.mpf(0), [("pi", mp.pi)], dps=120)
        assert zero.identified and zero.symbolic() == "0"
        noise = recognize_constant(mp.mpf("0.73642891055321987654321"),
                                   [("pi", mp.pi)], dps=120)
    assert isinstance(noise, Unidentified)
    assert noise.symbolic() == "unidentified"


def test_recognition_symbolic_rendering():
    rec = Recognition((("pi", "1", Fraction(-1, 512)),), "Q", 0.0)
    assert rec.symbolic() == "-1/512*pi"
    rec2 = Recognition((("1", "i", Fraction(2)),), "Q[i]", 0.0)
    assert rec2.symbolic() == "(2)*i"


# -- pipeline cross-checks (2.17 at 120 digits) ------------------------------------------

def test_sandwich_matches_direct_continuation(pipe217):
    words = [(("Ms", 1),), (("M0", 1), ("Ms", -1)), (("Ms", 1), ("M0", 2))]
    group = conifold_values(pipe217, words)
    with mp.workdps(pipe217.work):
        for w, v in group.values:
            direct = direct_word_value(pipe217, w)
            assert abs(v - direct) < mp.mpf(10) ** (-100)


def test_conifold_values_scope_detection(pipe217):
    assert conifold_values(pipe217, power_words(-1, 1)).scope == "L0"
    assert conifold_values(pipe217, [(("Ms", 1),)]).scope == "Lfull"


def test_family1_value_formula(pipe217):
    # closed-form prediction from the constrained transition shape vs the
    # sandwich value, for assorted words
    fit = pipe217.classify()
    T = pipe217.transition_to_conifold()
    words = [(("M0", 1),), (("M0", -2),), (("Ms", 1), ("M0", 1)),
             (("M0", 2), ("Ms", -1), ("M0", -1))]
    with mp.workdps(pipe217.work):
        for w in words:
            Q = word_matrix(pipe217.dm, w)
            pred = tr1_word_value(T, Q, fit.params, pipe217.work)
            got = pipe217.conifold_value(qmat_to_mp(Q))
            assert abs(pred - got) < mp.mpf(10) ** (-30)


def test_family1_power_sum_identity(pipe217):
    # v(M0) + v(M0^-1) = 2 d_A alpha t24 for family 1
    fit = pipe217.classify()
    T = pipe217.transition_to_conifold()
    with mp.workdps(pipe217.work):
        vp = pipe217.conifold_value(qmat_to_mp(word_matrix(pipe217.dm,
                                                           (("M0", 1),))))
        vm = pipe217.conifold_value(qmat_to_mp(word_matrix(pipe217.dm,
                                                           (("M0", -1),))))
        alpha = tr1_alpha(T, fit.params, pipe217.work)
        assert abs(vp + vm - 2 * pipe217.dm.d_A * alpha * T[1, 3]) < \
            mp.mpf(10) ** (-100)


def test_identity_word_value_is_zero(pipe217):
    group = conifold_values(pipe217, [IDENTITY_WORD])
    with mp.workdps(pipe217.work):
        assert abs(group.numbers()[0]) < mp.mpf(10) ** (-100)
