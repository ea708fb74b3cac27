"""Analytic continuation: transport, loops, transfer and monodromy matrices.

Module-level tests run at 60 digits; the 120-digit property suite required
by the acceptance gate lives in test_acceptance.py."""

import mpmath as mp
import pytest
from gmpy2 import mpq

from fuchsmon.continuation import (Path, corridor, default_basepoint,
                                   generator_loops, loop_around,
                                   loop_infinity, monodromy_matrix,
                                   singular_locations, transfer_matrix,
                                   transport)
from fuchsmon.errors import GeometryError
from fuchsmon.frobenius import frobenius_basis, normalize_mum, default_order
from fuchsmon.operators import INFINITY, parse_operator

OP217 = parse_operator("T^4 - 2^4*t*(2*T+1)^2*(8*T^2+8*T+3) "
                       "+ 2^12*t^2*(2*T+1)^2*(2*T+3)^2")
DPS = 60


def matdiff(A, B):
    return max(abs(A[i, j] - B[i, j]) for i in range(4) for j in range(4))


@pytest.fixture(scope="module")
def fm_basis():
    return normalize_mum(frobenius_basis(OP217, 0, default_order(DPS + 20)))


# -- geometry -------------------------------------------------------------------

def test_singular_locations_217():
    exact, numeric = singular_locations(OP217, 40)
    assert sorted(exact) == [0, mpq(1, 256)]
    assert len(numeric) == 2


def test_default_basepoint_is_small_power_of_two():
    t0 = default_basepoint(OP217)
    assert t0 == mpq(1, 4096)


def test_corridor_keeps_clear_of_singularities():
    path = corridor(OP217, mpq(1, 4096), mpq(1, 256) - mpq(1, 2048), DPS,
                    exclude=[mpq(1, 256)])
    _, numeric = singular_locations(OP217, DPS)
    with mp.workdps(DPS):
        for w in path.waypoints:
            assert min(abs(w - s) for s in numeric) > mp.mpf("1e-6")


def test_loop_shapes():
    t0 = mpq(1, 4096)
    lp = loop_around(OP217, t0, mpq(1, 256), DPS)
    assert lp.kind == "loop-around" and lp.around == mpq(1, 256)
    assert lp.waypoints[0] == lp.waypoints[-1]
    linf = loop_infinity(OP217, t0, DPS)
    assert linf.around == INFINITY
    loops = generator_loops(OP217, t0, DPS)
    assert [lp.around for lp in loops] == [mpq(0), mpq(1, 256), INFINITY]


def test_path_reversed():
    p = Path((1, 2, 3), "segment-chain")
    assert p.reversed().waypoints == (3, 2, 1)


# -- transport properties ----------------------------------------------------------

def test_transport_reversal_is_inverse():
    path = corridor(OP217, mpq(1, 4096), mpq(3, 1024), DPS)
    with mp.workdps(DPS + 20):
        L, _ = transport(OP217, path, DPS)
        Lrev, _ = transport(OP217, path.reversed(), DPS)
        assert matdiff(Lrev * L, mp.eye(4)) < mp.mpf(10) ** (-(DPS - 10))


def test_transport_subdivision_stability():
    a, b = mpq(1, 4096), mpq(3, 1024)
    with mp.workdps(DPS + 20):
        mid = (mp.mpf(a.numerator) / a.denominator
               + mp.mpf(b.numerator) / b.denominator) / 2
        L1, _ = transport(OP217, Path((a, b)), DPS)
        L2, _ = transport(OP217, Path((a, mid, b)), DPS)
        assert matdiff(L1, L2) < mp.mpf(10) ** (-(DPS - 10))


def test_transport_homotopy_invariance():
    a, b = mpq(1, 4096), mpq(3, 1024)
    with mp.workdps(DPS + 20):
        detour = mp.mpf("0.0015") + mp.mpf("0.0004") * 1j
        L1, _ = transport(OP217, Path((a, b)), DPS)
        L2, _ = transport(OP217, Path((a, detour, b)), DPS)
        assert matdiff(L1, L2) < mp.mpf(10) ** (-(DPS - 10))


def test_transport_rejects_path_through_singularity():
    with pytest.raises(GeometryError):
        transport(OP217, Path((mpq(1, 4096), mpq(0), mpq(1, 4096))), 30)


def test_loop_around_nothing_is_identity():
    # small counterclockwise square around an ordinary point
    with mp.workdps(DPS + 20):
        c = mp.mpf(3) / 1024
        h = mp.mpf(1) / 8192
        sq = Path((c + h, c + h * 1j, c - h, c - h * 1j, c + h))
        L, _ = transport(OP217, sq, DPS)
        assert matdiff(L, mp.eye(4)) < mp.mpf(10) ** (-(DPS - 10))


# -- transfer and monodromy ---------------------------------------------------------

def test_transfer_matrix_identity_on_trivial_path(fm_basis):
    path = Path((mpq(1, 4096), mpq(1, 4096)))
    T = transfer_matrix(OP217, path, fm_basis, fm_basis, DPS)
    with mp.workdps(DPS + 20):
        assert matdiff(T.entries, mp.eye(4)) < mp.mpf(10) ** (-(DPS - 10))
    assert T.from_basis == T.to_basis == fm_basis.kind


def test_transfer_matrix_composition(fm_basis):
    a, b = mpq(1, 4096), mpq(3, 1024)
    with mp.workdps(DPS + 20):
        mid = mpq(1, 512)
        T1 = transfer_matrix(OP217, Path((a, mid)), fm_basis, fm_basis, DPS)
        T2 = transfer_matrix(OP217, Path((mid, b)), fm_basis, fm_basis, DPS)
        T = transfer_matrix(OP217, Path((a, b)), fm_basis, fm_basis, DPS)
        assert matdiff((T2 @ T1).entries, T.entries) < \
            mp.mpf(10) ** (-(DPS - 10))
        assert (T2 @ T1).error_estimate >= T2.error_estimate


def test_mum_monodromy_displayed_form(fm_basis):
    lp = loop_around(OP217, mpq(1, 4096), mpq(0), DPS)
    M = monodromy_matrix(OP217, lp, fm_basis, DPS)
    with mp.workdps(DPS + 20):
        want = mp.matrix([[1, 1, mp.mpf(1) / 2, mp.mpf(1) / 6],
                          [0, 1, 1, mp.mpf(1) / 2],
                          [0, 0, 1, 1],
                          [0, 0, 0, 1]])
        assert matdiff(M.entries, want) < mp.mpf(10) ** (-40)
