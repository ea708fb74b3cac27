"""Doran-Morgan rational basis and transition-matrix computation.

Given an order-4 Fuchsian operator with a MUM point at 0 and a 1/nC
singularity at s, the Pipeline computes, at a chosen working precision:

  * monodromy matrices around 0 and s in the normalized Frobenius basis F_m,
  * the generalized Doran-Morgan basis B = {B(-v), N(B(-v)), N^2(B(-v))/d_A, v}
    where M = local monodromy around 0, N = M - Id, A = (local monodromy
    around s)^n, B = A - Id, and v is the holomorphic solution at 0 with
    v(0) = 1 (the kernel of N),
  * exact rational (or Gaussian-rational) forms of the monodromies in B,
  * the transition matrices T^{F_c}_B, T^B_{F_m} and T^{F_c}_{F_m}
    (all in the convention: columns of T^X_Y are the X-basis solutions
    written in Y-coordinates, so T^X_Y maps X-coordinates to Y-coordinates),
  * the constrained-family classification of M_s^B / T^{F_c}_B at a
    half-conifold point, and monodromy images of the conifold period
    evaluated at s.

Path conventions match the continuation module: loops counterclockwise,
circle around s entered at s - r with r the largest power of two at most a
quarter of the isolation distance, corridors detour above blockers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
from gmpy2 import mpq

from .continuation import (CIRCLE_POINTS, GUARD_DPS, Path, _isolation,
                           _pow2_below, corridor, default_basepoint,
                           singular_locations, transport)
from .errors import GeometryError, PrecisionError, RecognitionError
from .frobenius import (default_order, frame_matrix, frobenius_basis,
                        normalize_conifold, normalize_mum, to_mpc)
from .operators import INFINITY, riemann_scheme


# ---------------------------------------------------------------------------
# Exact rationalization of numeric values
# ---------------------------------------------------------------------------

def mpf_to_fraction(x):
    """Exact dyadic Fraction equal to the mpf x."""
    x = mp.mpf(x)
    sign, man, exp, _ = x._mpf_
    if man == 0 and exp != 0:
        raise ValueError("cannot rationalize a non-finite value")
    f = Fraction(int(man), 1) * Fraction(2) ** int(exp)
    return -f if sign else f


def rationalize(x, max_denominator=10 ** 6, tol=None, dps=None):
    """Nearest rational with bounded denominator; error if the fit is poor.

    `tol` defaults to 1e-(dps-10) relative to max(1, |x|)."""
    if dps is None:
        dps = mp.mp.dps
    if tol is None:
        tol = mp.mpf(10) ** (-(dps - 10))
    exact = mpf_to_fraction(x)
    cand = exact.limit_denominator(max_denominator)
    scale = max(1, abs(float(x)))
    err = abs(float(exact - cand))
    if err > tol * scale:
        raise RecognitionError(
            "value %s is not rational with denominator <= %d (residual %.3g)"
            % (mp.nstr(mp.mpf(x), 25), max_denominator, float(err)))
    return cand


def rationalize_complex(z, max_denominator=10 ** 6, tol=None, dps=None):
    """(re, im) Fractions of a numerically Gaussian-rational value."""
    z = mp.mpc(z)
    return (rationalize(z.real, max_denominator, tol, dps),
            rationalize(z.imag, max_denominator, tol, dps))


def rationalize_matrix(M, max_denominator=10 ** 6, tol=None, dps=None):
    """4x4 mp.matrix -> rows of (re, im) Fraction pairs."""
    return [[rationalize_complex(M[i, j], max_denominator, tol, dps)
             for j in range(4)] for i in range(4)]


def is_real_qmatrix(Q):
    return all(e[1] == 0 for row in Q for e in row)


def qmatrix_str(Q):
    def fmt(e):
        re, im = e
        if im == 0:
            return str(re)
        if re == 0:
            return "%s*i" % im
        return "%s%s%s*i" % (re, "+" if im >= 0 else "", im)
    return [[fmt(e) for e in row] for row in Q]


# --- exact Gaussian-rational 4x4 matrix helpers (entries: (re, im) mpq) ----

def _q(e):
    return (mpq(int(e[0].numerator), int(e[0].denominator)),
            mpq(int(e[1].numerator), int(e[1].denominator)))


def qmat(Q):
    """Coerce a matrix of Fraction pairs (or ints) to mpq pairs."""
    out = []
    for row in Q:
        r = []
        for e in row:
            if isinstance(e, tuple):
                r.append(_q((Fraction(e[0]), Fraction(e[1]))))
            else:
                f = Fraction(e)
                r.append((mpq(int(f.numerator), int(f.denominator)), mpq(0)))
        out.append(r)
    return out


def qmat_mul(A, B):
    out = []
    for i in range(4):
        row = []
        for j in range(4):
            re = mpq(0)
            im = mpq(0)
            for k in range(4):
                a, b = A[i][k]
                c, d = B[k][j]
                re += a * c - b * d
                im += a * d + b * c
            row.append((re, im))
        out.append(row)
    return out


def qmat_pow(A, n):
    out = qmat([[1 if i == j else 0 for j in range(4)] for i in range(4)])
    base = A
    while n:
        if n & 1:
            out = qmat_mul(out, base)
        base = qmat_mul(base, base)
        n >>= 1
    return out


def qmat_eq(A, B):
    return all(A[i][j][0] == B[i][j][0] and A[i][j][1] == B[i][j][1]
               for i in range(4) for j in range(4))


def qmat_to_mp(Q):
    from .frobenius import _mpq_to_mpf
    return mp.matrix([[_mpq_to_mpf(Q[i][j][0]) + 1j * _mpq_to_mpf(Q[i][j][1])
                       for j in range(4)] for i in range(4)])


def conifold_square_shape(K):
    """(M_s^B)^n for a 1/nC point: the conifold reflection-free unipotent."""
    return qmat([[1, (-Fraction(K), Fraction(0)), -1, -1],
                 [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


# ---------------------------------------------------------------------------
# Half-conifold constrained families for M_s^B and T^{F_c}_B
# ---------------------------------------------------------------------------

@dataclass
class FamilyFit:
    family: int                  # 1..4, or 0 = no family (not half-conifold)
    params: dict                 # exact mpq parameters of the family
    q_constants: tuple           # (q1..q5) for family 1; () otherwise

    def describe(self):
        return {"family_id": self.family,
                "parameters": {k: str(v) for k, v in self.params.items()},
                "q_constants": [str(q) for q in self.q_constants]}


def classify_family(Ms_B):
    """Match an exact M_s^B (real rational, half-conifold) against the four
    constrained shapes; returns a FamilyFit or raises RecognitionError.

    Family 1 carries the five rational constants (q1..q5) of the associated
    transition-matrix shape:
        column 2 of T^{F_c}_B = (t, 0, 0, 0),
        column 3 = (t13, q3 t, q4 t, q5 t),
        row 1    = (q1 t21 + q2 t41, t, t13, q1 t24 + q2 t44),
        rows 3,4 of columns 1, 4 = (-K t21 - t41, t41), (-K t24 - t44, t44).
    """
    if not is_real_qmatrix(Ms_B):
        raise RecognitionError("M_s^B is not a real rational matrix")
    M = [[mpq(int(Fraction(e[0]).numerator),
              int(Fraction(e[0]).denominator)) for e in row] for row in Ms_B]
    if M[0][0] != -1 or any(M[i][0] != 0 for i in (1, 2, 3)):
        raise RecognitionError("first column of M_s^B is not (-1, 0, 0, 0)")
    b, c, d = M[0][1], M[0][2], M[0][3]

    # family 4: diagonal -Id block
    if (M[1][1], M[2][2], M[3][3]) == (-1, -1, -1) and \
       all(M[i][j] == 0 for i in (1, 2, 3) for j in (1, 2, 3) if i != j):
        K = 2 * b
        if (c, d) != (mpq(1, 2), mpq(1, 2)):
            raise RecognitionError("degenerate family with c, d != 1/2")
        return FamilyFit(4, {"K": K}, ())

    # family 1: g = M[1][2] = M[1][3] != 0
    g = M[1][2]
    if g != 0 and M[1][3] == g:
        K = (M[1][1] - 1) / g
        o = M[3][2]
        expect = [
            [mpq(-1), ((o + K * g + 2) * c - d * o - 1) / g, c, d],
            [mpq(0), K * g + 1, g, g],
            [mpq(0), -K * (o + K * g + 2), -K * g - o - 1, -K * g - o - 2],
            [mpq(0), o * K, o, o + 1],
        ]
        if M == expect:
            q1 = -(-c * o + d * o - 2 * c + 1) / (2 * g)
            q2 = -(c - d) / 2
            # with t = column-2 entry (1,2) = -(1/g) t23 of the raw shape
            q3 = -g
            q4 = o + K * g + 2
            q5 = -o
            return FamilyFit(1, {"K": K, "g": g, "o": o, "c": c, "d": d,
                                 "b": M[0][1]},
                             (q1, q2, q3, q4, q5))
        raise RecognitionError("M_s^B has a family-1 second row but fails "
                               "the remaining shape constraints")

    # families 2, 3: second row (0, 1, 0, 0)
    if (M[1][1], M[1][2], M[1][3]) == (1, 0, 0):
        l = M[2][2] - 1
        if l != 0:
            K = M[2][1] / l
            expect = [
                [mpq(-1), b, ((l + 2) * d - 1) / l, d],
                [mpq(0), mpq(1), mpq(0), mpq(0)],
                [mpq(0), l * K, l + 1, l],
                [mpq(0), -K * (l + 2), -l - 2, -l - 1],
            ]
            if M == expect:
                return FamilyFit(2, {"K": K, "l": l, "b": b, "d": d}, ())
        else:
            K = -M[3][1] / 2
            expect = [
                [mpq(-1), b, c, mpq(1, 2)],
                [mpq(0), mpq(1), mpq(0), mpq(0)],
                [mpq(0), mpq(0), mpq(1), mpq(0)],
                [mpq(0), -2 * K, mpq(-2), mpq(-1)],
            ]
            if M == expect:
                return FamilyFit(3, {"K": K, "b": b, "c": c}, ())
    raise RecognitionError("M_s^B does not match any constrained "
                           "half-conifold family")


def verify_family_shape(fit, T, tol):
    """Residual of the numeric T^{F_c}_B against the family-1 linear shape.

    Returns the max violated constraint (0 if the shape holds to tol).
    Only family 1 occurs in practice; other families are accepted as-is."""
    if fit.family != 1:
        return mp.mpf(0)
    from .frobenius import _mpq_to_mpf
    q1, q2, q3, q4, q5 = [_mpq_to_mpf(q) for q in fit.q_constants]
    K = _mpq_to_mpf(fit.params["K"])
    t = T[0, 1]
    res = [abs(T[1, 1]), abs(T[2, 1]), abs(T[3, 1]),
           abs(T[1, 2] - q3 * t), abs(T[2, 2] - q4 * t),
           abs(T[3, 2] - q5 * t),
           abs(T[2, 0] + K * T[1, 0] + T[3, 0]),
           abs(T[2, 3] + K * T[1, 3] + T[3, 3]),
           abs(T[0, 0] - q1 * T[1, 0] - q2 * T[3, 0]),
           abs(T[0, 3] - q1 * T[1, 3] - q2 * T[3, 3])]
    scale = max(abs(T[i, j]) for i in range(4) for j in range(4))
    worst = max(res)
    if worst > tol * scale:
        raise RecognitionError(
            "transition matrix violates the family-%d shape (residual %s)"
            % (fit.family, mp.nstr(worst, 5)))
    return worst


# ---------------------------------------------------------------------------
# Doran-Morgan data
# ---------------------------------------------------------------------------

@dataclass
class DoranMorganData:
    d_A: int
    C: object                # mp.matrix: columns b1, b2, b3, v in F_m coords
    C_inv: object
    M0_B: object             # numeric mp.matrix
    Ms_B: object
    M0_B_exact: list         # (re, im) Fraction pairs
    Ms_B_exact: list
    K: Fraction
    b1: object               # mp.matrix column: B(-v) in F_m coordinates


def mum_expansion_invariants(b1, dps):
    """Integers (d, p, a) of the expansion of B(-v) at the MUM point:

        B(-v) = d/6 (log t / 2 pi i)^3 + ...  (no log^2 term)
                + p/24 (log t / 2 pi i) + a zeta(3)/(2 pi i)^3 + o(1)

    read off from its F_m coordinates (c1, c2, c3, c4) = (a zeta3/(2pi i)^3,
    p/24, 0, d).  Returns ((d, p, a), residual)."""
    with mp.workdps(dps):
        tol = mp.mpf(10) ** (-(dps - 12))
        d = rationalize(b1[3].real, 10 ** 4, dps=dps)
        p = rationalize(24 * b1[1].real, 10 ** 4, dps=dps)
        # 1/(2 pi i)^3 = i/(8 pi^3): the zeta(3) coordinate is purely imaginary
        a = rationalize(b1[0].imag * (2 * mp.pi) ** 3 / mp.zeta(3),
                        10 ** 4, dps=dps)
        res = max(abs(b1[2]), abs(b1[3].imag), abs(b1[1].imag),
                  abs(b1[0].real))
        if d.denominator != 1 or p.denominator != 1 or a.denominator != 1:
            raise RecognitionError(
                "MUM expansion invariants are not integers: d=%s p=%s a=%s"
                % (d, p, a))
        if res > tol:
            raise RecognitionError(
                "MUM expansion has unexpected structure (residual %s)"
                % mp.nstr(res, 5))
    return (int(d), int(p), int(a)), float(res)


# ---------------------------------------------------------------------------
# The pipeline
# ---------------------------------------------------------------------------

class Pipeline:
    """Cached end-to-end computation for one (operator, 1/nC point) pair."""

    def __init__(self, op, target=None, digits=60, order=None,
                 max_denominator=10 ** 6):
        self.op = op.canonical()
        self.digits = digits
        self.work = digits + GUARD_DPS
        self.max_denominator = max_denominator
        self._cache = {}

        scheme = riemann_scheme(self.op)
        by_loc = {e.location: e for e in scheme.entries}
        if mpq(0) not in by_loc or by_loc[mpq(0)].stype != "MUM":
            raise GeometryError("operator has no MUM point at 0")
        conifolds = [e for e in scheme.entries
                     if e.stype == "C_over_n" and e.location != INFINITY]
        if target is None:
            if not conifolds:
                raise GeometryError("operator has no finite 1/nC singularity")
            entry = conifolds[0]
        else:
            t = mpq(target)
            match = [e for e in conifolds if e.location == t]
            if not match:
                raise GeometryError(
                    "%s is not a 1/nC singularity of the operator" % (target,))
            entry = match[0]
        self.s = entry.location
        self.n = entry.n
        self.k = entry.k
        self.order = order if order is not None else default_order(self.work)

    # -- cached primitives --------------------------------------------------

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def basepoint(self):
        return self._get("t0", lambda: default_basepoint(self.op, self.work))

    @property
    def entry_point(self):
        def mk():
            _, numeric = singular_locations(self.op, self.work)
            with mp.workdps(self.work):
                iso = _isolation(to_mpc(self.s), numeric, extra=[0])
            r = _pow2_below(iso / 4)
            return self.s - r, r
        return self._get("entry", mk)

    @property
    def mum_basis(self):
        return self._get("fm", lambda: normalize_mum(
            frobenius_basis(self.op, 0, self.order)))

    @property
    def conifold_basis(self):
        return self._get("fc", lambda: normalize_conifold(
            frobenius_basis(self.op, self.s, self.order), self.n, self.k))

    def _frame(self, key, basis, point):
        def mk():
            F, err = frame_matrix(basis, point, self.work)
            return F
        return self._get(key, mk)

    @property
    def phi0(self):
        return self._frame("phi0", self.mum_basis, self.basepoint)

    @property
    def psi(self):
        return self._frame("psi", self.conifold_basis, self.entry_point[0])

    def _loop0_path(self):
        t0 = self.basepoint
        with mp.workdps(self.work):
            z0 = to_mpc(t0)
            pts = [z0]
            for j in range(1, CIRCLE_POINTS):
                pts.append(z0 * mp.e ** (2j * mp.pi * j / CIRCLE_POINTS))
            pts.append(z0)
        return Path(tuple(pts), "loop-around", mpq(0))

    def _circle_path(self):
        p, r = self.entry_point
        with mp.workdps(self.work):
            zs, zr = to_mpc(self.s), to_mpc(r)
            pts = [to_mpc(p)]
            for j in range(1, CIRCLE_POINTS):
                pts.append(zs + zr * mp.e ** (1j * (mp.pi
                                                    + 2 * mp.pi * j / CIRCLE_POINTS)))
            pts.append(to_mpc(p))
        return Path(tuple(pts), "loop-around", self.s)

    @property
    def L_loop0(self):
        return self._get("L0", lambda: transport(
            self.op, self._loop0_path(), self.digits)[0])

    @property
    def L_corridor(self):
        def mk():
            p, _ = self.entry_point
            path = corridor(self.op, self.basepoint, p, self.work,
                            exclude=[self.s])
            return transport(self.op, path, self.digits)[0]
        return self._get("Lcor", mk)

    @property
    def L_circle(self):
        return self._get("Lcirc", lambda: transport(
            self.op, self._circle_path(), self.digits)[0])

    # -- monodromies and transfers in F_m coordinates -----------------------

    @property
    def M0_fm(self):
        def mk():
            with mp.workdps(self.work):
                return self.phi0 ** -1 * (self.L_loop0 * self.phi0)
        return self._get("M0fm", mk)

    @property
    def Ms_fm(self):
        def mk():
            with mp.workdps(self.work):
                Lc = self.L_corridor
                return self.phi0 ** -1 * (Lc ** -1 * (self.L_circle
                                                      * (Lc * self.phi0)))
        return self._get("Msfm", mk)

    @property
    def Ms_fc(self):
        """Local monodromy around s in F_c coordinates (the Jordan form)."""
        def mk():
            with mp.workdps(self.work):
                return self.psi ** -1 * (self.L_circle * self.psi)
        return self._get("Msfc", mk)

    def transition_between_frobenius(self):
        """T^{F_c}_{F_m}: F_c coordinates at the entry point -> F_m
        coordinates at the base point, continued along the corridor.
        Well-defined regardless of d_A."""
        def mk():
            with mp.workdps(self.work):
                U = self.psi ** -1 * (self.L_corridor * self.phi0)
                return U ** -1
        return self._get("Tcm", mk)

    # -- Doran-Morgan basis --------------------------------------------------

    @property
    def dm(self):
        return self._get("dm", self._build_dm)

    def _build_dm(self):
        with mp.workdps(self.work):
            M0 = self.M0_fm
            N = M0 - mp.eye(4)
            A = self.Ms_fm ** self.n
            Bm = A - mp.eye(4)
            e1 = mp.matrix([1, 0, 0, 0])
            b1 = -(Bm * e1)
            b2 = N * b1
            b3p = N * b2
            b4 = N * b3p
            d_A_frac = rationalize(b4[0].real, 10 ** 4, dps=self.digits)
            tol = mp.mpf(10) ** (-(self.digits - 10))
            if abs(b4[0].imag) > tol or max(abs(b4[i]) for i in (1, 2, 3)) > tol:
                raise RecognitionError(
                    "N^3 B(-v) is not a clean multiple of v")
            if d_A_frac.denominator != 1:
                raise RecognitionError("d_A = %s is not an integer" % d_A_frac)
            d_A = int(d_A_frac)
            if d_A == 0:
                raise GeometryError(
                    "d_A = 0: the Doran-Morgan basis for this singularity "
                    "is undefined (N^3 of the A-image of v vanishes)")
            b3 = b3p / d_A
            C = mp.matrix([[b1[i], b2[i], b3[i], e1[i]] for i in range(4)])
            C_inv = C ** -1
            M0_B = C_inv * (M0 * C)
            Ms_B = C_inv * (self.Ms_fm * C)
            M0_B_exact = rationalize_matrix(M0_B, self.max_denominator,
                                            dps=self.digits)
            Ms_B_exact = rationalize_matrix(Ms_B, self.max_denominator,
                                            dps=self.digits)
            # structural checks, exact
            expect_M0 = [[1, 0, 0, 0], [1, 1, 0, 0], [0, d_A, 1, 0],
                         [0, 0, 1, 1]]
            got = [[e[0] if e[1] == 0 else None for e in row]
                   for row in M0_B_exact]
            if got != [[Fraction(x) for x in row] for row in expect_M0]:
                raise RecognitionError(
                    "M_0^B does not have the unipotent normal form")
            # (M_s^B)^n must be [[1,-K,-1,-1],[0,1,0,0],[0,0,1,0],[0,0,0,1]]
            A_B = qmat_pow(qmat(Ms_B_exact), self.n)
            Kq = -A_B[0][1][0]
            if A_B[0][1][1] != 0 or not qmat_eq(
                    A_B, conifold_square_shape(Fraction(Kq.numerator,
                                                        Kq.denominator))):
                raise RecognitionError(
                    "(M_s^B)^n does not have the conifold normal form")
            K = Fraction(Kq.numerator, Kq.denominator)
        return DoranMorganData(d_A, C, C_inv, M0_B, Ms_B, M0_B_exact,
                               Ms_B_exact, K, b1)

    def mum_invariants(self):
        """(d, p, a) integer invariants of the expansion of B(-v) at 0."""
        return mum_expansion_invariants(self.dm.b1, self.digits)

    # -- transition matrices -------------------------------------------------

    def transition_to_conifold(self):
        """T^{F_c}_B: columns = F_c solutions in Doran-Morgan coordinates."""
        def mk():
            with mp.workdps(self.work):
                return self.dm.C_inv * self.transition_between_frobenius()
        return self._get("TcB", mk)

    def transition_to_mum(self):
        """T^B_{F_m}: columns = Doran-Morgan solutions in F_m coordinates.

        In reversed F_m coordinate order (y4, y3, y2, y1) this is the
        lower-triangular constrained shape with first column
        (d_A, 0, p/24, a zeta(3)/(2 pi i)^3)."""
        return self.dm.C

    def classify(self):
        """FamilyFit of M_s^B, with the numeric shape check on T^{F_c}_B."""
        def mk():
            fit = classify_family(self.dm.Ms_B_exact)
            with mp.workdps(self.work):
                tol = mp.mpf(10) ** (-(self.digits - 12))
                verify_family_shape(fit, self.transition_to_conifold(), tol)
            return fit
        return self._get("fit", mk)

    # -- monodromy images of the conifold period -----------------------------

    def conifold_value(self, Q):
        """M(f_c)(s) for a monodromy element with matrix Q in B-coordinates:
        first F_c-coordinate of Q applied to the conifold period."""
        with mp.workdps(self.work):
            T = self.transition_to_conifold()
            if not isinstance(Q, mp.matrix):
                Q = qmat_to_mp(qmat(Q))
            w = T ** -1 * (Q * (T * mp.matrix([0, 1, 0, 0])))
            return +w[0]

    def monodromy_orbit_values(self, powers):
        """[M_0^m(f_c)(s) for m in powers] via the Doran-Morgan sandwich."""
        with mp.workdps(self.work):
            T = self.transition_to_conifold()
            Tinv = T ** -1
            M0 = qmat_to_mp(qmat(self.dm.M0_B_exact))
            fc = T * mp.matrix([0, 1, 0, 0])
            out = []
            for m in powers:
                Qm = M0 ** int(m)
                out.append(+(Tinv * (Qm * fc))[0])
            return out


def rescale_log_normalization(T, alpha, dps=None):
    """Remove a log(alpha)/(2 pi i) multiple of the conifold-period column
    from the logarithmic column of T^{F_c}_B (or T^{F_c}_{F_m}).

    This realizes the effect of the coordinate scaling t - s -> alpha (t - s)
    on the normalized log-bearing solution y3, up to overall power-of-alpha
    column scalings which do not affect constant recognition:
    new column 3 = column 3 - (log alpha / (2 pi i)) * column 2."""
    if dps is None:
        dps = mp.mp.dps
    with mp.workdps(dps):
        lam = mp.log(to_mpc(alpha)) / (2j * mp.pi)
        out = mp.matrix(T)
        for i in range(4):
            out[i, 2] = T[i, 2] - lam * T[i, 1]
    return out


def shift_analytic_gauge(T, lam, dps=None):
    """Change the representative of the analytic solution y1 at the conifold
    point: column 1 of T becomes column 1 + lam * column 4.

    The normalization f1(s) = 1 pins the analytic Frobenius solution only up
    to adding multiples of the O((t-s)^(2/n)) solution f4; published tables
    are not consistent about which representative they print.  The series
    builder here always takes the eps-limit value for the free resonant
    coefficient, and `lam` moves between that representative and any other."""
    if dps is None:
        dps = mp.mp.dps
    with mp.workdps(dps):
        lam = to_mpc(lam)
        out = mp.matrix(T)
        for i in range(4):
            out[i, 0] = T[i, 0] + lam * T[i, 3]
    return out
