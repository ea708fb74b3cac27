"""Numerical analytic continuation by Taylor-series recentering.

A frame is the column (y, y', y'', y''') of a solution at a point; a
fundamental frame matrix has the four basis solutions as columns.  Transport
along a path is a product of step matrices, each obtained from the exact
d/dt-form of the operator by the Taylor recurrence at an ordinary center,
with step length 0.4x the distance to the nearest singularity.

Transfer matrices act on coordinate column vectors: if y = Phi_from . c at
the path start, then y = Phi_to . (T c) at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
from gmpy2 import mpq

from . import _ratpoly as rp
from .errors import GeometryError, PrecisionError
from .frobenius import frame_matrix, to_mpc, _mpq_to_mpf
from .operators import INFINITY

SAFETY_RATIO = 0.4
CIRCLE_POINTS = 12
GUARD_DPS = 20


@dataclass(frozen=True)
class Path:
    """Sequence of waypoints in the punctured plane."""
    waypoints: tuple
    kind: str = "segment-chain"      # or "loop-around", "word"
    around: object = None            # target singularity for loop-around

    def reversed(self):
        return Path(tuple(reversed(self.waypoints)), self.kind, self.around)


@dataclass(frozen=True)
class TransferMatrix:
    entries: object                  # mp.matrix (4x4)
    from_basis: str
    to_basis: str
    error_estimate: float

    def __matmul__(self, other):
        return TransferMatrix(self.entries * other.entries, other.from_basis,
                              self.to_basis,
                              self.error_estimate + other.error_estimate)


# ---------------------------------------------------------------------------
# Geometry helpers
# ---------------------------------------------------------------------------

def singular_locations(op, dps):
    """All finite singular locations: exact mpq ones plus numeric roots of
    the irrational cofactor of the leading coefficient.

    Returns (exact_points, numeric_points) with numeric_points a superset
    (as complex numbers at dps digits)."""
    opc = op.canonical()
    pts, leftover = opc.singular_points()
    exact = [p for p in pts if p != INFINITY]
    with mp.workdps(dps):
        numeric = [to_mpc(p) for p in exact]
        if leftover:
            roots, rem = rp.rational_roots(opc.theta_coeffs[-1])
            coeffs = [mp.mpf(c.numerator) / mp.mpf(c.denominator)
                      for c in reversed(rem)]
            for r in mp.polyroots(coeffs, maxsteps=200, extraprec=dps * 4):
                numeric.append(mp.mpc(r))
    return exact, numeric


def _isolation(z, numeric_sings, extra=()):
    dists = [abs(z - w) for w in numeric_sings if abs(z - w) > 0]
    dists += [abs(z - w) for w in extra if abs(z - w) > 0]
    return min(dists)


def _pow2_below(x):
    """Largest power of two <= x, as an exact mpq (deterministic geometry)."""
    e = math.floor(math.log2(float(x)))
    return mpq(2) ** e


def default_basepoint(op, dps=40):
    """t0 on the positive real axis at (a power of two near) 1/10 of the
    distance from 0 to the nearest other singularity."""
    exact, numeric = singular_locations(op, dps)
    with mp.workdps(dps):
        d = _isolation(mp.mpc(0), numeric)
    return _pow2_below(d / 10)


# ---------------------------------------------------------------------------
# Loop and corridor construction
# ---------------------------------------------------------------------------

def _semicircle(center, radius, start_angle, end_angle, points=6):
    out = []
    for i in range(points + 1):
        theta = start_angle + (end_angle - start_angle) * i / points
        out.append(center + radius * mp.e ** (1j * mp.mpf(theta)))
    return out


def corridor(op, start, target_entry, dps, exclude=()):
    """Near-straight waypoint chain from start to target_entry, detouring
    counterclockwise (above) around singularities close to the segment."""
    _, numeric = singular_locations(op, dps)
    with mp.workdps(dps):
        a, b = to_mpc(start), to_mpc(target_entry)
        excl = [to_mpc(e) for e in exclude]
        pts = [a]
        blockers = []
        for s in numeric:
            if any(abs(s - e) < mp.mpf("1e-20") for e in excl):
                continue
            if abs(s - a) < mp.mpf("1e-20") or abs(s - b) < mp.mpf("1e-20"):
                continue
            # distance from s to segment [a, b]
            ab = b - a
            t = ((s - a).real * ab.real + (s - a).imag * ab.imag) / abs(ab) ** 2
            if not (0 < t < 1):
                continue
            proj = a + t * ab
            iso = _isolation(s, numeric)
            if abs(s - proj) < 0.35 * iso:
                blockers.append((t, s, iso))
        blockers.sort(key=lambda x: x[0])
        direction = (b - a) / abs(b - a)
        for t, s, iso in blockers:
            rho = 0.3 * iso
            pts.extend([s - rho * direction]
                       + _semicircle(s, rho,
                                     mp.arg(-direction) ,
                                     mp.arg(-direction) - mp.pi, 6)
                       + [s + rho * direction])
        pts.append(b)
    return Path(tuple(pts), "segment-chain")


def loop_around(op, basepoint, target, dps):
    """Counterclockwise simple loop based at basepoint around one finite
    singularity: corridor to the local circle, once around, corridor back."""
    exact, numeric = singular_locations(op, dps)
    with mp.workdps(dps):
        t0 = to_mpc(basepoint)
        s = to_mpc(target)
        if abs(s) < mp.mpf("1e-25"):
            r = abs(t0)
            circle = [s + r * mp.e ** (2j * mp.pi * k / CIRCLE_POINTS)
                      for k in range(CIRCLE_POINTS + 1)]
            return Path(tuple(circle), "loop-around", target)
        r = _isolation(s, numeric, extra=[0]) / 4
        entry = s - r
        cor = corridor(op, basepoint, entry, dps, exclude=[target])
        circle = [s + r * mp.e ** (1j * (mp.pi + 2 * mp.pi * k / CIRCLE_POINTS))
                  for k in range(CIRCLE_POINTS + 1)]
        pts = cor.waypoints + tuple(circle[1:]) + tuple(reversed(cor.waypoints))
    return Path(pts, "loop-around", target)


def loop_infinity(op, basepoint, dps):
    """Clockwise big circle enclosing all finite singularities (= one
    counterclockwise turn around infinity), based at basepoint via a
    vertical corridor."""
    _, numeric = singular_locations(op, dps)
    with mp.workdps(dps):
        t0 = to_mpc(basepoint)
        R = 2 * max(abs(s) for s in numeric) + 1
        up = [t0, 1j * R]
        circle = [R * mp.e ** (1j * (mp.pi / 2 - 2 * mp.pi * k / (2 * CIRCLE_POINTS)))
                  for k in range(2 * CIRCLE_POINTS + 1)]
        pts = tuple(up) + tuple(circle[1:]) + (t0,)
    return Path(pts, "loop-around", INFINITY)


def generator_loops(op, basepoint=None, dps=60):
    """One counterclockwise loop per finite singularity, ordered by location,
    plus the loop around infinity last."""
    if basepoint is None:
        basepoint = default_basepoint(op, dps)
    exact, numeric = singular_locations(op, dps)
    loops = [loop_around(op, basepoint, s, dps) for s in sorted(exact)]
    loops.append(loop_infinity(op, basepoint, dps))
    return loops


# ---------------------------------------------------------------------------
# Taylor-step transport
# ---------------------------------------------------------------------------

def _dform_numeric(op, dps):
    b = op.canonical().d_form()
    with mp.workdps(dps):
        return [[_mpq_to_mpf(c) for c in p] for p in b]


def _shift_poly(coeffs, center):
    """coeffs of p(t) -> coeffs of p(center + w), numeric synthetic division."""
    a = list(coeffs)
    res = []
    while a:
        r = a[-1]
        nb = [0] * (len(a) - 1)
        for i in reversed(range(len(a) - 1)):
            nb[i] = r
            r = a[i] + r * center
        res.append(r)
        a = nb
    return res


_FALL = {}


def _fall(p, j):
    key = (p, j)
    if key not in _FALL:
        v = 1
        for i in range(j):
            v *= p - i
        _FALL[key] = v
    return _FALL[key]


def _step_frame(bnum, center, target, nterms):
    """4x4 matrix S with frame(target) = S . frame(center)."""
    B = [_shift_poly(p, center) for p in bnum]
    lead = B[4][0]
    if abs(lead) == 0:
        raise GeometryError("recentering at a singular point")
    h = target - center
    cols = []
    for init in range(4):
        # Taylor coefficients y_m = y^(m)(center)/m!; initial frame = e_init
        y = [mp.mpc(0)] * 4
        y[init] = mp.mpc(1) / math.factorial(init)
        for m in range(nterms):
            acc = mp.mpc(0)
            for j in range(5):
                Bj = B[j]
                for l in range(len(Bj)):
                    p = m + j - l
                    if (j == 4 and l == 0) or not (0 <= p < len(y)):
                        continue
                    c = Bj[l]
                    if c:
                        acc += c * _fall(p, j) * y[p]
            y.append(-acc / (lead * _fall(m + 4, 4)))
        # frame entry d at target: y^(d)(c+h) = sum_q y_{q+d} fall(q+d, d) h^q
        vals = []
        for d in range(4):
            s = mp.mpc(0)
            for q in reversed(range(len(y) - d)):
                s = s * h + y[q + d] * _fall(q + d, d)
            vals.append(s)
        cols.append(vals)
    return mp.matrix([[cols[j][i] for j in range(4)] for i in range(4)])


def transport(op, path, dps):
    """Frame transport matrix along the waypoints: frame(end) = L . frame(start).

    Steps adaptively: from each center, move min(remaining, 0.4 x distance to
    the nearest singularity) toward the next waypoint."""
    work = dps + GUARD_DPS
    _, numeric = singular_locations(op, work)
    bnum = _dform_numeric(op, work)
    with mp.workdps(work):
        L = mp.eye(4)
        pts = [to_mpc(w) for w in path.waypoints]
        for seg, (a, b) in enumerate(zip(pts, pts[1:])):
            cur = a
            guard = 0
            while abs(b - cur) > 0:
                R = _isolation(cur, numeric)
                if R < mp.mpf("1e-30"):
                    raise GeometryError(
                        "path segment %d passes through a singularity" % seg)
                remaining = abs(b - cur)
                if remaining <= SAFETY_RATIO * R:
                    nxt = b
                    ratio = remaining / R
                else:
                    nxt = cur + SAFETY_RATIO * R * (b - cur) / remaining
                    ratio = mp.mpf(SAFETY_RATIO)
                n = int(work * math.log(10) / -math.log(float(ratio) + 1e-30)) + 30 \
                    if ratio > 0 else 8
                n = min(max(n, 30), 40 * work)
                L = _step_frame(bnum, cur, nxt, n) * L
                cur = nxt
                guard += 1
                if guard > 4000:
                    raise PrecisionError("path subdivision did not terminate")
        err = mp.mpf(10) ** (-(dps - 5))
    return L, err


# ---------------------------------------------------------------------------
# Spec-level operations
# ---------------------------------------------------------------------------

def transfer_matrix(op, path, from_basis, to_basis, precision):
    """Coordinates c in from_basis (at path start) map to T.c in to_basis
    (at path end)."""
    work = precision + GUARD_DPS
    L, err = transport(op, path, precision)
    with mp.workdps(work):
        phi0, e0 = frame_matrix(from_basis, path.waypoints[0], work)
        phi1, e1 = frame_matrix(to_basis, path.waypoints[-1], work)
        T = phi1 ** -1 * (L * phi0)
    return TransferMatrix(T, from_basis.kind, to_basis.kind, float(err))


def monodromy_matrix(op, loop, basis, precision):
    """Matrix of the monodromy along `loop` acting on coordinates in `basis`
    (columns = images of the basis vectors)."""
    work = precision + GUARD_DPS
    L, err = transport(op, loop, precision)
    with mp.workdps(work):
        phi, _ = frame_matrix(basis, loop.waypoints[0], work)
        M = phi ** -1 * (L * phi)
    return TransferMatrix(M, basis.kind, basis.kind, float(err))
