"""Truncated Frobenius solutions with logarithmic terms at regular points.

The recurrence is solved exactly over rationals using epsilon-jets: the
ansatz y = u^(sigma+eps) * sum_k c_k(eps) u^k with c_k truncated polynomials
in eps.  Exponents are grouped into ladders (congruent mod 1); within a
ladder the starting exponent sigma gets c_0 = eps^offset where offset is the
total multiplicity of larger exponents in the ladder, and the solutions are
the eps^j-extractions.  This is the classical construction, done with exact
bookkeeping so resonant divisions are checked rather than hoped for.

At a resonance (an exponent that is a larger root of the same ladder) the
free coefficient is fixed by the eps-limit of the jet division, i.e. the
classical Frobenius value lim rhs(eps)/f0(sigma+k+eps).  No further
cross-solution normalization is applied; this pins the bases uniquely and
matches the standard computer-algebra convention for formal solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
from gmpy2 import mpq

from . import _ratpoly as rp
from .errors import GeometryError, PrecisionError
from .operators import INFINITY, ORDER, DifferentialOperator, classify_exponents

MUM_NORMALIZED = "MUM_normalized"
CONIFOLD_NORMALIZED = "Conifold_normalized"
RAW = "Raw"


# ---------------------------------------------------------------------------
# eps-jets: fixed-length truncated polynomials in eps over mpq
# ---------------------------------------------------------------------------

def _jet_mul(a, b, L):
    out = [mpq(0)] * L
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if i + j >= L:
                break
            if y != 0:
                out[i + j] += x * y
    return out


def _jet_div(num, den, L):
    """num/den with valuation stripping; requires val(num) >= val(den)."""
    v = 0
    while v < L and den[v] == 0:
        v += 1
    if v == L:
        raise GeometryError("resonance bookkeeping failure: zero divisor jet")
    if any(num[i] != 0 for i in range(min(v, L))):
        raise GeometryError(
            "unsupported exponent lattice: resonant right-hand side does not vanish")
    n = num[v:] + [mpq(0)] * v
    d = den[v:] + [mpq(0)] * v
    inv0 = 1 / d[0]
    out = [mpq(0)] * L
    for i in range(L):
        acc = n[i]
        for j in range(i):
            acc -= out[j] * d[i - j]
        out[i] = acc * inv0
    return out


def _poly_at_jet(poly, x0, L):
    """Jet of poly(x0 + eps) to length L: Taylor coefficients at x0."""
    out = []
    p = poly
    fact = mpq(1)
    for l in range(L):
        if l:
            p = rp.pderiv(p)
            fact *= l
        out.append(rp.peval(p, x0) / fact if p else mpq(0))
    return out


# ---------------------------------------------------------------------------
# Solution containers
# ---------------------------------------------------------------------------

@dataclass
class LocalSolution:
    """sum_{k,b} coeffs[k][b] * u^(exponent+k) * log(u)^b / b!, times a
    numeric prefactor rat * (2 pi i)^(-log_scale) * exp(-2 pi i * root_shift)."""

    exponent: object            # mpq
    coeffs: list                # list over k of [c_b0, c_b1, c_b2, c_b3]
    truncation: int
    pivot: tuple                # (exponent value, log index)
    prefactor: tuple = (mpq(1), 0, mpq(0))
    _derivs: list = field(default_factory=list, repr=False)

    @property
    def max_log_power(self):
        return max((b for row in self.coeffs for b in range(4) if row[b] != 0),
                   default=0)

    def derivative_data(self, order):
        """Exact coefficient arrays of the first `order` u-derivatives."""
        while len(self._derivs) < order:
            base = self._derivs[-1] if self._derivs else (self.exponent, self.coeffs)
            sigma, cs = base
            out = []
            for k, row in enumerate(cs):
                e = sigma + k
                out.append([e * row[b] + (row[b + 1] if b < 3 else mpq(0))
                            for b in range(4)])
            self._derivs.append((sigma - 1, out))
        return self._derivs[:order]

    def prefactor_value(self, dps):
        rat, m, shift = self.prefactor
        with mp.workdps(dps):
            val = mp.mpf(rat.numerator) / mp.mpf(rat.denominator)
            if m:
                val = val / (2j * mp.pi) ** m
            if shift != 0:
                val = val * mp.e ** (-2j * mp.pi * mp.mpf(shift.numerator)
                                     / mp.mpf(shift.denominator))
        return val

    def series_terms(self):
        """Debug dump: rows {exponent, log_power, coefficient (exact string)}."""
        rows = []
        for k, row in enumerate(self.coeffs):
            for b in range(4):
                if row[b] != 0:
                    rows.append({"exponent": str(self.exponent + k),
                                 "log_power": b, "coefficient": str(row[b])})
        return rows


@dataclass
class FrobeniusBasis:
    center: object              # mpq or INFINITY
    solutions: tuple            # 4 LocalSolution, in basis order
    kind: str                   # RAW / MUM_NORMALIZED / CONIFOLD_NORMALIZED
    local_op: DifferentialOperator
    n: int = 0                  # for CONIFOLD_NORMALIZED: the n of 1/nC
    k: int = 0                  # numerator of the repeated exponent

    @property
    def truncation(self):
        return self.solutions[0].truncation


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def default_order(dps):
    """Truncation order safe for evaluation at <= 0.3 of the convergence
    radius at dps working digits."""
    return int(dps * math.log(10) / math.log(1 / 0.32)) + 40


def frobenius_basis(op, point, order):
    """Raw (echelon-normalized) Frobenius basis of 4 solutions at `point`.

    The recurrence is solved exactly in rationals; exponents must be rational
    and split into integer-shift ladders (always true for the supported
    singularity types)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    loc = op.local_at(point)
    a4 = loc.theta_coeffs[ORDER]
    if a4[0] == 0:
        raise GeometryError("point %s is an irregular singularity" % (point,))

    # f_m(X) = sum_i a_i[m] X^i  (coefficient of u^m of the operator acting
    # on u^X); f_0 is the indicial polynomial.
    maxm = max(rp.pdeg(p) for p in loc.theta_coeffs if p)
    fpolys = []
    for m in range(maxm + 1):
        fpolys.append(rp.ptrim(tuple(
            (p[m] if m < len(p) else mpq(0)) for p in loc.theta_coeffs)))

    roots, rem = rp.rational_roots(fpolys[0])
    if rp.pdeg(rem) > 0:
        raise GeometryError("unsupported exponent lattice: irrational exponents")
    if sum(m for _, m in roots) != 4:
        raise GeometryError("indicial polynomial does not have 4 rational roots")

    # group into ladders by fractional part
    ladders = {}
    for r, mult in roots:
        frac = r - mpq(math.floor(r))
        ladders.setdefault(frac, []).append((r, mult))

    sols = []
    for frac, group in ladders.items():
        group.sort(key=lambda rm: rm[0], reverse=True)
        seen = 0
        for idx, (sigma, mult) in enumerate(group):
            offset = seen
            seen += mult
            L = 2 * offset + mult
            sols.extend(_solve_ladder_root(fpolys, sigma, offset, mult, L,
                                           order, group))
    assert len(sols) == 4
    sols.sort(key=lambda s: (s.pivot[0], s.pivot[1]))
    return FrobeniusBasis(point if point == INFINITY else rp.as_mpq(point),
                          tuple(sols), RAW, loc)


def _solve_ladder_root(fpolys, sigma, offset, mult, L, order, group):
    maxm = len(fpolys) - 1
    c = [[mpq(0)] * L]
    c[0][offset] = mpq(1)
    f0 = fpolys[0]
    for k in range(1, order + 1):
        rhs = [mpq(0)] * L
        for m in range(1, min(k, maxm) + 1):
            if not fpolys[m]:
                continue
            fm = _poly_at_jet(fpolys[m], sigma + k - m, L)
            prod = _jet_mul(fm, c[k - m], L)
            for i in range(L):
                rhs[i] -= prod[i]
        den = _poly_at_jet(f0, sigma + k, L)
        c.append(_jet_div(rhs, den, L))
    out = []
    for j in range(mult):
        coeffs = []
        for k in range(order + 1):
            row = [mpq(0)] * 4
            for b in range(4):
                idx = offset + j - b
                if 0 <= idx < L:
                    row[b] = c[k][idx]
            coeffs.append(row)
        out.append(LocalSolution(mpq(sigma), coeffs, order, (mpq(sigma), j)))
    return out


# ---------------------------------------------------------------------------
# Normalized bases
# ---------------------------------------------------------------------------

def _find(sols, exponent, log_index):
    for s in sols:
        if s.pivot == (mpq(exponent), log_index):
            return s
    raise GeometryError("expected solution with pivot (%s, %d) not found"
                        % (exponent, log_index))


def _require_log_free(sol, what):
    for row in sol.coeffs:
        if any(row[b] != 0 for b in range(1, 4)):
            raise GeometryError(
                "%s carries logarithmic terms; singularity type violated" % what)


def normalize_mum(basis):
    """Normalized basis at a MUM point: y_{j+1} = w_j / (2 pi i)^j where w_j
    has leading term log^j(u)/j!; the holomorphic y_1 has value 1."""
    if basis.kind != RAW:
        raise ValueError("normalize_mum expects a raw basis")
    exps = sorted(s.exponent for s in basis.solutions)
    if exps != [0, 0, 0, 0]:
        raise GeometryError("center is not a MUM point (exponents %s)" % exps)
    out = []
    for j in range(4):
        w = _find(basis.solutions, 0, j)
        out.append(LocalSolution(w.exponent, w.coeffs, w.truncation, w.pivot,
                                 (mpq(1), j, mpq(0))))
    return FrobeniusBasis(basis.center, tuple(out), MUM_NORMALIZED,
                          basis.local_op)


def _subtract_log_partner(sol, log_sol):
    """Remove removable logarithmic terms from a solution by subtracting a
    rational multiple of the unique log-bearing solution of the same ladder.

    When the exponent ladder is integer-spaced (n = 1, exponents 0, 1, 1, 2)
    the echelon-normalized solutions below the log pivot pick up log terms
    from the resonances; the Jordan structure guarantees those log parts are
    proportional to the log part of `log_sol`, so one exact subtraction
    clears them.  No-op for log-free solutions or non-integer shifts."""
    if all(row[b] == 0 for row in sol.coeffs for b in range(1, 4)):
        return sol
    shift = log_sol.exponent - sol.exponent
    if shift.denominator != 1:
        return sol
    d = int(shift)
    k0 = next(k for k, row in enumerate(sol.coeffs)
              if any(row[b] != 0 for b in range(1, 4)))
    b0 = next(b for b in range(1, 4) if sol.coeffs[k0][b] != 0)
    if not (0 <= k0 - d < len(log_sol.coeffs)) or \
            log_sol.coeffs[k0 - d][b0] == 0:
        return sol
    lam = sol.coeffs[k0][b0] / log_sol.coeffs[k0 - d][b0]
    upto = len(sol.coeffs) - 1 - abs(d)
    out = []
    for kk in range(upto + 1):
        row = list(sol.coeffs[kk])
        if 0 <= kk - d < len(log_sol.coeffs):
            lrow = log_sol.coeffs[kk - d]
            row = [row[b] - lam * lrow[b] for b in range(4)]
        out.append(row)
    return LocalSolution(sol.exponent, out, upto, sol.pivot, sol.prefactor)


def normalize_conifold(basis, n=None, k=None):
    """Normalized basis at a 1/nC point with exponents (0, k/n, k/n, 2k/n):
    y1 holomorphic with value 1; y2 = u^(k/n) + ... (the conifold period);
    y3 = (f3 + f2 log u)/(2 pi i zeta) with zeta = exp(2 pi i k/n);
    y4 = u^(2k/n) + ...."""
    if basis.kind != RAW:
        raise ValueError("normalize_conifold expects a raw basis")
    exps = tuple(sorted(s.exponent for s in basis.solutions))
    stype, n_found, k_found = classify_exponents(exps)
    if stype != "C_over_n":
        raise GeometryError("center is not a 1/nC point (exponents %s)" % (exps,))
    if n is not None and (n, k or k_found) != (n_found, k_found):
        raise GeometryError("expected 1/%dC, found exponents %s" % (n, exps))
    n, k = n_found, k_found
    e = mpq(k, n)
    y3 = _find(basis.solutions, e, 1)
    y1 = _subtract_log_partner(_find(basis.solutions, 0, 0), y3)
    _require_log_free(y1, "the holomorphic solution")
    y2 = _subtract_log_partner(_find(basis.solutions, e, 0), y3)
    _require_log_free(y2, "the conifold period")
    y4 = _subtract_log_partner(_find(basis.solutions, 2 * e, 0), y3)
    _require_log_free(y4, "the exponent-2k/n solution")
    sols = (
        LocalSolution(y1.exponent, y1.coeffs, y1.truncation, y1.pivot),
        LocalSolution(y2.exponent, y2.coeffs, y2.truncation, y2.pivot),
        LocalSolution(y3.exponent, y3.coeffs, y3.truncation, y3.pivot,
                      (mpq(1), 1, e)),
        LocalSolution(y4.exponent, y4.coeffs, y4.truncation, y4.pivot),
    )
    return FrobeniusBasis(basis.center, sols, CONIFOLD_NORMALIZED,
                          basis.local_op, n, k)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _mpq_to_mpf(q):
    return mp.mpf(q.numerator) / mp.mpf(q.denominator)


def to_mpc(t):
    """Coerce mpq/int/float/mpc to mpc at the current working precision."""
    if isinstance(t, mpq):
        return mp.mpc(_mpq_to_mpf(t))
    return mp.mpc(t)


def evaluate_basis(basis, t, dps, derivatives_up_to=3, radius=None):
    """Values and u-derivatives of the 4 basis solutions at t.

    Returns (matrix, error_estimate) with matrix[i,j] = j-th derivative of
    solution i at t (principal branches of log and powers of u = t - center).
    `radius` is the estimated convergence radius; evaluation refuses outside
    0.7 * radius, and the error estimate is the tail of the last 8 terms.
    """
    if basis.center == INFINITY:
        raise ValueError("evaluation at infinity-centered bases not supported")
    guard = 15
    with mp.workdps(dps + guard):
        u = to_mpc(t) - _mpq_to_mpf(basis.center)
        absu = abs(u)
        if radius is not None and absu > 0.7 * radius:
            raise PrecisionError(
                "evaluation point at %.3g of the convergence radius; "
                "subdivide the path" % (absu / radius,))
        logu = mp.log(u)
        logpows = [mp.mpf(1)]
        for b in range(1, 4):
            logpows.append(logpows[-1] * logu / b)
        rows = []
        err = mp.mpf(0)
        for sol in basis.solutions:
            pref = sol.prefactor_value(dps + guard)
            datas = [(sol.exponent, sol.coeffs)] + sol.derivative_data(
                derivatives_up_to)
            row = []
            for sigma, cs in datas[:derivatives_up_to + 1]:
                upow = u ** _mpq_to_mpf(mpq(sigma))
                acc = mp.mpc(0)
                tail = mp.mpf(0)
                uk = mp.mpc(1)
                for kk, crow in enumerate(cs):
                    term = mp.mpc(0)
                    for b in range(4):
                        if crow[b] != 0:
                            term += _mpq_to_mpf(crow[b]) * logpows[b]
                    contrib = term * uk
                    acc += contrib
                    if kk > len(cs) - 9:
                        tail += abs(contrib)
                    uk *= u
                row.append(acc * upow * pref)
                err = max(err, tail * abs(upow) * abs(pref))
            rows.append(row)
        matrix = mp.matrix(rows)
    return matrix, err


def frame_matrix(basis, t, dps, radius=None):
    """Columns = (y_i, y_i', y_i'', y_i''')^T per solution: the fundamental
    frame used by the continuation engine (coordinates c map to y = Phi c)."""
    vals, err = evaluate_basis(basis, t, dps, 3, radius)
    return vals.T, err


def apply_operator(local_op, sol, upto=None):
    """Exact residual of the operator applied to the truncated series.

    Returns {(k, b): coefficient} of u^(exponent+k) log^b/b! for k <= upto;
    the residual must vanish for k <= truncation (the recurrence guarantees
    it; this is the verification hook)."""
    N = sol.truncation if upto is None else upto
    res = {}
    for i, a in enumerate(local_op.theta_coeffs):
        if not a:
            continue
        for m, am in enumerate(a):
            if am == 0:
                continue
            for k, row in enumerate(sol.coeffs):
                if k + m > N:
                    break
                for b in range(4):
                    if row[b] == 0:
                        continue
                    # theta^i (u^(s+k) log^b/b!): binomial spread over log drops
                    e = sol.exponent + k
                    # theta e_{k,b} = e*e_{k,b} + e_{k,b-1}; iterate i times
                    vec = {b: row[b]}
                    for _ in range(i):
                        nxt = {}
                        for bb, cc in vec.items():
                            nxt[bb] = nxt.get(bb, mpq(0)) + e * cc
                            if bb > 0:
                                nxt[bb - 1] = nxt.get(bb - 1, mpq(0)) + cc
                        vec = nxt
                    for bb, cc in vec.items():
                        if cc != 0:
                            key = (k + m, bb)
                            res[key] = res.get(key, mpq(0)) + am * cc
    return {k: v for k, v in res.items() if v != 0}
