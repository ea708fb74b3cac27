"""Monodromy images of the conifold period, Q-span rank detection, and
recognition of constants against a named dictionary.

The central objects are the values M(f_c)(s): the conifold period f_c is
transported around a word in the monodromy generators and evaluated back at
the singularity s, where only the analytic solution survives.  Each value is
computed through the rational-matrix sandwich

    M(f_c)(s) = e1^T . T^B_{F_c} . W^B . T^{F_c}_B . e2

with W^B the exact rational word matrix, and can be cross-checked against a
fully numeric continuation.  Integer-relation detection (PSLQ for real
vectors, LLL on a scaled lattice for simultaneous real/imaginary relations)
then determines the rank of the Q-span and recognizes individual entries as
combinations of named constants over Q, Q[i] or Q[sqrt2, i].
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .dmbasis import qmat, qmat_mul, qmat_pow, qmat_to_mp
from .errors import PrecisionError, RecognitionError
from .frobenius import to_mpc, _mpq_to_mpf

IDENTITY_WORD = ()


# ---------------------------------------------------------------------------
# Words in the monodromy generators
# ---------------------------------------------------------------------------

def word_label(word):
    if not word:
        return "Id"
    return "*".join("%s^%d" % (g, e) if e != 1 else g for g, e in word)


def qmat_inv(A):
    """Exact inverse of a 4x4 Gaussian-rational matrix (mpq-pair entries),
    by Gauss-Jordan elimination over Q(i)."""
    def sub(a, b):
        return (a[0] - b[0], a[1] - b[1])

    def mul(a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def inv(a):
        d = a[0] * a[0] + a[1] * a[1]
        return (a[0] / d, -a[1] / d)

    work = [list(A[i]) + [qmat([[1 if r == c else 0 for c in range(4)]
                                for r in range(4)])[i][j] for j in range(4)]
            for i in range(4)]
    for col in range(4):
        piv = next((r for r in range(col, 4)
                    if work[r][col][0] or work[r][col][1]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        pinv = inv(work[col][col])
        work[col] = [mul(pinv, e) for e in work[col]]
        for r in range(4):
            if r != col and (work[r][col][0] or work[r][col][1]):
                f = work[r][col]
                work[r] = [sub(a, mul(f, b))
                           for a, b in zip(work[r], work[col])]
    return [row[4:] for row in work]


def word_matrix(dm, word):
    """Exact Gaussian-rational matrix of a generator word in B-coordinates.

    `word` is a sequence of (generator, exponent) pairs with generator in
    {"M0", "Ms"}; the empty word is the identity."""
    gens = {"M0": qmat(dm.M0_B_exact), "Ms": qmat(dm.Ms_B_exact)}
    out = qmat([[1 if i == j else 0 for j in range(4)] for i in range(4)])
    for g, e in word:
        if g not in gens:
            raise ValueError("unknown generator %r" % (g,))
        base = gens[g] if e >= 0 else qmat_inv(gens[g])
        out = qmat_mul(out, qmat_pow(base, abs(e)))
    return out


def power_words(lo, hi):
    """Words M0^n for n in [lo, hi] (the L^0 sampling set)."""
    return [(("M0", n),) if n else IDENTITY_WORD for n in range(lo, hi + 1)]


def enumerate_words(maxlen):
    """All words of length <= maxlen over {M0^(+-1), Ms^(+-1)}, without
    immediate cancellation, in deterministic order."""
    letters = [("M0", 1), ("M0", -1), ("Ms", 1), ("Ms", -1)]
    out = [IDENTITY_WORD]
    frontier = [IDENTITY_WORD]
    for _ in range(maxlen):
        nxt = []
        for w in frontier:
            for g, e in letters:
                if w and w[-1][0] == g and w[-1][1] == -e:
                    continue
                nxt.append(w + ((g, e),))
        out.extend(nxt)
        frontier = nxt
    return out


def random_words(count, maxlen, seed):
    """Seeded random words over both generators (lengths 1..maxlen)."""
    rng = random.Random(seed)
    letters = [("M0", 1), ("M0", -1), ("Ms", 1), ("Ms", -1)]
    out = []
    for _ in range(count):
        w = tuple(rng.choice(letters) for _ in range(rng.randint(1, maxlen)))
        out.append(w)
    return out


# ---------------------------------------------------------------------------
# Period groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodGroup:
    values: tuple            # ((word, mpc value), ...)
    scope: str               # "L0" or "Lfull"
    s: object                # singular location (exact rational)
    digits: int
    seed: object = None      # seed used for random word sampling, if any

    def numbers(self):
        return [v for _, v in self.values]

    def labels(self):
        return [word_label(w) for w, _ in self.values]


def conifold_values(pipe, words, scope=None, seed=None):
    """M_w(f_c)(s) for each word, via the rational sandwich formula."""
    if scope is None:
        scope = "L0" if all(all(g == "M0" for g, _ in w) for w in words) \
            else "Lfull"
    vals = []
    for w in words:
        Q = word_matrix(pipe.dm, w)
        vals.append((tuple(w), pipe.conifold_value(qmat_to_mp(Q))))
    return PeriodGroup(tuple(vals), scope, pipe.s, pipe.digits, seed)


def direct_word_value(pipe, word):
    """M_w(f_c)(s) by fully numeric continuation: conjugate the numeric
    F_m-frame monodromies into F_c coordinates without any rationalization.
    Independent cross-check of the sandwich formula."""
    with mp.workdps(pipe.work):
        T = pipe.transition_between_frobenius()   # F_c coords -> F_m coords
        M = mp.eye(4)
        gens = {"M0": pipe.M0_fm, "Ms": pipe.Ms_fm}
        for g, e in word:
            M = M * gens[g] ** int(e)
        Mfc = T ** -1 * (M * T)
        return +(Mfc * mp.matrix([0, 1, 0, 0]))[0]


# ---------------------------------------------------------------------------
# Integer-relation detection
# ---------------------------------------------------------------------------

def integer_relation(reals, precision, coeff_bound=10 ** 6):
    """One integer relation among real numbers, or None at this bound.

    Refuses up front when the working precision cannot support the requested
    coefficient bound (heuristic: 2 log10(bound) digits per value plus a
    40-digit safety belt)."""
    n = len(reals)
    if n < 2:
        raise ValueError("need at least two values")
    import math
    need = int(2 * math.log10(coeff_bound) * n + 40)
    if precision < need:
        raise PrecisionError(
            "integer relation at bound %g over %d values needs >= %d digits "
            "(have %d)" % (coeff_bound, n, need, precision))
    with mp.workdps(precision):
        xs = [mp.mpf(x) if not isinstance(x, mp.mpf) else x for x in reals]
        tol = mp.mpf(10) ** (-(precision - 30))
        scale = max(abs(x) for x in xs)
        if scale == 0:
            return (1,) + (0,) * (n - 1)
        for i, x in enumerate(xs):
            # pslq rejects zero entries; a vanishing value is its own relation
            if abs(x) < tol * scale:
                return tuple(1 if j == i else 0 for j in range(n))
        rel = mp.pslq(xs, maxcoeff=int(coeff_bound), maxsteps=10 ** 6,
                      tol=tol)
        if rel is None:
            return None
        resid = abs(mp.fsum(r * x for r, x in zip(rel, xs)))
        if resid > mp.mpf(10) ** (-(precision - 30)) or \
                max(abs(r) for r in rel) > coeff_bound:
            return None
        return tuple(int(r) for r in rel)


def _lll_relations(values, precision, coeff_bound=10 ** 6):
    """Integer rows a with |sum a_i v_i| tiny, for complex v_i, found by LLL
    on the scaled-identity lattice with separate real and imaginary columns.

    Returns (accepted, borderline): lists of (row, residual)."""
    n = len(values)
    with mp.workdps(precision + 20):
        vals = [to_mpc(v) for v in values]
        C = mp.mpf(10) ** (precision - 40)
        rows = []
        for i, v in enumerate(vals):
            row = [1 if j == i else 0 for j in range(n)]
            row.append(int(mp.nint(C * v.real)))
            row.append(int(mp.nint(C * v.imag)))
            rows.append([ZZ(x) for x in row])
        dm = DomainMatrix(rows, (n, n + 2), ZZ)
        red = dm.lll().to_list()
        thr = mp.mpf(10) ** (-(precision - 30))
        accepted, borderline = [], []
        for row in red:
            a = [int(x) for x in row[:n]]
            if all(x == 0 for x in a) or \
                    max(abs(x) for x in a) > coeff_bound:
                continue
            resid = abs(mp.fsum(ai * v for ai, v in zip(a, vals)))
            if resid < thr:
                accepted.append((tuple(a), resid))
            elif resid < thr * 10 ** 3:
                borderline.append((tuple(a), resid))
    return accepted, borderline


def _row_space_rank(rows, n):
    """Rank of integer rows via exact fraction-free elimination."""
    mat = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    pivots = []
    while rank < len(mat) and col < n:
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col] / mat[rank][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        pivots.append(col)
        rank += 1
        col += 1
    return rank, pivots


# ---------------------------------------------------------------------------
# Rank of the Q-span
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeReport:
    rank: object             # int, or (lo, hi) when uncertain
    uncertain: bool
    relation_basis: tuple    # independent integer relation rows
    generators: tuple        # indices of values forming a Q-basis
    words: tuple             # labels, parallel to the group's values
    commensurability: object = None   # {label: (c1, c2)} against Lambda_f
    seed: object = None

    def as_dict(self):
        return {"rank": list(self.rank) if isinstance(self.rank, tuple)
                else self.rank,
                "uncertain": self.uncertain,
                "relations": [list(r) for r in self.relation_basis],
                "generators": list(self.generators),
                "words": list(self.words),
                "commensurability": self.commensurability,
                "seed": self.seed}


def q_span_rank(group, precision=None, coeff_bound=10 ** 6):
    """Rank of the Q-span of the group's values inside C.

    A relation must annihilate real and imaginary parts simultaneously; the
    rank is #values - #independent relations.  Borderline relations (residual
    within 10^3 of the acceptance threshold) make the rank an interval."""
    if precision is None:
        precision = group.digits
    values = group.numbers()
    n = len(values)
    accepted, borderline = _lll_relations(values, precision, coeff_bound)
    rel_rows = [a for a, _ in accepted]
    nullity, pivots = _row_space_rank(rel_rows, n)
    rank = n - nullity
    uncertain = bool(borderline)
    if uncertain:
        extra, _ = _row_space_rank(rel_rows + [a for a, _ in borderline], n)
        rank_out = (n - extra, rank)
    else:
        rank_out = rank
    # generators: non-pivot indices of the echelonized relation rows
    gens = tuple(i for i in range(n) if i not in pivots)[:rank]
    return LatticeReport(rank_out, uncertain, tuple(rel_rows), gens,
                         tuple(group.labels()), seed=group.seed)


def commensurability_factors(group, L1, L2_over_2pii, precision=None,
                             coeff_bound=10 ** 4):
    """Match each value against Lambda_f = L(f,1) Z + (L(f,2)/2 pi i) Z:
    v = c1 L(f,1) + c2 L(f,2)/(2 pi i) with rational c (None if no match)."""
    if precision is None:
        precision = group.digits
    out = {}
    for w, v in group.values:
        if abs(v) < mp.mpf(10) ** (-(precision - 30)):
            out[word_label(w)] = (0, 0)
            continue
        acc, _ = _lll_relations([v, L1, L2_over_2pii], precision, coeff_bound)
        match = None
        for a, _resid in acc:
            if a[0] != 0:
                c1 = Fraction(-a[1], a[0])
                c2 = Fraction(-a[2], a[0])
                match = (str(c1), str(c2))
                break
        out[word_label(w)] = match
    return out


# ---------------------------------------------------------------------------
# Constant recognition over Q, Q[i], Q[sqrt2, i]
# ---------------------------------------------------------------------------

FIELD_BASES = {
    "Q": ("1",),
    "Q[i]": ("1", "i"),
    "Q[sqrt2,i]": ("1", "i", "sqrt2", "sqrt2*i"),
}


def _field_basis_values(field, dps):
    with mp.workdps(dps):
        table = {"1": mp.mpc(1), "i": mp.mpc(0, 1),
                 "sqrt2": mp.mpc(mp.sqrt(2)),
                 "sqrt2*i": mp.mpc(0, 1) * mp.sqrt(2)}
        return [(b, table[b]) for b in FIELD_BASES[field]]


@dataclass(frozen=True)
class Recognition:
    combination: tuple       # ((constant name, basis element, Fraction), ...)
    field: str
    residual: float
    ambiguous: bool = False
    alternatives: tuple = ()

    @property
    def identified(self):
        return True

    def symbolic(self):
        if not self.combination:
            return "0"
        parts = []
        for name, b, q in self.combination:
            factor = "%s" % q if b == "1" else "(%s)*%s" % (q, b)
            parts.append("%s*%s" % (factor, name) if name != "1" else factor)
        return " + ".join(parts)


@dataclass(frozen=True)
class Unidentified:
    value: str
    field: str

    @property
    def identified(self):
        return False

    def symbolic(self):
        return "unidentified"


def recognize_constant(x, dictionary, field="Q", bound=10 ** 4, dps=None):
    """Express x as a field-linear combination of named constants.

    dictionary: sequence of (name, high-precision value); "1" may be included
    for affine terms.  Returns Recognition (deterministic minimal-height
    tie-break; ambiguous fits report all minimal candidates) or Unidentified.
    """
    if field not in FIELD_BASES:
        raise ValueError("field must be one of %s" % (sorted(FIELD_BASES),))
    if dps is None:
        dps = mp.mp.dps
    with mp.workdps(dps):
        x = to_mpc(x)
        thr = mp.mpf(10) ** (-(dps - 30))
        if abs(x) < thr:
            return Recognition((), field, float(abs(x)))
        basis = _field_basis_values(field, dps)
        columns = [("__x__", "1", x)]
        for name, val in dictionary:
            for b, bval in basis:
                columns.append((name, b, to_mpc(val) * bval))
        values = [c[2] for c in columns]
        accepted, borderline = _lll_relations(values, dps, bound)
        candidates = []
        for a, resid in accepted:
            if a[0] == 0:
                continue
            combo = tuple((columns[j][0], columns[j][1],
                           Fraction(-a[j], a[0]))
                          for j in range(1, len(a)) if a[j])
            height = sum(abs(q.numerator) + abs(q.denominator)
                         for _, _, q in combo)
            candidates.append((height, combo, float(resid)))
        if not candidates:
            return Unidentified(mp.nstr(x, min(dps, 30)), field)
        candidates.sort(key=lambda t: (t[0], t[1]))
        seen, distinct = set(), []
        for h, combo, resid in candidates:
            if combo in seen:
                continue
            seen.add(combo)
            distinct.append((h, combo, resid))
        best = distinct[0]
        ties = [d for d in distinct[1:] if d[0] == best[0]]
        return Recognition(best[1], field, best[2], ambiguous=bool(ties),
                           alternatives=tuple(t[1] for t in ties))


# ---------------------------------------------------------------------------
# Closed-form predictions from the constrained transition shape
# ---------------------------------------------------------------------------

def tr1_word_value(T, Q_exact, params, dps):
    """Predicted M(f_c)(s) for a family-1 transition matrix T^{F_c}_B and an
    exact rational word matrix Q in B-coordinates:

        alpha * ((-K o q21 - (o+2) q41 - o q31) t24
                 + (g (K q21 + q31 + q41) + 2 q21) t44)

    with alpha = t23 / (2 g (t24 t41 - t21 t44))."""
    with mp.workdps(dps):
        K = _mpq_to_mpf(params["K"])
        g = _mpq_to_mpf(params["g"])
        o = _mpq_to_mpf(params["o"])
        t21, t41 = T[1, 0], T[3, 0]
        t23, t24, t44 = T[1, 2], T[1, 3], T[3, 3]
        q21 = qmat_to_mp(Q_exact)[1, 0]
        q31 = qmat_to_mp(Q_exact)[2, 0]
        q41 = qmat_to_mp(Q_exact)[3, 0]
        alpha = t23 / (2 * g * (t24 * t41 - t21 * t44))
        return +(alpha * ((-K * o * q21 - (o + 2) * q41 - o * q31) * t24
                          + (g * (K * q21 + q31 + q41) + 2 * q21) * t44))


def tr1_alpha(T, params, dps):
    """The scaling factor alpha = t23 / (2 g (t24 t41 - t21 t44))."""
    with mp.workdps(dps):
        g = _mpq_to_mpf(params["g"])
        return +(T[1, 2] / (2 * g * (T[1, 3] * T[3, 0] - T[1, 0] * T[3, 3])))
