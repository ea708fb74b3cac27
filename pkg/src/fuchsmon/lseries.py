"""Special values of weight-4 newform L-series.

L(f,s) = sum c_n / n^s converges only for Re(s) > 5/2; the special values
L(f,1), L(f,2), L(f,3) are computed through the completed L-function

    Lambda(s) = (sqrt(N)/2 pi)^s Gamma(s) L(f,s),   Lambda(s) = eps Lambda(4-s)

by the standard approximate functional equation with incomplete-gamma
weights at the symmetric point:

    Lambda(s) = sum_n c_n [ (sqrt(N)/2 pi n)^s     Gamma(s,   2 pi n/sqrt(N))
                          + eps (sqrt(N)/2 pi n)^(4-s) Gamma(4-s, 2 pi n/sqrt(N)) ]

whose terms decay like exp(-2 pi n / sqrt(N)).  The functional-equation sign
eps is input data; a wrong sign shows up as a large residual in
functional_check (L(f,3) = (2 pi^2 / N) L(f,1) must hold).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path

import mpmath as mp

from .errors import ParseError, PrecisionError

WEIGHT = 4


@dataclass(frozen=True)
class Newform:
    level: int
    weight: int
    sign: int
    coeffs: tuple          # c_1 ... c_M, integers
    label: str = ""

    def c(self, n):
        return self.coeffs[n - 1]

    @property
    def ncoeffs(self):
        return len(self.coeffs)


@dataclass(frozen=True)
class SpecialValues:
    L1: object
    L2: object
    L3: object
    error_estimate: float


def _first_primes(limit):
    sieve = [True] * (limit + 1)
    out = []
    for p in range(2, limit + 1):
        if sieve[p]:
            out.append(p)
            for q in range(p * p, limit + 1, p):
                sieve[q] = False
    return out


def validate_newform(f, seed=0):
    """Structural sanity of coefficient data: c_1 = 1, multiplicativity on
    random coprime pairs, Deligne bound |c_p| <= 2 p^(3/2) at good primes."""
    if f.weight != WEIGHT:
        raise ParseError("only weight-4 forms are supported (got %d)" % f.weight)
    if f.sign not in (1, -1):
        raise ParseError("functional-equation sign must be +1 or -1")
    if not f.coeffs or f.coeffs[0] != 1:
        raise ParseError("coefficient data must be normalized with c_1 = 1")
    M = f.ncoeffs
    rng = random.Random(seed)
    checked = 0
    while checked < 5 and M >= 6:
        m = rng.randrange(2, int(math.isqrt(M)) + 1)
        n = rng.randrange(2, M // m + 1)
        if math.gcd(m, n) != 1:
            continue
        if f.c(m * n) != f.c(m) * f.c(n):
            raise ParseError(
                "coefficients fail multiplicativity: c_%d*c_%d != c_%d"
                % (m, n, m * n))
        checked += 1
    for p in _first_primes(min(M, 200)):
        if f.level % p == 0:
            continue
        if f.c(p) ** 2 > 4 * p ** 3:
            raise ParseError("c_%d = %d violates the Deligne bound" % (p, f.c(p)))
    return f


def load_newform(path, label=None, seed=0):
    """Read `N weight sign M` header then M integer coefficients."""
    path = Path(path)
    tokens = path.read_text().split()
    if len(tokens) < 4:
        raise ParseError("newform file %s: missing header" % path)
    try:
        N, weight, sign, M = (int(t) for t in tokens[:4])
        coeffs = tuple(int(t) for t in tokens[4:])
    except ValueError as exc:
        raise ParseError("newform file %s: non-integer token (%s)" % (path, exc))
    if len(coeffs) != M:
        raise ParseError("newform file %s: header promises %d coefficients, "
                         "found %d" % (path, M, len(coeffs)))
    f = Newform(N, weight, sign, coeffs, label or path.stem)
    return validate_newform(f, seed)


def required_coefficients(N, dps, margin=40):
    """Terms needed for a 10^-dps tail in the incomplete-gamma sums."""
    return int(math.ceil(dps * math.log(10) * math.sqrt(N) / (2 * math.pi))) + margin


def l_value(f, s, dps, nterms=None):
    """L(f,s) for any s (typically 1, 2 or 3) to dps digits."""
    need = required_coefficients(f.level, dps)
    if nterms is None:
        if f.ncoeffs < need:
            raise PrecisionError(
                "form %s has %d coefficients; %d are required for %d digits"
                % (f.label or f.level, f.ncoeffs, need, dps))
        nterms = need
    with mp.workdps(dps + 15):
        s = mp.mpf(s)
        rootN = mp.sqrt(f.level)
        X = rootN / (2 * mp.pi)
        total = mp.mpf(0)
        for n in range(1, nterms + 1):
            cn = f.c(n)
            if cn == 0:
                continue
            a = n / X
            term = (X / n) ** s * mp.gammainc(s, a) \
                + f.sign * (X / n) ** (WEIGHT - s) * mp.gammainc(WEIGHT - s, a)
            total += cn * term
        val = total / (X ** s * mp.gamma(s))
        return +val


def special_values(f, dps):
    """L(f,1), L(f,2), L(f,3) with a two-truncation error estimate."""
    L1 = l_value(f, 1, dps)
    L2 = l_value(f, 2, dps)
    L3 = l_value(f, 3, dps)
    short = min(f.ncoeffs, max(10, required_coefficients(f.level, dps) // 2))
    with mp.workdps(dps + 15):
        err = float(max(abs(L1 - l_value(f, 1, dps, nterms=short)),
                        mp.mpf(10) ** (-dps)))
    return SpecialValues(L1, L2, L3, err)


def completed_value(f, s, dps, split=1, nterms=None):
    """Lambda(s) via the theta-split at y = split/sqrt(N):

        Lambda(s) = sum c_n (X/n)^s Gamma(s, n*split/X)
                  + eps sum c_n (X/n)^(4-s) Gamma(4-s, n/(split*X))

    Independence of `split` is equivalent to the functional equation, so
    comparing two split values is a genuine modularity check of the
    coefficient data (the symmetric split=1 check alone is an algebraic
    identity when eps = +1)."""
    need = required_coefficients(f.level, dps) * (2 if split != 1 else 1)
    if nterms is None:
        nterms = min(f.ncoeffs, need)
    with mp.workdps(dps + 15):
        s = mp.mpf(s)
        split = mp.mpf(split)
        X = mp.sqrt(f.level) / (2 * mp.pi)
        total = mp.mpf(0)
        for n in range(1, nterms + 1):
            cn = f.c(n)
            if cn == 0:
                continue
            term = (X / n) ** s * mp.gammainc(s, n * split / X) \
                + f.sign * (X / n) ** (WEIGHT - s) \
                * mp.gammainc(WEIGHT - s, n / (split * X))
            total += cn * term
        return +total


def modularity_residual(f, dps, split=2):
    """|Lambda(2) at the asymmetric split - Lambda(2) at split 1|, relative.
    Small only if the coefficients really are modular of level N, sign eps."""
    with mp.workdps(dps + 15):
        a = completed_value(f, 2, dps, split=1)
        b = completed_value(f, 2, dps, split=split)
        return +(abs(a - b) / max(abs(a), mp.mpf(10) ** (-dps)))


def functional_check(f, dps):
    """|L(f,3) - (2 pi^2 / N) L(f,1)|; large residual flags bad data/sign."""
    with mp.workdps(dps + 15):
        L1 = l_value(f, 1, dps)
        L3 = l_value(f, 3, dps)
        return +abs(L3 - 2 * mp.pi ** 2 / f.level * L1)
