"""Exact rational polynomial arithmetic on dense coefficient lists.

Polynomials are tuples/lists of ``gmpy2.mpq`` in increasing degree order;
the zero polynomial is the empty tuple.  Everything here is plumbing for
the operator and Frobenius modules, which need exact arithmetic end to end.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz

ZERO = mpq(0)
ONE = mpq(1)


def as_mpq(x):
    """Coerce ints, Fractions, strings like '1/256' (but not floats) to mpq."""
    if isinstance(x, float):
        raise TypeError("floating-point coefficients are not allowed; use exact rationals")
    return mpq(x)


def ptrim(p):
    """Strip trailing zero coefficients; canonical representation of 0 is ()."""
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def pdeg(p):
    """Degree, with deg 0 = -1 by convention."""
    return len(ptrim(p)) - 1


def padd(p, q):
    n = max(len(p), len(q))
    return ptrim([(p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO)
                  for i in range(n)])


def pneg(p):
    return tuple(-c for c in p)


def psub(p, q):
    return padd(p, pneg(q))


def pscale(p, c):
    c = as_mpq(c)
    if c == 0:
        return ()
    return tuple(c * a for a in p)


def pmul(p, q):
    p, q = ptrim(p), ptrim(q)
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return ptrim(out)


def peval(p, x):
    """Evaluate by Horner; x may be mpq or any ring element accepting mpq ops."""
    acc = x * 0  # zero of the right type
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pshift(p, s):
    """Taylor shift: return q with q(u) = p(u + s), exact.

    Repeated synthetic division: p(t) = (t - s) b(t) + r gives the Taylor
    coefficients of p at s one at a time.
    """
    s = as_mpq(s)
    if s == 0:
        return ptrim(p)
    a = list(ptrim(p))
    res = []
    while a:
        b = [ZERO] * (len(a) - 1)
        r = a[-1]
        for i in reversed(range(len(a) - 1)):
            b[i] = r
            r = a[i] + r * s
        res.append(r)
        a = b
    return ptrim(res)


def pderiv(p):
    return ptrim([mpq(i) * p[i] for i in range(1, len(p))])


def ppow(p, k):
    out = (ONE,)
    base = ptrim(p)
    while k:
        if k & 1:
            out = pmul(out, base)
        base = pmul(base, base)
        k >>= 1
    return out


def pmul_tpow(p, k):
    """Multiply by t^k."""
    p = ptrim(p)
    if not p:
        return ()
    return (ZERO,) * k + tuple(p)


def pvaluation(p):
    """Order of vanishing at 0; +inf (None) for the zero polynomial."""
    p = tuple(p)
    for i, c in enumerate(p):
        if c != 0:
            return i
    return None


def pdiv_tpow(p, k):
    """Exact division by t^k (requires valuation >= k)."""
    p = ptrim(p)
    if not p:
        return ()
    assert all(c == 0 for c in p[:k]), "not divisible by t^%d" % k
    return ptrim(p[k:])


def preverse(p, n):
    """Coefficient reversal to length n+1: q(t) = t^n p(1/t). Requires deg p <= n."""
    p = ptrim(p)
    assert len(p) <= n + 1
    padded = list(p) + [ZERO] * (n + 1 - len(p))
    return ptrim(padded[::-1])


def content(p):
    """Positive rational c such that p/c has coprime integer coefficients."""
    from gmpy2 import gcd, lcm
    p = ptrim(p)
    if not p:
        return ONE
    den = mpz(1)
    for c in p:
        den = lcm(den, c.denominator)
    num = mpz(0)
    for c in p:
        num = gcd(num, c.numerator * den // c.denominator)
    return mpq(num, den)


def rational_roots(p):
    """All rational roots of p with multiplicities.

    Returns (roots, remainder) where roots is a list of (mpq root, multiplicity)
    and remainder is the rational-root-free cofactor polynomial.
    """
    from gmpy2 import divexact
    p = ptrim(p)
    if not p:
        raise ValueError("zero polynomial")
    c = content(p)
    q = [x / c for x in p]  # integer, coprime coefficients
    roots = []
    # strip roots at 0
    v = pvaluation(q)
    if v:
        roots.append((ZERO, v))
        q = list(pdiv_tpow(q, v))
    # candidate roots a/b: a | q[0], b | q[-1]
    def divisors(n):
        n = abs(int(n))
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                if d != n // d:
                    out.append(n // d)
            d += 1
        return sorted(out)

    changed = True
    while changed and len(q) > 1:
        changed = False
        a0, lead = q[0], q[-1]
        cands = set()
        for a in divisors(a0):
            for b in divisors(lead):
                cands.add(mpq(a, b))
                cands.add(mpq(-a, b))
        for r in sorted(cands):
            if peval(q, r) == 0:
                mult = 0
                while peval(q, r) == 0 and len(q) > 1:
                    # deflate by (t - r)
                    b = [ZERO] * (len(q) - 1)
                    rem = q[-1]
                    for i in reversed(range(len(q) - 1)):
                        b[i] = rem
                        rem = q[i] + rem * r
                    assert rem == 0
                    q = b
                    mult += 1
                roots.append((r, mult))
                changed = True
                break
    return roots, ptrim(q)
