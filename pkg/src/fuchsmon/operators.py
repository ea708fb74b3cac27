"""Order-4 Fuchsian operators in theta form, with exact local analysis.

An operator is stored as P = sum_i a_i(t) theta^i with theta = t*d/dt and the
a_i polynomials over exact rationals.  This module provides parsing of the
textual theta-form display, conversion between theta form and d/dt form,
exact variable changes (translation, scaling, t -> 1/t), indicial polynomials,
and Riemann schemes with singularity classification.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from gmpy2 import mpq

from . import _ratpoly as rp
from .errors import (
    IrregularSingularityError,
    OperatorSyntaxError,
    PolynomialDivisionError,
    ThetaDegreeError,
)

INFINITY = "inf"

ORDER = 4

# Stirling numbers of the second kind S2[i][j]: theta^i = sum_j S2[i][j] t^j d^j
_S2 = (
    (1,),
    (0, 1),
    (0, 1, 1),
    (0, 1, 3, 1),
    (0, 1, 7, 6, 1),
)

# Signed Stirling numbers of the first kind s1[j][l]:
# t^j d^j = theta (theta-1) ... (theta-j+1) = sum_l s1[j][l] theta^l
_S1 = (
    (1,),
    (0, 1),
    (0, -1, 1),
    (0, 2, -3, 1),
    (0, -6, 11, -6, 1),
)


def _fmt_q(q):
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%s/%s" % (q.numerator, q.denominator)


@dataclass(frozen=True)
class DifferentialOperator:
    """P = sum_{i=0}^{4} theta_coeffs[i](t) * theta^i, coefficients exact."""

    theta_coeffs: tuple
    variable_name: str = "t"

    def __post_init__(self):
        if len(self.theta_coeffs) != ORDER + 1:
            raise ValueError("need exactly 5 theta coefficients")
        coeffs = tuple(rp.ptrim(tuple(mpq(c) for c in p)) for p in self.theta_coeffs)
        if not coeffs[ORDER]:
            raise ValueError("theta^4 coefficient must not be the zero polynomial")
        object.__setattr__(self, "theta_coeffs", coeffs)

    # -- canonical form ---------------------------------------------------

    def canonical(self):
        """Divide out the common power of t and the common rational content,
        normalizing the sign so the leading theta^4 coefficient is positive."""
        vals = [rp.pvaluation(p) for p in self.theta_coeffs if p]
        m = min(vals)
        polys = [rp.pdiv_tpow(p, m) if p else () for p in self.theta_coeffs]
        from gmpy2 import gcd, lcm, mpz
        den = mpz(1)
        num = mpz(0)
        for p in polys:
            for c in p:
                den = lcm(den, c.denominator)
        for p in polys:
            for c in p:
                num = gcd(num, c.numerator * den // c.denominator)
        cont = mpq(num, den)
        if polys[ORDER][-1] < 0:
            cont = -cont
        polys = [rp.pscale(p, 1 / cont) if p else () for p in polys]
        return DifferentialOperator(tuple(polys), self.variable_name)

    # -- conversions -------------------------------------------------------

    def d_form(self):
        """Return (b_0..b_4) with P = sum_j b_j(t) (d/dt)^j."""
        b = [() for _ in range(ORDER + 1)]
        for i, a in enumerate(self.theta_coeffs):
            if not a:
                continue
            for j in range(i + 1):
                s = _S2[i][j]
                if s:
                    b[j] = rp.padd(b[j], rp.pmul_tpow(rp.pscale(a, s), j))
        return tuple(b)

    @staticmethod
    def from_d_form(b, variable_name="t"):
        """Build a theta-form operator from d/dt-form coefficients b_0..b_4.

        The operator is multiplied by the minimal power of t making the theta
        form polynomial (solution space on punctured neighbourhoods unchanged).
        """
        b = [rp.ptrim(p) for p in b]
        shift = 0
        for j, p in enumerate(b):
            if p:
                v = rp.pvaluation(p)
                shift = max(shift, j - v)
        a = [() for _ in range(ORDER + 1)]
        for j, p in enumerate(b):
            if not p:
                continue
            for k, c in enumerate(p):
                if c == 0:
                    continue
                # c * t^(k+shift) d^j = c * t^(k+shift-j) * (t^j d^j)
                tdeg = k + shift - j
                for l in range(j + 1):
                    s = _S1[j][l]
                    if s:
                        a[l] = rp.padd(a[l], rp.pmul_tpow((mpq(s) * c,), tdeg))
        return DifferentialOperator(tuple(a), variable_name).canonical()

    # -- variable changes --------------------------------------------------

    def translate(self, s):
        """Operator in u = t - s: solutions y(u + s). Exact."""
        s = rp.as_mpq(s)
        if s == 0:
            return self.canonical()
        b = self.d_form()
        return DifferentialOperator.from_d_form(
            tuple(rp.pshift(p, s) for p in b), self.variable_name)

    def scale(self, alpha):
        """Operator in u with t = alpha*u: solutions y(alpha*u). Exact;
        theta-form coefficients just get t -> alpha*t inside."""
        alpha = rp.as_mpq(alpha)
        if alpha == 0:
            raise ValueError("alpha must be nonzero")
        polys = []
        for p in self.theta_coeffs:
            polys.append(tuple(c * alpha ** k for k, c in enumerate(p)))
        return DifferentialOperator(tuple(polys), self.variable_name).canonical()

    def at_infinity(self):
        """Operator in u = 1/t (theta_t = -theta_u), renormalized to theta form."""
        m = max(rp.pdeg(p) for p in self.theta_coeffs if p)
        polys = []
        for i, p in enumerate(self.theta_coeffs):
            q = rp.preverse(p, m) if p else ()
            polys.append(rp.pscale(q, (-1) ** i) if q else ())
        return DifferentialOperator(tuple(polys), "u").canonical()

    def local_at(self, point):
        """Canonical operator in the local coordinate at `point` (or INFINITY)."""
        if point == INFINITY:
            return self.at_infinity()
        return self.translate(rp.as_mpq(point))

    # -- local analysis ----------------------------------------------------

    def is_fuchsian_at(self, point):
        loc = self.local_at(point)
        return rp.pvaluation(loc.theta_coeffs[ORDER]) == 0 or all(
            not p for p in loc.theta_coeffs[:ORDER])

    def indicial_polynomial(self, point):
        """Monic indicial polynomial at `point`, as a coefficient tuple.

        Roots (with multiplicity) are the local exponents; at an ordinary
        point this is X(X-1)(X-2)(X-3).
        """
        loc = self.local_at(point)
        a4 = loc.theta_coeffs[ORDER]
        if a4[0] == 0:
            raise IrregularSingularityError(
                "operator is not Fuchsian at %s" % (point,))
        lead = a4[0]
        return rp.ptrim(tuple(
            (p[0] if p else mpq(0)) / lead for p in loc.theta_coeffs))

    def is_ordinary_at(self, point):
        """Exact test: point is ordinary iff the local d/dt-form has an
        invertible leading coefficient after clearing the common t power."""
        loc = self.local_at(point)
        b = loc.d_form()
        vals = [rp.pvaluation(p) for p in b if p]
        g = min(vals)
        v4 = rp.pvaluation(b[ORDER])
        return v4 == g

    def singular_points(self):
        """Finite rational singularities (sorted) plus INFINITY if singular.

        Returns (points, leftover_degree) where leftover_degree > 0 signals
        additional singularities at irrational roots of the leading
        coefficient (reported but not analyzable exactly).
        """
        op = self.canonical()
        roots, rem = rp.rational_roots(op.theta_coeffs[ORDER])
        pts = set(r for r, _ in roots)
        pts.add(mpq(0))
        finite = sorted(p for p in pts if not op.is_ordinary_at(p))
        out = list(finite)
        if not op.is_ordinary_at(INFINITY):
            out.append(INFINITY)
        return out, max(rp.pdeg(rem), 0)

    def riemann_scheme(self):
        return riemann_scheme(self)

    # -- printing ----------------------------------------------------------

    def __str__(self):
        parts = []
        for i in range(ORDER, -1, -1):
            p = self.theta_coeffs[i]
            if not p:
                continue
            terms = []
            for k, c in enumerate(p):
                if c == 0:
                    continue
                factors = []
                if c != 1 or k == 0:
                    factors.append(_fmt_q(c) if c > 0 or c.denominator == 1
                                   else "(%s)" % _fmt_q(c))
                if k == 1:
                    factors.append(self.variable_name)
                elif k > 1:
                    factors.append("%s^%d" % (self.variable_name, k))
                terms.append("*".join(factors) if factors else "1")
            poly = " + ".join(terms)
            if i == 0:
                parts.append("(%s)" % poly)
            else:
                tpow = "T" if i == 1 else "T^%d" % i
                if len(terms) == 1 and "+" not in poly:
                    parts.append("%s*%s" % (poly, tpow) if poly != "1" else tpow)
                else:
                    parts.append("(%s)*%s" % (poly, tpow))
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def next_number(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return int(self.text[start:self.pos])


class _BiPoly(dict):
    """Sparse {(t_degree, theta_degree): mpq}; commutative normal form of the
    displayed theta-form expressions (t never appears to the right of theta
    in the supported input language)."""

    @staticmethod
    def const(c):
        return _BiPoly({(0, 0): mpq(c)}) if c else _BiPoly()

    def __add__(self, other):
        out = _BiPoly(self)
        for k, v in other.items():
            out[k] = out.get(k, mpq(0)) + v
            if out[k] == 0:
                del out[k]
        return out

    def __neg__(self):
        return _BiPoly({k: -v for k, v in self.items()})

    def __mul__(self, other):
        out = _BiPoly()
        for (a, b), u in self.items():
            for (c, d), w in other.items():
                k = (a + c, b + d)
                out[k] = out.get(k, mpq(0)) + u * w
                if out[k] == 0:
                    del out[k]
        return out

    def pow(self, n):
        out = _BiPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


def _parse_expr(tok):
    ch = tok.peek()
    neg = False
    if ch in "+-":
        neg = ch == "-"
        tok.pos += 1
    acc = _parse_term(tok)
    if neg:
        acc = -acc
    while True:
        ch = tok.peek()
        if ch not in ("+", "-"):
            break
        tok.pos += 1
        t = _parse_term(tok)
        acc = acc + (-t if ch == "-" else t)
    return acc


def _parse_term(tok):
    acc = _parse_power(tok)
    while True:
        ch = tok.peek()
        if ch == "*":
            tok.pos += 1
            acc = acc * _parse_power(tok)
        elif ch == "/":
            tok.pos += 1
            pos = tok.pos
            div = _parse_power(tok)
            if set(div) - {(0, 0)} or not div:
                raise PolynomialDivisionError(
                    "division by a non-constant expression at position %d" % pos)
            acc = acc * _BiPoly.const(1 / div[(0, 0)])
        else:
            return acc


def _parse_power(tok):
    base = _parse_atom(tok)
    if tok.peek() == "^":
        tok.pos += 1
        if tok.peek() is None or not tok.peek().isdigit():
            raise OperatorSyntaxError("expected integer exponent", tok.pos)
        n = tok.next_number()
        return base.pow(n)
    return base


def _parse_atom(tok):
    ch = tok.peek()
    if ch is None:
        raise OperatorSyntaxError("unexpected end of input", tok.pos)
    if ch == "(":
        tok.pos += 1
        inner = _parse_expr(tok)
        if tok.peek() != ")":
            raise OperatorSyntaxError("expected ')'", tok.pos)
        tok.pos += 1
        return inner
    if ch == "-":
        tok.pos += 1
        return -_parse_atom(tok)
    if ch.isdigit():
        return _BiPoly.const(tok.next_number())
    if ch == "t":
        tok.pos += 1
        return _BiPoly({(1, 0): mpq(1)})
    if ch == "T":
        tok.pos += 1
        return _BiPoly({(0, 1): mpq(1)})
    raise OperatorSyntaxError("unexpected character %r" % ch, tok.pos)


def parse_operator(text):
    """Parse a theta-form expression in t and T into a DifferentialOperator.

    The expression language: integers, t, T, +, -, *, / (by constants only),
    ^ with nonnegative integer exponents, parentheses.  parse-print-parse is
    a fixed point on expanded theta form.
    """
    tok = _Tokenizer(text)
    poly = _parse_expr(tok)
    if tok.peek() is not None:
        raise OperatorSyntaxError("trailing input", tok.pos)
    tdeg_max = max((k[1] for k in poly), default=0)
    if tdeg_max > ORDER:
        raise ThetaDegreeError("theta-degree %d exceeds 4" % tdeg_max)
    coeffs = [dict() for _ in range(ORDER + 1)]
    for (dt, dT), c in poly.items():
        coeffs[dT][dt] = c
    polys = []
    for d in coeffs:
        n = max(d, default=-1)
        polys.append(tuple(d.get(k, mpq(0)) for k in range(n + 1)))
    return DifferentialOperator(tuple(polys))


def parse_operator_file(text):
    """Ingestion format: one record per line, `name | expression`, `#` comments."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "|" not in line:
            raise OperatorSyntaxError(
                "line %d: expected 'name | expression'" % lineno, 0)
        name, expr = line.split("|", 1)
        out[name.strip()] = parse_operator(expr)
    return out


# ---------------------------------------------------------------------------
# Riemann scheme
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Singularity:
    """A singular point with its exponents and classification tag.

    stype is one of "MUM", "C_over_n", "other", "unclassified"; for C_over_n
    the pair (n, k) gives exponents (0, k/n, k/n, 2k/n)."""

    location: object           # mpq or INFINITY
    exponents: tuple           # sorted mpq, multiplicity included
    stype: str
    n: int = 0
    k: int = 0

    @property
    def type_name(self):
        if self.stype == "C_over_n":
            return {1: "C", 2: "halfC", 4: "quarterC"}.get(self.n, "C/%d" % self.n)
        return self.stype

    def to_dict(self):
        return {
            "location": _fmt_q(self.location) if self.location != INFINITY else "inf",
            "exponents": [_fmt_q(e) for e in self.exponents],
            "type": self.type_name,
        }


@dataclass(frozen=True)
class RiemannScheme:
    entries: tuple
    fuchs_relation_holds: bool
    unresolved_degree: int = 0

    def __getitem__(self, location):
        loc = location if location == INFINITY else rp.as_mpq(location)
        for e in self.entries:
            if e.location == loc:
                return e
        raise KeyError(location)

    def to_json(self):
        return json.dumps(
            {"singularities": [e.to_dict() for e in self.entries]},
            separators=(", ", ": "))


def classify_exponents(exponents, at_infinity=False):
    """Classification tag from the sorted exponent multiset.

    MUM: (0,0,0,0).  C_over_n: (0, k/n, k/n, 2k/n) with k/n > 0 in lowest
    terms.  The point at infinity is never classified beyond "other" (the
    corpus only uses classifications of finite points)."""
    e = sorted(exponents)
    if at_infinity:
        return ("other", 0, 0)
    if e == [0, 0, 0, 0]:
        return ("MUM", 0, 0)
    if len(e) == 4 and e[0] == 0 and e[1] == e[2] and e[1] > 0 and e[3] == 2 * e[1]:
        q = mpq(e[1])
        return ("C_over_n", int(q.denominator), int(q.numerator))
    return ("other", 0, 0)


def riemann_scheme(op):
    """All singularities with exponents, classification, and the Fuchs check."""
    op = op.canonical()
    points, leftover = op.singular_points()
    entries = []
    total = mpq(0)
    all_rational = leftover == 0
    for p in points:
        ind = op.indicial_polynomial(p)
        roots, rem = rp.rational_roots(ind)
        if rp.ptrim(rem) and rp.pdeg(rem) > 0:
            entries.append(Singularity(p, tuple(sorted(r for r, m in roots
                                                       for _ in range(m))),
                                       "unclassified"))
            all_rational = False
            continue
        exps = tuple(sorted(r for r, m in roots for _ in range(m)))
        total += sum(exps)
        stype, n, k = classify_exponents(exps, at_infinity=(p == INFINITY))
        entries.append(Singularity(p, exps, stype, n, k))
    nsing = len(points)
    fuchs = all_rational and total == 6 * (nsing - 2)
    return RiemannScheme(tuple(entries), fuchs, leftover)
