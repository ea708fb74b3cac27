"""Walk through the local analysis of a theta-form operator.

Parses the shipped operator 2.17, prints its Riemann scheme, and shows the
first terms of the normalized Frobenius solutions at the MUM point and at
the half-conifold point.

Run:  python3 demos/riemann_scheme_demo.py
"""

import mpmath as mp

from fuchsmon.fixtures import builtin_operator
from fuchsmon.frobenius import (default_order, evaluate_basis, frobenius_basis,
                                normalize_conifold, normalize_mum)
from fuchsmon.operators import riemann_scheme

op = builtin_operator("2.17")
print("operator:", op)
print()

scheme = riemann_scheme(op)
print("Riemann scheme (Fuchs relation holds: %s)" % scheme.fuchs_relation_holds)
for entry in scheme.entries:
    d = entry.to_dict()
    print("  t = %-8s %-8s exponents %s"
          % (d["location"], d["type"], ", ".join(d["exponents"])))
print()

order = default_order(30)
mum = normalize_mum(frobenius_basis(op, 0, order))
s = scheme.entries[1].location
con = normalize_conifold(frobenius_basis(op, s, order))

with mp.workdps(30):
    t = mp.mpf(1) / 4096
    print("normalized MUM solutions at t = 1/4096:")
    vals, _ = evaluate_basis(mum, t, 30)
    for j in range(4):
        print("  y%d = %s" % (j + 1, mp.nstr(vals[j, 0], 20)))
    print()
    print("normalized conifold solutions at the same point "
          "(f2 vanishes at t = %s):" % s)
    vals, _ = evaluate_basis(con, t, 30)
    for j in range(4):
        print("  f%d = %s" % (j + 1, mp.nstr(vals[j, 0], 20)))
