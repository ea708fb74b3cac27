"""Q-span rank of the monodromy orbit of the conifold period.

For operator 2.17 the values M_w(f_c)(s), w ranging over words in the two
monodromy generators, span a rank-2 lattice over Q, commensurable with
L(f,1) Z + (L(f,2)/2 pi i) Z for the attached weight-4 newform of level 8.

Run:  python3 demos/conifold_period_rank_demo.py   (about a minute)
"""

from fractions import Fraction

import mpmath as mp

from fuchsmon.dmbasis import Pipeline
from fuchsmon.fixtures import DATA_DIR, builtin_operator
from fuchsmon.lattice import (commensurability_factors, conifold_values,
                              power_words, q_span_rank)
from fuchsmon.lseries import load_newform, special_values

DIGITS = 120

op = builtin_operator("2.17")
pipe = Pipeline(op, target=Fraction(1, 256), digits=DIGITS)
f = load_newform(DATA_DIR / "8_1.txt")
sv = special_values(f, DIGITS)

group = conifold_values(pipe, power_words(-3, 3))
print("values M0^n(f_c)(%s), n = -3..3:" % pipe.s)
for label, v in zip(group.labels(), group.numbers()):
    print("  %-6s %s" % (label, mp.nstr(v, 25)))
print()

rep = q_span_rank(group, precision=DIGITS)
print("rank of the Q-span:", rep.rank)
print("independent relations:")
for rel in rep.relation_basis:
    print("  ", rel)
print()

with mp.workdps(DIGITS + 20):
    fac = commensurability_factors(group, mp.mpc(sv.L1),
                                   mp.mpc(sv.L2) / (2j * mp.pi),
                                   precision=DIGITS)
print("decomposition over L(f,1) and L(f,2)/(2 pi i):")
for label, c in fac.items():
    print("  %-6s %s" % (label, c))
