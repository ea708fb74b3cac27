"""Rationalized monodromy and the transition matrix for operator 2.17.

Builds the full pipeline at 60 digits: numeric monodromies in the Frobenius
frame, change of basis to the rational (Doran-Morgan style) basis, family
classification of the conifold monodromy, and recognition of transition
matrix entries as rational combinations of pi, log 2 and L-values.

Run:  python3 demos/rational_monodromy_demo.py   (about a minute)
"""

from fractions import Fraction

import mpmath as mp

from fuchsmon.dmbasis import Pipeline, qmatrix_str
from fuchsmon.fixtures import builtin_operator
from fuchsmon.lattice import recognize_constant
from fuchsmon.lseries import load_newform, special_values
from fuchsmon.fixtures import DATA_DIR

DIGITS = 60

op = builtin_operator("2.17")
pipe = Pipeline(op, target=Fraction(1, 256), digits=DIGITS)
print("operator 2.17, conifold point s = %s (1/%dC)" % (pipe.s, pipe.n))
print()

dm = pipe.dm
print("d_A =", dm.d_A)
print("M0 in the rational basis:")
for row in qmatrix_str(dm.M0_B_exact):
    print("   ", "  ".join("%6s" % e for e in row))
print("Ms in the rational basis:")
for row in qmatrix_str(dm.Ms_B_exact):
    print("   ", "  ".join("%6s" % e for e in row))
print()

fit = pipe.classify()
print("conifold monodromy shape:", fit.describe())
print()

f = load_newform(DATA_DIR / "8_1.txt")
sv = special_values(f, DIGITS)
T = pipe.transition_to_conifold()
with mp.workdps(DIGITS + 20):
    dictionary = [("pi", mp.pi), ("pi*L1", mp.pi * sv.L1),
                  ("pi*L2", mp.pi * sv.L2), ("log2", mp.log(2))]
    print("recognized entries of the transition matrix (row, col):")
    for i in range(4):
        for j in range(4):
            rec = recognize_constant(T[i, j], dictionary, field="Q[i]",
                                     dps=DIGITS)
            if rec.identified:
                print("  (%d,%d) = %s" % (i + 1, j + 1, rec.symbolic()))
