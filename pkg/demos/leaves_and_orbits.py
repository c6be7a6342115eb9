"""Quadratic invariant leaves force square roots, so the implicit maps live
in floating point.  Staying on one root matters; so does precision on long
orbits."""
from fractions import Fraction as F

import mpmath

from ybmaps.catalog import PairState
from ybmaps.errors import NearSingularAbort
from ybmaps.leaves import implicit_yb_residuals, iterate_orbit, max_drift, solve_dnls_leaf

print("roots of X - X^2 x1 x2 = -2 at x = (1, 1):", solve_dnls_leaf(1.0, 1.0, -2.0))

for kind in ("dnls", "dihedral"):
    same = implicit_yb_residuals(kind, 50, seed=0)
    mixed = implicit_yb_residuals(kind, 50, seed=0, branch=("plus", "minus"), strict=False)
    print(f"{kind:9s} YB residual, one branch: {same['max']:.1e}   mixed branches: {mixed['max']:.1e}")

start = PairState((F(1, 3), F(1, 5)), (F(1, 7), F(1, 2)), None, (F(2), F(1)))
print("\ndnls4, 10^4 steps in binary64, max drift:",
      ["%.1e" % d for d in max_drift(iterate_orbit("dnls4", start, 10_000))])
try:
    iterate_orbit("adler-yamilov", start, 10_000)
except NearSingularAbort as e:
    print("adler-yamilov in binary64:", e)
recs = iterate_orbit("adler-yamilov", start, 10_000, arithmetic="mp", dps=40)
print("adler-yamilov with 40 digits, max drift:", ["%.1e" % float(d) for d in max_drift(recs)])
peak = max(abs(c) for r in recs for c in r.state.coords())
print("largest coordinate reached:", mpmath.nstr(peak, 3), "(beyond binary64)")
