"""The 4-dimensional DNLS map as a Liouville-integrable system.

J has rank 2, so besides one invariant in involution we need the two
Casimirs.  Everything below is exact."""
from fractions import Fraction as F

from ybmaps.catalog import DNLS4, PairState
from ybmaps.verify import (
    check_casimirs,
    check_poisson_invariance,
    exact_rank,
    map_jacobian,
    poisson_bracket,
    poisson_matrix,
)

s = PairState((F(1), F(1)), (F(1), F(1)), None, (F(2), F(3)))
print("image:", DNLS4.evaluate(s))

J = poisson_matrix(DNLS4, s)
print("J =", J, " rank", exact_rank(J))
print("Jacobian:")
for row in map_jacobian(DNLS4, s):
    print("   ", [str(v) for v in row])
print("D J D^T == J:", check_poisson_invariance(DNLS4, s))
print("Casimirs ok:", check_casimirs(DNLS4, s))

I1, C1, C2 = (DNLS4.invariant(n) for n in ("I1", "C1", "C2"))
print("{I1, C1*C2} =", poisson_bracket(DNLS4, I1, lambda p, q, a, b: C1(p, q, a, b) * C2(p, q, a, b), s))
