"""Walk through the catalog: evaluate each map once, then test the YB
equation and the Lax refactorisation on a handful of random rational points."""
from fractions import Fraction as F

from ybmaps import REGISTRY, PairState, get_map
from ybmaps.lax import build_lax, check_refactorisation
from ybmaps.verify import run_check, sample_state, to_jsonable

# Adler-Yamilov at the textbook point: the image is exact.
ay = get_map("adler-yamilov")
s = PairState((F(1), F(0)), (F(0), F(0)), None, (F(2), F(1)))
img = ay.evaluate(s)
print("adler-yamilov", to_jsonable(s.x + s.y), "->", to_jsonable(img.x + img.y))

# Its Lax matrix, and the identity L(u;a)L(v;b) = L(y;b)L(x;a) behind it.
print("L(x;a) =", build_lax("nls", s.x, s.params[0]))
print("refactorises:", check_refactorisation(ay, "nls", s))

print()
for desc in REGISTRY:
    yb = run_check(desc, "yb", 20, seed=1)
    lax = run_check(desc, "lax", 20, seed=1)
    print(f"{desc.name:16s} dim={desc.dim}  yb {yb.status:7s} lax {lax.status}")

# A sampled 6-dimensional state and its image.
nls6 = get_map("nls6")
s = sample_state(nls6, seed=3, index=0)
print("\nnls6", to_jsonable(s.coords()), "->", to_jsonable(nls6.evaluate(s).coords()))
