"""Yang-Baxter maps obtained from Darboux matrices, with invariants and Poisson data.

Every map is stored in "half-point" form: ``step(p, q, a, b) -> (p', q')``
where ``p`` and ``q`` are tuples holding one factor of ``A x A`` each,
e.g. ``(x1, x2)`` for the 4-dimensional maps, ``(x1, x2, X)`` for the
6-dimensional ones and ``(x1-block..., x2-block...)`` for the vector maps.
The step functions use only ``+ - * /`` so they evaluate equally on
Fractions, Duals, floats and mpmath numbers.

Denominators are declared as guards and checked before the step runs.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

from .errors import SingularLocusError, UnknownNameError
from .exact import value_of


class SingularParameterError(SingularLocusError):
    pass


@dataclass(frozen=True)
class PairState:
    x: tuple
    y: tuple
    aux: tuple | None = None
    params: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "y", tuple(self.y))
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have the same length")
        if self.aux is not None:
            object.__setattr__(self, "aux", tuple(self.aux))
        if self.params is not None:
            object.__setattr__(self, "params", tuple(self.params))

    def halves(self):
        p, q = self.x, self.y
        if self.aux is not None:
            p, q = p + (self.aux[0],), q + (self.aux[1],)
        a, b = self.params if self.params is not None else (None, None)
        return p, q, a, b

    @classmethod
    def from_halves(cls, p, q, n_aux: int = 0, params=None) -> "PairState":
        if n_aux:
            return cls(tuple(p[:-1]), tuple(q[:-1]), (p[-1], q[-1]), params)
        return cls(tuple(p), tuple(q), None, params)

    def coords(self) -> tuple:
        p, q, _, _ = self.halves()
        return p + q


@dataclass(frozen=True)
class PoissonStructure:
    """``matrix(p, q, a, b)`` returns J over the coordinates ``p + q``."""

    matrix: Callable
    rank: int


@dataclass(frozen=True)
class MapDescriptor:
    name: str
    half_dim: int
    n_aux: int
    param_arity: int
    step: Callable
    guards: tuple = ()
    invariants: tuple = ()
    poisson: PoissonStructure | None = None
    casimirs: tuple = ()
    involutive: bool = False
    reversible: bool | None = None
    lax: str | None = None
    n: int | None = None
    notes: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self) -> int:
        return 2 * self.half_dim

    @property
    def parametric(self) -> bool:
        return self.param_arity > 0

    def check_guards(self, p, q, a=None, b=None):
        for label, fn, exc in self.guards:
            if value_of(fn(p, q, a, b)) == 0:
                raise exc(label)

    def guard_values(self, p, q, a=None, b=None) -> list[tuple[str, object]]:
        return [(label, fn(p, q, a, b)) for label, fn, _ in self.guards]

    def apply(self, p, q, a=None, b=None):
        p, q = tuple(map(_promote, p)), tuple(map(_promote, q))
        a, b = _promote(a), _promote(b)
        self.check_guards(p, q, a, b)
        u, v = self.step(p, q, a, b)
        return tuple(u), tuple(v)

    def evaluate(self, state: PairState) -> PairState:
        p, q, a, b = state.halves()
        u, v = self.apply(p, q, a, b)
        return PairState.from_halves(u, v, self.n_aux, state.params)

    def invariant_names(self) -> list[str]:
        return [n for n, _ in self.invariants]

    def invariant(self, name: str) -> Callable:
        for n, fn in self.invariants:
            if n == name:
                return fn
        for n, fn in self.casimirs:
            if n == name:
                return fn
        raise UnknownNameError("invariant", name)


def _promote(v):
    # plain ints would turn into floats under "/"
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    return v


def _guard(label, fn, exc=SingularLocusError):
    return (label, fn, exc)


def _dot(u, v):
    acc = 0
    for s, t in zip(u, v):
        acc = acc + s * t
    return acc


def _swap(p, q, a, b):
    return q, p


# Adler's map on K x K.

def _adler(p, q, a, b):
    x1, x2 = p[0], q[0]
    r = (a - b) / (x1 + x2)
    return (x2 - r,), (x1 + r,)


ADLER = MapDescriptor(
    name="adler",
    half_dim=1,
    n_aux=0,
    param_arity=2,
    step=_adler,
    guards=(_guard("x1+x2", lambda p, q, a, b: p[0] + q[0]),),
    invariants=(("I1", lambda p, q, a, b: (p[0] + q[0]) ** 2 + a + b),),
    involutive=True,
    reversible=True,
    lax="adler",
)


# NLS: 6-dimensional map and its restriction (Adler-Yamilov).

def _nls6(p, q, a, b):
    x1, x2, X = p
    y1, y2, Y = q
    d = 1 + x1 * y2
    u1 = (y1 + x1 * x1 * x2 - x1 * X + x1 * Y) / d
    v2 = (x2 + y1 * y2 * y2 + y2 * X - y2 * Y) / d
    U = (y1 * y2 - x1 * x2 + X + x1 * y2 * Y) / d
    V = (x1 * x2 - y1 * y2 + x1 * y2 * X + Y) / d
    return (u1, y2, U), (x1, v2, V)


_G_NLS = _guard("1+x1*y2", lambda p, q, a, b: 1 + p[0] * q[1])

NLS6 = MapDescriptor(
    name="nls6",
    half_dim=3,
    n_aux=1,
    param_arity=0,
    step=_nls6,
    guards=(_G_NLS,),
    invariants=(
        ("I1", lambda p, q, a, b: p[2] + q[2]),
        ("I2", lambda p, q, a, b: p[1] * q[0] + p[0] * q[1] + p[2] * q[2]),
    ),
    lax="nls-darboux-3d",
)


def _adler_yamilov(p, q, a, b):
    x1, x2 = p
    y1, y2 = q
    r = (a - b) / (1 + x1 * y2)
    return (y1 - r * x1, y2), (x1, x2 + r * y2)


def _canonical_j(p, q, a, b):
    return [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]


ADLER_YAMILOV = MapDescriptor(
    name="adler-yamilov",
    half_dim=2,
    n_aux=0,
    param_arity=2,
    step=_adler_yamilov,
    guards=(_G_NLS,),
    invariants=(
        ("I1", lambda p, q, a, b: p[0] * p[1] + q[0] * q[1] + a + b),
        ("I2", lambda p, q, a, b: (a + p[0] * p[1]) * (b + q[0] * q[1])
            + p[0] * q[1] + p[1] * q[0] + 1),
    ),
    poisson=PoissonStructure(_canonical_j, 4),
    reversible=True,
    lax="nls",
)


# DNLS (Z2 reduction), first parametrisation.  The v-side is the u-side
# formula at (pi y, pi x, Y, X) with pi(s1, s2) = (s2, s1).

def _dnls_orig_f(x1, x2, y1, y2, X, Y):
    g1 = x1 * x2 * X + x1 * y2 * Y - 1
    g2 = x1 * y2 * X + y1 * y2 * Y - 1
    f3 = g1 / g2 * X
    num = x1 * X + (y1 - x1) * Y - x1 * x2 * y1 * X * Y - x1 * x1 * x2 * X * X
    f1 = -1 / f3 * num / g1
    return f1, y2, f3


def _dnls6_orig(p, q, a, b):
    x1, x2, X = p
    y1, y2, Y = q
    u1, u2, U = _dnls_orig_f(x1, x2, y1, y2, X, Y)
    w1, w2, V = _dnls_orig_f(y2, y1, x2, x1, Y, X)
    # v1 = f2(pi y, pi x, Y, X), v2 = f1(pi y, pi x, Y, X)
    return (u1, u2, U), (w2, w1, V)


DNLS6_ORIG = MapDescriptor(
    name="dnls6-orig",
    half_dim=3,
    n_aux=1,
    param_arity=0,
    step=_dnls6_orig,
    # the mirrored guards coincide with these two after the pi-swap
    guards=(
        _guard("x1*x2*X+x1*y2*Y-1", lambda p, q, a, b: p[0] * p[1] * p[2] + p[0] * q[1] * q[2] - 1),
        _guard("x1*y2*X+y1*y2*Y-1", lambda p, q, a, b: p[0] * q[1] * p[2] + q[0] * q[1] * q[2] - 1),
        _guard("X", lambda p, q, a, b: p[2]),
        _guard("Y", lambda p, q, a, b: q[2]),
    ),
    invariants=(
        ("I1", lambda p, q, a, b: p[2] * q[2]),
        ("I2", lambda p, q, a, b: (p[0] * q[1] + p[1] * q[0]) * p[2] * q[2] + p[2] + q[2]),
    ),
    lax="dnls-darboux-3d",
)


# DNLS, second parametrisation (explicitly reducible).

def _dnls_reparam_f(x1, x2, y1, y2, X, Y):
    d1 = X - x1 * (x2 + y2)
    d2 = Y - y2 * (x1 + y1)
    f1 = ((x1 + y1) * X - x1 * Y - x1 * x2 * (x1 + y1)) / d1
    f2 = d1 / d2 * y2
    f3 = d1 / d2 * Y
    return f1, f2, f3


def _dnls6_reparam(p, q, a, b):
    x1, x2, X = p
    y1, y2, Y = q
    u1, u2, U = _dnls_reparam_f(x1, x2, y1, y2, X, Y)
    w1, w2, V = _dnls_reparam_f(y2, y1, x2, x1, Y, X)
    return (u1, u2, U), (w2, w1, V)


DNLS6_REPARAM = MapDescriptor(
    name="dnls6-reparam",
    half_dim=3,
    n_aux=1,
    param_arity=0,
    step=_dnls6_reparam,
    guards=(
        _guard("X-x1*(x2+y2)", lambda p, q, a, b: p[2] - p[0] * (p[1] + q[1])),
        _guard("Y-y2*(x1+y1)", lambda p, q, a, b: q[2] - q[1] * (p[0] + q[0])),
    ),
    invariants=(
        ("I1", lambda p, q, a, b: p[2] * q[2]),
        ("I2", lambda p, q, a, b: p[0] * q[1] + p[1] * q[0] + p[2] + q[2]),
        ("I3", lambda p, q, a, b: p[0] + q[0]),
        ("I4", lambda p, q, a, b: p[1] + q[1]),
    ),
    lax="dnls-reparam-3d",
)


def _dnls4(p, q, a, b):
    x1, x2 = p
    y1, y2 = q
    z = x1 * y2
    da, db = a - z, b - z
    return (y1 + (a - b) / da * x1, da / db * y2), (db / da * x1, x2 + (b - a) / db * y2)


def _dnls4_j(p, q, a, b):
    # ordering (x1, x2, y1, y2): {x1,x2} = {y1,y2} = {x2,y1} = {y2,x1} = 1
    return [[0, 1, 0, -1], [-1, 0, 1, 0], [0, -1, 0, 1], [1, 0, -1, 0]]


DNLS4 = MapDescriptor(
    name="dnls4",
    half_dim=2,
    n_aux=0,
    param_arity=2,
    step=_dnls4,
    guards=(
        _guard("a-x1*y2", lambda p, q, a, b: a - p[0] * q[1]),
        _guard("b-x1*y2", lambda p, q, a, b: b - p[0] * q[1]),
    ),
    invariants=(
        ("I1", lambda p, q, a, b: (a + p[0] * p[1]) * (b + q[0] * q[1])),
        ("I2", lambda p, q, a, b: (p[0] + q[0]) * (p[1] + q[1]) + a + b),
    ),
    casimirs=(
        ("C1", lambda p, q, a, b: p[0] + q[0]),
        ("C2", lambda p, q, a, b: p[1] + q[1]),
    ),
    poisson=PoissonStructure(_dnls4_j, 2),
    reversible=True,
    lax="dnls",
)


# Dihedral (Z2 x Z2) reduction: 6-dimensional parametric map.

def dihedral_fgh(x1, x2, y1, y2, X, Y, a, b):
    """The three polynomials whose ratios give the dihedral map."""
    x1s, x2s, y1s, y2s = x1 * x1 - 1, x2 * x2 - 1, y1 * y1 - 1, y2 * y2 - 1
    XY = X * Y
    f = (a * a * b * b * x1 * X
         + a * a * b * (x2 - y2 + 2 * x1 * x2 * y1 + x1 * x1 * (y2 - 3 * x2)) * XY
         + a * a * y2s * (y1 * (1 + x1 * x1) - x1 * (1 + y1 * y1)) * XY * Y
         - a * b * b * x1s * (y2 - x2) * X * X
         - a * b * x1s * (x2 * x2 * (3 * x1 - y1) - x1 - y1 + 2 * y2 * (y1 * y2 - x1 * x2)) * X * XY
         - a * x1s * y2s * (y2 * y1s + x2 * (y1 * y1 - 2 * x1 * y1 + 1)) * XY * XY
         + y1 * x1s * x1s * x2s * y2s * X * XY * XY
         + b * x1s * x1s * x2s * (y2 - x2) * X * X * XY
         + a * a * a * b * (y1 - x1) * Y)
    g = (a * a * b * b * X
         + 2 * a * a * b * y2 * (y1 - x1) * XY
         + a * a * y2s * (x1 - y1) * (x1 - y1) * XY * Y
         + 2 * a * b * x1s * (1 - x2 * y2) * X * XY
         + 2 * a * x2 * x1s * y2s * (x1 - y1) * XY * XY
         + x1s * x1s * x2s * y2s * X * XY * XY)
    h = (a * a * b * b
         - 2 * a * b * b * x1 * (y2 - x2) * X
         - 2 * a * b * (x1 * y1 - 1) * y2s * XY
         + b * b * x1s * (x2 - y2) * (x2 - y2) * X * X
         - 2 * b * y1 * (x2 - y2) * x1s * y2s * X * XY
         + x1s * y1s * y2s * y2s * XY * XY)
    return f, g, h


def _dihedral6(p, q, a, b):
    x1, x2, X = p
    y1, y2, Y = q
    f, g, h = dihedral_fgh(x1, x2, y1, y2, X, Y, a, b)
    F, G, H = dihedral_fgh(y2, y1, x2, x1, Y, X, b, a)
    return (f / g, y2, g / h), (x1, F / G, G / H)


def _dih_guard(k, mirrored):
    def fn(p, q, a, b):
        if mirrored:
            return dihedral_fgh(q[1], q[0], p[1], p[0], q[2], p[2], b, a)[k]
        return dihedral_fgh(p[0], p[1], q[0], q[1], p[2], q[2], a, b)[k]
    return fn


DIHEDRAL6 = MapDescriptor(
    name="dihedral6",
    half_dim=3,
    n_aux=1,
    param_arity=2,
    step=_dihedral6,
    guards=(
        _guard("g", _dih_guard(1, False)),
        _guard("h", _dih_guard(2, False)),
        _guard("g(pi y,pi x,Y,X;b,a)", _dih_guard(1, True)),
        _guard("h(pi y,pi x,Y,X;b,a)", _dih_guard(2, True)),
    ),
    invariants=(
        ("I1", lambda p, q, a, b: p[2] * q[2]),
        ("I2", lambda p, q, a, b: b * p[2] + a * q[2] + (p[0] + q[0]) * (p[1] + q[1]) * p[2] * q[2]),
        ("I3", lambda p, q, a, b: 2 * b * p[0] * p[1] * p[2] + 2 * a * q[0] * q[1] * q[2]
            + 2 * (p[0] * q[0] + p[1] * q[1] + p[0] * p[1] * q[0] * q[1]) * p[2] * q[2] + 2 * a * b),
    ),
    lax="dihedral-3d",
)


def linear_dihedral_matrix(a, b) -> list[list]:
    """4x4 matrix of the linearised dihedral map acting on (x1, x2, y1, y2)."""
    ap, bp, s = a + 1, b + 1, a + b
    return [
        [(a - 1) * (a - b) / (ap * s), (a - b) / s, 2 * a / s, ap * (b - a) / (bp * s)],
        [0, 0, 0, ap / bp],
        [bp / ap, 0, 0, 0],
        [(a - b) * bp / (ap * s), 2 * b / s, (b - a) / s, (b - 1) * (b - a) / (bp * s)],
    ]


def _dihedral_linear(p, q, a, b):
    m = linear_dihedral_matrix(a, b)
    w = tuple(p) + tuple(q)
    out = [_dot(row, w) for row in m]
    return tuple(out[:2]), tuple(out[2:])


DIHEDRAL_LINEAR = MapDescriptor(
    name="dihedral-linear",
    half_dim=2,
    n_aux=0,
    param_arity=2,
    step=_dihedral_linear,
    guards=(
        _guard("a+1", lambda p, q, a, b: a + 1, SingularParameterError),
        _guard("b+1", lambda p, q, a, b: b + 1, SingularParameterError),
        _guard("a+b", lambda p, q, a, b: a + b, SingularParameterError),
    ),
    reversible=True,
)


# Vector generalisations.  A half-point holds the two N-blocks back to back.

VECTOR_NLS_CONVENTIONS = ("adler-yamilov", "as-printed")


def _blocks(w, n):
    return w[:n], w[n:]


def _vector_nls_step(n, convention):
    sign = -1 if convention == "adler-yamilov" else 1

    def step(p, q, a, b):
        x1, x2 = _blocks(p, n)
        y1, y2 = _blocks(q, n)
        r = sign * (a - b) / (1 + _dot(x1, y2))
        u1 = tuple(s + r * t for s, t in zip(y1, x1))
        v2 = tuple(s - r * t for s, t in zip(x2, y2))
        return u1 + tuple(y2), tuple(x1) + v2

    return step


def _vector_z2_step(n):
    def step(p, q, a, b):
        x1, x2 = _blocks(p, n)
        y1, y2 = _blocks(q, n)
        z = _dot(x1, y2)
        da, db = a - z, b - z
        f_ab, f_ba = (a - b) / da, (b - a) / db
        g_ab, g_ba = da / db, db / da
        u1 = tuple(s + f_ab * t for s, t in zip(y1, x1))
        u2 = tuple(g_ab * t for t in y2)
        v1 = tuple(g_ba * t for t in x1)
        v2 = tuple(s + f_ba * t for s, t in zip(x2, y2))
        return u1 + u2, v1 + v2

    return step


def vector_nls(n: int = 2, convention: str = "adler-yamilov") -> MapDescriptor:
    if convention not in VECTOR_NLS_CONVENTIONS:
        raise UnknownNameError("convention", convention)

    def inner(w):
        return _dot(*_blocks(w, n))

    return MapDescriptor(
        name="vector-nls",
        half_dim=2 * n,
        n_aux=0,
        param_arity=2,
        step=_vector_nls_step(n, convention),
        guards=(_guard("1+<x1,y2>", lambda p, q, a, b: 1 + _dot(p[:n], q[n:])),),
        invariants=(
            ("I1", lambda p, q, a, b: inner(p) + inner(q)),
            ("I2", lambda p, q, a, b: b * inner(p) + a * inner(q) + _dot(p[:n], q[n:])
                + _dot(p[n:], q[:n]) + inner(p) * inner(q)),
        ),
        reversible=True,
        lax="vector-nls",
        n=n,
        notes=f"sign convention: {convention}",
        extra={"convention": convention},
    )


def vector_z2(n: int = 2) -> MapDescriptor:
    def inner(w):
        return _dot(*_blocks(w, n))

    def i1(p, q, a, b):
        s1 = [s + t for s, t in zip(p[:n], q[:n])]
        s2 = [s + t for s, t in zip(p[n:], q[n:])]
        return _dot(s1, s2)

    return MapDescriptor(
        name="vector-z2",
        half_dim=2 * n,
        n_aux=0,
        param_arity=2,
        step=_vector_z2_step(n),
        guards=(
            _guard("a-<x1,y2>", lambda p, q, a, b: a - _dot(p[:n], q[n:])),
            _guard("b-<x1,y2>", lambda p, q, a, b: b - _dot(p[:n], q[n:])),
        ),
        invariants=(
            ("I1", i1),
            ("I2", lambda p, q, a, b: b * inner(p) + a * inner(q) + inner(p) * inner(q)),
        ),
        reversible=True,
        lax="vector-z2",
        n=n,
    )


def permutation_map(half_dim: int = 2, n_aux: int = 0, param_arity: int = 0) -> MapDescriptor:
    """The trivial map (x, y) -> (y, x); a harness self-test."""
    return MapDescriptor(
        name="permutation",
        half_dim=half_dim,
        n_aux=n_aux,
        param_arity=param_arity,
        step=_swap,
        involutive=True,
        reversible=True,
    )


def corrupt(desc: MapDescriptor, index: int = 0, delta=1) -> MapDescriptor:
    """Copy of ``desc`` with one output component shifted by ``delta``.

    ``index`` counts over the concatenated output ``u + v``.
    """
    step = desc.step
    h = desc.half_dim

    def bad(p, q, a, b):
        u, v = step(p, q, a, b)
        w = list(u) + list(v)
        w[index] = w[index] + delta
        return tuple(w[:h]), tuple(w[h:])

    return replace(desc, name=f"{desc.name}+corrupt{index}", step=bad)


class Registry:
    """Name -> descriptor lookup.  Built once; read-only afterwards."""

    def __init__(self, entries: Sequence[MapDescriptor] = ()):
        self._maps = {d.name: d for d in entries}

    def names(self) -> list[str]:
        return list(self._maps)

    def get(self, name: str, n: int | None = None) -> MapDescriptor:
        if name == "vector-nls" and n is not None:
            return vector_nls(n)
        if name == "vector-z2" and n is not None:
            return vector_z2(n)
        if name == "permutation":
            return permutation_map()
        try:
            return self._maps[name]
        except KeyError:
            raise UnknownNameError("map", name) from None

    def __contains__(self, name):
        return name in self._maps

    def __iter__(self):
        return iter(self._maps.values())

    def __len__(self):
        return len(self._maps)


MAP_NAMES = (
    "adler", "nls6", "adler-yamilov", "dnls6-orig", "dnls6-reparam",
    "dnls4", "dihedral6", "dihedral-linear", "vector-nls", "vector-z2",
)

REGISTRY = Registry([
    ADLER, NLS6, ADLER_YAMILOV, DNLS6_ORIG, DNLS6_REPARAM,
    DNLS4, DIHEDRAL6, DIHEDRAL_LINEAR, vector_nls(2), vector_z2(2),
])


def get_map(name: str, n: int | None = None) -> MapDescriptor:
    return REGISTRY.get(name, n)


def eval_invariant(desc: MapDescriptor, name: str, state: PairState):
    p, q, a, b = state.halves()
    return desc.invariant(name)(p, q, a, b)


# Thin per-map entry points.

def eval_adler(x1, x2, a, b):
    (u,), (v,) = ADLER.apply((x1,), (x2,), a, b)
    return u, v


def eval_nls6(state: PairState) -> PairState:
    return NLS6.evaluate(state)


def eval_adler_yamilov(state: PairState) -> PairState:
    return ADLER_YAMILOV.evaluate(state)


def eval_dnls6_original(state: PairState) -> PairState:
    return DNLS6_ORIG.evaluate(state)


def eval_dnls6_reparam(state: PairState) -> PairState:
    return DNLS6_REPARAM.evaluate(state)


def eval_dnls4(state: PairState) -> PairState:
    return DNLS4.evaluate(state)


def eval_dihedral6(state: PairState) -> PairState:
    return DIHEDRAL6.evaluate(state)


def eval_dihedral_linear(state: PairState) -> PairState:
    return DIHEDRAL_LINEAR.evaluate(state)


def eval_vector_nls(state: PairState, convention: str = "adler-yamilov") -> PairState:
    n = len(state.x) // 2
    return vector_nls(n, convention).evaluate(state)


def eval_vector_z2(state: PairState) -> PairState:
    n = len(state.x) // 2
    return vector_z2(n).evaluate(state)
