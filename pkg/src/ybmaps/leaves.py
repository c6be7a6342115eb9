"""Invariant leaves, implicit 4-dimensional maps and long orbits.

Affine leaves (X = k + x1*x2) lift exactly.  Quadratic leaves need square
roots, so everything built on them runs in floating point.  Roots are
labelled by branch: ``"plus"`` is the root that stays finite as the leading
coefficient goes to zero, ``"minus"`` the other one.
"""
from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .catalog import (
    DIHEDRAL6,
    DNLS6_ORIG,
    MapDescriptor,
    PairState,
    get_map,
)
from .errors import (
    ComplexRootsError,
    DegenerateConstraintError,
    NearSingularAbort,
    SamplingExhaustedError,
    YBError,
)
from .exact import value_of
from .verify import TripleState, yb_residual

BRANCHES = ("plus", "minus")


class BranchSwitchError(YBError, ValueError):
    """The image of an implicit map left the leaf branch it started on."""


# ---------------------------------------------------------------- affine leaves

AFFINE_LEAVES = ("nls", "dnls-reparam")


def lift_affine(leaf: str, x1, x2, k):
    if leaf not in AFFINE_LEAVES:
        raise ValueError(f"no affine leaf called {leaf!r}")
    return k + x1 * x2


def affine_residual(x1, x2, X, k):
    return X - x1 * x2 - k


def _lift_state(p, q, a, b, pairing):
    ka, kb = (a, b) if pairing == "ab" else (b, a)
    return p + (lift_affine("nls", p[0], p[1], ka),), q + (lift_affine("nls", q[0], q[1], kb),)


def leaf_commutation_sides(map4: MapDescriptor, map6: MapDescriptor, state: PairState,
                           pairing: str = "ab"):
    """(map6(lift(s)), lift'(map4(s))); ``pairing`` says which parameter labels U's leaf."""
    p, q, a, b = state.halves()
    u, v = map4.apply(p, q, a, b)
    lp, lq = _lift_state(p, q, a, b, "ab")
    left = map6.apply(lp, lq)
    right = _lift_state(u, v, a, b, pairing)
    return left, right


def check_leaf_commutation(map4: MapDescriptor, map6: MapDescriptor, state: PairState,
                           pairing: str = "ab") -> bool:
    left, right = leaf_commutation_sides(map4, map6, state, pairing)
    return left == right


# ---------------------------------------------------------------- quadratic leaves

def solve_dnls_leaf(x1, x2, k) -> tuple:
    """Roots of x1*x2*X**2 - X + k = 0, ordered (plus, minus).

    With x1*x2 == 0 the constraint is linear and the single root k is returned.
    """
    p = x1 * x2
    if p == 0:
        return (k,)
    disc = 1 - 4 * k * p
    if disc < 0:
        raise ComplexRootsError(f"discriminant {disc} < 0")
    principal = 2 * k / (1 + math.sqrt(disc))
    return principal, 1 / p - principal


def dnls_leaf_residual(x1, x2, X, k) -> float:
    scale = max(1.0, abs(X), abs(X * X * x1 * x2), abs(k))
    return abs(X - X * X * x1 * x2 - k) / scale


def solve_dihedral_leaf(x1, x2, c2) -> tuple:
    """Roots of (1-x1^2)(1-x2^2) X^2 + (2 x1 x2 - c2) X + 1 = 0, ordered (plus, minus)."""
    A = (1 - x1 * x1) * (1 - x2 * x2)
    B = 2 * x1 * x2 - c2
    if A == 0:
        if B == 0:
            raise DegenerateConstraintError("leading and linear coefficients both vanish")
        return (-1 / B,)
    disc = B * B - 4 * A
    if disc < 0:
        raise ComplexRootsError(f"discriminant {disc} < 0")
    if B == 0:
        principal = 1 / math.sqrt(-A) if A < 0 else None
        if principal is None:
            raise ComplexRootsError("no real roots")
        return principal, -principal
    principal = -2 / (B + math.copysign(math.sqrt(disc), B))
    return principal, 1 / (A * principal)


def dihedral_leaf_residual(x1, x2, X, c2) -> float:
    A = (1 - x1 * x1) * (1 - x2 * x2)
    B = 2 * x1 * x2 - c2
    scale = max(1.0, abs(A * X * X), abs(B * X))
    return abs(A * X * X + B * X + 1) / scale


def _pick(roots, branch):
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    return roots[0] if branch == "plus" or len(roots) == 1 else roots[1]


def _branches(branch):
    return (branch, branch) if isinstance(branch, str) else tuple(branch)


def _on_branch(root_fn, w, k, branch, tol=1e-9):
    want = _pick(root_fn(w[0], w[1], k), branch)
    if abs(w[2] - want) > tol * max(1.0, abs(want)):
        raise BranchSwitchError(f"image left the {branch} branch")


def eval_dnls4_implicit(state: PairState, a: float, b: float, branch="plus",
                        strict: bool = True) -> PairState:
    """4-dimensional DNLS map on the leaves X - X^2 x1 x2 = a, Y - Y^2 y1 y2 = b.

    ``branch`` is one label or an (X-branch, Y-branch) pair.  With ``strict``
    the image must lie on the same branches, otherwise BranchSwitchError.
    """
    bx, by = _branches(branch)
    p, q = tuple(state.x), tuple(state.y)
    X = _pick(solve_dnls_leaf(p[0], p[1], a), bx)
    Y = _pick(solve_dnls_leaf(q[0], q[1], b), by)
    u, v = DNLS6_ORIG.apply(p + (X,), q + (Y,))
    if strict:
        _on_branch(solve_dnls_leaf, u, a, bx)
        _on_branch(solve_dnls_leaf, v, b, by)
    return PairState(u[:2], v[:2], None, (a, b))


def eval_dihedral4_implicit(state: PairState, a: float, b: float, branch="plus",
                            strict: bool = True) -> PairState:
    """4-dimensional dihedral map on the quadratic leaves with c1 = 1 and c2 = a, b.

    The six-dimensional map is evaluated with its own parameters set to c1 = 1;
    ``a`` and ``b`` enter only through the leaf equations.
    """
    bx, by = _branches(branch)
    p, q = tuple(state.x), tuple(state.y)
    X = _pick(solve_dihedral_leaf(p[0], p[1], a), bx)
    Y = _pick(solve_dihedral_leaf(q[0], q[1], b), by)
    u, v = DIHEDRAL6.apply(p + (X,), q + (Y,), 1.0, 1.0)
    if strict:
        _on_branch(solve_dihedral_leaf, u, a, bx)
        _on_branch(solve_dihedral_leaf, v, b, by)
    return PairState(u[:2], v[:2], None, (a, b))


def implicit_map(kind: str, branch="plus", strict: bool = True) -> MapDescriptor:
    """Wrap an implicit map as a descriptor so the YB machinery applies to it."""
    fn = {"dnls": eval_dnls4_implicit, "dihedral": eval_dihedral4_implicit}[kind]

    def step(p, q, a, b):
        s = fn(PairState(p, q), a, b, branch, strict)
        return s.x, s.y

    return MapDescriptor(name=f"{kind}4-implicit", half_dim=2, n_aux=0, param_arity=2,
                         step=step)


def _float_triple(rng: random.Random, kind: str) -> TripleState:
    pts = [tuple(rng.uniform(-0.5, 0.5) for _ in range(2)) for _ in range(3)]
    if kind == "dnls":
        params = tuple(rng.uniform(-2.0, 2.0) for _ in range(3))
    else:
        # |c2| > 2 keeps the leaf quadratics real near the origin
        params = tuple(rng.choice((-1, 1)) * rng.uniform(2.5, 5.0) for _ in range(3))
    return TripleState(*pts, params)


def implicit_yb_residuals(kind: str, trials: int = 50, seed: int = 0, branch="plus",
                          strict: bool = True, max_attempts: int = 200) -> dict:
    """YB residuals of an implicit map over seeded random float triples.

    Triples whose leaves have complex roots, hit a guard, or (when strict)
    leave the branch are resampled.
    """
    desc = implicit_map(kind, branch, strict)
    residuals, rejected = [], 0
    for i in range(trials):
        for attempt in range(max_attempts):
            t = _float_triple(random.Random(f"{seed}:{i}:{attempt}"), kind)
            try:
                residuals.append(yb_residual(desc, t))
            except (ZeroDivisionError, ComplexRootsError, DegenerateConstraintError,
                    BranchSwitchError):
                rejected += 1
                continue
            break
        else:
            raise SamplingExhaustedError(f"{kind}: no usable triple for trial {i}")
    return {"residuals": residuals, "max": max(residuals), "rejected": rejected}


# ---------------------------------------------------------------- dihedral square-root leaves

def dihedral_f_fg(x1, x2, k) -> tuple[float, float]:
    r1 = 0.5 * math.sqrt(1 + (x1 + x2) ** 2)
    r2 = 0.5 * math.sqrt(k * k + (x1 - x2) ** 2)
    return r1 + r2, r1 - r2


def dihedral_first_integrals(x1, x2, f, fg) -> tuple[float, float]:
    """Both first integrals, written in the original entries p = x2/f, q~ = x1/f, g = fg/f."""
    p, qt, g = x2 / f, x1 / f, fg / f
    return f * f * (g - p * qt), f * f * (g * g + 1 - p * p - qt * qt)


def dihedral_phi_residual(x1, x2, k) -> float:
    f, fg = dihedral_f_fg(x1, x2, k)
    phi1, phi2 = dihedral_first_integrals(x1, x2, f, fg)
    scale = max(1.0, k * k, x1 * x1 + x2 * x2)
    return max(abs(phi1 - (1 - k * k) / 4), abs(phi2 - (1 + k * k) / 2)) / scale


def lax_dihedral_numeric(x1, x2, k, lam) -> np.ndarray:
    """The square-root Lax matrix of the linearised dihedral map at a numeric lambda."""
    f, fg = dihedral_f_fg(x1, x2, k)
    return np.array([
        [lam**2 * f + fg, lam * x1 + x2 / lam],
        [lam * x2 + x1 / lam, f / lam**2 + fg],
    ])


# ---------------------------------------------------------------- orbits

@dataclass
class OrbitRecord:
    step: int
    state: PairState
    invariant_values: tuple
    drift: tuple


def _convert(v, arithmetic):
    if arithmetic == "exact":
        return Fraction(v) if not isinstance(v, Fraction) else v
    if arithmetic == "mp":
        if isinstance(v, Fraction):
            return mpmath.mpf(v.numerator) / v.denominator
        return mpmath.mpf(v)
    return float(v)


def _finite(v):
    if isinstance(v, Fraction):
        return True
    return bool(mpmath.isfinite(v)) if isinstance(v, mpmath.mpf) else math.isfinite(v)


def iterate_orbit(map, initial: PairState, steps: int, *, arithmetic: str = "float",
                  dps: int = 50, tol: float = 1e-12) -> list[OrbitRecord]:
    """Records Y^n(initial) for n = 0..steps with invariant values and drift.

    ``arithmetic`` is ``"float"`` (binary64), ``"mp"`` (mpmath with ``dps``
    digits) or ``"exact"`` (Fractions).  Iteration aborts with
    NearSingularAbort when a guard comes within ``tol`` of zero or a
    coordinate overflows; the records so far travel with the exception.
    """
    desc = map if isinstance(map, MapDescriptor) else get_map(map)
    if arithmetic not in ("float", "mp", "exact"):
        raise ValueError(f"unknown arithmetic {arithmetic!r}")
    with mpmath.workdps(dps):
        p, q, a, b = initial.halves()
        p = tuple(_convert(v, arithmetic) for v in p)
        q = tuple(_convert(v, arithmetic) for v in q)
        if a is not None:
            a, b = _convert(a, arithmetic), _convert(b, arithmetic)
        fns = [fn for _, fn in desc.invariants] + [fn for _, fn in desc.casimirs]
        i0 = tuple(fn(p, q, a, b) for fn in fns)
        params = None if a is None else (a, b)
        records = [OrbitRecord(0, PairState.from_halves(p, q, desc.n_aux, params), i0,
                               tuple(abs(v - v) for v in i0))]
        for n in range(1, steps + 1):
            for label, g in desc.guard_values(p, q, a, b):
                if abs(value_of(g)) < tol:
                    raise NearSingularAbort(n - 1, f"guard {label} within {tol} of zero", records)
            p, q = desc.apply(p, q, a, b)
            if not all(_finite(v) for v in p + q):
                raise NearSingularAbort(n - 1, "coordinate overflow", records)
            vals = tuple(fn(p, q, a, b) for fn in fns)
            records.append(OrbitRecord(n, PairState.from_halves(p, q, desc.n_aux, params), vals,
                                       tuple(abs(v - w) for v, w in zip(vals, i0))))
    return records


def max_drift(records: list[OrbitRecord], names: list[str] | None = None) -> list:
    k = len(records[0].drift)
    return [max(r.drift[i] for r in records) for i in range(k)]


def _fmt(v) -> str:
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 17, min_fixed=-mpmath.inf, max_fixed=mpmath.inf) \
            if abs(v) < 1e300 else mpmath.nstr(v, 17)
    return repr(float(v))


def orbit_csv(desc: MapDescriptor, records: list[OrbitRecord]) -> str:
    """CSV text with columns step, coordinates, invariants, drifts."""
    h = desc.half_dim - desc.n_aux
    coord = [f"x{i + 1}" for i in range(h)] + (["X"] if desc.n_aux else []) \
        + [f"y{i + 1}" for i in range(h)] + (["Y"] if desc.n_aux else [])
    names = desc.invariant_names() + [c for c, _ in desc.casimirs]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step"] + coord + names + [f"drift_{n}" for n in names])
    for r in records:
        w.writerow([r.step] + [_fmt(v) for v in r.state.coords()]
                   + [_fmt(v) for v in r.invariant_values] + [_fmt(v) for v in r.drift])
    return buf.getvalue()
