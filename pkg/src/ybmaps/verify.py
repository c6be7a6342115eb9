"""Seeded exact verification of YB maps.

All randomness for trial ``i`` comes from ``random.Random(f"{seed}:{i}:{attempt}")``,
so reports do not depend on evaluation order.  A trial whose sample (or any
intermediate image) lands on a guard locus is resampled, never failed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .catalog import MapDescriptor, PairState, get_map
from .errors import SamplingExhaustedError, UnknownNameError
from .exact import jacobian, value_of
from .lax import check_det_consistency, check_refactorisation, check_trace_preservation

MAX_ATTEMPTS = 200
HEIGHT = 9


@dataclass(frozen=True)
class TripleState:
    x: tuple
    y: tuple
    z: tuple
    params: tuple | None = None  # (a, b, c)


@dataclass
class CheckReport:
    map: str
    check: str
    trials: int
    failures: int
    seed: int
    first_counterexample: object = None
    status: str = "pass"  # pass | fail | skipped | measured
    reason: str | None = None
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "skipped", "measured")

    def to_json(self) -> dict:
        out = {
            "name": self.check,
            "trials": self.trials,
            "failures": self.failures,
            "status": self.status,
        }
        if self.first_counterexample is not None:
            out["counterexample"] = to_jsonable(self.first_counterexample)
        if self.reason:
            out["reason"] = self.reason
        if self.info:
            out["info"] = to_jsonable(self.info)
        return out


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (PairState, TripleState)):
        return {k: to_jsonable(v) for k, v in obj.__dict__.items() if v is not None}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------- sampling

def _rng(seed: int, index: int, attempt: int) -> random.Random:
    return random.Random(f"{seed}:{index}:{attempt}")


def random_rational(rng: random.Random, height: int = HEIGHT) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def _draw_params(rng, k, distinct):
    while True:
        ps = tuple(random_rational(rng) for _ in range(k))
        if not distinct or len(set(ps)) == len(ps):
            return ps


def _draw_pair(desc: MapDescriptor, rng, distinct_params=False) -> PairState:
    p = tuple(random_rational(rng) for _ in range(desc.half_dim))
    q = tuple(random_rational(rng) for _ in range(desc.half_dim))
    params = _draw_params(rng, 2, distinct_params) if desc.parametric else None
    return PairState.from_halves(p, q, desc.n_aux, params)


def _draw_triple(desc: MapDescriptor, rng, distinct_params=False) -> TripleState:
    pts = [tuple(random_rational(rng) for _ in range(desc.half_dim)) for _ in range(3)]
    params = _draw_params(rng, 3, distinct_params) if desc.parametric else None
    return TripleState(*pts, params)


def sample_state(desc: MapDescriptor, seed: int, index: int, *,
                 distinct_params: bool = False,
                 check: Callable | None = None) -> PairState:
    """A guarded random state, deterministic in ``(seed, index)``.

    ``check(state)`` may raise ZeroDivisionError to request a resample (used
    to demand that images or compositions are defined too).
    """
    for attempt in range(MAX_ATTEMPTS):
        s = _draw_pair(desc, _rng(seed, index, attempt), distinct_params)
        p, q, a, b = s.halves()
        try:
            desc.check_guards(p, q, a, b)
            if check is not None:
                check(s)
        except ZeroDivisionError:
            continue
        return s
    raise SamplingExhaustedError(f"{desc.name}: no nonsingular sample after {MAX_ATTEMPTS} draws")


def sample_triple(desc: MapDescriptor, seed: int, index: int, *,
                  distinct_params: bool = False,
                  check: Callable | None = None) -> TripleState:
    for attempt in range(MAX_ATTEMPTS):
        t = _draw_triple(desc, _rng(seed, index, attempt), distinct_params)
        try:
            yb_sides(desc, t) if check is None else check(t)
        except ZeroDivisionError:
            continue
        return t
    raise SamplingExhaustedError(f"{desc.name}: no nonsingular triple after {MAX_ATTEMPTS} draws")


# ---------------------------------------------------------------- YB equation

def _y12(desc, w, a, b):
    x, y, z = w
    u, v = desc.apply(x, y, a, b)
    return u, v, z


def _y13(desc, w, a, c):
    x, y, z = w
    u, v = desc.apply(x, z, a, c)
    return u, y, v


def _y23(desc, w, b, c):
    x, y, z = w
    u, v = desc.apply(y, z, b, c)
    return x, u, v


def yb_sides(desc: MapDescriptor, t: TripleState):
    a, b, c = t.params if t.params is not None else (None, None, None)
    w = (t.x, t.y, t.z)
    lhs = _y12(desc, _y13(desc, _y23(desc, w, b, c), a, c), a, b)
    rhs = _y23(desc, _y13(desc, _y12(desc, w, a, b), a, c), b, c)
    return lhs, rhs


def check_yb_equation(desc: MapDescriptor, t: TripleState) -> bool:
    lhs, rhs = yb_sides(desc, t)
    return lhs == rhs


def yb_residual(desc: MapDescriptor, t: TripleState) -> float:
    """Max-norm of LHS - RHS; meant for floating-point maps."""
    lhs, rhs = yb_sides(desc, t)
    return max(abs(s - r) for L, R in zip(lhs, rhs) for s, r in zip(L, R))


# ---------------------------------------------------------------- reversibility, involutivity

def check_reversibility(desc: MapDescriptor, state: PairState) -> bool:
    p, q, a, b = state.halves()
    u, v = desc.apply(p, q, a, b)
    s, t = desc.apply(v, u, b, a)
    return (t, s) == (p, q)


def is_involution_at(desc: MapDescriptor, state: PairState) -> bool:
    p, q, a, b = state.halves()
    u, v = desc.apply(p, q, a, b)
    return desc.apply(u, v, a, b) == (p, q)


def check_involutivity_witness(desc: MapDescriptor, states: Iterable[PairState]) -> bool:
    """True iff some state has Y(Y(s)) != s, i.e. Y is shown non-involutive."""
    for s in states:
        try:
            if not is_involution_at(desc, s):
                return True
        except ZeroDivisionError:
            continue
    return False


# ---------------------------------------------------------------- Poisson geometry

def map_jacobian(desc: MapDescriptor, state: PairState) -> list[list]:
    p, q, a, b = state.halves()
    h = len(p)

    def fn(*w):
        u, v = desc.apply(w[:h], w[h:], a, b)
        return u + v

    return jacobian(fn, p + q)


def _matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), 0) for j in range(len(B[0]))]
            for i in range(len(A))]


def _transpose(A):
    return [list(r) for r in zip(*A)]


def poisson_matrix(desc: MapDescriptor, state: PairState) -> list[list]:
    p, q, a, b = state.halves()
    return [list(r) for r in desc.poisson.matrix(p, q, a, b)]


def check_poisson_invariance(desc: MapDescriptor, state: PairState) -> bool:
    """D J(s) D^T == J(Y(s)) exactly, with D the Jacobian of Y at s."""
    D = map_jacobian(desc, state)
    J = poisson_matrix(desc, state)
    image = desc.evaluate(state)
    J_image = poisson_matrix(desc, image)
    pushed = _matmul(_matmul(D, J), _transpose(D))
    return all(pushed[i][j] == J_image[i][j] for i in range(len(J)) for j in range(len(J)))


def gradient(desc: MapDescriptor, fn: Callable, state: PairState) -> list:
    p, q, a, b = state.halves()
    h = len(p)
    (row,) = jacobian(lambda *w: (fn(w[:h], w[h:], a, b),), p + q)
    return row


def poisson_bracket(desc: MapDescriptor, f: Callable, g: Callable, state: PairState):
    J = poisson_matrix(desc, state)
    df, dg = gradient(desc, f, state), gradient(desc, g, state)
    n = len(J)
    return sum((df[i] * J[i][j] * dg[j] for i in range(n) for j in range(n)), Fraction(0))


def check_involution_of_invariants(desc: MapDescriptor, state: PairState) -> bool:
    fns = [fn for _, fn in desc.invariants]
    for i in range(len(fns)):
        for j in range(i + 1, len(fns)):
            if poisson_bracket(desc, fns[i], fns[j], state) != 0:
                return False
    return True


def is_casimir(desc: MapDescriptor, fn: Callable, state: PairState) -> bool:
    J = poisson_matrix(desc, state)
    dc = gradient(desc, fn, state)
    return all(sum((J[i][j] * dc[j] for j in range(len(dc))), 0) == 0 for i in range(len(J)))


def check_casimirs(desc: MapDescriptor, state: PairState) -> bool:
    """Casimir count equals dim - rank, each Casimir has J grad C = 0 and C o Y = C."""
    J = poisson_matrix(desc, state)
    if len(desc.casimirs) != len(J) - exact_rank(J):
        return False
    p, q, a, b = state.halves()
    u, v = desc.apply(p, q, a, b)
    for _, fn in desc.casimirs:
        if not is_casimir(desc, fn, state):
            return False
        if fn(u, v, a, b) != fn(p, q, a, b):
            return False
    return True


def exact_rank(M) -> int:
    """Rank by fraction-free (Bareiss) elimination over the rationals."""
    rows = [[Fraction(v) for v in r] for r in M]
    if not rows or not rows[0]:
        return 0
    # clear denominators row by row so the elimination stays in the integers
    A = []
    for r in rows:
        den = 1
        for v in r:
            den = den * v.denominator // _gcd(den, v.denominator)
        A.append([int(v * den) for v in r])
    m, n = len(A), len(A[0])
    rank, prev = 0, 1
    for col in range(n):
        pivot = next((i for i in range(rank, m) if A[i][col] != 0), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        for i in range(rank + 1, m):
            for j in range(col + 1, n):
                A[i][j] = (A[i][j] * A[rank][col] - A[i][col] * A[rank][j]) // prev
            A[i][col] = 0
        prev = A[rank][col]
        rank += 1
        if rank == m:
            break
    return rank


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def check_rank(desc: MapDescriptor, state: PairState) -> int:
    return exact_rank(poisson_matrix(desc, state))


def invariant_gradient_rank(desc: MapDescriptor, state: PairState) -> int:
    """Rank of the stacked gradients of invariants and Casimirs at ``state``."""
    fns = [fn for _, fn in desc.invariants] + [fn for _, fn in desc.casimirs]
    return exact_rank([gradient(desc, fn, state) for fn in fns])


def check_invariants(desc: MapDescriptor, state: PairState) -> bool:
    p, q, a, b = state.halves()
    u, v = desc.apply(p, q, a, b)
    return all(fn(u, v, a, b) == fn(p, q, a, b) for _, fn in desc.invariants + desc.casimirs)


def jacobian_fd_error(desc: MapDescriptor, state: PairState, h: float = 1e-6) -> float:
    """Largest mixed relative error between the exact Jacobian and central differences."""
    exact = map_jacobian(desc, state)
    p, q, a, b = state.halves()
    w = [float(v) for v in p + q]
    fa = None if a is None else float(a)
    fb = None if b is None else float(b)
    k = len(p)
    worst = 0.0
    for j in range(len(w)):
        step = h * max(1.0, abs(w[j]))
        wp, wm = list(w), list(w)
        wp[j] += step
        wm[j] -= step
        up = sum(desc.apply(tuple(wp[:k]), tuple(wp[k:]), fa, fb), ())
        um = sum(desc.apply(tuple(wm[:k]), tuple(wm[k:]), fa, fb), ())
        for i in range(len(w)):
            fd = (up[i] - um[i]) / (2 * step)
            ex = float(exact[i][j])
            worst = max(worst, abs(fd - ex) / max(1.0, abs(ex)))
    return worst


# ---------------------------------------------------------------- suite runner

CHECKS = (
    "yb", "lax", "det", "trace", "reversible", "non-involutive", "invariants",
    "poisson", "involution", "casimir", "rank", "jacobian",
)


def _image_defined(desc):
    def check(s):
        desc.evaluate(s)
    return check


def _run_pairs(desc, seed, trials, check, *, distinct=False, pre=None):
    """Run ``check`` on ``trials`` states; returns (trials, failures, first_bad)."""
    failures, first = 0, None
    for i in range(trials):
        holder = {}

        def probe(s):
            if pre is not None:
                pre(s)
            holder["ok"] = check(desc, s)

        s = sample_state(desc, seed, i, distinct_params=distinct, check=probe)
        if not holder["ok"]:
            failures += 1
            if first is None:
                first = s
    return trials, failures, first


def _run_triples(desc, seed, trials):
    failures, first = 0, None
    for i in range(trials):
        holder = {}

        def probe(t):
            holder["ok"] = check_yb_equation(desc, t)

        t = sample_triple(desc, seed, i, check=probe)
        if not holder["ok"]:
            failures += 1
            if first is None:
                first = t
    return trials, failures, first


def _report(desc, name, seed, result, status=None, **kw):
    n, fails, first = result
    if status is None:
        status = "pass" if fails == 0 else "fail"
    return CheckReport(desc.name, name, n, fails, seed, first, status, **kw)


def _skip(desc, name, seed, reason):
    return CheckReport(desc.name, name, 0, 0, seed, None, "skipped", reason)


def run_check(desc: MapDescriptor, name: str, trials: int = 100, seed: int = 0) -> CheckReport:
    from .lax import get_lax

    if name == "yb":
        return _report(desc, name, seed, _run_triples(desc, seed, trials))

    if name in ("lax", "det", "trace"):
        if desc.lax is None:
            return _skip(desc, name, seed, "no Lax matrix for this map")
        lax = get_lax(desc.lax)
        fn = {"lax": check_refactorisation, "det": check_det_consistency,
              "trace": check_trace_preservation}[name]
        return _report(desc, name, seed, _run_pairs(desc, seed, trials, lambda d, s: fn(d, lax, s)),
                       info={"lax": desc.lax})

    if name == "reversible":
        result = _run_pairs(desc, seed, trials, check_reversibility)
        if desc.reversible:
            return _report(desc, name, seed, result)
        return _report(desc, name, seed, result, status="measured",
                       reason="reversibility not asserted for this map; outcome recorded only")

    if name == "non-involutive":
        if desc.involutive:
            result = _run_pairs(desc, seed, trials, is_involution_at)
            return _report(desc, name, seed, result, info={"expected": "involutive"})
        witness = None
        examined = 0
        for i in range(trials):
            s = sample_state(desc, seed, i, distinct_params=True,
                             check=lambda s: is_involution_at(desc, s))
            examined += 1
            if not is_involution_at(desc, s):
                witness = s
                break
        rep = CheckReport(desc.name, name, examined, 0 if witness else 1, seed,
                          None if witness else "no witness", "pass" if witness else "fail",
                          info={"expected": "non-involutive"})
        if witness is not None:
            rep.info["witness"] = witness
        return rep

    if name == "invariants":
        if not desc.invariants and not desc.casimirs:
            return _skip(desc, name, seed, "no invariants declared")
        return _report(desc, name, seed, _run_pairs(desc, seed, trials, check_invariants),
                       info={"invariants": desc.invariant_names() + [c for c, _ in desc.casimirs]})

    if name in ("poisson", "involution", "casimir", "rank"):
        if desc.poisson is None:
            return _skip(desc, name, seed, "no Poisson structure declared")
        if name == "poisson":
            fn = check_poisson_invariance
        elif name == "involution":
            fn = check_involution_of_invariants
        elif name == "casimir":
            fn = check_casimirs
        else:
            def fn(d, s):
                return check_rank(d, s) == d.poisson.rank
        return _report(desc, name, seed, _run_pairs(desc, seed, trials, fn,
                                                    pre=_image_defined(desc)),
                       info={"rank": desc.poisson.rank} if name == "rank" else {})

    if name == "jacobian":
        n = min(trials, 10)

        def fn(d, s):
            return jacobian_fd_error(d, s) <= 1e-6
        return _report(desc, name, seed, _run_pairs(desc, seed, n, fn))

    raise UnknownNameError("check", name)


def run_suite(map, checks: Iterable[str] | None = None, trials: int = 100, seed: int = 0,
              n: int | None = None) -> list[CheckReport]:
    desc = map if isinstance(map, MapDescriptor) else get_map(map, n)
    checks = list(CHECKS if checks is None else checks)
    for c in checks:
        if c not in CHECKS:
            raise UnknownNameError("check", c)
    return [run_check(desc, c, trials, seed) for c in checks]
