from fractions import Fraction as F

import pytest

from ybmaps.catalog import (
    ADLER_YAMILOV,
    DIHEDRAL6,
    DNLS4,
    DNLS6_ORIG,
    MAP_NAMES,
    NLS6,
    REGISTRY,
    PairState,
    Registry,
    SingularParameterError,
    dihedral_fgh,
    eval_adler,
    eval_adler_yamilov,
    eval_dihedral6,
    eval_dihedral_linear,
    eval_dnls4,
    eval_dnls6_original,
    eval_dnls6_reparam,
    eval_invariant,
    eval_nls6,
    eval_vector_nls,
    eval_vector_z2,
    get_map,
    linear_dihedral_matrix,
    vector_nls,
)
from ybmaps.errors import SingularLocusError, UnknownNameError
from ybmaps.verify import exact_rank, sample_state

a, b = F(2), F(1)


def S(x, y, aux=None, params=None):
    return PairState(tuple(map(F, x)), tuple(map(F, y)),
                     None if aux is None else tuple(map(F, aux)),
                     None if params is None else tuple(map(F, params)))


# adler

def test_adler_example():
    assert eval_adler(F(1), F(1), F(2), F(0)) == (0, 2)


def test_adler_equal_params_swap():
    assert eval_adler(F(3, 4), F(-5), F(7), F(7)) == (F(-5), F(3, 4))


def test_adler_singular():
    with pytest.raises(SingularLocusError):
        eval_adler(F(1), F(-1), F(1), F(0))


# nls6

def test_nls6_zero_fields():
    out = eval_nls6(S((0, 0), (0, 0), (F(5, 3), F(-2))))
    assert out == S((0, 0), (0, 0), (F(5, 3), F(-2)))


def test_nls6_example():
    out = eval_nls6(S((1, 0), (0, 1), (1, 1)))
    assert out == S((0, 1), (1, 0), (1, 1))
    assert eval_invariant(NLS6, "I1", out) == 2
    assert eval_invariant(NLS6, "I2", out) == 2


def test_nls6_singular():
    with pytest.raises(SingularLocusError, match="1\\+x1\\*y2"):
        eval_nls6(S((1, 0), (0, -1), (3, 4)))


# adler-yamilov

def test_ay_swap():
    assert eval_adler_yamilov(S((1, 2), (3, 4), params=(5, 5))) == S((3, 4), (1, 2), params=(5, 5))


def test_ay_example():
    out = eval_adler_yamilov(S((1, 0), (0, 0), params=(2, 1)))
    assert (out.x, out.y) == ((-1, 0), (1, 0))
    assert eval_invariant(ADLER_YAMILOV, "I1", out) == 3


def test_ay_singular():
    with pytest.raises(SingularLocusError):
        eval_adler_yamilov(S((1, 0), (0, -1), params=(2, 1)))


# dnls6, first parametrisation

def test_dnls6_orig_invariants_at_example():
    s = S((1, 1), (1, 1), (F(1, 2), F(1, 3)))
    out = eval_dnls6_original(s)
    U, V = out.aux
    assert U * V == F(1, 6)
    x, y = s.x, s.y
    u, v = out.x, out.y
    lhs = (u[0] * v[1] + u[1] * v[0]) * U * V + U + V
    rhs = (x[0] * y[1] + x[1] * y[0]) * F(1, 6) + F(1, 2) + F(1, 3)
    assert lhs == rhs


def test_dnls6_orig_structural_components():
    for i in range(50):
        s = sample_state(DNLS6_ORIG, 4, i)
        out = eval_dnls6_original(s)
        assert out.x[1] == s.y[1] and out.y[0] == s.x[0]


def test_dnls6_orig_singular():
    # x1*x2*X + x1*y2*Y = 1
    with pytest.raises(SingularLocusError, match="x1\\*x2\\*X"):
        eval_dnls6_original(S((1, 1), (1, 1), (F(1, 2), F(1, 2))))


# dnls6, second parametrisation

def test_dnls6_reparam_example():
    out = eval_dnls6_reparam(S((1, 1), (1, 1), (3, 4)))
    assert out == S((0, F(1, 2)), (2, F(3, 2)), (2, 6))
    U, V = out.aux
    u, v = out.x, out.y
    assert U * V == 12
    assert u[0] * v[1] + u[1] * v[0] + U + V == 9
    assert u[0] + v[0] == 2 and u[1] + v[1] == 2


def test_dnls6_reparam_zero_fields():
    out = eval_dnls6_reparam(S((0, 0), (0, 0), (F(2, 3), F(-7))))
    assert out == S((0, 0), (0, 0), (F(2, 3), F(-7)))


def test_dnls6_reparam_singular():
    with pytest.raises(SingularLocusError, match="X-x1"):
        eval_dnls6_reparam(S((1, 1), (1, 1), (2, 4)))


# dnls4

def test_dnls4_example():
    s = S((1, 1), (1, 1), params=(2, 3))
    out = eval_dnls4(s)
    assert (out.x, out.y) == ((0, F(1, 2)), (2, F(3, 2)))
    for name, val in (("C1", 2), ("C2", 2), ("I1", 12), ("I2", 9)):
        assert eval_invariant(DNLS4, name, s) == val
        assert eval_invariant(DNLS4, name, out) == val


def test_dnls4_swap():
    out = eval_dnls4(S((1, F(2, 3)), (4, 5), params=(F(1, 2), F(1, 2))))
    assert (out.x, out.y) == ((4, 5), (1, F(2, 3)))


def test_dnls4_singular():
    with pytest.raises(SingularLocusError):
        eval_dnls4(S((2, 0), (0, 1), params=(2, 3)))


# dihedral6

def test_dihedral_zero_field_polynomials():
    X, Y, p, q = F(3), F(-2, 5), F(7, 3), F(1, 2)
    f, g, h = dihedral_fgh(0, 0, 0, 0, X, Y, p, q)
    assert f == 0
    assert h == (p * q - X * Y) ** 2
    assert g == X * (p * q - X * Y) ** 2


def test_dihedral_zero_field_fixed_point():
    s = S((0, 0), (0, 0), (3, F(1, 2)), (2, 5))
    assert eval_dihedral6(s) == s


def test_dihedral_singular_at_ab_eq_XY():
    with pytest.raises(SingularLocusError):
        eval_dihedral6(S((0, 0), (0, 0), (2, 3), (1, 6)))


def test_dihedral_invariants_and_structure():
    for i in range(30):
        s = sample_state(DIHEDRAL6, 9, i, check=DIHEDRAL6.evaluate)
        out = eval_dihedral6(s)
        assert out.x[1] == s.y[1] and out.y[0] == s.x[0]
        for name in ("I1", "I2", "I3"):
            assert eval_invariant(DIHEDRAL6, name, out) == eval_invariant(DIHEDRAL6, name, s)


# linearised dihedral

def test_linear_dihedral_swap_at_equal_params():
    for p in (F(1, 3), F(2), F(-5, 7)):
        M = linear_dihedral_matrix(p, p)
        assert M == [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]


def test_linear_dihedral_zero():
    assert eval_dihedral_linear(S((0, 0), (0, 0), params=(2, 3))) == S((0, 0), (0, 0), params=(2, 3))


def test_linear_dihedral_singular_parameter():
    with pytest.raises(SingularParameterError):
        eval_dihedral_linear(S((1, 2), (3, 4), params=(1, -1)))


def test_linear_dihedral_is_linear():
    al, be = F(2, 3), F(-5)
    for i in range(20):
        s = sample_state(REGISTRY.get("dihedral-linear"), 1, i)
        t = sample_state(REGISTRY.get("dihedral-linear"), 2, i)
        t = PairState(t.x, t.y, None, s.params)
        comb = PairState(tuple(al * p + be * q for p, q in zip(s.x, t.x)),
                         tuple(al * p + be * q for p, q in zip(s.y, t.y)), None, s.params)
        ys, yt, yc = map(eval_dihedral_linear, (s, t, comb))
        assert yc.x == tuple(al * p + be * q for p, q in zip(ys.x, yt.x))
        assert yc.y == tuple(al * p + be * q for p, q in zip(ys.y, yt.y))


# vector maps

def test_vector_nls_example():
    s = S((1, 0, 0, 0), (0, 0, 0, 1), params=(5, 2))
    out = eval_vector_nls(s)
    # the shipped sign makes N=1 agree with the scalar map: u1 = y1 - (a-b) x1
    assert out.x == (-3, 0, 0, 1)
    assert out.y == (1, 0, 0, 3)
    inner = vector_nls(2).invariant("I1")
    assert inner(out.x, out.y, 5, 2) == inner(s.x, s.y, 5, 2) == 0


def test_vector_nls_as_printed_sign_differs():
    s = S((1, 0, 0, 0), (0, 0, 0, 1), params=(5, 2))
    out = eval_vector_nls(s, "as-printed")
    assert out.x == (3, 0, 0, 1) and out.y == (1, 0, 0, -3)


def test_vector_z2_example():
    s = S((1, 0, 1, 1), (1, 1, 0, 1), params=(2, 1))
    out = eval_vector_z2(s)
    assert out.x == (F(3, 2), 1, 0, 2)
    assert out.y == (F(1, 2), 0, 1, 0)
    i1 = get_map("vector-z2").invariant("I1")
    assert i1(s.x, s.y, 2, 1) == i1(out.x, out.y, 2, 1) == 4


@pytest.mark.parametrize("fn", [eval_vector_nls, eval_vector_z2])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_vector_swap_at_equal_params(fn, n):
    x = tuple(F(i + 1, 2) for i in range(2 * n))
    y = tuple(F(-i, 3) for i in range(2 * n))
    out = fn(PairState(x, y, None, (F(4), F(4))))
    assert (out.x, out.y) == (y, x)


@pytest.mark.parametrize("vec, scalar", [("vector-nls", ADLER_YAMILOV), ("vector-z2", DNLS4)])
def test_vector_n1_matches_scalar(vec, scalar):
    desc = get_map(vec, 1)
    for i in range(100):
        s = sample_state(scalar, 21, i, check=scalar.evaluate)
        assert desc.evaluate(s) == scalar.evaluate(s)


# registry and descriptors

def test_registry_names():
    assert tuple(REGISTRY.names()) == MAP_NAMES
    assert len(REGISTRY) == 10
    with pytest.raises(UnknownNameError):
        get_map("no-such-map")


def test_unknown_invariant():
    with pytest.raises(UnknownNameError):
        eval_invariant(ADLER_YAMILOV, "I9", S((1, 0), (0, 0), params=(2, 1)))


def test_empty_registry():
    assert len(Registry()) == 0 and list(Registry()) == []


def test_integer_inputs_stay_exact():
    u, v = ADLER_YAMILOV.apply((1, 0), (0, 0), 2, 1)
    assert all(isinstance(c, F) for c in u + v)


def test_poisson_matrices_antisymmetric_with_declared_rank():
    for desc in (ADLER_YAMILOV, DNLS4):
        for i in range(20):
            s = sample_state(desc, 3, i)
            J = desc.poisson.matrix(*s.halves())
            assert all(J[r][c] == -J[c][r] for r in range(4) for c in range(4))
            assert exact_rank(J) == desc.poisson.rank


def test_pairstate_rejects_unequal_lengths():
    with pytest.raises(ValueError):
        PairState((1, 2), (1,))
