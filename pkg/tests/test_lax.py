from fractions import Fraction as F

import pytest

from ybmaps.catalog import (
    ADLER,
    ADLER_YAMILOV,
    DIHEDRAL6,
    NLS6,
    PairState,
    corrupt,
    get_map,
    permutation_map,
)
from ybmaps.errors import ArityError, UnknownNameError
from ybmaps.lax import (
    LAX_PAIRS,
    build_lax,
    check_det_consistency,
    check_refactorisation,
    check_trace_preservation,
    extract_trace_invariants,
)
from ybmaps.laurent import LAM, LaurentMatrix, LaurentPoly
from ybmaps.verify import run_check, sample_state


def lam(k):
    return LaurentPoly.monomial(1, k)


def test_nls_lax_at_zero_fields():
    assert build_lax("nls", (0, 0), 0) == LaurentMatrix([[LAM, 0], [0, 1]])


def test_adler_lax_at_zero():
    a = F(5, 2)
    assert build_lax("adler", (0,), a) == LaurentMatrix([[0, 1], [a - LAM, 0]])


def test_dihedral_lax_entries():
    N = build_lax("dihedral-3d", (1, 0, 2), 1)
    assert N[0, 0] == 2 * lam(2) + 1
    assert N[0, 1] == 2 * lam(1)
    assert N[1, 0] == 2 * lam(-1)
    assert N[1, 1] == 2 * lam(-2) + 1


def test_vector_lax_shape():
    M = build_lax("vector-z2", (1, 2, 3, 4), F(1, 2))
    assert M.size == 3
    assert M[1, 1] == 1 and M[2, 2] == 1 and M[1, 2] == 0
    assert M[0, 0] == (F(1, 2) + 11) * lam(2) + 1
    assert M[0, 2] == 2 * LAM and M[2, 0] == 4 * LAM


def test_builder_errors():
    with pytest.raises(UnknownNameError):
        build_lax("laxXYZ", (1,), 0)
    with pytest.raises(ArityError):
        build_lax("nls", (1, 2, 3), 0)
    with pytest.raises(ArityError):
        build_lax("vector-nls", (1, 2, 3), 0)


def test_adler_refactorisation_example():
    s = PairState((F(1),), (F(1),), None, (F(2), F(0)))
    assert check_refactorisation(ADLER, "adler", s)
    lhs = build_lax("adler", (0,), 2) @ build_lax("adler", (2,), 0)
    rhs = build_lax("adler", (1,), 0) @ build_lax("adler", (1,), 2)
    assert lhs == rhs


@pytest.mark.parametrize("lax", ["nls-darboux-3d", "dnls-darboux-3d", "dnls-reparam-3d"])
def test_permutation_map_refactorises(lax):
    # no parameters: both sides are literally L(y)L(x)
    swap = permutation_map(3, 1, 0)
    for i in range(10):
        assert check_refactorisation(swap, lax, sample_state(swap, 0, i))


def test_corrupted_map_fails_refactorisation():
    bad = corrupt(ADLER_YAMILOV, 0)
    s = PairState((F(1), F(0)), (F(0), F(0)), None, (F(2), F(1)))
    assert not check_refactorisation(bad, "nls", s)


@pytest.mark.parametrize("map_name, lax", LAX_PAIRS)
def test_refactorisation_pairs(map_name, lax):
    rep = run_check(get_map(map_name), "lax", 30, 3)
    assert rep.failures == 0
    assert run_check(get_map(map_name), "det", 30, 3).failures == 0


@pytest.mark.parametrize("n", [1, 3])
@pytest.mark.parametrize("name", ["vector-nls", "vector-z2"])
def test_vector_refactorisation_other_sizes(name, n):
    assert run_check(get_map(name, n), "lax", 20, 1).failures == 0


def test_nls6_trace_coefficients():
    s = PairState((F(2), F(-1, 3)), (F(5), F(1, 7)), (F(3, 2), F(-4)))
    coeffs = dict(extract_trace_invariants("nls-darboux-3d", s, parametric=False))
    (x1, x2), (y1, y2), (X, Y) = s.x, s.y, s.aux
    assert coeffs[2] == 1
    assert coeffs[1] == X + Y
    # constant term carries the product of the two unit corners
    assert coeffs[0] == x2 * y1 + x1 * y2 + X * Y + 1


def test_ay_trace_linear_coefficient():
    s = PairState((F(1), F(0)), (F(0), F(0)), None, (F(2), F(1)))
    coeffs = dict(extract_trace_invariants("nls", s))
    assert coeffs[1] == 3


def test_trace_at_zero_fields():
    s = PairState((F(0), F(0)), (F(0), F(0)), None, (F(0), F(0)))
    assert extract_trace_invariants("nls", s) == [(0, 1), (2, 1)]


def test_dihedral_trace_matches_invariants():
    for i in range(10):
        s = sample_state(DIHEDRAL6, 5, i)
        p, q, a, b = s.halves()
        coeffs = dict(extract_trace_invariants("dihedral-3d", s))
        I1, I2, I3 = (fn(p, q, a, b) for _, fn in DIHEDRAL6.invariants)
        assert coeffs[4] == coeffs[-4] == I1
        assert coeffs[2] == coeffs[-2] == I2
        assert coeffs[0] == I3


def test_trace_preservation_ay():
    assert run_check(ADLER_YAMILOV, "trace", 100, 0).failures == 0


def test_trace_preservation_dihedral_fixed_point():
    s = PairState((F(0), F(0)), (F(0), F(0)), (F(3), F(1, 2)), (F(2), F(5)))
    assert check_trace_preservation(DIHEDRAL6, "dihedral-3d", s)


def test_trace_preservation_detects_corruption():
    rep = run_check(corrupt(ADLER_YAMILOV, 3), "trace", 100, 0)
    assert rep.failures > 0


def test_det_consistency_on_nls6():
    for i in range(20):
        assert check_det_consistency(NLS6, "nls-darboux-3d", sample_state(NLS6, 1, i))
