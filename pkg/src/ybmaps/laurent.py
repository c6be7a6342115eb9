"""Sparse Laurent polynomials in the spectral parameter and square matrices of them.

A polynomial is a map ``exponent -> coefficient`` with no zero coefficients
stored, so equality is plain dict equality and "for every lambda" means
"coefficient-wise".
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping

from .errors import SizeMismatchError


def _norm(c):
    return Fraction(c) if isinstance(c, int) else c


class LaurentPoly:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c = {}
        for k, v in (coeffs or {}).items():
            if v != 0:
                c[int(k)] = _norm(v)
        self._c = c

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, k: int) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        return x if isinstance(x, LaurentPoly) else cls.const(x)

    def coeff(self, k: int):
        return self._c.get(k, Fraction(0))

    def items(self) -> list[tuple[int, object]]:
        """(exponent, coefficient) pairs in increasing exponent order."""
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self):
        return max(self._c) if self._c else None

    @property
    def valuation(self):
        return min(self._c) if self._c else None

    def __add__(self, other):
        o = LaurentPoly.coerce(other)
        c = dict(self._c)
        for k, v in o._c.items():
            c[k] = c.get(k, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({k: v * other for k, v in self._c.items()})
        c: dict[int, object] = {}
        for i, p in self._c.items():
            for j, q in other._c.items():
                c[i + j] = c.get(i + j, 0) + p * q
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        return self._c == LaurentPoly.const(other)._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __call__(self, lam):
        return sum((v * lam**k for k, v in self._c.items()), 0)

    def __repr__(self):
        if not self._c:
            return "0"
        terms = []
        for k, v in sorted(self._c.items(), reverse=True):
            if k == 0:
                terms.append(f"{v}")
            elif k == 1:
                terms.append(f"({v})*lam")
            else:
                terms.append(f"({v})*lam^{k}")
        return " + ".join(terms)


LAM = LaurentPoly({1: 1})


class LaurentMatrix:
    """An n-by-n matrix of Laurent polynomials."""

    __slots__ = ("size", "rows")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(LaurentPoly.coerce(e) for e in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise SizeMismatchError("a LaurentMatrix must be square and non-empty")
        self.size = n
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        if other.size != self.size:
            raise SizeMismatchError(f"sizes differ: {self.size} vs {other.size}")
        return other

    def __matmul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        n = self.size
        cols = list(zip(*other.rows))
        return LaurentMatrix(
            [[_dot(self.rows[i], cols[j]) for j in range(n)] for i in range(n)]
        )

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return LaurentMatrix(
            [[p + q for p, q in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return LaurentMatrix(
            [[p - q for p, q in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.size == other.size and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def trace(self) -> LaurentPoly:
        return sum((self.rows[i][i] for i in range(self.size)), LaurentPoly())

    def det(self) -> LaurentPoly:
        # Leibniz expansion; Lax matrices here are at most 4x4.
        n = self.size
        total = LaurentPoly()
        for perm in permutations(range(n)):
            term = LaurentPoly.const(_sign(perm))
            for i, j in enumerate(perm):
                term = term * self.rows[i][j]
                if term.is_zero():
                    break
            total = total + term
        return total

    def __call__(self, lam):
        """Numeric matrix at a concrete value of the spectral parameter."""
        return [[e(lam) for e in r] for r in self.rows]

    def __repr__(self):
        return "LaurentMatrix(" + "; ".join(", ".join(map(repr, r)) for r in self.rows) + ")"


def _dot(row, col) -> LaurentPoly:
    acc = LaurentPoly()
    for p, q in zip(row, col):
        if not p.is_zero() and not q.is_zero():
            acc = acc + p * q
    return acc


def _sign(perm) -> int:
    s, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def laurent_mat_mul(A: LaurentMatrix, B: LaurentMatrix) -> LaurentMatrix:
    return A @ B


def laurent_mat_equal(A: LaurentMatrix, B: LaurentMatrix) -> bool:
    return A == B
