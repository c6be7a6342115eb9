"""Exact rational scalars and forward-mode dual numbers over them.

``ExactScalar`` is the stdlib :class:`fractions.Fraction`; it already keeps
values reduced with a positive denominator.  :class:`Dual` carries a value and
a full gradient vector, which is all that first-order Poisson brackets need.
"""
from __future__ import annotations

import operator
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DivisionByZero, SingularLocusError

ExactScalar = Fraction

_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "−": operator.sub,
    "*": operator.mul,
    "×": operator.mul,
    "/": operator.truediv,
    "÷": operator.truediv,
}


def to_exact(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` literal to an exact scalar.

    Floats are rejected: silently converting them would hide binary rounding.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")


def scalar_arith(op: str, lhs, rhs) -> Fraction:
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    lhs, rhs = to_exact(lhs), to_exact(rhs)
    if fn is operator.truediv and rhs == 0:
        raise DivisionByZero(f"{lhs} / 0")
    return fn(lhs, rhs)


def bit_size(q: Fraction) -> int:
    """Bits needed to store numerator and denominator of ``q``."""
    q = Fraction(q)
    return q.numerator.bit_length() + q.denominator.bit_length()


class Dual:
    """A value together with its exact gradient with respect to seeded variables."""

    __slots__ = ("value", "grad")

    def __init__(self, value, grad: Sequence):
        self.value = value
        self.grad = tuple(grad)

    @classmethod
    def constant(cls, value, n: int) -> "Dual":
        return cls(value, (0,) * n)

    @classmethod
    def variable(cls, value, index: int, n: int) -> "Dual":
        g = [0] * n
        g[index] = 1
        return cls(value, g)

    def _lift(self, other) -> "Dual":
        if isinstance(other, Dual):
            if len(other.grad) != len(self.grad):
                raise ValueError("dual numbers seeded with different dimensions")
            return other
        return Dual(other, (0,) * len(self.grad))

    def __add__(self, other):
        o = self._lift(other)
        return Dual(self.value + o.value, [p + q for p, q in zip(self.grad, o.grad)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Dual(self.value - o.value, [p - q for p, q in zip(self.grad, o.grad)])

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Dual(-self.value, [-p for p in self.grad])

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._lift(other)
        f, g = self.value, o.value
        return Dual(f * g, [f * dq + g * dp for dp, dq in zip(self.grad, o.grad)])

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.value == 0:
            raise ZeroDivisionError("dual division by zero")
        g = Fraction(o.value) if isinstance(o.value, int) else o.value
        q = self.value / g
        return Dual(q, [(dp - q * dq) / g for dp, dq in zip(self.grad, o.grad)])

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            return 1 / (self ** -k)
        result = Dual.constant(1, len(self.grad))
        for _ in range(k):
            result = result * self
        return result

    def __repr__(self):
        return f"Dual({self.value!r}, {list(self.grad)!r})"


def value_of(x):
    """Plain value of a Dual, or ``x`` itself for ordinary scalars."""
    return x.value if isinstance(x, Dual) else x


def seed(point: Sequence) -> list[Dual]:
    n = len(point)
    return [Dual.variable(v, i, n) for i, v in enumerate(point)]


def dual_eval(expr: Callable, point: Sequence) -> tuple:
    """Evaluate ``expr(*point)`` together with its exact gradient.

    Returns ``(value, jacobian_row)``.  A vanishing denominator raises
    :class:`SingularLocusError`.
    """
    point = [to_exact(v) if not isinstance(v, float) else v for v in point]
    try:
        out = expr(*seed(point))
    except ZeroDivisionError as exc:
        if isinstance(exc, SingularLocusError):
            raise
        raise SingularLocusError("denominator") from exc
    if not isinstance(out, Dual):
        return out, (Fraction(0),) * len(point)
    return out.value, tuple(Fraction(g) if isinstance(g, int) else g for g in out.grad)


def jacobian(fn: Callable, point: Sequence) -> list[list]:
    """Exact Jacobian of a vector-valued ``fn(*point)`` via one dual sweep."""
    outs = fn(*seed(point))
    n = len(point)
    rows = []
    for o in outs:
        if isinstance(o, Dual):
            rows.append(list(o.grad))
        else:
            rows.append([0] * n)
    return rows
