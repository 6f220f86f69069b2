"""Truncated Taylor jets in one variable.

A :class:`Jet` of order ``K`` holds the normalised Taylor coefficients
``c[k] = u^(k)(t0) / k!`` for ``k = 0..K``.  Arithmetic propagates exact
derivatives, so curvature expressions built from the jets of ``b`` and
``f`` come out with their own derivatives attached.
"""

from math import factorial

import numpy as np


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)
        if self.c.ndim != 1 or self.c.size == 0:
            raise ValueError("jet coefficients must be a non-empty 1-d array")

    @classmethod
    def from_derivatives(cls, derivs):
        d = np.asarray(derivs, dtype=float)
        return cls(d / np.array([factorial(k) for k in range(d.size)], dtype=float))

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, t0, order):
        """The identity map ``t`` expanded about ``t0``."""
        c = np.zeros(order + 1)
        c[0] = t0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self):
        return self.c.size - 1

    @property
    def value(self):
        return float(self.c[0])

    def derivatives(self):
        return self.c * np.array([factorial(k) for k in range(self.c.size)], dtype=float)

    def d(self, k):
        """k-th derivative at the expansion point."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative {k}")
        return float(self.c[k] * factorial(k))

    def truncate(self, order):
        return Jet(self.c[: order + 1])

    def deriv(self):
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.c.size)
        return Jet(self.c[1:] * k)

    def integrate(self, const=0.0):
        c = np.empty(self.c.size + 1)
        c[0] = const
        c[1:] = self.c / np.arange(1, self.c.size + 1)
        return Jet(c)

    def compose(self, inner):
        """``self(t0 + inner)`` where ``inner`` has zero constant term."""
        if inner.c[0] != 0.0:
            raise ValueError("inner jet must vanish at the expansion point")
        order = min(self.order, inner.order)
        inner = inner.truncate(order)
        acc = Jet.constant(self.c[order], order)
        for k in range(order - 1, -1, -1):
            acc = acc * inner + self.c[k]
        return acc

    # arithmetic ---------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, Jet):
            m = min(self.order, other.order)
            return self.c[: m + 1], other.c[: m + 1]
        c = np.zeros_like(self.c)
        c[0] = other
        return self.c, c

    def __add__(self, other):
        a, b = self._pair(other)
        return Jet(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        return Jet(a - b)

    def __rsub__(self, other):
        a, b = self._pair(other)
        return Jet(b - a)

    def __neg__(self):
        return Jet(-self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * other)
        a, b = self._pair(other)
        return Jet(np.convolve(a, b)[: a.size])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / other)
        a, b = self._pair(other)
        if b[0] == 0.0:
            raise ZeroDivisionError("jet division by a jet vanishing at the point")
        q = np.empty_like(a)
        for k in range(a.size):
            q[k] = (a[k] - np.dot(b[1 : k + 1], q[k - 1 :: -1][:k])) / b[0]
        return Jet(q)

    def __rtruediv__(self, other):
        return Jet.constant(other, self.order) / self

    def __pow__(self, p):
        if not isinstance(p, int):
            raise TypeError("only integer powers are supported")
        if p < 0:
            return 1.0 / (self ** (-p))
        out = Jet.constant(1.0, self.order)
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def __repr__(self):
        return f"Jet({np.array2string(self.derivatives(), precision=6)})"


def reparametrize_by_arclength(speed, t0):
    """Expansion of ``t(r) - t0`` where ``dt/dr = speed(t)`` and ``t(0) = t0``.

    ``speed`` is the jet of ``dt/dr`` as a function of ``t`` about ``t0``.
    The result has order ``speed.order + 1`` and is obtained by Picard
    iteration, which is exact after that many sweeps.
    """
    delta = Jet(np.zeros(speed.order + 2))
    for _ in range(speed.order + 2):
        delta = speed.compose(delta.truncate(speed.order)).integrate(0.0)
    return delta
