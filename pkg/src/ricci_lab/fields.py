"""Scalar functions of the radial coordinate with derivative evaluators."""

import math

import numpy as np
import sympy as sp
from scipy.interpolate import make_interp_spline

from .errors import DomainError
from .jets import Jet

T = sp.Symbol("t", real=True)


class RadialScalarField:
    """A function of the radial coordinate ``t`` on ``[lo, hi]``.

    ``derivs(t, order)`` returns ``[u, u', ..., u^(order)]``.  Closed forms
    carry exact derivatives; sampled data carries quintic-spline ones.
    Evaluating outside the domain raises :class:`DomainError`.
    """

    def __init__(self, derivs, lo=-math.inf, hi=math.inf, name="", expr=None):
        if not lo <= hi:
            raise ValueError(f"empty domain [{lo}, {hi}]")
        self._derivs = derivs
        self.lo = float(lo)
        self.hi = float(hi)
        self.name = name
        self.expr = expr

    # construction -------------------------------------------------------

    @classmethod
    def from_expr(cls, expr, lo=-math.inf, hi=math.inf, name="", **params):
        """Closed form in the symbol ``t``; ``params`` substitute other symbols."""
        if isinstance(expr, str):
            expr = sp.sympify(expr, locals={"t": T})
        expr = sp.sympify(expr)
        for sym in expr.free_symbols:
            if sym.name == "t" and sym is not T:
                expr = expr.subs(sym, T)
        if params:
            expr = expr.subs({sp.Symbol(k): v for k, v in params.items()})
            expr = expr.subs({sp.Symbol(k, real=True): v for k, v in params.items()})
        leftover = expr.free_symbols - {T}
        if leftover:
            raise ValueError(f"unbound symbols in field expression: {sorted(map(str, leftover))}")

        cache = []

        def derivs(t, order):
            while len(cache) <= order:
                k = len(cache)
                dk = sp.diff(expr, T, k) if k else expr
                cache.append(sp.lambdify(T, dk, modules="math"))
            try:
                return np.array([float(cache[k](t)) for k in range(order + 1)])
            except (ValueError, ZeroDivisionError, OverflowError) as exc:
                raise DomainError(f"{name or expr} not smooth at t={t}: {exc}") from None

        return cls(derivs, lo, hi, name=name or str(expr), expr=expr)

    @classmethod
    def constant(cls, value, lo=-math.inf, hi=math.inf, name=""):
        return cls.from_expr(sp.Float(value) if value != int(value) else sp.Integer(int(value)),
                             lo, hi, name=name or f"{value}")

    @classmethod
    def from_samples(cls, t, *arrays, name=""):
        """Field through samples ``arrays = (u, u', u'', ...)`` on nodes ``t``.

        Each supplied derivative array gets its own quintic interpolating
        spline; orders beyond the last supplied array come from the
        derivatives of that array's spline.  At a node the supplied
        samples are returned exactly.
        """
        t = np.asarray(t, dtype=float)
        if t.ndim != 1 or t.size < 6:
            raise ValueError("need at least 6 strictly increasing nodes")
        if np.any(np.diff(t) <= 0):
            raise ValueError("nodes must be strictly increasing")
        arrays = [np.asarray(a, dtype=float) for a in arrays]
        if not arrays or any(a.shape != t.shape for a in arrays):
            raise ValueError("every sample array must match the node array")
        splines = [make_interp_spline(t, a, k=5) for a in arrays]
        top = len(arrays) - 1

        def derivs(x, order):
            i = np.searchsorted(t, x)
            on_node = i < t.size and t[i] == x
            out = np.empty(order + 1)
            for k in range(order + 1):
                if k <= top:
                    out[k] = arrays[k][i] if on_node else splines[k](x)
                else:
                    out[k] = splines[top](x, nu=k - top)
            return out

        return cls(derivs, t[0], t[-1], name=name or "sampled")

    # evaluation ---------------------------------------------------------

    def contains(self, t):
        return self.lo <= t <= self.hi

    def derivatives(self, t, order=3):
        t = float(t)
        if not self.contains(t):
            raise DomainError(f"t={t} outside [{self.lo}, {self.hi}] for field {self.name}")
        return self._derivs(t, order)

    def __call__(self, t):
        return tuple(self.derivatives(t, 3))

    def value(self, t):
        return float(self.derivatives(t, 0)[0])

    def jet(self, t, order):
        return Jet.from_derivatives(self.derivatives(t, order))

    def extended(self):
        """Value evaluator accepting ``np.longdouble`` input, or None."""
        if self.expr is None:
            return None
        return sp.lambdify(T, self.expr, modules="numpy")

    # arithmetic ---------------------------------------------------------

    def _combine(self, other, op, sym_op, label):
        if not isinstance(other, RadialScalarField):
            other = RadialScalarField.constant(float(other))
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        name = f"({self.name}{label}{other.name})"
        if self.expr is not None and other.expr is not None:
            return RadialScalarField.from_expr(sym_op(self.expr, other.expr), lo, hi, name=name)

        def derivs(t, order):
            return op(Jet.from_derivatives(self._derivs(t, order)),
                      Jet.from_derivatives(other._derivs(t, order))).derivatives()

        return RadialScalarField(derivs, lo, hi, name=name)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, lambda a, b: a + b, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, lambda a, b: a - b, "-")

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b, lambda a, b: a * b, "*")

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __repr__(self):
        return f"RadialScalarField({self.name!r}, [{self.lo}, {self.hi}])"
