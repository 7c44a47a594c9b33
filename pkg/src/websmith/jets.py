"""Truncated Taylor series in one and two complex variables.

A :class:`Jet2` stores the coefficients ``c[i, j]`` of ``(x - x0)**i (y - y0)**j``
for ``i + j <= order`` around a fixed base point; a :class:`Series` is the
univariate analogue.  Arithmetic truncates above the common order, so every
result is exact up to that order.  The module also carries the operator
calculus used by the maximal-rank criterion: applying a product of constant
vector fields to ``f(u)`` and collecting the coefficients of ``f^(k)(u)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Number

import numpy as np
from scipy.signal import convolve2d

from .exceptions import StructuralError

__all__ = [
    "Series",
    "Jet2",
    "OperatorExpansion",
    "jet_add",
    "jet_mul",
    "jet_compose",
    "jet_directional",
    "operator_coefficients",
]

_CENTER_RTOL = 1e-12


def _triangle_mask(order):
    i, j = np.indices((order + 1, order + 1))
    return (i + j) <= order


def _same_point(a, b):
    scale = max(1.0, abs(a), abs(b))
    return abs(a - b) <= _CENTER_RTOL * scale


class Series:
    """Truncated univariate Taylor series ``sum c[n] (t - center)**n``."""

    __array_priority__ = 1000

    def __init__(self, coeffs, center=0.0):
        self.coeffs = np.asarray(coeffs, dtype=complex).copy()
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise StructuralError("Series needs a non-empty 1-d coefficient array")
        self.center = complex(center)

    @property
    def order(self):
        return self.coeffs.size - 1

    @property
    def value(self):
        return self.coeffs[0]

    @classmethod
    def variable(cls, center, order):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = center
        if order >= 1:
            c[1] = 1.0
        return cls(c, center)

    @classmethod
    def constant(cls, value, center, order):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c, center)

    def _check(self, other):
        if not isinstance(other, Series):
            raise StructuralError(f"cannot combine Series with {type(other).__name__}")
        if other.order != self.order or not _same_point(self.center, other.center):
            raise StructuralError(
                f"Series mismatch: order {self.order} at {self.center} vs "
                f"order {other.order} at {other.center}"
            )

    def __add__(self, other):
        if isinstance(other, Number):
            c = self.coeffs.copy()
            c[0] += other
            return Series(c, self.center)
        self._check(other)
        return Series(self.coeffs + other.coeffs, self.center)

    __radd__ = __add__

    def __neg__(self):
        return Series(-self.coeffs, self.center)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Series(self.coeffs * other, self.center)
        self._check(other)
        prod = np.convolve(self.coeffs, other.coeffs)[: self.order + 1]
        return Series(prod, self.center)

    __rmul__ = __mul__

    def reciprocal(self):
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("reciprocal of a series with zero constant term")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for n in range(1, a.size):
            b[n] = -np.dot(a[1 : n + 1], b[n - 1 :: -1][:n]) / a[0]
        return Series(b, self.center)

    def __truediv__(self, other):
        if isinstance(other, Number):
            return Series(self.coeffs / other, self.center)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Series.constant(1.0, self.center, self.order)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self):
        """d/dt, order drops by one."""
        if self.order == 0:
            raise StructuralError("cannot differentiate an order-0 series")
        n = np.arange(1, self.order + 1)
        return Series(self.coeffs[1:] * n, self.center)

    def integral(self, constant=0.0):
        """Antiderivative with the given value at the center; order grows by one."""
        n = np.arange(1, self.order + 2)
        return Series(np.concatenate([[constant], self.coeffs / n]), self.center)

    def truncate(self, order):
        if order > self.order:
            raise StructuralError("truncate cannot raise the order")
        return Series(self.coeffs[: order + 1], self.center)

    def derivatives(self):
        """All derivatives at the center, ``[f, f', f'', ...]``."""
        fact = np.array([math.factorial(n) for n in range(self.order + 1)], dtype=float)
        return self.coeffs * fact

    def __call__(self, t):
        dt = np.asarray(t, dtype=complex) - self.center
        return np.polyval(self.coeffs[::-1], dt)

    def __repr__(self):
        return f"Series(order={self.order}, center={self.center}, coeffs={self.coeffs!r})"


class Jet2:
    """Truncated bivariate complex Taylor expansion at a base point.

    ``coeffs[i, j]`` multiplies ``(x - x0)**i (y - y0)**j``; entries with
    ``i + j > order`` are kept at zero.
    """

    __array_priority__ = 1000

    def __init__(self, coeffs, base):
        c = np.array(coeffs, dtype=complex)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
            raise StructuralError("Jet2 coefficients must be a non-empty square array")
        self.coeffs = np.where(_triangle_mask(c.shape[0] - 1), c, 0.0)
        self.base = (complex(base[0]), complex(base[1]))

    # constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, base, order):
        return cls(np.zeros((order + 1, order + 1), dtype=complex), base)

    @classmethod
    def constant(cls, value, base, order):
        jet = cls.zeros(base, order)
        jet.coeffs[0, 0] = value
        return jet

    @classmethod
    def linear(cls, a, b, base, order, c=0.0):
        """Jet of ``a*x + b*y + c``."""
        x0, y0 = complex(base[0]), complex(base[1])
        jet = cls.constant(a * x0 + b * y0 + c, base, order)
        if order >= 1:
            jet.coeffs[1, 0] = a
            jet.coeffs[0, 1] = b
        return jet

    @classmethod
    def var_x(cls, base, order):
        return cls.linear(1.0, 0.0, base, order)

    @classmethod
    def var_y(cls, base, order):
        return cls.linear(0.0, 1.0, base, order)

    @classmethod
    def from_series(cls, series, axis, base, order=None):
        """Embed a univariate series in ``x`` (axis 0) or ``y`` (axis 1)."""
        order = series.order if order is None else order
        if not _same_point(series.center, complex(base[axis])):
            raise StructuralError("series center differs from the base coordinate")
        if series.order < order:
            raise StructuralError("series order too low for requested jet order")
        jet = cls.zeros(base, order)
        if axis == 0:
            jet.coeffs[:, 0] = series.coeffs[: order + 1]
        else:
            jet.coeffs[0, :] = series.coeffs[: order + 1]
        return jet

    # basic properties ---------------------------------------------------

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    @property
    def value(self):
        return self.coeffs[0, 0]

    @property
    def gradient(self):
        if self.order < 1:
            raise StructuralError("gradient needs a jet of order >= 1")
        return self.coeffs[1, 0], self.coeffs[0, 1]

    def derivative(self, i, j):
        """Partial derivative d^(i+j)/dx^i dy^j at the base point."""
        return self.coeffs[i, j] * math.factorial(i) * math.factorial(j)

    def homogeneous_norms(self):
        """Max-abs coefficient of each homogeneous part, degrees 0..order."""
        i, j = np.indices(self.coeffs.shape)
        deg = i + j
        return np.array([np.abs(self.coeffs[deg == n]).max() for n in range(self.order + 1)])

    def compatible(self, other):
        return (
            isinstance(other, Jet2)
            and other.order == self.order
            and _same_point(self.base[0], other.base[0])
            and _same_point(self.base[1], other.base[1])
        )

    def _check(self, other):
        if not isinstance(other, Jet2):
            raise StructuralError(f"cannot combine Jet2 with {type(other).__name__}")
        if not self.compatible(other):
            raise StructuralError(
                f"Jet2 mismatch: order {self.order} at {self.base} vs "
                f"order {other.order} at {other.base}"
            )

    def copy(self):
        return Jet2(self.coeffs, self.base)

    def truncate(self, order):
        if order > self.order:
            raise StructuralError("truncate cannot raise the order")
        return Jet2(self.coeffs[: order + 1, : order + 1], self.base)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Number):
            out = self.copy()
            out.coeffs[0, 0] += other
            return out
        self._check(other)
        return Jet2(self.coeffs + other.coeffs, self.base)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.coeffs, self.base)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Jet2(self.coeffs * other, self.base)
        self._check(other)
        m = self.order
        prod = convolve2d(self.coeffs, other.coeffs)[: m + 1, : m + 1]
        return Jet2(prod, self.base)

    __rmul__ = __mul__

    def reciprocal(self):
        v = self.value
        if v == 0:
            raise ZeroDivisionError("reciprocal of a jet vanishing at its base point")
        k = np.arange(self.order + 1)
        geo = (-1.0) ** k / v ** (k + 1)
        return jet_compose(Series(geo, v), self)

    def __truediv__(self, other):
        if isinstance(other, Number):
            return Jet2(self.coeffs / other, self.base)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Jet2.constant(1.0, self.base, self.order)
        sq = self
        while n:
            if n & 1:
                out = out * sq
            n >>= 1
            if n:
                sq = sq * sq
        return out

    # calculus -----------------------------------------------------------

    def partial(self, axis):
        """d/dx (axis 0) or d/dy (axis 1); the order drops by one."""
        if self.order == 0:
            raise StructuralError("cannot differentiate an order-0 jet")
        m = self.order
        c = self.coeffs
        if axis == 0:
            d = c[1:, :m] * np.arange(1, m + 1)[:, None]
        else:
            d = c[:m, 1:] * np.arange(1, m + 1)[None, :]
        return Jet2(d, self.base)

    def directional(self, alpha, beta):
        return jet_directional((alpha, beta), self)

    def __call__(self, x, y):
        """Evaluate the Taylor polynomial at ``(x, y)``."""
        dx = np.asarray(x, dtype=complex) - self.base[0]
        dy = np.asarray(y, dtype=complex) - self.base[1]
        m = self.order
        # Horner in x of polynomials in y
        acc = np.zeros(np.broadcast(dx, dy).shape, dtype=complex)
        for i in range(m, -1, -1):
            row = self.coeffs[i, : m - i + 1]
            acc = acc * dx + np.polyval(row[::-1], dy)
        return acc

    def substitute_linear(self, matrix, new_base):
        """Re-expand ``u(L @ (x, y) + t)`` around ``new_base``.

        ``self`` must sit at ``L @ new_base + t``; only the linear part enters.
        """
        L = np.asarray(matrix, dtype=complex)
        m = self.order
        dX = Jet2.linear(L[0, 0], L[0, 1], new_base, m)
        dY = Jet2.linear(L[1, 0], L[1, 1], new_base, m)
        dX.coeffs[0, 0] = 0.0
        dY.coeffs[0, 0] = 0.0
        pow_x = [Jet2.constant(1.0, new_base, m)]
        pow_y = [Jet2.constant(1.0, new_base, m)]
        for _ in range(m):
            pow_x.append(pow_x[-1] * dX)
            pow_y.append(pow_y[-1] * dY)
        out = Jet2.zeros(new_base, m)
        for i in range(m + 1):
            for j in range(m + 1 - i):
                c = self.coeffs[i, j]
                if c != 0:
                    out = out + (pow_x[i] * pow_y[j]) * c
        return out

    def __repr__(self):
        return f"Jet2(order={self.order}, base={self.base}, value={self.value})"


def jet_add(a, b):
    """Coefficientwise sum of two compatible jets."""
    if not isinstance(a, Jet2):
        raise StructuralError("jet_add expects Jet2 operands")
    return a + b


def jet_mul(a, b):
    """Cauchy product truncated at the common total degree."""
    if not isinstance(a, Jet2):
        raise StructuralError("jet_mul expects Jet2 operands")
    return a * b


def jet_compose(f, u):
    """Jet of ``f(u)`` for a univariate series ``f`` centered at ``u(base)``.

    Horner evaluation in ``u - u(base)``; ``f`` must have at least the jet order.
    """
    if not isinstance(f, Series) or not isinstance(u, Jet2):
        raise StructuralError("jet_compose expects (Series, Jet2)")
    if not _same_point(f.center, u.value):
        raise StructuralError(
            f"series centered at {f.center} cannot be composed with a jet of value {u.value}"
        )
    if f.order < u.order:
        raise StructuralError("series order lower than jet order")
    delta = u - u.value
    out = Jet2.constant(f.coeffs[u.order], u.base, u.order)
    for n in range(u.order - 1, -1, -1):
        out = out * delta + f.coeffs[n]
    return out


def jet_directional(direction, a):
    """Jet of ``alpha * da/dx + beta * da/dy``; the order drops by one."""
    alpha, beta = direction
    if a.order == 0:
        raise StructuralError("directional derivative needs a jet of order >= 1")
    return a.partial(0) * alpha + a.partial(1) * beta


@dataclass
class OperatorExpansion:
    """``X_1 ... X_p f(u) = sum_k terms[k] * f^(k)(u)`` for symbolic ``f``."""

    terms: dict = field(default_factory=dict)

    @property
    def p(self):
        return max(self.terms)

    def top(self):
        return self.terms[self.p]

    def ratios(self):
        """``b_k = a_k / a_p`` for ``k < p``."""
        top = self.top()
        return {k: a / top for k, a in self.terms.items() if k < self.p}


def operator_coefficients(u, directions):
    """Coefficients ``a_k`` of ``X_1 ... X_p f(u)`` for constant fields ``X_k``.

    ``directions`` lists ``(alpha, beta)`` for ``X = alpha d/dx + beta d/dy``.
    Each field acts through ``X(a f^(k)(u)) = a (Xu) f^(k+1)(u) + (Xa) f^(k)(u)``,
    applied from ``X_p`` down to ``X_1``.  The returned jets have order
    ``u.order - p``.
    """
    p = len(directions)
    if p == 0:
        raise ValueError("need at least one direction")
    if u.order < p + 1:
        raise StructuralError(f"jet order {u.order} too low for {p} directions (need {p + 1})")
    terms = {0: Jet2.constant(1.0, u.base, u.order)}
    cur = u.order
    for d in reversed(directions):
        xu = jet_directional(d, u.truncate(cur))
        new = {}
        for k, a in terms.items():
            lifted = a.truncate(cur - 1) * xu
            new[k + 1] = new[k + 1] + lifted if k + 1 in new else lifted
            da = jet_directional(d, a)
            new[k] = new[k] + da if k in new else da
        cur -= 1
        terms = new
    terms.pop(0, None)
    return OperatorExpansion({k: terms[k] for k in range(1, p + 1)})
