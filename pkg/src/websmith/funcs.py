"""Elementary functions acting on scalars, arrays, :class:`Series` and :class:`Jet2`.

Closed-form defining functions are written once with these and then evaluated
either pointwise or as Taylor jets.
"""

from __future__ import annotations

import math

import numpy as np

from .jets import Jet2, Series, jet_compose

__all__ = [
    "exp", "log", "sin", "cos", "sinh", "cosh", "tanh", "sqrt", "power",
    "taylor_exp", "taylor_sin", "taylor_cos", "taylor_log", "taylor_power",
    "lift",
]


def _fact(order):
    return np.array([math.factorial(n) for n in range(order + 1)], dtype=float)


def taylor_exp(c, order):
    return Series(np.exp(c) / _fact(order), c)


def taylor_sin(c, order):
    cyc = np.array([np.sin(c), np.cos(c), -np.sin(c), -np.cos(c)])
    return Series(cyc[np.arange(order + 1) % 4] / _fact(order), c)


def taylor_cos(c, order):
    cyc = np.array([np.cos(c), -np.sin(c), -np.cos(c), np.sin(c)])
    return Series(cyc[np.arange(order + 1) % 4] / _fact(order), c)


def taylor_sinh(c, order):
    cyc = np.array([np.sinh(c), np.cosh(c)])
    return Series(cyc[np.arange(order + 1) % 2] / _fact(order), c)


def taylor_cosh(c, order):
    cyc = np.array([np.cosh(c), np.sinh(c)])
    return Series(cyc[np.arange(order + 1) % 2] / _fact(order), c)


def taylor_log(c, order):
    if c == 0:
        raise ZeroDivisionError("log expanded at 0")
    n = np.arange(1, order + 1)
    tail = (-1.0) ** (n + 1) / (n * c**n)
    return Series(np.concatenate([[np.log(c)], tail]), c)


def taylor_power(c, a, order):
    """Series of ``t**a`` (principal branch) at ``t = c``."""
    coeffs = np.empty(order + 1, dtype=complex)
    coeffs[0] = np.power(complex(c), a)
    binom = 1.0
    for n in range(1, order + 1):
        binom *= (a - n + 1) / n
        coeffs[n] = binom * coeffs[0] / complex(c) ** n
    return Series(coeffs, c)


def lift(series_factory, scalar_fn):
    """Build a function that dispatches on scalars, Series and Jet2."""

    def fn(z):
        if isinstance(z, Jet2):
            return jet_compose(series_factory(z.value, z.order), z)
        if isinstance(z, Series):
            outer = series_factory(z.value, z.order)
            # univariate composition by Horner
            delta = z - z.value
            out = Series.constant(outer.coeffs[-1], z.center, z.order)
            for c in outer.coeffs[-2::-1]:
                out = out * delta + c
            return out
        return scalar_fn(np.asarray(z, dtype=complex) if not np.isscalar(z) else complex(z))

    return fn


exp = lift(taylor_exp, np.exp)
sin = lift(taylor_sin, np.sin)
cos = lift(taylor_cos, np.cos)
sinh = lift(taylor_sinh, np.sinh)
cosh = lift(taylor_cosh, np.cosh)
log = lift(taylor_log, np.log)
sqrt = lift(lambda c, m: taylor_power(c, 0.5, m), np.sqrt)


def tanh(z):
    if isinstance(z, (Jet2, Series)):
        return sinh(z) / cosh(z)
    return np.tanh(np.asarray(z, dtype=complex) if not np.isscalar(z) else complex(z))


def power(z, a):
    """``z**a`` for real or complex exponent, principal branch."""
    return lift(lambda c, m: taylor_power(c, a, m), lambda w: np.power(w, a))(z)
