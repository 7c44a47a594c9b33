"""Theta functions, Jacobi elliptic functions and modulus/nome conversions.

Conventions: ``q = exp(i*pi*tau)`` and

    theta_1(x) = -i sum (-1)^n q^((n+1/2)^2) e^{i(2n+1)x}
    theta_2(x) =    sum        q^((n+1/2)^2) e^{i(2n+1)x}
    theta_3(x) =    sum        q^(n^2)       e^{2inx}
    theta_4(x) =    sum (-1)^n q^(n^2)       e^{2inx}

The modulus is ``k = theta_2(0)^2 / theta_3(0)^2`` and the elliptic functions
are theta quotients evaluated at ``x / theta_3(0)^2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .exceptions import ConvergenceError, DomainError, PoleError
from .jets import Series

__all__ = [
    "TAU_MIN",
    "EllipticContext",
    "theta",
    "theta_series",
    "modulus_from_tau",
    "context_from_tau",
    "context_from_k",
    "jacobi",
    "jacobi_jet",
    "sn", "cn", "dn",
]

TAU_MIN = 0.05
MAX_TERMS = 200
_TERM_TOL = 1e-18
_POLE_RTOL = 1e-13


def _check_tau(tau, tau_min=TAU_MIN):
    tau = complex(tau)
    if not tau.imag > tau_min:
        raise DomainError(f"Im(tau) = {tau.imag:.4g} must exceed {tau_min} (|q| too close to 1)")
    return tau


def _n_terms(tau, im_x, order):
    """Number of indices per side so every dropped term is below the tolerance.

    Bounds ``|q|^((n-1/2)^2) e^{(2n+1)|Im x|} (2n+1)^order`` for the first
    omitted index, which dominates the tail.
    """
    log_q = -math.pi * tau.imag
    target = math.log(_TERM_TOL) - 2.0
    for n in range(1, MAX_TERMS + 1):
        s = (n - 0.5) ** 2 * log_q + (2 * n + 1) * im_x + order * math.log(2 * n + 1)
        if s < target and (n + 0.5) ** 2 * log_q + (2 * n + 3) * im_x + order * math.log(2 * n + 3) < target:
            return n
    return MAX_TERMS


def _theta_terms(i, tau, n):
    """Amplitudes and angular frequencies: ``theta_i(x) = sum a e^{i w x}``."""
    idx = np.arange(-n, n + 1)
    if i in (1, 2):
        e = (idx + 0.5) ** 2
        w = 2 * idx + 1
        a = np.exp(1j * np.pi * tau * e)
        if i == 1:
            a = -1j * a * (-1.0) ** idx
    elif i in (3, 4):
        e = idx.astype(float) ** 2
        w = 2 * idx
        a = np.exp(1j * np.pi * tau * e)
        if i == 4:
            a = a * (-1.0) ** idx
    else:
        raise ValueError(f"theta index must be 1..4, got {i}")
    return a, w.astype(float)


def theta(i, x, tau, tau_min=TAU_MIN):
    """Value of ``theta_i(x, tau)``; ``x`` may be a scalar or an array."""
    tau = _check_tau(tau, tau_min)
    xa = np.asarray(x, dtype=complex)
    im_x = float(np.max(np.abs(xa.imag))) if xa.size else 0.0
    a, w = _theta_terms(i, tau, _n_terms(tau, im_x, 0))
    vals = np.exp(1j * np.multiply.outer(xa, w)) @ a
    return complex(vals) if xa.ndim == 0 else vals


def theta_series(i, x0, tau, order, tau_min=TAU_MIN):
    """Taylor series of ``theta_i(., tau)`` at ``x0`` by termwise differentiation."""
    tau = _check_tau(tau, tau_min)
    x0 = complex(x0)
    a, w = _theta_terms(i, tau, _n_terms(tau, abs(x0.imag), order))
    base = a * np.exp(1j * w * x0)
    r = np.arange(order + 1)
    fact = np.array([math.factorial(k) for k in r], dtype=float)
    powers = (1j * w)[None, :] ** r[:, None]
    return Series(powers @ base / fact, x0)


def modulus_from_tau(tau, tau_min=TAU_MIN):
    t2 = theta(2, 0.0, tau, tau_min)
    t3 = theta(3, 0.0, tau, tau_min)
    return t2 * t2 / (t3 * t3)


@dataclass(frozen=True)
class EllipticContext:
    """Parameters of one elliptic modulus: tau, nome, theta nulls, k, k'."""

    tau: complex
    q: complex
    theta_nulls: tuple
    k: complex
    k_prime: complex
    half_period_T: complex

    @property
    def k2(self):
        return self.k * self.k

    @property
    def scale(self):
        """``theta_3(0)^2``: argument scaling between ``x`` and the theta variable."""
        return self.theta_nulls[1] ** 2


def _nulls(tau):
    return tuple(theta(i, 0.0, tau) for i in (2, 3, 4))


def _solve_half_period(tau, nulls, k):
    t3sq = nulls[1] ** 2
    guess = 0.5 * math.pi * t3sq * tau
    x0 = 0.3 + 0.1j
    ctx = EllipticContext(tau, cmath.exp(1j * math.pi * tau), nulls, k, nulls[2] ** 2 / t3sq, guess)
    s0 = jacobi("sn", x0, ctx)
    T = guess
    for _ in range(50):
        s, c, d = (jacobi(f, x0 + T, ctx) for f in ("sn", "cn", "dn"))
        g = k * s * s0 - 1.0
        if abs(g) < 1e-14:
            break
        T = T - g / (k * c * d * s0)
    checks = [0.11 + 0.05j * m + 0.07 * m for m in range(10)]
    for x in checks:
        res = abs(k * jacobi("sn", x + T, ctx) * jacobi("sn", x, ctx) - 1.0)
        if res > 1e-9:
            raise ConvergenceError(f"half period T={T} fails validation at x={x} (residual {res:.2e})")
    return complex(T)


def context_from_tau(tau, tau_min=TAU_MIN):
    """Theta nulls and moduli for ``tau`` in the upper half-plane."""
    tau = _check_tau(tau, tau_min)
    nulls = _nulls(tau)
    t3sq = nulls[1] ** 2
    k = nulls[0] ** 2 / t3sq
    kp = nulls[2] ** 2 / t3sq
    T = _solve_half_period(tau, nulls, k)
    return EllipticContext(tau, cmath.exp(1j * math.pi * tau), nulls, k, kp, T)


def _reduce_tau(tau):
    # k(tau + 4) = k(tau); keep Re(tau) in (-2, 2]
    re = tau.real - 4.0 * math.floor((tau.real + 2.0) / 4.0)
    if re <= -2.0:
        re += 4.0
    return complex(re, tau.imag)


def _newton_tau(tau, k, tau_min):
    for _ in range(60):
        f = modulus_from_tau(tau, tau_min) - k
        if abs(f) < 1e-14 * max(1.0, abs(k)):
            break
        h = 1e-6 * max(1.0, abs(tau))
        df = (modulus_from_tau(tau + h, tau_min) - modulus_from_tau(tau - h, tau_min)) / (2 * h)
        if df == 0:
            break
        new = tau - f / df
        if new.imag <= tau_min:
            new = complex(new.real, 0.5 * (tau.imag + tau_min))
        tau = new
    return tau


def context_from_k(k, tau_min=TAU_MIN, tol=1e-10):
    """Find ``tau`` with ``modulus_from_tau(tau) = k`` and build its context.

    Starts from ``i K(1-k^2)/K(k^2)`` and polishes with complex Newton
    steps (finite-difference derivative of the analytic map ``tau -> k``).
    """
    k = complex(k)
    k2 = k * k
    if abs(k2) < 1e-14 or abs(k2 - 1.0) < 1e-14:
        raise DomainError(f"modulus k={k} is degenerate (k^2 must avoid 0 and 1)")
    m = mpmath.mpc(k2.real, k2.imag)
    guess = complex(1j * mpmath.ellipk(1 - m) / mpmath.ellipk(m))
    best = None
    for shift in (0.0, 2.0):
        tau = _newton_tau(_reduce_tau(guess + shift), k, tau_min)
        err = abs(modulus_from_tau(tau, tau_min) - k)
        if best is None or err < best[1]:
            best = (tau, err)
        if err <= tol * max(1.0, abs(k)):
            break
    if best[1] > tol * max(1.0, abs(k)):
        raise ConvergenceError(f"could not invert the modulus k={k}")
    return context_from_tau(_reduce_tau(best[0]), tau_min)


def _quotient_parts(fn, ctx):
    t2, t3, t4 = ctx.theta_nulls
    if fn == "sn":
        return t3 / t2, 1
    if fn == "cn":
        return t4 / t2, 2
    if fn == "dn":
        return t4 / t3, 3
    raise ValueError(f"unknown Jacobi function {fn!r}")


def jacobi(fn, x, ctx):
    """``sn``, ``cn`` or ``dn`` of modulus ``ctx.k`` at ``x`` (scalar or array)."""
    const, num_idx = _quotient_parts(fn, ctx)
    z = np.asarray(x, dtype=complex) / ctx.scale
    num = theta(num_idx, z, ctx.tau)
    den = theta(4, z, ctx.tau)
    ref = np.maximum(np.abs(num), np.abs(theta(1, z, ctx.tau)))
    bad = np.abs(den) <= _POLE_RTOL * np.maximum(ref, 1e-300)
    if np.any(bad):
        where = np.asarray(x)[bad] if np.ndim(x) else x
        raise PoleError(f"{fn} has a pole at x={where}", location=where)
    out = const * num / den
    return complex(out) if np.ndim(out) == 0 else out


def jacobi_jet(fn, x, ctx, order):
    """Taylor series of ``fn`` at ``x`` from differentiated theta series."""
    const, num_idx = _quotient_parts(fn, ctx)
    x = complex(x)
    z0 = x / ctx.scale
    rescale = (1.0 / ctx.scale) ** np.arange(order + 1)
    num = theta_series(num_idx, z0, ctx.tau, order)
    den = theta_series(4, z0, ctx.tau, order)
    t1 = abs(theta(1, z0, ctx.tau))
    if abs(den.value) <= _POLE_RTOL * max(abs(num.value), t1, 1e-300):
        raise PoleError(f"{fn} has a pole at x={x}", location=x)
    num = Series(num.coeffs * rescale, x)
    den = Series(den.coeffs * rescale, x)
    return (num / den) * const


def _jacobi_fn(name):
    from .jets import Jet2, jet_compose

    def fn(z, ctx):
        if isinstance(z, Jet2):
            return jet_compose(jacobi_jet(name, z.value, ctx, z.order), z)
        if isinstance(z, Series):
            outer = jacobi_jet(name, z.value, ctx, z.order)
            delta = z - z.value
            out = Series.constant(outer.coeffs[-1], z.center, z.order)
            for c in outer.coeffs[-2::-1]:
                out = out * delta + c
            return out
        return jacobi(name, z, ctx)

    fn.__name__ = name
    fn.__doc__ = f"``{name}`` of modulus ``ctx.k`` on scalars, arrays, Series or Jet2."
    return fn


sn = _jacobi_fn("sn")
cn = _jacobi_fn("cn")
dn = _jacobi_fn("dn")
