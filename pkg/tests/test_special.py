import cmath

import mpmath
import numpy as np
import pytest

from websmith.exceptions import DomainError, PoleError
from websmith.jets import Series
from websmith.special import (
    context_from_k,
    context_from_tau,
    jacobi,
    jacobi_jet,
    modulus_from_tau,
    sn,
    theta,
    theta_series,
)

TAUS = [1j, 0.3 + 0.8j, 1.7j, -0.4 + 0.5j]
POINTS = [0.3, 0.1 + 0.2j, -0.7 + 0.05j, 1.2]


@pytest.mark.parametrize("tau", TAUS)
@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_theta_matches_mpmath(i, tau):
    q = mpmath.exp(1j * mpmath.pi * tau)
    for x in POINTS:
        ref = complex(mpmath.jtheta(i, x, q))
        assert abs(theta(i, x, tau) - ref) < 1e-13 * max(1, abs(ref))


def test_theta_series_derivatives_match_mpmath():
    tau, x0 = 0.2 + 0.9j, 0.4
    q = mpmath.exp(1j * mpmath.pi * tau)
    s = theta_series(1, x0, tau, 5)
    for n in range(5):
        ref = complex(mpmath.jtheta(1, x0, q, n)) / mpmath.factorial(n)
        assert abs(s.coeffs[n] - complex(ref)) < 1e-12


def test_modulus_identities():
    ctx = context_from_tau(1j)
    assert abs(ctx.k - 2 ** -0.5) < 1e-14
    assert abs(ctx.k ** 2 + ctx.k_prime ** 2 - 1) < 1e-14
    # K(1/2) for tau = i
    assert abs(ctx.half_period_T.imag - float(mpmath.ellipk(0.5))) < 1e-10


@pytest.mark.parametrize("k", [0.3, 0.5, 0.8, 0.3 + 0.4j, 1.7])
def test_jacobi_matches_mpmath(k):
    ctx = context_from_k(k)
    m = complex(k) ** 2
    assert abs(ctx.k - k) < 1e-10 * abs(k)
    for x in [0.3, 0.7 + 0.1j, -0.45]:
        for fn in ("sn", "cn", "dn"):
            ref = complex(mpmath.ellipfun(fn, x, m=m))
            assert abs(jacobi(fn, x, ctx) - ref) < 1e-11 * max(1, abs(ref)), (fn, x)


def test_context_roundtrip():
    ctx = context_from_tau(1.3j)
    again = context_from_k(ctx.k)
    assert abs(modulus_from_tau(again.tau) - ctx.k) < 1e-12


def test_inverse_sn_half_period():
    ctx = context_from_k(0.5)
    for x in [0.2, 0.5 + 0.1j, -0.3]:
        assert abs(ctx.k * jacobi("sn", x + ctx.half_period_T, ctx) * jacobi("sn", x, ctx) - 1) < 1e-10


def test_jacobi_jet_taylor():
    ctx = context_from_k(0.6)
    s = jacobi_jet("sn", 0.4, ctx, 4)
    m = 0.36
    d1 = complex(mpmath.ellipfun("cn", 0.4, m=m) * mpmath.ellipfun("dn", 0.4, m=m))
    assert abs(s.coeffs[1] - d1) < 1e-12
    assert abs(sn(Series.variable(0.4, 4), ctx).coeffs[2] - s.coeffs[2]) < 1e-13


def test_limits_of_sn():
    t = np.linspace(-1, 1, 21)
    assert np.abs(jacobi("sn", t, context_from_k(1e-4)) - np.sin(t)).max() < 1e-6
    assert np.abs(jacobi("sn", t, context_from_k(1 - 1e-6)) - np.tanh(t)).max() < 1e-4


def test_errors():
    with pytest.raises(DomainError):
        theta(1, 0.1, 0.01j)
    with pytest.raises(DomainError):
        context_from_k(1.0)
    with pytest.raises(DomainError):
        context_from_k(0.0)
    ctx = context_from_k(0.5)
    pole = ctx.half_period_T  # sn(T) = 1/(k sn 0): a pole
    with pytest.raises(PoleError):
        jacobi("sn", pole, ctx)
    with pytest.raises(ValueError):
        theta(5, 0.0, 1j)


def test_jacobi_accepts_arrays():
    ctx = context_from_k(0.5)
    x = np.array([0.1, 0.2, 0.3])
    out = jacobi("dn", x, ctx)
    assert out.shape == (3,)
    assert abs(out[1] - complex(mpmath.ellipfun("dn", 0.2, m=0.25))) < 1e-13
    assert cmath.isfinite(out[0])
