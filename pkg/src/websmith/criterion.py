"""Differential criterion for maximal rank of ``T(l_1, ..., l_p, u)`` and the
classifier of 5-webs ``T(x, y, x+y, x-y, v(x) + w(y))``.

The general test expands ``X_1 ... X_p f(u) = sum a_k f^(k)(u)`` and checks
that ``X_u (a_k / a_p)`` vanishes, ``X_u = u_y d/dx - u_x d/dy``.  For
``u = v(x) + w(y)`` the two resulting equations are evaluated directly, and
the slopes ``v_x``, ``w_y`` are fitted to ``(z')^2 = p z^4 + q z^2 + r`` to
decide which normal form the web is equivalent to.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConstantSlope, TransversalityError, WebsmithError
from .jets import Jet2, Series, operator_coefficients
from .webs import vw_foliation

__all__ = [
    "HARMONIC_DIRECTIONS",
    "QuarticFit",
    "WebClass",
    "LABELS",
    "max_rank_system_check",
    "check_eq1_eq2",
    "fit_quartic_ode",
    "slope_samples",
    "classify",
    "equivalence_moduli",
    "moduli_orbit",
    "criterion_samples",
]

# X_1 = d/dy, X_2 = d/dx, X_3 = d/dx - d/dy, X_4 = d/dx + d/dy (pencils y, x, x+y, x-y)
HARMONIC_DIRECTIONS = ((0.0, 1.0), (1.0, 0.0), (1.0, -1.0), (1.0, 1.0))

LABELS = ("Algebraic", "TypeA", "TypeB", "TypeC", "TypeD", "TypeE",
          "EllipticFamily", "NotMaxRank", "Indeterminate")

SYSTEM_TOL = 1e-7
EQ_TOL = 1e-8
CONST_TOL = 1e-9
DEGENERATE_TOL = 1e-9
AGREE_TOL = 2e-8
CRITERION_ORDER = 6


def criterion_samples(center=(0.31, 0.17), n=12, width=0.2):
    """``n`` real sample points on a short diagonal segment through ``center``."""
    t = np.linspace(-0.5, 0.5, n) * width
    cx, cy = complex(center[0]), complex(center[1])
    return [(cx + s, cy + 0.7 * s) for s in t]


# ---------------------------------------------------------------------------
# general criterion


def _norm_residual(expr_jet, u_jet):
    """``|X_u E|`` at the base, normalized by ``|grad u|`` and the size of ``E``."""
    ux, uy = u_jet.gradient
    ex = expr_jet.partial(0).value
    ey = expr_jet.partial(1).value
    val = uy * ex - ux * ey
    gu = math.hypot(abs(ux), abs(uy))
    ge = math.hypot(abs(ex), abs(ey))
    scale = gu * max(1.0, abs(expr_jet.value) + ge)
    return abs(val) / scale


def max_rank_system_check(u, directions=HARMONIC_DIRECTIONS, samples=None, tol=SYSTEM_TOL):
    """Evaluate ``X_u(a_k / a_p) = 0`` for ``k < p`` at each sample.

    Returns ``(passes, residual)`` with the largest normalized residual.
    """
    samples = criterion_samples() if samples is None else samples
    p = len(directions)
    worst = 0.0
    for pt in samples:
        jet = u.jet(pt, p + 2)
        exp = operator_coefficients(jet, list(directions))
        top = exp.top()
        scale = max(abs(c) for c in jet.gradient) ** p
        if abs(top.value) <= 1e-12 * scale:
            raise TransversalityError(f"a_p vanishes at {pt}: u not transverse to the pencils")
        for b in exp.ratios().values():
            worst = max(worst, _norm_residual(b, jet.truncate(b.order)))
    return worst < tol, worst


# ---------------------------------------------------------------------------
# the v(x) + w(y) specialization


def _vw_jet(v, w, pt, order):
    vs = v(complex(pt[0]), order)
    ws = w(complex(pt[1]), order)
    base = (complex(pt[0]), complex(pt[1]))
    return Jet2.from_series(vs, 0, base, order), Jet2.from_series(ws, 1, base, order)


def _transverse_bis(vx, wy):
    return abs(vx * wy * (vx * vx - wy * wy)) > 1e-9 * max(abs(vx), abs(wy)) ** 4


def check_eq1_eq2(v, w, samples=None, tol=EQ_TOL, return_residuals=False):
    """The two equations for ``u = v(x) + w(y)`` to give a maximal-rank ``T[u]``.

    ``v`` and ``w`` are univariate providers ``(center, order) -> Series`` of
    the functions themselves.  The first flag alone is the maximal-rank
    condition for ``T(x+y, x-y, u)``.
    """
    samples = criterion_samples() if samples is None else samples
    r1 = r2 = 0.0
    for pt in samples:
        V, W = _vw_jet(v, w, pt, 5)
        vx, wy = V.partial(0), W.partial(1)
        if not _transverse_bis(vx.value, wy.value):
            raise TransversalityError(f"v_x w_y (v_x^2 - w_y^2) vanishes at {pt}")
        vxx, wyy = vx.partial(0), wy.partial(1)
        vxxx, wyyy = vxx.partial(0), wyy.partial(1)
        o = vxxx.order
        vx, wy, vxx, wyy = (j.truncate(o) for j in (vx, wy, vxx, wyy))
        den = vx * vx - wy * wy
        e1 = (vxx - wyy) / den
        e2 = (wy * vxxx - vx * wyyy) / (vx * wy * den)
        u = (V + W).truncate(o)
        r1 = max(r1, _norm_residual(e1, u))
        r2 = max(r2, _norm_residual(e2, u))
    flags = (r1 < tol, r2 < tol)
    return (flags, (r1, r2)) if return_residuals else flags


# ---------------------------------------------------------------------------
# quartic ODE fit


@dataclass
class QuarticFit:
    """Least-squares fit of ``(z')^2 = p z^4 + q z^2 + r``."""

    p: complex
    q: complex
    r: complex
    residual: float
    degenerate_flags: dict = field(default_factory=dict)
    condition: float = 1.0

    @property
    def coef(self):
        return np.array([self.p, self.q, self.r])

    def agrees(self, other, tol=AGREE_TOL):
        scale = max(np.abs(self.coef).max(), np.abs(other.coef).max(), 1e-300)
        return bool(np.abs(self.coef - other.coef).max() <= tol * scale)


def fit_quartic_ode(samples, tol=DEGENERATE_TOL):
    """Fit ``(p, q, r)`` from ``(z, z', z'')`` triples.

    Uses both ``(z')^2 = p z^4 + q z^2 + r`` and its derivative form
    ``z'' = 2 p z^3 + q z``.  Raises :class:`ConstantSlope` when ``z`` does not
    vary over the samples.
    """
    arr = np.asarray(samples, dtype=complex)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError("samples must be (z, z', z'') triples")
    if arr.shape[0] < 6:
        raise ValueError("need at least 6 samples")
    z, z1, z2 = arr.T
    if np.all(np.abs(z1) < CONST_TOL * (1 + np.abs(z))):
        raise ConstantSlope("z is constant over the samples")
    ones = np.ones_like(z)
    A = np.vstack([np.column_stack([z**4, z**2, ones]),
                   np.column_stack([2 * z**3, z, 0 * ones])])
    b = np.concatenate([z1**2, z2])
    scale = np.abs(A).max(axis=0)
    scale[scale == 0] = 1.0
    As = A / scale
    sol, _, rank, sv = np.linalg.lstsq(As, b, rcond=None)
    cond = sv[0] / sv[-1] if sv[-1] > 0 else math.inf
    if rank < 3:
        raise ConstantSlope("sample matrix is rank deficient (z values not distinct)")
    p, q, r = sol / scale
    pred = p * z**4 + q * z**2 + r
    res_scale = max(np.abs(z1**2).max(), 1e-300)
    residual = float(np.abs(z1**2 - pred).max() / res_scale)
    # relative size of each coefficient's contribution over the samples
    contrib = np.abs(np.array([p * np.abs(z**4).max(), q * np.abs(z**2).max(), r]))
    ref = max(contrib.max(), 1e-300)
    flags = {"p": bool(contrib[0] < tol * ref), "q": bool(contrib[1] < tol * ref),
             "r": bool(contrib[2] < tol * ref)}
    return QuarticFit(complex(p), complex(q), complex(r), residual, flags, float(cond))


def slope_samples(provider, points, order=4):
    """``(z, z', z'')`` with ``z`` the first derivative of the provided function."""
    out = []
    for t in points:
        s = provider(complex(t), order).derivatives()
        out.append((s[1], s[2], s[3]))
    return out


# ---------------------------------------------------------------------------
# classification


@dataclass
class WebClass:
    label: str
    case_id: str
    modulus: complex = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")
        if self.label == "EllipticFamily":
            k2 = complex(self.modulus) ** 2
            if abs(k2) < 1e-12 or abs(k2 - 1) < 1e-12:
                raise ValueError("EllipticFamily needs a modulus with k^2 not in {0, 1}")

    def to_dict(self):
        def clean(v):
            if isinstance(v, (complex, np.complexfloating)):
                v = complex(v)
                return [v.real, v.imag]
            if isinstance(v, (np.floating, np.integer, np.bool_)):
                return v.item()
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            return v

        return {"label": self.label, "case_id": self.case_id,
                "modulus": clean(self.modulus), "diagnostics": clean(self.diagnostics)}


def _is_const(samples):
    z = np.array([s[0] for s in samples])
    z1 = np.array([s[1] for s in samples])
    return bool(np.all(np.abs(z1) < CONST_TOL * (1 + np.abs(z))))


def _ratio_consistency(values, tol=1e-6):
    """Common value of a list that should be constant, or None."""
    vals = np.asarray(values, dtype=complex)
    ref = np.median(vals.real) + 1j * np.median(vals.imag)
    if np.abs(vals - ref).max() > tol * max(1.0, abs(ref)):
        return None
    return complex(ref)


def _sign(values):
    """+1 or -1 for a list of numbers that should all equal +-1."""
    s = _ratio_consistency(values)
    if s is None:
        return None
    if abs(s - 1) < 1e-6:
        return 1
    if abs(s + 1) < 1e-6:
        return -1
    return None


def _case_constant_slope(const_s, other_s, which):
    c = const_s[0][0]
    z = np.array([s[0] for s in other_s])
    z1 = np.array([s[1] for s in other_s])
    basis = (c * c - z * z)
    kfit = np.vdot(basis, z1) / np.vdot(basis, basis)
    resid = np.abs(z1 - kfit * basis).max() / max(np.abs(z1).max(), 1e-300)
    diag = {"c": c, "k": kfit, "residual": float(resid), "constant_slope": which}
    case = "2" if which == "v" else "3"
    if resid < 1e-8 and abs(kfit) > 1e-9:
        return WebClass("TypeC", case, diagnostics=diag)
    return WebClass("NotMaxRank", case, diagnostics=diag)


def _modulus_from_invariant(J):
    """Root ``k^2`` (|k^2| <= 1) of ``(1 + k^2)^2 = J k^2``."""
    b = 2.0 - J
    disc = cmath.sqrt(b * b - 4.0)
    roots = [(-b + disc) / 2.0, (-b - disc) / 2.0]
    return min(roots, key=abs)


def classify(v, w, samples=None):
    """Decide the normal form of ``T(x, y, x+y, x-y, v(x) + w(y))``.

    ``v`` and ``w`` are univariate providers ``(center, order) -> Series``.
    """
    samples = criterion_samples() if samples is None else samples
    if len(samples) < 6:
        raise ValueError("classify needs at least 6 samples")
    xs = [p[0] for p in samples]
    ys = [p[1] for p in samples]
    vs = slope_samples(v, xs)
    ws = slope_samples(w, ys)
    transverse = all(_transverse_bis(a[0], b[0]) for a, b in zip(vs, ws))
    v_const, w_const = _is_const(vs), _is_const(ws)
    if v_const and w_const:
        # u is linear: five pencils whatever the constants (a degenerate
        # choice merely makes the fifth pencil coincide with one of T0)
        return WebClass("Algebraic", "1", diagnostics={"v_x": vs[0][0], "w_y": ws[0][0],
                                                       "transverse": transverse})
    if not transverse:
        raise TransversalityError("v_x w_y (v_x^2 - w_y^2) vanishes at a sample")
    if v_const:
        return _case_constant_slope(vs, ws, "v")
    if w_const:
        return _case_constant_slope(ws, vs, "w")

    try:
        fv = fit_quartic_ode(vs)
        fw = fit_quartic_ode(ws)
    except ConstantSlope:
        return WebClass("Indeterminate", "4", diagnostics={"reason": "degenerate samples"})
    diag = {"fit_v": [fv.p, fv.q, fv.r], "fit_w": [fw.p, fw.q, fw.r],
            "residual_v": fv.residual, "residual_w": fw.residual}
    if max(fv.residual, fw.residual) > 1e-6:
        # not a solution of any E(p, q, r)
        return WebClass("NotMaxRank", "4", diagnostics=diag)
    if max(fv.condition, fw.condition) > 1e10:
        return WebClass("Indeterminate", "4", diagnostics=diag)
    if not fv.agrees(fw):
        return WebClass("NotMaxRank", "4", diagnostics=diag)

    p, q, r = (0.5 * (a + b) for a, b in zip(fv.coef, fw.coef))
    flags = {key: fv.degenerate_flags[key] and fw.degenerate_flags[key] for key in "pqr"}
    diag["pqr"] = [p, q, r]
    diag["flags"] = flags
    zv = np.array([s[0] for s in vs]); zv1 = np.array([s[1] for s in vs])
    zw = np.array([s[0] for s in ws]); zw1 = np.array([s[1] for s in ws])

    if flags["p"] and flags["q"]:
        # z' constant: v_x, w_y affine with slopes +-sqrt(r)
        eps = _sign(zw1 / zv1)
        diag["sign"] = eps
        if eps is None:
            return WebClass("Indeterminate", "4-a", diagnostics=diag)
        return WebClass("TypeE" if eps > 0 else "TypeD", "4-a", diagnostics=diag)
    if flags["p"] and flags["r"]:
        return WebClass("TypeC", "4-b", diagnostics=diag)
    if flags["p"]:
        return WebClass("TypeB", "4-c", diagnostics=diag)
    if flags["q"] and flags["r"]:
        # z = alpha / (t + c): alpha = -z^2 / z'
        eps = _sign((zw**2 / zw1) / (zv**2 / zv1))
        diag["sign"] = eps
        if eps is None:
            return WebClass("Indeterminate", "4-d", diagnostics=diag)
        return WebClass("TypeD" if eps > 0 else "Algebraic", "4-d", diagnostics=diag)
    if flags["r"]:
        # k^2 = 0 (or infinity): -z is a translate of z, both signs give type (A)
        diag["k2"] = 0.0
        return WebClass("TypeA", "4-e(i)", diagnostics=diag)
    J = q * q / (p * r)
    k2 = _modulus_from_invariant(J)
    diag["invariant"] = J
    diag["k2"] = k2
    if abs(k2 - 1.0) < 1e-6:
        # (z')^2 = p (z^2 - m)^2: the sign of z' / (z^2 - m) separates +-z
        m = -q / (2 * p)
        eps = _sign((zw1 / (zw**2 - m)) / (zv1 / (zv**2 - m)))
        diag["sign"] = eps
        if eps is None:
            return WebClass("Indeterminate", "4-e(j)", diagnostics=diag)
        return WebClass("TypeB" if eps > 0 else "TypeA", "4-e(j)", diagnostics=diag)
    k = cmath.sqrt(k2)
    if k.real < 0 or (k.real == 0 and k.imag < 0):
        k = -k
    ell = (1 - k) / (1 + k)
    diag["k"] = k
    return WebClass("EllipticFamily", "4-e(k)", modulus=ell, diagnostics=diag)


# ---------------------------------------------------------------------------
# moduli


def moduli_orbit(k):
    """The eight moduli equivalent to ``k``."""
    k = complex(k)
    base = [k, 1 / k, (1 - k) / (1 + k), (1 + k) / (1 - k)]
    return [s * v for v in base for s in (1, -1)]


def equivalence_moduli(k, ell, tol=1e-10):
    """Whether ``T[sn_k x sn_k y]`` and ``T[sn_l x sn_l y]`` are equivalent."""
    for m in (k, ell):
        m2 = complex(m) ** 2
        if abs(m2) < 1e-14 or abs(m2 - 1) < 1e-14:
            raise ValueError(f"degenerate modulus {m}")
    return any(abs(complex(ell) - m) <= tol * max(1.0, abs(m)) for m in moduli_orbit(k))


def vw_provider_pair_foliation(v, w):
    """Foliation of ``v(x) + w(y)`` (re-exported for convenience)."""
    return vw_foliation(v, w)
