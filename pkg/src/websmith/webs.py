"""Foliations, webs, transversality and the symmetry group of the 4-web T0.

A foliation is carried by a *jet provider*: a pure function
``(base, order) -> Jet2`` of its defining function ``u``.  Closed-form
foliations come from the formula registry (:data:`FORMULAS`) so that webs can
be written to and read back from JSON.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import qmc

from . import funcs as F
from .exceptions import StructuralError, TransversalityError, WebsmithError
from .jets import Jet2, Series
from .special import cn, context_from_k, context_from_tau, dn, sn

__all__ = [
    "Foliation",
    "Web",
    "Symmetry",
    "FORMULAS",
    "formula_foliation",
    "slope_function",
    "vw_foliation",
    "vw_from_slopes",
    "univariate_provider",
    "transversality_check",
    "pair_transverse",
    "d8_elements",
    "rho",
    "sigma",
    "dilatation",
    "apply_symmetry",
    "apply_symmetry_web",
    "foliation_equal",
    "sample_disc",
    "seed_from_env",
    "admissible_base",
    "web_to_dict",
    "web_from_dict",
]

WEDGE_TOL = 1e-9
TRANSVERSE_TOL = 1e-9
EQUAL_TOL = 1e-8


def seed_from_env(default=0):
    """Seed for quasi-random sampling, read from ``WEBSMITH_SEED``."""
    raw = os.environ.get("WEBSMITH_SEED")
    return int(raw) if raw not in (None, "") else default


@functools.lru_cache(maxsize=64)
def _ctx_k(k):
    return context_from_k(k)


@functools.lru_cache(maxsize=64)
def _ctx_tau(tau):
    return context_from_tau(tau)


# ---------------------------------------------------------------------------
# foliations


@dataclass(frozen=True)
class Foliation:
    """Foliation by the level curves of ``u``."""

    name: str
    jet_provider: Callable = field(repr=False, compare=False)
    kind: str = "closed-form"
    spec: dict = field(default=None, compare=False, repr=False)

    def jet(self, base, order):
        return self.jet_provider((complex(base[0]), complex(base[1])), order)

    def value(self, x, y):
        return self.jet((x, y), 0).value

    def gradient(self, x, y):
        return self.jet((x, y), 1).gradient


def _provider(expr):
    def provider(base, order):
        out = expr(Jet2.var_x(base, order), Jet2.var_y(base, order))
        if isinstance(out, Jet2):
            return out
        return Jet2.constant(out, base, order)

    return provider


def _quartic_roots_jet(xi, eta, k2):
    a = (1 - k2 * xi * eta) ** 2
    b = xi * (1 - eta) * (1 - k2 * eta) + eta * (1 - xi) * (1 - k2 * xi)
    c = (xi - eta) ** 2
    disc = b * b - a * c
    return a, b, disc


def _quartic_expr(k, sign):
    k = complex(k)
    k2 = k * k

    def expr(xi, eta):
        a, b, disc = _quartic_roots_jet(xi, eta, k2)
        return (b + sign * F.sqrt(disc)) / a

    return expr


def _builders():
    def linear(a=1.0, b=0.0):
        return lambda x, y: x * a + y * b

    def sn_sn(k):
        ctx = _ctx_k(complex(k))
        return lambda x, y: sn(x, ctx) * sn(y, ctx)

    def theta_quotient(tau):
        ctx = _ctx_tau(complex(tau))
        s = ctx.theta_nulls[1] ** 2
        return lambda x, y: ctx.k * sn(x * s, ctx) * sn(y * s, ctx)

    def dn_kcn_ratio(k):
        ctx = _ctx_k(complex(k))
        kk = ctx.k
        return lambda x, y: (dn(x, ctx) - kk * cn(x, ctx)) / (dn(y, ctx) - kk * cn(y, ctx))

    def polynomial(terms):
        # terms: [i, j, c] for c * x^i * y^j, c a number or [re, im]
        parsed = [(int(i), int(j), complex(*c) if isinstance(c, (list, tuple)) else c)
                  for i, j, c in terms]

        def expr(x, y):
            out = 0.0
            for i, j, c in parsed:
                out = out + (x ** i) * (y ** j) * c
            return out

        return expr

    return {
        "linear": linear,
        "tanh_tanh": lambda: (lambda x, y: F.tanh(x) * F.tanh(y)),
        "sin_sin": lambda: (lambda x, y: F.sin(x) * F.sin(y)),
        "exp_sum": lambda: (lambda x, y: F.exp(x) + F.exp(y)),
        "x2_minus_y2": lambda: (lambda x, y: x * x - y * y),
        "x2_plus_y2": lambda: (lambda x, y: x * x + y * y),
        "cosh_ratio": lambda: (lambda x, y: F.cosh(x) / F.cosh(y)),
        "cos_sum": lambda: (lambda x, y: F.cos(x) + F.cos(y)),
        "exp_cosh": lambda: (lambda x, y: F.exp(x) * F.cosh(y)),
        "xy": lambda: (lambda x, y: x * y),
        "ratio_y_x": lambda: (lambda x, y: y / x),
        "bol_lines": lambda: (lambda x, y: (1 - y) / (1 - x)),
        "bol_conics": lambda: (lambda x, y: (x - x * y) / (y - x * y)),
        "sn_sn": sn_sn,
        "theta_quotient": theta_quotient,
        "dn_kcn_ratio": dn_kcn_ratio,
        "quartic_root": lambda k, sign=1: _quartic_expr(k, sign),
        "polynomial": polynomial,
    }


FORMULAS = _builders()

_KIND = {"linear": "linear-pencil"}


def formula_foliation(formula, name=None, **params):
    """Foliation from a registered closed-form formula."""
    try:
        builder = FORMULAS[formula]
    except KeyError:
        raise StructuralError(f"unknown formula id {formula!r}") from None
    expr = builder(**params)
    spec = {"kind": _KIND.get(formula, "closed-form"), "formula": formula, "params": dict(params)}
    return Foliation(name or formula, _provider(expr), spec["kind"], spec)


# slope functions for u = v(x) + w(y): a slope spec names v_x


def slope_function(spec):
    """Parse a slope spec into a function acting on scalars/Series.

    Grammar: ``const[:c]``, ``poly:c0,c1,...`` (coefficients of t^0, t^1, ...),
    ``exp[:a]`` (e^{a t}), ``sin[:a]``, ``cos[:a]``, ``sinh[:a]``, ``cosh[:a]``,
    ``tanh[:a]``, ``csch[:a]`` (1/sinh(a t)), ``inv`` (1/t), ``cot``, ``csc``, ``sn:k``, a leading ``-``
    negates.  The shorthand ``poly:3x^2`` is also accepted for a single monomial.
    """
    spec = spec.strip()
    if spec.startswith("-"):
        inner = slope_function(spec[1:])
        return lambda t: -inner(t)
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "const":
        c = complex(arg) if arg else 1.0
        return lambda t: t * 0 + c
    if name == "poly":
        coeffs = _parse_poly(arg)

        def poly(t):
            out = t * 0
            for n, c in enumerate(coeffs):
                if c != 0:
                    out = out + (t ** n) * c if n else out + c
            return out

        return poly
    a = complex(arg) if arg and name != "sn" else 1.0
    simple = {
        "exp": F.exp, "sin": F.sin, "cos": F.cos, "sinh": F.sinh,
        "cosh": F.cosh, "tanh": F.tanh,
    }
    if name in simple:
        fn = simple[name]
        return lambda t: fn(t * a)
    if name == "csch":
        return lambda t: 1 / F.sinh(t * a)
    if name == "inv":
        return lambda t: 1 / t
    if name == "cot":
        return lambda t: F.cos(t) / F.sin(t)
    if name == "csc":
        return lambda t: 1 / F.sin(t)
    if name == "sn":
        ctx = _ctx_k(complex(arg))
        return lambda t: sn(t, ctx)
    raise StructuralError(f"unknown slope spec {spec!r}")


def _parse_poly(arg):
    arg = arg.replace(" ", "")
    if any(ch in arg for ch in "xyt^"):
        # single monomial like 3x^2
        var = next(ch for ch in "xyt" if ch in arg)
        coef, _, power = arg.partition(var)
        coef = complex(coef) if coef not in ("", "+", "-") else complex(coef + "1")
        n = int(power.lstrip("^")) if power else 1
        coeffs = [0.0] * (n + 1)
        coeffs[n] = coef
        return coeffs
    return [complex(c) for c in arg.split(",")]


def univariate_provider(slope):
    """Provider of the series of ``v`` (``v' = slope``, ``v(center) = 0``)."""

    def provider(center, order):
        t = Series.variable(center, max(order - 1, 0))
        z = slope(t)
        if not isinstance(z, Series):
            z = Series.constant(z, center, max(order - 1, 0))
        return z.integral(0.0)

    return provider


def vw_from_slopes(vx, wy, name=None):
    """``u = v(x) + w(y)`` with ``v_x``, ``w_y`` given as slope specs."""
    spec = {"kind": "closed-form", "formula": "vw_sum", "params": {"vx": vx, "wy": wy}}
    return vw_foliation(univariate_provider(slope_function(vx)),
                        univariate_provider(slope_function(wy)),
                        name=name or f"int({vx})+int({wy})", spec=spec)


def vw_foliation(v_provider, w_provider, name="v(x)+w(y)", spec=None):
    """Foliation of ``u = v(x) + w(y)`` from univariate series providers.

    Only derivatives are meaningful: each provider may fix the constant of
    integration at its own center.
    """

    def provider(base, order):
        vs = v_provider(base[0], order)
        ws = w_provider(base[1], order)
        return Jet2.from_series(vs, 0, base, order) + Jet2.from_series(ws, 1, base, order)

    return Foliation(name, provider, "closed-form", spec)


# ---------------------------------------------------------------------------
# webs


def pair_transverse(a, b, tol=WEDGE_TOL):
    """Normalized wedge ``|du_a ^ du_b| / (|du_a||du_b|)`` exceeds ``tol``."""
    return _wedge(a, b) > tol


def _wedge(ga, gb):
    na = math.hypot(abs(ga[0]), abs(ga[1]))
    nb = math.hypot(abs(gb[0]), abs(gb[1]))
    if na == 0 or nb == 0:
        return 0.0
    return abs(ga[0] * gb[1] - ga[1] * gb[0]) / (na * nb)


@dataclass
class Web:
    """Unordered family of d >= 3 foliations at a base point."""

    foliations: list
    base: tuple
    name: str = "web"

    def __post_init__(self):
        if len(self.foliations) < 3:
            raise StructuralError("a web needs at least three foliations")
        self.base = (complex(self.base[0]), complex(self.base[1]))

    @property
    def d(self):
        return len(self.foliations)

    def gradients(self, base=None):
        base = self.base if base is None else base
        return [f.jet(base, 1).gradient for f in self.foliations]

    def min_wedge(self, base=None):
        g = self.gradients(base)
        return min(_wedge(g[i], g[j]) for i in range(len(g)) for j in range(i + 1, len(g)))

    def is_transverse(self, base=None, tol=WEDGE_TOL):
        try:
            return self.min_wedge(base) > tol
        except (ZeroDivisionError, WebsmithError, ValueError):
            return False

    def certify(self):
        """Raise :class:`TransversalityError` unless pairwise transverse at the base."""
        if not self.is_transverse():
            raise TransversalityError(f"web {self.name!r} is not transverse at {self.base}")
        return self

    def with_base(self, base):
        return Web(list(self.foliations), base, self.name)


def admissible_base(web, tries=20, step=0.05, seed=None):
    """Return ``web`` itself, or a copy moved by small quasi-random steps until transverse."""
    if web.is_transverse():
        return web
    seed = seed_from_env() if seed is None else seed
    pts = qmc.Halton(d=2, seed=seed).random(tries)
    for p in pts:
        off = step * (2 * p - 1)
        cand = web.with_base((web.base[0] + off[0], web.base[1] + off[1]))
        if cand.is_transverse():
            return cand
    raise TransversalityError(f"no transverse base found near {web.base}")


def transversality_check(u, base):
    """Whether ``u`` is transverse to the four pencils x, y, x+y, x-y at ``base``."""
    try:
        ux, uy = u.jet(base, 1).gradient
    except (ZeroDivisionError, WebsmithError, ValueError):
        return False
    g2 = abs(ux) ** 2 + abs(uy) ** 2
    if g2 == 0:
        return False
    return abs(ux * uy * (ux * ux - uy * uy)) > TRANSVERSE_TOL * g2 * g2


# ---------------------------------------------------------------------------
# symmetries


@dataclass(frozen=True)
class Symmetry:
    """Affine map ``p -> L p + t`` of the plane."""

    linear: tuple
    translation: tuple = (0.0, 0.0)
    scale: complex = None
    name: str = ""

    def __post_init__(self):
        L = np.asarray(self.linear, dtype=complex)
        if L.shape != (2, 2) or abs(np.linalg.det(L)) < 1e-14:
            raise StructuralError("symmetry needs an invertible 2x2 linear part")

    @property
    def matrix(self):
        return np.asarray(self.linear, dtype=complex)

    @property
    def det(self):
        return complex(np.linalg.det(self.matrix))

    def __call__(self, point):
        p = self.matrix @ np.asarray(point, dtype=complex) + np.asarray(self.translation, dtype=complex)
        return complex(p[0]), complex(p[1])

    def compose(self, other):
        """``self o other``."""
        L = self.matrix @ other.matrix
        t = self.matrix @ np.asarray(other.translation, dtype=complex) + np.asarray(self.translation, dtype=complex)
        return Symmetry(_tup(L), (complex(t[0]), complex(t[1])), name=f"{self.name}*{other.name}")

    def inverse(self):
        Li = np.linalg.inv(self.matrix)
        t = -Li @ np.asarray(self.translation, dtype=complex)
        return Symmetry(_tup(Li), (complex(t[0]), complex(t[1])), name=f"inv({self.name})")

    def same_as(self, other, tol=1e-12):
        return (np.allclose(self.matrix, other.matrix, atol=tol)
                and np.allclose(self.translation, other.translation, atol=tol))

    def to_dict(self):
        L = self.matrix
        return {
            "linear": [[[z.real, z.imag] for z in row] for row in L],
            "translation": [[z.real, z.imag] for z in map(complex, self.translation)],
            "name": self.name,
        }

    @classmethod
    def from_dict(cls, d):
        L = tuple(tuple(complex(*z) for z in row) for row in d["linear"])
        t = tuple(complex(*z) for z in d["translation"])
        return cls(L, t, name=d.get("name", ""))


def _tup(L):
    return tuple(tuple(complex(v) for v in row) for row in np.asarray(L))


_R2 = 1.0 / math.sqrt(2.0)

rho = Symmetry(((0, 1), (1, 0)), name="rho")
sigma = Symmetry(((_R2, _R2), (_R2, -_R2)), name="sigma")


def dilatation(c, shift=(0.0, 0.0)):
    """``(x, y) -> (c x + x', c y + y')``."""
    return Symmetry(((c, 0), (0, c)), (complex(shift[0]), complex(shift[1])), scale=complex(c),
                    name=f"dil({c})")


def d8_elements():
    """The 16 isometries of the octagon preserving the four pencils of T0."""
    out = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            out.append(Symmetry(((s1, 0), (0, s2)), name=f"({s1:+d}x,{s2:+d}y)"))
            out.append(Symmetry(((0, s1), (s2, 0)), name=f"({s1:+d}y,{s2:+d}x)"))
            out.append(Symmetry(((s1 * _R2, s1 * _R2), (s2 * _R2, -s2 * _R2)),
                                name=f"({s1:+d}(x+y),{s2:+d}(x-y))/r2"))
            out.append(Symmetry(((s1 * _R2, -s1 * _R2), (s2 * _R2, s2 * _R2)),
                                name=f"({s1:+d}(x-y),{s2:+d}(x+y))/r2"))
    return out


def apply_symmetry(g, foliation):
    """Foliation defined by ``u o g``; jets by re-centering and linear substitution."""

    def provider(base, order):
        image = g(base)
        return foliation.jet(image, order).substitute_linear(g.matrix, base)

    spec = None
    if foliation.spec is not None:
        spec = {"kind": foliation.spec["kind"], "formula": "transformed",
                "params": {"symmetry": g.to_dict(), "inner": foliation.spec}}
    return Foliation(f"{foliation.name}o{g.name or 'g'}", provider, foliation.kind, spec)


def apply_symmetry_web(g, web):
    """Image of a web germ under ``g``: foliations ``u_j o g`` at ``g^-1(base)``."""
    base = g.inverse()(web.base)
    return Web([apply_symmetry(g, f) for f in web.foliations], base, f"{web.name}o{g.name}")


# ---------------------------------------------------------------------------
# foliation equality


def sample_disc(center, radius=0.1, n=40, seed=None):
    """``n`` quasi-random points in a real disc around ``center``."""
    seed = seed_from_env() if seed is None else seed
    u = qmc.Halton(d=2, seed=seed).random(n)
    r = radius * np.sqrt(u[:, 0])
    th = 2 * np.pi * u[:, 1]
    cx, cy = complex(center[0]), complex(center[1])
    return [(cx + ri * np.cos(t), cy + ri * np.sin(t)) for ri, t in zip(r, th)]


def foliation_equal(f1, f2, samples=None, base=(0.31, 0.17), radius=0.1, n=40, tol=EQUAL_TOL):
    """Whether two defining functions have parallel gradients at every sample."""
    samples = sample_disc(base, radius, n) if samples is None else samples
    skipped = 0
    for p in samples:
        try:
            a = f1.jet(p, 1).gradient
            b = f2.jet(p, 1).gradient
        except (ZeroDivisionError, WebsmithError, ValueError, FloatingPointError):
            skipped += 1
            continue
        na = math.hypot(abs(a[0]), abs(a[1]))
        nb = math.hypot(abs(b[0]), abs(b[1]))
        if not (np.isfinite(na) and np.isfinite(nb)) or na == 0 or nb == 0:
            skipped += 1
            continue
        if abs(a[0] * b[1] - a[1] * b[0]) >= tol * na * nb:
            return False
    if skipped > len(samples) / 2:
        raise TransversalityError(f"{skipped} of {len(samples)} samples singular")
    return True


# ---------------------------------------------------------------------------
# JSON


def _foliation_from_spec(spec, name=None):
    formula = spec["formula"]
    params = spec.get("params", {}) or {}
    if formula == "transformed":
        inner = _foliation_from_spec(params["inner"])
        return apply_symmetry(Symmetry.from_dict(params["symmetry"]), inner)
    if formula == "vw_sum":
        return vw_from_slopes(params["vx"], params["wy"], name=name)
    clean = {k: (complex(*v) if _is_pair(v) and k in ("k", "tau") else v) for k, v in params.items()}
    return formula_foliation(formula, name=name, **clean)


def _is_pair(v):
    return isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v)


def _jsonable(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag] if obj.imag else obj.real
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


def web_to_dict(web):
    """JSON document ``{name, foliations: [{kind, formula, params}], base: [re, im, re, im]}``."""
    fols = []
    for f in web.foliations:
        if f.spec is None:
            raise StructuralError(f"foliation {f.name!r} has no serializable formula")
        entry = _jsonable(f.spec)
        entry["name"] = f.name
        fols.append(entry)
    b = web.base
    return {"name": web.name, "foliations": fols,
            "base": [b[0].real, b[0].imag, b[1].real, b[1].imag]}


def web_from_dict(doc):
    b = doc["base"]
    base = (complex(b[0], b[1]), complex(b[2], b[3])) if len(b) == 4 else (complex(b[0]), complex(b[1]))
    fols = [_foliation_from_spec(e, e.get("name")) for e in doc["foliations"]]
    return Web(fols, base, doc.get("name", "web"))
