"""Numerical abelian relations and web rank.

An abelian relation ``sum_j f_j(u_j) = const`` is searched with a polynomial
ansatz ``f_j(u) = sum_{n=1..N} c[j, n] (u - u_j(base))**n``.  Requiring the
Taylor expansion of the sum to vanish in degrees ``1..M`` gives a linear system
in the ``c[j, n]``; its kernel holds the ``N``-jets of the relations.  With
``M = N`` every genuine (not necessarily polynomial) relation has its
``N``-jet in the kernel exactly, and for ``N >= d - 2`` the kernel can only
shrink as ``N`` grows.  The rank is read off once the kernel dimension
stabilizes across the requested degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import NumericalPrecisionError, StructuralError, TransversalityError
from .jets import Jet2
from .webs import sample_disc

__all__ = [
    "RelationBasis",
    "RankReport",
    "ConstraintSystem",
    "bol_bound",
    "constraint_matrix",
    "kernel",
    "rank_estimate",
    "relation_residual",
    "evaluate_relation",
]

DEFAULT_DEGREES = (6, 10, 14)
SVD_GAP = 1e-8
GAP_RATIO = 1e3


def bol_bound(d):
    """Maximal rank (d-1)(d-2)/2 of a planar d-web."""
    return (d - 1) * (d - 2) // 2


@dataclass
class RelationBasis:
    """Kernel basis at polynomial degree ``degree``.

    ``relations[r]`` has shape ``(d, degree)``: entry ``[j, n-1]`` multiplies
    ``(u_j - u_j(base))**n``.  ``scaled`` holds the same vectors in the
    column-normalized coordinates, where they are orthonormal.
    """

    degree: int
    relations: list
    singular_values: np.ndarray
    scaled: np.ndarray = None
    centers: tuple = ()

    def __len__(self):
        return len(self.relations)


@dataclass
class RankReport:
    rank: int
    bol_bound: int
    degrees_tested: list
    kernel_dims: list
    stabilized: bool
    basis: RelationBasis
    d: int
    unstable: bool = False
    clamped: bool = False
    gap_ratios: list = field(default_factory=list)

    @property
    def is_maximal(self):
        return self.stabilized and self.rank == self.bol_bound

    def summary(self):
        word = "rank" if self.stabilized else "unstable rank"
        return f"{word} {self.rank} of bound {self.bol_bound} (d={self.d})"

    def to_dict(self, tail=8):
        sv = np.asarray(self.basis.singular_values)
        return {
            "rank": self.rank,
            "bound": self.bol_bound,
            "d": self.d,
            "degrees": list(self.degrees_tested),
            "kernel_dims": list(self.kernel_dims),
            "stabilized": self.stabilized,
            "unstable": self.unstable,
            "singular_value_tail": [float(s) for s in sv[-tail:]],
            "relations": [
                [[[c.real, c.imag] for c in row] for row in np.asarray(rel)]
                for rel in self.basis.relations
            ],
        }


@dataclass
class ConstraintSystem:
    """Scaled constraint matrix with the data to map kernel vectors back."""

    matrix: np.ndarray
    column_scales: np.ndarray
    row_degrees: np.ndarray
    d: int
    degree: int
    centers: tuple
    step: float

    def unscale(self, vec):
        """Scaled kernel vector -> raw coefficients of shape ``(d, degree)``."""
        return (np.asarray(vec) / self.column_scales).reshape(self.d, self.degree)

    def scale(self, coeffs):
        return np.asarray(coeffs, dtype=complex).reshape(-1) * self.column_scales


def _radius_estimate(jet):
    """Crude radius of convergence from the decay of homogeneous parts."""
    norms = jet.homogeneous_norms()
    g = norms[1]
    if g == 0:
        return math.inf
    est = math.inf
    m = jet.order
    for n in range(max(2, m // 2), m + 1):
        if norms[n] > 0:
            est = min(est, (g / norms[n]) ** (1.0 / (n - 1)))
    return est


def _row_index(M):
    return [(i, n - i) for n in range(1, M + 1) for i in range(n, -1, -1)]


def constraint_matrix(web, N, M=None, step=None, jets=None):
    """Linear system whose kernel holds the ``N``-jets of abelian relations.

    Rows are Taylor coefficients of total degree ``1..M`` (default ``M = N``)
    of ``sum_j sum_n c[j, n] t_j**n``, ``t_j = u_j - u_j(base)``.  The
    coordinates are rescaled by ``step`` (default: half the smallest
    estimated radius of convergence, capped at 1), which multiplies each row
    of degree ``k`` by ``step**k``; columns are then scaled to unit norm.
    ``M > N`` only captures relations whose functions are polynomials of
    degree ``<= N``.
    """
    M = N if M is None else M
    if N < 1 or M < 1:
        raise ValueError("degree and Taylor order must be positive")
    order = max(M, 1)
    if jets is None:
        jets = [f.jet(web.base, order) for f in web.foliations]
    else:
        jets = [j.truncate(order) for j in jets]
    for j in jets:
        if not np.all(np.isfinite(j.coeffs)):
            raise StructuralError("non-finite jet at the base point")
    if step is None:
        radius = min(_radius_estimate(j) for j in jets)
        step = min(1.0, 0.5 * radius)
    rows = _row_index(M)
    ri = np.array([r[0] for r in rows])
    rj = np.array([r[1] for r in rows])
    deg = ri + rj
    d = len(jets)
    A = np.zeros((len(rows), d * N), dtype=complex)
    centers = []
    for jdx, u in enumerate(jets):
        centers.append(u.value)
        t = u - u.value
        p = Jet2.constant(1.0, u.base, order)
        for n in range(1, N + 1):
            p = p * t
            A[:, jdx * N + n - 1] = p.coeffs[ri, rj]
    A *= (step ** deg)[:, None]
    scales = np.linalg.norm(A, axis=0)
    scales[scales == 0] = 1.0
    A /= scales
    return ConstraintSystem(A, scales, deg, d, N, tuple(centers), step)


def kernel(system, svd_gap=SVD_GAP):
    """Kernel dimension, scaled basis, singular values and gap ratio."""
    A = system.matrix
    n = A.shape[1]
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    sv = np.zeros(n)
    sv[: s.size] = s
    top = sv[0] if sv[0] > 0 else 1.0
    null = sv <= svd_gap * top
    dim = int(null.sum())
    kept = sv[~null]
    dropped = sv[null]
    if dim == 0 or kept.size == 0:
        ratio = math.inf
    else:
        ratio = kept.min() / max(dropped.max(), np.finfo(float).tiny)
    basis = vh[n - dim:].conj() if dim else np.zeros((0, n), dtype=complex)
    return dim, basis, sv, ratio


def rank_estimate(web, degrees=DEFAULT_DEGREES, svd_gap=SVD_GAP, gap_ratio=GAP_RATIO,
                  check_transversality=True):
    """Estimate the rank of ``web`` from kernel dimensions at increasing degrees."""
    degrees = sorted(int(n) for n in degrees)
    if check_transversality and not web.is_transverse():
        raise TransversalityError(f"web {web.name!r} is not transverse at {web.base}")
    bound = bol_bound(web.d)
    top_order = max(degrees)
    jets = [f.jet(web.base, top_order) for f in web.foliations]
    dims, ratios = [], []
    last = None
    for N in degrees:
        system = constraint_matrix(web, N, jets=jets)
        dim, scaled, sv, ratio = kernel(system, svd_gap)
        dims.append(dim)
        ratios.append(ratio)
        last = (system, scaled, sv)
    # the kernel cannot grow once N >= d - 2
    for a, b, na in zip(dims, dims[1:], degrees):
        if na >= web.d - 2 and b > a:
            raise NumericalPrecisionError(f"kernel dimension grew from {a} to {b} with the degree")
    system, scaled, sv = last
    rank = dims[-1]
    unstable = ratios[-1] < gap_ratio
    stabilized = len(dims) < 2 or (dims[-1] == dims[-2] and not unstable)
    clamped = False
    if rank > bound:
        if stabilized:
            raise NumericalPrecisionError(f"rank {rank} exceeds the Bol bound {bound}")
        rank, clamped = bound, True
    basis = RelationBasis(
        degree=system.degree,
        relations=[system.unscale(v) for v in scaled],
        singular_values=sv,
        scaled=scaled,
        centers=system.centers,
    )
    return RankReport(rank, bound, degrees, dims, stabilized, basis, web.d,
                      unstable=unstable, clamped=clamped, gap_ratios=ratios)


def evaluate_relation(web, relation, point, centers=None):
    """``sum_j f_j(u_j(point))`` for raw coefficients of shape ``(d, N)``."""
    rel = np.asarray(relation)
    if centers is None:
        centers = [f.value(*web.base) for f in web.foliations]
    total = 0.0
    for f, c0, coeffs in zip(web.foliations, centers, rel):
        t = f.value(*point) - c0
        total += np.polyval(np.concatenate([coeffs[::-1], [0.0]]), t)
    return total


def relation_residual(web, relation, samples=None, radius=0.02, n=40):
    """Max deviation of ``sum_j f_j(u_j)`` from its base value over samples."""
    samples = sample_disc(web.base, radius, n) if samples is None else samples
    centers = [f.value(*web.base) for f in web.foliations]
    ref = evaluate_relation(web, relation, web.base, centers)
    return max(abs(evaluate_relation(web, relation, p, centers) - ref) for p in samples)
