import numpy as np
import pytest
import sympy as sp

from websmith.catalog import make_named_web
from websmith.exceptions import TransversalityError
from websmith.rank import bol_bound, constraint_matrix, kernel, rank_estimate, relation_residual
from websmith.webs import Web, admissible_base, apply_symmetry_web, d8_elements, dilatation, formula_foliation

X, Y = sp.symbols("x y")


def lin(a, b):
    return formula_foliation("linear", a=a, b=b)


def exact_kernel_dim(polys, base, N):
    """Kernel dimension of the degree-N system for polynomial webs, in rationals."""
    x0, y0 = (sp.Rational(str(c)) for c in base)
    dx, dy = sp.symbols("dx dy")
    cols = []
    for u in polys:
        shifted = sp.expand(u.subs({X: x0 + dx, Y: y0 + dy}))
        t = shifted - shifted.subs({dx: 0, dy: 0})
        for n in range(1, N + 1):
            p = sp.Poly(sp.expand(t**n), dx, dy)
            cols.append({m: c for m, c in zip(p.monoms(), p.coeffs()) if 1 <= sum(m) <= N})
    rows = [(i, n - i) for n in range(1, N + 1) for i in range(n + 1)]
    M = sp.Matrix([[col.get(r, 0) for col in cols] for r in rows])
    return M.shape[1] - M.rank()


def test_bol_bound():
    assert [bol_bound(d) for d in (3, 4, 5, 9)] == [1, 3, 6, 28]


def test_three_pencils_relation():
    web = Web([lin(1.0, 0.0), lin(0.0, 1.0), lin(1.0, 1.0)], (0.31, 0.17))
    dim, basis, _, _ = kernel(constraint_matrix(web, 1))
    assert dim == 1
    v = constraint_matrix(web, 1).unscale(basis[0]).ravel()
    v = v / v[0]
    assert np.allclose(v, [1, 1, -1])


def test_order_one_kernel_is_d_minus_2():
    web = make_named_web("B").web
    dim, *_ = kernel(constraint_matrix(web, 1, 1))
    assert dim == 3


def test_t0_quadratic_relation_in_kernel():
    web = make_named_web("T0").web
    system = constraint_matrix(web, 2)
    dim, basis, _, _ = kernel(system)
    assert dim == 3
    # 2x^2 + 2y^2 - (x+y)^2 - (x-y)^2 in centred coordinates t_j = u_j - u_j(base)
    x0, y0 = 0.31, 0.17
    c = np.zeros((4, 2))
    for j, (w, val) in enumerate([(2, x0), (2, y0), (-1, x0 + y0), (-1, x0 - y0)]):
        c[j] = [2 * w * val, w]  # w (t + val)^2 = w val^2 + 2 w val t + w t^2
    s = system.scale(c)
    proj = basis.conj() @ s
    assert np.linalg.norm(s - basis.T @ proj) < 1e-10 * np.linalg.norm(s)


@pytest.mark.parametrize("cid, expected", [("T3", 1), ("T0", 3), ("Bol", 6), ("A", 6), ("B", 6), ("C", 6),
                                           ("D", 6), ("E", 6), ("SigmaA", 6), ("SigmaC", 6), ("QuarticModel", 6)])
def test_catalog_ranks(cid, expected):
    nw = make_named_web(cid, k=0.5) if cid == "QuarticModel" else make_named_web(cid)
    rep = rank_estimate(nw.web)
    assert rep.rank == expected and rep.stabilized
    assert rep.rank <= rep.bol_bound


@pytest.mark.parametrize("k", [0.3, 0.5, 0.8])
def test_family_rank(k):
    assert rank_estimate(make_named_web("Family", k=k).web).rank == 6


def test_perturbed_rank_and_exact_oracle():
    web = make_named_web("Perturbed").web
    rep = rank_estimate(web)
    assert rep.stabilized and rep.rank <= 5
    polys = [X, Y, X + Y, X - Y, X * Y + X**3 / 10]
    exact = exact_kernel_dim(polys, (0.31, 0.17), 6)
    numeric, *_ = kernel(constraint_matrix(web, 6))
    assert numeric == exact


def test_exact_oracle_agrees_on_type_d():
    polys = [X, Y, X + Y, X - Y, X**2 - Y**2]
    web = make_named_web("D").web
    numeric, *_ = kernel(constraint_matrix(web, 6))
    assert numeric == exact_kernel_dim(polys, (0.31, 0.17), 6) == 6


def test_kernel_non_increasing_in_degree():
    rep = rank_estimate(make_named_web("C").web, degrees=[4, 6, 8, 10, 12])
    dims = rep.kernel_dims
    assert all(b <= a for a, b in zip(dims, dims[1:]))


def test_relation_residuals():
    web = make_named_web("T0").web
    rel = np.zeros((4, 1))
    rel[:, 0] = [1, 1, -1, 0]
    assert relation_residual(web, rel) < 1e-14
    bol = make_named_web("Bol").web
    rep = rank_estimate(bol)
    for r in rep.basis.relations:
        assert relation_residual(bol, r) < 1e-8
    rng = np.random.default_rng(3)
    v = rng.normal(size=bol.d * rep.basis.degree)
    system = constraint_matrix(bol, rep.basis.degree)
    assert relation_residual(bol, system.unscale(v / np.linalg.norm(v))) > 1e-3


def test_basis_orthonormal_in_scaled_coordinates():
    rep = rank_estimate(make_named_web("E").web)
    G = rep.basis.scaled.conj() @ rep.basis.scaled.T
    assert np.allclose(G, np.eye(rep.rank), atol=1e-12)


@pytest.mark.parametrize("cid", ["T0", "B"])
def test_rank_invariant_under_d8_and_dilatations(cid):
    web = make_named_web(cid).web
    expected = rank_estimate(web).rank
    for g in d8_elements():
        assert rank_estimate(apply_symmetry_web(g, web)).rank == expected
    rng = np.random.default_rng(11)
    for c in rng.uniform(0.5, 2.0, 5):
        g = dilatation(c, (rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)))
        assert rank_estimate(apply_symmetry_web(g, web)).rank == expected


@pytest.mark.parametrize("cid", ["B", "Bol", "D"])
def test_base_point_independence(cid):
    web = make_named_web(cid).web
    ranks = {rank_estimate(admissible_base(web.with_base(b))).rank
             for b in [(0.31, 0.17), (0.43, 0.21), (0.22, 0.61)]}
    assert ranks == {6}


def test_non_transverse_web_rejected():
    web = Web([lin(1.0, 0.0), lin(0.0, 1.0), lin(1.0, 1.0), formula_foliation("sin_sin")], (0.0, 0.0))
    with pytest.raises(TransversalityError):
        rank_estimate(web)


def test_report_json_shape():
    doc = rank_estimate(make_named_web("T0").web).to_dict()
    assert doc["rank"] == 3 and doc["bound"] == 3 and doc["d"] == 4
    assert len(doc["relations"]) == 3
    assert len(doc["relations"][0]) == 4  # one coefficient row per foliation
