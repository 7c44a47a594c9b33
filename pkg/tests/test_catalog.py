import itertools

import numpy as np
import pytest

from websmith.catalog import (
    CATALOG_IDS,
    family_limit_checks,
    identity_suite,
    make_named_web,
    quartic_roots,
    sigma_transport,
    verify_relations,
)
from websmith.exceptions import DomainError, StructuralError
from websmith.special import context_from_k, jacobi
from websmith.webs import apply_symmetry, d8_elements, foliation_equal, formula_foliation, sigma


def named(cid):
    return make_named_web(cid, k=0.5) if cid in ("Family", "QuarticModel") else make_named_web(cid)


@pytest.mark.parametrize("cid", CATALOG_IDS)
def test_known_relations_hold(cid):
    nw = named(cid)
    for name, res in verify_relations(nw).items():
        assert res < 1e-9, name


def test_t0_relations_exact():
    res = verify_relations(named("T0"))
    assert max(res.values()) < 1e-14


def test_type_a_relation_on_unit_box():
    nw = named("A")
    rel = next(r for r in nw.known_relations if r.name.startswith("1+u"))
    g = np.linspace(-1, 1, 11)
    pts = [(a, b) for a in g for b in g]
    assert rel.residual(pts) < 1e-12


def test_type_b_contains_cosine_relation():
    names = [r.name for r in named("B").known_relations]
    assert "2u = cos(x-y) - cos(x+y)" in names


@pytest.mark.parametrize("k", [0.3, 0.5, 0.8])
def test_family_e4bis(k):
    nw = make_named_web("Family", k=k)
    assert verify_relations(nw)["e4bis"] < 1e-10


def test_family_from_tau():
    nw = make_named_web("Family", tau=0.2 + 1.1j)
    res = verify_relations(nw)
    assert max(res.values()) < 1e-9


def test_invalid_parameters():
    with pytest.raises(DomainError):
        make_named_web("Family", k=1.0)
    with pytest.raises(DomainError):
        make_named_web("Family", tau=0.02j)
    with pytest.raises(StructuralError):
        make_named_web("Family")
    with pytest.raises(StructuralError):
        make_named_web("nope")


def test_quartic_roots():
    r = quartic_roots(0.3, 0.3, 0.5)
    assert min(abs(r.plus), abs(r.minus)) < 1e-15
    rng = np.random.default_rng(0)
    k = 0.5
    for _ in range(50):
        xi, eta = rng.uniform(-0.9, 0.9, 2) + 1j * rng.uniform(-0.3, 0.3, 2)
        r = quartic_roots(xi, eta, k)
        assert abs((r.A_xi_eta - r.A_eta_xi) - (xi - eta) / (1 - k * k * xi * eta)) < 1e-12
    ctx = context_from_k(k)
    for x, y in [(0.7, 0.4), (0.2, 0.9), (0.5 + 0.1j, -0.3)]:
        sx, sy = jacobi("sn", x, ctx), jacobi("sn", y, ctx)
        r = quartic_roots(sx**2, sy**2, k)
        want = {complex(jacobi("sn", x + y, ctx) ** 2), complex(jacobi("sn", x - y, ctx) ** 2)}
        got = [r.plus, r.minus]
        assert min(max(abs(got[0] - a), abs(got[1] - b)) for a, b in itertools.permutations(want)) < 1e-9


def test_quartic_roots_leading_zero():
    with pytest.raises(ZeroDivisionError):
        quartic_roots(2.0, 2.0, 0.5)


@pytest.mark.parametrize("kind", ["A", "B", "C", "D", "E"])
def test_sigma_transport(kind):
    transported, target = sigma_transport(kind)
    assert foliation_equal(transported, target)


def test_type_e_sigma_invariant():
    F = formula_foliation("x2_plus_y2")
    assert foliation_equal(apply_symmetry(sigma, F), F)


def test_family_sigma_transport():
    transported, target = sigma_transport("Family", k=0.5)
    assert foliation_equal(transported, target, base=(0.7, 0.4), tol=1e-8)


def test_types_pairwise_non_equivalent_under_d8():
    reps = {t: [formula_foliation(f) for f in fs] for t, fs in {
        "A": ["tanh_tanh", "cosh_ratio"], "B": ["sin_sin", "cos_sum"], "C": ["exp_sum", "exp_cosh"],
        "D": ["x2_minus_y2", "xy"], "E": ["x2_plus_y2"]}.items()}
    for s, t in itertools.combinations(reps, 2):
        for f, g in itertools.product(reps[s], reps[t]):
            for h in d8_elements():
                assert not foliation_equal(apply_symmetry(h, f), g), (s, t, h.name)


def test_limits():
    out = family_limit_checks()
    assert abs(out["exponential"]["rate"] + 2) < 0.05
    k10 = out["exponential"]["k"].index(10.0)
    assert out["exponential"]["deviation"][k10] < 1e-7
    for label in ("x2+y2", "x2-y2"):
        assert abs(out[label]["rate"] - 2) < 0.05
        assert out[label]["deviation"][-1] < 1e-5
    assert out["sn_to_sin"]["deviation"] < 1e-6
    assert out["sn_to_tanh"]["deviation"] < 1e-4


def test_identity_suite_passes_and_detects_perturbation():
    for name, k, res, tol in identity_suite():
        assert res < tol, (name, k, res)
    perturbed = identity_suite(perturb=1e-6, only="form")
    assert all(res > tol for _, _, res, tol in perturbed)


def test_identity_suite_unknown_name():
    with pytest.raises(StructuralError):
        identity_suite(only="nope")
