import itertools
import json

import numpy as np
import pytest

from websmith.catalog import make_named_web
from websmith.exceptions import StructuralError, TransversalityError
from websmith.webs import (
    Foliation,
    Symmetry,
    Web,
    admissible_base,
    apply_symmetry,
    apply_symmetry_web,
    d8_elements,
    dilatation,
    foliation_equal,
    formula_foliation,
    rho,
    sigma,
    slope_function,
    transversality_check,
    vw_from_slopes,
    web_from_dict,
    web_to_dict,
)
from websmith.jets import Series


def poly(*terms):
    return formula_foliation("polynomial", terms=[list(t) for t in terms])


def test_transversality_examples():
    assert transversality_check(formula_foliation("xy"), (1.0, 2.0))
    assert not transversality_check(formula_foliation("linear", a=1.0, b=1.0), (0.3, 0.2))
    assert transversality_check(formula_foliation("sn_sn", k=0.5), (0.7, 0.4))


def test_d8_group():
    els = d8_elements()
    assert len(els) == 16
    dets = [round(g.det.real) for g in els]
    assert dets.count(1) == 8 and dets.count(-1) == 8
    for g, h in itertools.product(els, els):
        assert any(g.compose(h).same_as(e) for e in els)


def test_rho_sigma_rotation_order_8():
    r = rho.compose(sigma)
    acc = r
    for n in range(2, 9):
        acc = acc.compose(r)
        if n < 8:
            assert not acc.same_as(Symmetry(((1, 0), (0, 1))))
    assert acc.same_as(Symmetry(((1, 0), (0, 1))))


def test_d8_preserves_pencil_directions():
    covectors = [np.array(v, float) for v in ((1, 0), (0, 1), (1, 1), (1, -1))]
    for g in d8_elements():
        for c in covectors:
            image = c @ g.matrix.real  # pull back of the linear form
            assert any(abs(image[0] * d[1] - image[1] * d[0]) < 1e-12 for d in covectors)


def test_apply_symmetry_identity_and_rho():
    F = formula_foliation("sin_sin")
    ident = Symmetry(((1, 0), (0, 1)))
    base = (0.31, 0.17)
    assert np.allclose(apply_symmetry(ident, F).jet(base, 5).coeffs, F.jet(base, 5).coeffs)
    assert foliation_equal(apply_symmetry(rho, F), F)


def test_group_action_composition():
    F = formula_foliation("exp_cosh")
    g, h = d8_elements()[5], dilatation(1.3, (0.1, -0.2))
    base = (0.2, 0.1)
    lhs = apply_symmetry(g.compose(h), F).jet(base, 6)
    rhs = apply_symmetry(h, apply_symmetry(g, F)).jet(base, 6)
    # (u o g) o h = u o (g h)
    assert np.abs(lhs.coeffs - rhs.coeffs).max() < 1e-13


def test_sigma_tanh_gives_cosh_ratio():
    lhs = apply_symmetry(sigma, formula_foliation("tanh_tanh"))
    rhs = apply_symmetry(dilatation(2 ** 0.5), formula_foliation("cosh_ratio"))
    assert foliation_equal(lhs, rhs)


def test_foliation_equal_examples():
    u = poly((2, 0, 1.0), (0, 2, -1.0))
    assert foliation_equal(u, poly((2, 0, 3.0), (0, 2, -3.0), (0, 0, 5.0)))
    assert not foliation_equal(formula_foliation("linear", a=1.0, b=1.0), formula_foliation("linear", a=1.0, b=-1.0))
    assert foliation_equal(formula_foliation("x2_minus_y2"), u)


def test_foliation_equal_raises_when_mostly_singular():
    bad = Foliation("bad", lambda base, order: (_ for _ in ()).throw(ZeroDivisionError()))
    with pytest.raises(TransversalityError):
        foliation_equal(bad, formula_foliation("xy"))


def test_web_requires_three_foliations():
    with pytest.raises(StructuralError):
        Web([formula_foliation("xy")] * 2, (0, 0))


def test_admissible_base_moves_off_degenerate_point():
    web = make_named_web("B").web.with_base((0.0, 0.0))
    assert not web.is_transverse()
    moved = admissible_base(web, seed=1)
    assert moved.is_transverse()
    assert abs(moved.base[0]) <= 0.05 and abs(moved.base[1]) <= 0.05


def test_symmetry_preserves_transversality():
    web = make_named_web("C").web
    for g in d8_elements():
        assert apply_symmetry_web(g, web).is_transverse()


@pytest.mark.parametrize("cid", ["T0", "Bol", "A", "SigmaB", "QuarticModel", "Family"])
def test_json_roundtrip(cid):
    nw = make_named_web(cid, k=0.5) if cid in ("Family", "QuarticModel") else make_named_web(cid)
    doc = json.loads(json.dumps(web_to_dict(nw.web)))
    back = web_from_dict(doc)
    assert back.base == nw.web.base
    for a, b in zip(back.foliations, nw.web.foliations):
        assert np.allclose(a.jet(nw.web.base, 3).coeffs, b.jet(nw.web.base, 3).coeffs)


def test_json_roundtrip_transformed_and_vw():
    web = Web([formula_foliation("linear", a=1.0, b=0.0), formula_foliation("linear", a=0.0, b=1.0),
               apply_symmetry(sigma, formula_foliation("sin_sin")), vw_from_slopes("tanh", "-tanh")],
              (0.31, 0.17), "mixed")
    back = web_from_dict(json.loads(json.dumps(web_to_dict(web))))
    for a, b in zip(back.foliations, web.foliations):
        assert np.allclose(a.jet(web.base, 4).coeffs, b.jet(web.base, 4).coeffs)


def test_slope_grammar():
    t = Series.variable(0.3, 3)
    assert abs(slope_function("poly:3x^2")(0.5) - 0.75) < 1e-15
    assert abs(slope_function("poly:1,2")(0.5) - 2.0) < 1e-15
    assert abs(slope_function("-exp:2")(0.1) + np.exp(0.2)) < 1e-15
    assert abs(slope_function("const")(t).value - 1.0) < 1e-15
    with pytest.raises(StructuralError):
        slope_function("bogus")
