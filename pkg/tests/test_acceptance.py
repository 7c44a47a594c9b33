"""End-to-end acceptance checks; each test prints one PASS/FAIL line."""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from websmith.catalog import family_limit_checks, identity_suite, make_named_web, sigma_transport
from websmith.criterion import (
    check_eq1_eq2,
    classify,
    equivalence_moduli,
    max_rank_system_check,
    moduli_orbit,
)
from websmith.jets import Jet2
from websmith.rank import rank_estimate
from websmith.webs import (
    Web,
    admissible_base,
    apply_symmetry_web,
    d8_elements,
    dilatation,
    foliation_equal,
    formula_foliation,
    slope_function,
    univariate_provider,
    vw_from_slopes,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        return ok

    return emit


def prov(spec):
    return univariate_provider(slope_function(spec))


def lin(a, b):
    return formula_foliation("linear", a=a, b=b)


def test_rank_table(report):
    cases = [("T3", {}, 1), ("T0", {}, 3), ("Bol", {}, 6), ("A", {}, 6), ("B", {}, 6), ("C", {}, 6),
             ("D", {}, 6), ("E", {}, 6), ("Family", {"k": 0.3}, 6), ("Family", {"k": 0.5}, 6),
             ("Family", {"k": 0.8}, 6)]
    failures, worst = [], 0.0
    for cid, params, expected in cases:
        t0 = time.perf_counter()
        rep = rank_estimate(make_named_web(cid, **params).web, degrees=[6, 10, 14], svd_gap=1e-8)
        dt = time.perf_counter() - t0
        worst = max(worst, dt)
        if rep.rank != expected or not rep.stabilized or rep.rank > rep.bol_bound or dt >= 10:
            failures.append(f"{cid}{params}: rank {rep.rank} stabilized={rep.stabilized} {dt:.1f}s")
    t0 = time.perf_counter()
    neg = rank_estimate(make_named_web("Perturbed").web, degrees=[6, 10, 14], svd_gap=1e-8)
    if not (neg.rank <= 5 and neg.stabilized and time.perf_counter() - t0 < 10):
        failures.append(f"perturbed: rank {neg.rank}")
    ok = report(1, "rank table", not failures,
                f"{len(cases) + 1} webs, slowest {worst:.2f}s, perturbed rank {neg.rank}" +
                (f"; failures {failures}" if failures else ""))
    assert ok


def test_identity_suite(report):
    results = identity_suite(ks=(0.3, 0.5, 0.8), n=200)
    wanted = {"form", "e4bis", "sn_cn", "dn_sn", "addition", "quartic_A", "k_kprime"}
    checked = [r for r in results if r[0] in wanted]
    bad = [(n, k, f"{res:.1e}") for n, k, res, tol in checked if not res < tol]
    assert {r[0] for r in checked} == wanted
    worst = max(res / tol for _, _, res, tol in checked)
    ok = report(2, "identity suite", not bad, f"{len(checked)} checks, worst residual/tol {worst:.1e}"
                + (f"; failures {bad}" if bad else ""))
    assert ok


CASE_MAP = [
    (("const:1", "const:0.3"), "Algebraic", "1"),
    (("const", "tanh"), "TypeC", "2"),
    (("poly:0,1", "poly:0,1"), "TypeE", "4-a"),
    (("exp", "exp"), "TypeC", "4-b"),
    (("sin", "cos"), "TypeB", "4-c"),
    (("inv", "inv"), "TypeD", "4-d"),
    (("csch:2", "-csch:2"), "TypeA", "4-e(i)"),
    (("tanh", "-tanh"), "TypeA", "4-e(j)"),
    (("cot", "cot"), "TypeB", "4-e(j)"),
    (("sn:0.6", "sn:0.6"), "EllipticFamily", "4-e(k)"),
]


def test_criterion_and_classifier(report):
    problems = []
    for (vx, wy), label, case in CASE_MAP:
        c = classify(prov(vx), prov(wy))
        if (c.label, c.case_id) != (label, case):
            problems.append(f"{vx},{wy}: {c.label}/{c.case_id}")
        if c.label == "EllipticFamily" and not abs(c.modulus - (1 - 0.6) / (1 + 0.6)) < 1e-6:
            problems.append(f"modulus {c.modulus}")
        first, _ = check_eq1_eq2(prov(vx), prov(wy))
        sub = admissible_base(Web([lin(1.0, 1.0), lin(1.0, -1.0), vw_from_slopes(vx, wy)], (0.31, 0.17)))
        if first != (rank_estimate(sub).rank == 1):
            problems.append(f"eq1 vs 3-subweb disagree on {vx},{wy}")
    good_ok, good = max_rank_system_check(formula_foliation("sin_sin"))
    bad_ok, bad = max_rank_system_check(make_named_web("Perturbed").web.foliations[-1])
    ratio = bad / max(good, 1e-300)
    if not (good_ok and not bad_ok and ratio > 1e4):
        problems.append(f"system check: sin sin {good_ok}, perturbed {bad_ok}, ratio {ratio:.1e}")
    ok = report(3, "criterion/classifier", not problems,
                f"{len(CASE_MAP)} case-map inputs, system residual ratio {ratio:.1e}"
                + (f"; problems {problems}" if problems else ""))
    assert ok


def test_equivalence(report):
    problems = []
    if not equivalence_moduli(0.6, 0.25):
        problems.append("(0.6, 0.25) not equivalent")
    if equivalence_moduli(0.6, 0.61):
        problems.append("(0.6, 0.61) equivalent")
    orbit = moduli_orbit(0.6)
    for m in orbit:
        for f in (lambda z: -z, lambda z: 1 / z, lambda z: (1 - z) / (1 + z)):
            if min(abs(f(m) - o) for o in orbit) > 1e-12:
                problems.append(f"orbit not closed at {m}")
    moved, target = sigma_transport("Family", k=0.5)
    if not foliation_equal(moved, target, base=(0.7, 0.4), tol=1e-8):
        problems.append("sigma transport of the family")
    ok = report(4, "equivalence", not problems, "moduli, 8-value orbit, sigma transport at k=0.5"
                + (f"; problems {problems}" if problems else ""))
    assert ok


def test_limits(report):
    out = family_limit_checks()
    checks = {
        "sn->sin": out["sn_to_sin"]["deviation"] < 1e-6,
        "sn->tanh": out["sn_to_tanh"]["deviation"] < 1e-4,
        "exp order e^-2k": abs(out["exponential"]["rate"] + 2) < 0.05,
        "eps order eps^2 (+)": abs(out["x2+y2"]["rate"] - 2) < 0.05,
        "eps order eps^2 (-)": abs(out["x2-y2"]["rate"] - 2) < 0.05,
    }
    ok = report(5, "limits", all(checks.values()),
                f"sn-sin {out['sn_to_sin']['deviation']:.1e}, sn-tanh {out['sn_to_tanh']['deviation']:.1e}, "
                f"rates {out['exponential']['rate']:.3f} / {out['x2+y2']['rate']:.3f} / {out['x2-y2']['rate']:.3f}"
                + ("" if all(checks.values()) else f"; failed {[k for k, v in checks.items() if not v]}"))
    assert ok


def _random_jet(rng, order=4):
    c = rng.normal(size=(order + 1, order + 1)) + 1j * rng.normal(size=(order + 1, order + 1))
    return Jet2(c, (0.2, -0.1))


def test_property_suites(report, tmp_path):
    problems = []
    rng = np.random.default_rng(2024)

    def close(a, b):
        return np.abs(a.coeffs - b.coeffs).max() <= 1e-11 * max(1.0, np.abs(a.coeffs).max())

    for _ in range(1000):
        a, b, c = (_random_jet(rng) for _ in range(3))
        if not (close(a + b, b + a) and close(a * b, b * a) and close((a * b) * c, a * (b * c))
                and close(a * (b + c), a * b + a * c) and close((a + b) + c, a + (b + c))):
            problems.append("ring axiom")
            break
    for cid in ("T0", "B"):
        web = make_named_web(cid).web
        ref = rank_estimate(web).rank
        gs = list(d8_elements()) + [dilatation(c, (0.05 * c, -0.03)) for c in rng.uniform(0.5, 2.0, 5)]
        ranks = {rank_estimate(apply_symmetry_web(g, web)).rank for g in gs}
        if ranks != {ref}:
            problems.append(f"{cid} invariance {ranks}")
        bases = {rank_estimate(admissible_base(web.with_base(b))).rank
                 for b in [(0.31, 0.17), (0.43, 0.21), (0.22, 0.61)]}
        if bases != {ref}:
            problems.append(f"{cid} base points {bases}")
    outs = []
    for i in range(2):
        path = tmp_path / f"rank{i}.json"
        subprocess.run([sys.executable, "-m", "websmith", "rank", "--web", "B", "--format", "json",
                        "--out", str(path)], check=True, env={"WEBSMITH_SEED": "3", "PATH": ""})
        outs.append(path.read_bytes())
    if outs[0] != outs[1] or json.loads(outs[0])["rank"] != 6:
        problems.append("CLI JSON not deterministic")
    ok = report(6, "property suites", not problems,
                "1000 random jets, 16 D8 + 5 dilatations on T0 and B, 3 base points, CLI determinism"
                + (f"; problems {problems}" if problems else ""))
    assert ok
