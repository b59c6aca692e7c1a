import json
from fractions import Fraction
from types import SimpleNamespace

import pytest

from conftest import fbinom, fphi, fpoch, rel
from qhahn.errors import TailNotReached
from qhahn.hyper import ThetaSpec, theta_double
from qhahn.qcore import qpoch_inf
from qhahn.scalar import QValue, Scalar, TailConfig
from qhahn.verify import (MUTANTS, REGISTRY, Identity, VerifyConfig, get_identity, reports_to_json,
                          sample_params, verify_all, verify_identity)
from qhahn.verify.harness import P
from qhahn.verify.registry import (b_qgauss, gauss_generalized_lhs, gauss_generalized_rhs, product_1x, product_x1,
                                   summation_lhs, summation_rhs)

H = Fraction(1, 2)
FAST = VerifyConfig(order=6, samples=2)


def _fixed_qgauss(build=b_qgauss):
    return Identity("t-qgauss", "q-Gauss at a fixed point", "", "numeric",
                    (P("a", H, H), P("b", H, H), P("c", Fraction(1, 8), Fraction(1, 8))), build,
                    q_range=(H, H))


def test_registry_ids_are_unique_and_complete():
    ids = [i.id for i in REGISTRY]
    assert len(ids) == len(set(ids)) == 32
    for want in ("I-0a", "I-0d", "I-1.1", "I-2.2b", "I-2.10", "I-3.6", "I-4.4", "I-5.2", "I-5.2r"):
        assert want in ids
    assert get_identity("I-3.2~mutant").mutant
    with pytest.raises(KeyError):
        get_identity("I-9.9")


def test_config_validation():
    with pytest.raises(ValueError):
        VerifyConfig(samples=0)
    with pytest.raises(ValueError):
        VerifyConfig(prec=64, rel_tol=Fraction(1, 10**25))
    with pytest.raises(ValueError):
        VerifyConfig(seed=-1)
    assert VerifyConfig(rel_tol="1e-20").rel_tol == Fraction(1, 10**20)


def test_sampling_is_deterministic_and_respects_domains():
    cfg = VerifyConfig(samples=10)
    ident = get_identity("I-0d")
    a = sample_params(ident, cfg)
    assert a == sample_params(ident, cfg)
    assert a != sample_params(ident, VerifyConfig(samples=10, seed=43))
    for p in a:
        assert abs(p["c"] / (p["a"] * p["b"])) < Fraction(9, 10)
        assert Fraction(1, 8) <= p["q"] <= Fraction(7, 8)
        assert all(abs(v.numerator) <= 16 and v.denominator <= 16 for v in p.values())


def test_mutant_samples_match_the_identity():
    cfg = VerifyConfig(samples=3)
    assert sample_params(get_identity("I-3.2"), cfg) == sample_params(get_identity("I-3.2~mutant"), cfg)


def test_qgauss_point_passes_and_perturbation_fails():
    rep = verify_identity(_fixed_qgauss())
    assert rep.passed and rep.max_rel_err < Scalar(Fraction(1, 10**25))
    assert all(s.params["a"] == H for s in rep.samples)

    def perturbed(p, env):
        ((lhs, rhs),) = b_qgauss(p, env)
        return [(lhs, rhs * (1 + Scalar(Fraction(1, 10**6))))]

    bad = verify_identity(_fixed_qgauss(perturbed))
    assert bad.verdict == "fail" and not bad.passed


def test_tail_failures_are_inconclusive():
    def diverges(p, env):
        raise TailNotReached("forced")

    rep = verify_identity(_fixed_qgauss(diverges))
    assert rep.verdict == "inconclusive"
    assert "TailNotReached" in rep.samples[0].error


def test_impossible_domain_is_inconclusive():
    ident = Identity("t-empty", "", "", "numeric", (P("a", 0, 1),), b_qgauss, domain=lambda p: False)
    assert verify_identity(ident).verdict == "inconclusive"


def test_generalized_gauss_at_z_zero_is_q_gauss():
    a, b, c, q = H, Fraction(2, 3), Fraction(1, 8), QValue(Scalar(H))
    tail = TailConfig.for_prec()
    lhs = gauss_generalized_lhs(Scalar(a), Scalar(b), Scalar(c), Scalar(0), q, tail)
    rhs = gauss_generalized_rhs(Scalar(a), Scalar(b), Scalar(c), Scalar(0), q, tail)
    gauss = qpoch_inf(c / a, q) * qpoch_inf(c / b, q) / (qpoch_inf(c, q) * qpoch_inf(c / (a * b), q))
    assert rel(lhs, gauss) < 1e-38 and rel(rhs, gauss) < 1e-38


def test_order_zero_compares_constant_terms():
    coeff_ids = [i.id for i in REGISTRY if i.mode.startswith("coeff")]
    reps = verify_all(VerifyConfig(order=0, samples=1), coeff_ids)
    assert [r.id for r in reps] == coeff_ids
    assert all(r.passed for r in reps)


def test_single_sample_reports_are_deterministic():
    cfg = VerifyConfig(samples=1, seed=7, order=4)
    ids = ["I-0a", "I-2.3", "I-3.2"]
    first = reports_to_json(verify_all(cfg, ids))
    assert first == reports_to_json(verify_all(cfg, ids))
    doc = json.loads(first)
    assert [len(r["samples"]) for r in doc] == [1, 1, 1]


def test_parallel_matches_serial():
    ids = ["I-0a", "I-0b", "I-2.1"]
    serial = reports_to_json(verify_all(VerifyConfig(samples=2), ids))
    parallel = reports_to_json(verify_all(VerifyConfig(samples=2, jobs=2), ids))
    assert serial == parallel


def test_json_schema():
    doc = json.loads(reports_to_json([verify_identity(get_identity("I-0b"), FAST)]))
    (r,) = doc
    assert set(r) >= {"id", "mode", "pass", "samples"}
    s = r["samples"][0]
    num, den = s["params"]["q"].split("/")
    assert int(den) > 0 and int(num) != 0
    assert "e" in s["max_rel_err"] or s["max_rel_err"] == "0"


def test_mehler_mutant_fails():
    assert verify_identity(MUTANTS["I-3.2"], FAST).verdict == "fail"
    assert verify_identity(get_identity("I-3.2"), FAST).passed


def test_tighter_tolerance_still_passes():
    cfg = VerifyConfig(samples=2, order=8, rel_tol=Fraction(1, 10**20), seed=11)
    for ident in ("I-0c", "I-2.5", "I-3.3", "I-4.2"):
        assert verify_identity(get_identity(ident), cfg).passed


# ---------------------------------------------------------------- plausible but wrong variants


def test_naive_product_formulas_are_false():
    a, x, q = Fraction(1, 3), Fraction(2, 5), H

    def naive_x1(m, n):
        return sum(fbinom(n, k, q) * fbinom(m, k, q) * fpoch(a, q, k) * fpoch(q, q, k) * (-1) ** k
                   * q ** (k * (k - 1) // 2) * x**k * fphi(n - k, a, x, 1, q) * fphi(m - k, a * q**k, x, 1, q)
                   for k in range(min(m, n) + 1))

    def naive_1x(m, n):
        return sum(fbinom(n, k, q) * fbinom(m, k, q) * fpoch(a, q, k) ** 2 * fpoch(q, q, k) * (-1) ** k
                   * q ** (k * (k - 1) // 2) * x**k * fphi(n - k, a * q**k, 1, x, q)
                   * fphi(m - k, a * q**k, 1, x, q) for k in range(min(m, n) + 1))

    for m, n in ((1, 1), (2, 2), (3, 2)):
        assert rel(naive_x1(m, n), fphi(m + n, a, x, 1, q)) > 1e-3
        assert rel(naive_1x(m, n), fphi(m + n, a, 1, x, q)) > 1e-3
        assert rel(product_x1(m, n, a, x, QValue(Scalar(q))), fphi(m + n, a, x, 1, q)) < 1e-60
        assert rel(product_1x(m, n, a, x, QValue(Scalar(q))), fphi(m + n, a, 1, x, q)) < 1e-60


def test_summation_with_duplicated_parameters_is_false():
    a, u, t, x, s = (Scalar(v) for v in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7), Fraction(1, 6)))
    q, tail = QValue(Scalar(H)), TailConfig.for_prec()
    rhs = summation_rhs(a, u, t, x, s, q, tail)
    assert rel(summation_lhs(a, u, t, x, s, q, tail), rhs) < 1e-38

    total = Scalar(0)
    coef = Scalar(1)
    for n in range(80):
        qn = q.q ** n
        spec = ThetaSpec((a, u * t * x), (a, u * t * x, u * t * qn), (0,), (a * t * x, 0), (a * t * x, 0), (),
                         q, s, t * qn)
        total = total + coef * theta_double(spec, tail)
        coef = coef * (1 - u * t * qn) * x / (1 - q.q * qn)
    assert rel(total, rhs) > 1e-6
