"""Acceptance criteria AC1-AC8. Each test prints one PASS/FAIL line."""

import io
import json
import time
from fractions import Fraction

import pytest

from conftest import rel
from qhahn.cli import run
from qhahn.qoperators import OperatorKind, op_pow_closed, op_pow_iter
from qhahn.scalar import QValue, Scalar
from qhahn.verify import MUTANTS, VerifyConfig, get_identity, ids, sample_params, verify_identity
from qhahn.verify.functions import BIVARIATE
from qhahn.verify.registry import vanishing_sum_terms

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def emit(ac, ok, detail):
        with capsys.disabled():
            print(f"\n{ac}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, f"{ac}: {detail}"
    return emit


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    t0 = time.perf_counter()
    rc = run(list(argv), out, err)
    return rc, out.getvalue(), time.perf_counter() - t0


@pytest.fixture(scope="module")
def full_run():
    return _cli("verify", "--id", "all", "--format", "json")


def _worst(rep):
    return max(s.max_rel_err for s in rep.samples)


def test_ac1_full_registry(full_run, report):
    rc, out, secs = full_run
    doc = json.loads(out)
    failing = [r["id"] for r in doc if not r["pass"]]
    ok = rc == 0 and not failing and [r["id"] for r in doc] == ids() and secs < 300
    report("AC1", ok, f"{len(doc)} identities, failing={failing}, {secs:.1f}s")


def test_ac2_mehler(report):
    cfg = VerifyConfig(order=12, samples=5, rel_tol=Fraction(1, 10**25))
    rep = verify_identity(get_identity("I-3.2"), cfg)
    worst = _worst(rep)
    ok = rep.passed and len(rep.samples) == 5 and worst < Scalar(Fraction(1, 10**25))
    report("AC2", ok, f"I-3.2 max rel err {worst.to_sci(3)}")


def test_ac3_summation(report):
    cfg = VerifyConfig(samples=5, rel_tol=Fraction(1, 10**15))
    lines, ok = [], True
    for ident in ("I-5.2", "I-5.2r"):
        rep = verify_identity(get_identity(ident), cfg)
        small = all(abs(v) < Fraction(9, 10) for s in rep.samples for v in s.params.values())
        worst = _worst(rep)
        ok &= rep.passed and small and len(rep.samples) == 5 and worst < Scalar(Fraction(1, 10**15))
        lines.append(f"{ident} {worst.to_sci(3)}")
    report("AC3", ok, ", ".join(lines))


def test_ac4_operator_oracles(report):
    ident = get_identity("I-2.2b")
    tuples = [(p["x"], p["a"], p["q"]) for p in sample_params(ident, VerifyConfig(samples=5, seed=4))]
    assert len(tuples) == 5
    worst, zero_ok = Fraction(0), True
    for x, a, qv in tuples:
        q = QValue(Scalar(qv))
        for f in BIVARIATE.values():
            for kind in (OperatorKind.DELTA, OperatorKind.OMEGA):
                for n in range(9):
                    worst = max(worst, rel(op_pow_closed(kind, n, f, x, a, q), op_pow_iter(kind, n, f, x, a, q)))
            for n in range(9):
                d0 = op_pow_iter(OperatorKind.DELTA, n, f, x, 0, q)
                plain = op_pow_iter(OperatorKind.DELTA_PLAIN, n, f, x, 0, q)
                zero_ok &= d0 == plain
    ok = worst < 1e-25 and zero_ok
    report("AC4", ok, f"closed vs iter max rel err {float(worst):.3e}, a=0 matches DeltaPlain: {zero_ok}")


def test_ac5_vanishing_sum(report):
    worst = 0.0
    for a, x, qv in ((Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)), (Fraction(-3, 4), Fraction(7, 8), Fraction(3, 4)),
                     (Fraction(5, 6), Fraction(-1, 2), Fraction(1, 5))):
        q = QValue(Scalar(qv))
        for n in range(1, 11):
            terms = vanishing_sum_terms(n, Scalar(a), Scalar(x), q)
            total = sum(terms[1:], terms[0])
            scale = max(abs(float(t)) for t in terms)
            worst = max(worst, abs(float(total)) / scale)
    report("AC5", worst < 1e-30, f"|sum| / max|term| = {worst:.3e}")


def test_ac6_baselines(report):
    cfg = VerifyConfig(samples=10, rel_tol=Fraction(1, 10**25))
    lines, ok = [], True
    for ident in ("I-0a", "I-0b", "I-0c", "I-0d"):
        rep = verify_identity(get_identity(ident), cfg)
        ok &= rep.passed and len(rep.samples) == 10
        lines.append(f"{ident} {_worst(rep).to_sci(2)}")
    report("AC6", ok, ", ".join(lines))


def test_ac7_mutants_fail(report):
    verdicts = {k: verify_identity(m, VerifyConfig()).verdict for k, m in sorted(MUTANTS.items())}
    report("AC7", set(verdicts) == {"I-3.2", "I-5.2"} and set(verdicts.values()) == {"fail"}, str(verdicts))


def test_ac8_determinism(full_run, report):
    rc, out, _ = _cli("verify", "--id", "all", "--format", "json")
    ok = rc == full_run[0] and out == full_run[1]
    report("AC8", ok, f"{len(out)} bytes, identical={out == full_run[1]}")
