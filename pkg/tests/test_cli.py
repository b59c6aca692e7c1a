import io
import json
import subprocess
import sys
from decimal import Decimal

import pytest

from qhahn.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    rc = run(list(argv), out, err)
    return rc, out.getvalue(), err.getvalue()


def test_eval_qpoch_finite_and_infinite():
    assert call("eval", "qpoch", "--a", "1/2", "--q", "1/2", "--n", "2")[:2] == (0, "0.375\n")
    rc, out, _ = call("eval", "qpoch", "--a", "1/2", "--q", "1/2", "--n", "inf", "--digits", "20")
    assert rc == 0 and out.startswith("0.288788095086602421")


def test_eval_phi_psi_rphis():
    rc, out, _ = call("eval", "phi", "--n", "1", "--a", "1/3", "--x", "2", "--q", "1/2")
    assert rc == 0 and out == "2." + "3" * 30 + "\n"  # 1 + (1 - a) x = 7/3
    rc, out, _ = call("eval", "psi", "--n", "0", "--a", "1/3", "--x", "2", "--q", "1/2")
    assert rc == 0 and Decimal(out) == 1
    # 1phi0(0;-;q,z) = 1/(z;q)_inf
    rc1, geo, _ = call("eval", "rphis", "--upper", "0", "--z", "1/4", "--q", "1/2")
    rc2, inv, _ = call("eval", "qpoch", "--a", "1/4", "--q", "1/2", "--n", "inf")
    assert rc1 == rc2 == 0
    assert abs(Decimal(geo) * Decimal(inv) - 1) < Decimal("1e-25")


@pytest.mark.parametrize("argv", [
    ("verify", "--id", "no-such-id"),
    ("verify", "--id", "I-0a", "--samples", "0"),
    ("verify", "--id", "I-0a", "--tol", "abc"),
    ("eval", "qpoch", "--a", "1/2", "--q", "2", "--n", "3"),
    ("eval", "qpoch", "--a", "1/2", "--q", "1/2", "--n", "-1"),
    ("eval", "phi", "--n", "inf", "--a", "0", "--x", "1", "--q", "1/2"),
    ("frobnicate",),
    (),
])
def test_usage_errors_exit_2(argv):
    rc, out, err = call(*argv)
    assert rc == 2 and out == "" and err


def test_divergent_series_exits_3():
    rc, _, err = call("eval", "rphis", "--upper", "1/2,1/3", "--z", "2", "--q", "1/2")
    assert rc == 3 and "TailNotReached" in err


def test_verify_text_and_json_agree():
    argv = ("verify", "--id", "I-0b", "--samples", "2", "--seed", "5")
    rc, text, _ = call(*argv)
    assert rc == 0 and text.split()[:2] == ["I-0b", "pass"]
    rc, js, _ = call(*argv, "--format", "json")
    assert rc == 0 and json.loads(js)[0]["pass"] is True


def test_verify_mutant_exits_1():
    rc, out, _ = call("verify", "--id", "I-3.2~mutant", "--samples", "1", "--order", "6")
    assert rc == 1 and "fail" in out


def test_list_formats():
    rc, text, _ = call("list")
    assert rc == 0 and text.splitlines()[0].startswith("I-0a")
    rc, js, _ = call("list", "--format", "json")
    doc = json.loads(js)
    assert {"I-3.2", "I-5.2r"} <= {d["id"] for d in doc}
    assert all(d["statement"] for d in doc)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qhahn", "eval", "qpoch", "--a", "0", "--q", "1/2", "--n", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and Decimal(proc.stdout) == 1
