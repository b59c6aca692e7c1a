"""Standard test functions handed to the operator identities.

Each maps Scalars to a Scalar; the rational one has no pole on the sampled
domains (|x a|, |x y| <= 4 there).
"""

from __future__ import annotations

from ..qoperators import FunctionHandle

__all__ = ["UNIVARIATE", "BIVARIATE", "FOUR_VARIABLE"]


def _h2(name, fn):
    return FunctionHandle(fn, 2, name)


def _h4(name, fn):
    return FunctionHandle(fn, 4, name)


UNIVARIATE = {
    "1": _h2("1", lambda x, a: 1),
    "x": _h2("x", lambda x, a: x),
    "x^2": _h2("x^2", lambda x, a: x * x),
    "1/(1-x/4)": _h2("1/(1-x/4)", lambda x, a: 1 / (1 - x / 4)),
}

BIVARIATE = {
    "1": _h2("1", lambda x, a: 1),
    "x": _h2("x", lambda x, a: x),
    "a": _h2("a", lambda x, a: a),
    "x+a": _h2("x+a", lambda x, a: x + a),
    "x*a": _h2("x*a", lambda x, a: x * a),
    "1/(1-xa/4)": _h2("1/(1-xa/4)", lambda x, a: 1 / (1 - x * a / 4)),
}

FOUR_VARIABLE = {
    "1": _h4("1", lambda x, y, a, b: 1),
    "xy": _h4("xy", lambda x, y, a, b: x * y),
    "1/(1-xy/4)": _h4("1/(1-xy/4)", lambda x, y, a, b: 1 / (1 - x * y / 4)),
    "xa+yb": _h4("xa+yb", lambda x, y, a, b: x * a + y * b),
}
