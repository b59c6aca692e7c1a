"""Arbitrary-precision q-series: q-Pochhammer symbols, basic hypergeometric
series, the q-operators Delta_{x,a} and Omega_{x,a}, homogeneous Hahn
polynomials, and a registry of identities checked numerically."""

from .errors import (DomainTooTight, PoleInLower, QSeriesError, TailNotReached, ZeroParameter,
                     ZeroPoint)
from .hahn import phi, phi2, psi
from .hyper import PhiSpec, ThetaSpec, rphis, theta_double
from .pseries import INF, SeriesT, SeriesTS, poch_series, ps_inv, ps_mul
from .qcore import gauss_binom, gauss_binom_row, qpoch, qpoch_inf, qpoch_list, qpoch_multi
from .qoperators import OperatorKind, expq_op, op_pow_closed, op_pow_iter
from .scalar import DEFAULT_PREC, QValue, Scalar, TailConfig, parse_rational

__version__ = "0.1.0"
