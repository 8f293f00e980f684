"""Complex special functions and adaptive quadrature.

log-gamma, digamma and the upper incomplete gamma run on gmpy2
multiprecision arithmetic at an explicitly requested decimal precision;
results are returned as gmpy2 values carrying that precision.  The
quadrature works in ordinary floating point.
"""

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .errors import ConvergenceError, PoleError

_LOG2_10 = math.log2(10)


@dataclass(frozen=True)
class Precision:
    """Working precision for multiprecision evaluations.

    working_digits: significant decimal digits of intermediate arithmetic.
    target_abs_tol: absolute tolerance requested from quadrature and tails.
    """

    working_digits: int = 30
    target_abs_tol: float = 1e-12

    def __post_init__(self):
        if self.working_digits < 15:
            raise ValueError(f"working_digits must be >= 15, got {self.working_digits}")
        if not self.target_abs_tol > 0:
            raise ValueError("target_abs_tol must be positive")

    @property
    def bits(self) -> int:
        return int(self.working_digits * _LOG2_10) + 10


DEFAULT_PRECISION = Precision()


@functools.lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2 convention)."""
    if n == 0:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(n):
        acc += Fraction(math.comb(n + 1, j)) * _bernoulli(j)
    return -acc / (n + 1)


def _stirling_shift(digits: int) -> int:
    # asymptotic series reaches ~exp(-2*pi*T) at best; push Re s past T
    return max(10, math.ceil(0.40 * digits))


_MAX_STIRLING_TERMS = 80


def _is_nonpositive_integer(s: mpc) -> bool:
    if s.imag != 0:
        return False
    re = s.real
    return re <= 0 and re == gmpy2.floor(re)


def log_gamma(s, precision: Precision = DEFAULT_PRECISION) -> mpc:
    """Principal branch of log Gamma(s).

    Recurrence shifts push the argument to the right of the Stirling
    threshold, then the asymptotic series applies; the sum of principal
    logs reproduces the principal branch on the plane cut along the
    negative real axis.
    """
    with gmpy2.context(precision=precision.bits + 14):
        z = mpc(s)
        if _is_nonpositive_integer(z):
            raise PoleError(f"log_gamma pole at s = {complex(z)}")
        return _log_gamma_raw(z, precision.working_digits)


def _log_gamma_raw(z, digits):
    threshold = _stirling_shift(digits)
    shift = max(0, math.ceil(threshold - z.real))
    acc = mpc(0)
    for i in range(shift):
        w = z + i
        if w == 0:
            raise PoleError(f"log_gamma pole at s = {complex(z)}")
        acc += gmpy2.log(w)
    zs = z + shift
    two_pi = 2 * gmpy2.const_pi()
    total = (zs - mpfr(1) / 2) * gmpy2.log(zs) - zs + gmpy2.log(two_pi) / 2
    zpow = zs
    z2 = zs * zs
    floor = mpfr(2) ** (-(gmpy2.get_context().precision + 4))
    prev_mag = gmpy2.inf()
    for j in range(1, _MAX_STIRLING_TERMS + 1):
        bern = _bernoulli(2 * j)
        term = (mpfr(bern.numerator) / bern.denominator) / ((2 * j) * (2 * j - 1) * zpow)
        mag = abs(term)
        if mag > prev_mag:
            break  # asymptotic tail started growing
        total += term
        if mag < floor * abs(total):
            break
        prev_mag = mag
        zpow *= z2
    return total - acc


def gamma(s, precision: Precision = DEFAULT_PRECISION) -> mpc:
    """Complete Gamma via exp(log_gamma)."""
    with gmpy2.context(precision=precision.bits + 14):
        return gmpy2.exp(log_gamma(s, precision))


def digamma(s, precision: Precision = DEFAULT_PRECISION) -> mpc:
    """psi(s) = Gamma'(s)/Gamma(s) by the shifted asymptotic series."""
    with gmpy2.context(precision=precision.bits + 14):
        z = mpc(s)
        if _is_nonpositive_integer(z):
            raise PoleError(f"digamma pole at s = {complex(z)}")
        threshold = _stirling_shift(precision.working_digits)
        shift = max(0, math.ceil(threshold - z.real))
        acc = mpc(0)
        for i in range(shift):
            w = z + i
            if w == 0:
                raise PoleError(f"digamma pole at s = {complex(z)}")
            acc += 1 / w
        zs = z + shift
        total = gmpy2.log(zs) - 1 / (2 * zs)
        z2 = zs * zs
        zpow = z2
        floor = mpfr(2) ** (-(gmpy2.get_context().precision + 4))
        prev_mag = gmpy2.inf()
        for j in range(1, _MAX_STIRLING_TERMS + 1):
            bern = _bernoulli(2 * j)
            term = (mpfr(bern.numerator) / bern.denominator) / ((2 * j) * zpow)
            mag = abs(term)
            if mag > prev_mag:
                break
            total -= term
            if mag < floor * abs(total):
                break
            prev_mag = mag
            zpow *= z2
        return total - acc


_MAX_CF_ITER = 600
_MAX_SERIES_ITER = 3000


def upper_incomplete_gamma(a, x, precision: Precision = DEFAULT_PRECISION) -> mpc:
    """Gamma(a, x) = integral of e^-u u^(a-1) from x to infinity, x > 0.

    Continued fraction for x >= |a| + 1, series complement below.
    """
    with gmpy2.context(precision=precision.bits + 14):
        a = mpc(a)
        x = mpfr(x)
        if not x > 0:
            raise ValueError(f"x must be positive, got {x}")
        eps = mpfr(2) ** (-(precision.bits + 4))
        if x >= abs(a) + 1:
            return _upper_gamma_cf(a, x, eps)
        if _is_nonpositive_integer(a):
            raise PoleError(
                f"series branch needs the complete Gamma; pole at a = {complex(a)}"
            )
        lower = _lower_gamma_series(a, x, eps)
        return gmpy2.exp(_log_gamma_raw(a, precision.working_digits)) - lower


def _upper_gamma_cf(a, x, eps):
    # modified Lentz on Gamma(a,x) = e^(-x+a log x) / (x+1-a - 1(1-a)/(x+3-a - ...))
    tiny = mpfr(2) ** (-4 * gmpy2.get_context().precision)
    b = x + 1 - a
    c = 1 / tiny
    d = 1 / b if b != 0 else 1 / tiny
    h = d
    for i in range(1, _MAX_CF_ITER + 1):
        an = -i * (i - a)
        b += 2
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1 / d
        delta = c * d
        h *= delta
        if abs(delta - 1) < eps:
            return gmpy2.exp(-x + a * gmpy2.log(x)) * h
    raise ConvergenceError(
        f"incomplete gamma continued fraction stalled at a={complex(a)}, x={float(x)}"
    )


def _lower_gamma_series(a, x, eps):
    # gamma(a,x) = x^a e^-x sum_j x^j / (a (a+1) ... (a+j))
    term = 1 / a
    total = term
    ap = a
    for _ in range(_MAX_SERIES_ITER):
        ap += 1
        term *= x / ap
        total += term
        if abs(term) < abs(total) * eps:
            return gmpy2.exp(-x + a * gmpy2.log(x)) * total
    raise ConvergenceError(
        f"incomplete gamma series stalled at a={complex(a)}, x={float(x)}"
    )


# --- adaptive quadrature ---------------------------------------------------

_GL7_NODES, _GL7_WEIGHTS = np.polynomial.legendre.leggauss(7)
_GL15_NODES, _GL15_WEIGHTS = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex | float
    error: float
    intervals: int


def adaptive_quad(
    f,
    a: float,
    b: float,
    tol: float = 1e-12,
    envelope=None,
    max_intervals: int = 20000,
) -> QuadratureResult:
    """Integrate f on [a, b] by adaptive bisection with an embedded
    Gauss pair (7 and 15 nodes per interval).

    Infinite endpoints require ``envelope``, a decreasing majorant of |f|
    away from zero; the range is cut where the envelope drops below
    tol/10.  Returns the estimate with an error bound; raises when the
    subdivision budget is exhausted before the tolerance is met.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = float(a), float(b)
    if math.isinf(a) or math.isinf(b):
        if envelope is None:
            raise ValueError("infinite range requires a decay envelope")
        if math.isinf(b):
            b = max(_envelope_cut(envelope, max(a, 0.0) + 1.0, tol), a + 1.0)
        if math.isinf(a):
            a = min(-_envelope_cut(lambda x: envelope(-x), max(-b, 0.0) + 1.0, tol), b - 1.0)
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")

    total_len = b - a
    stack = [(a, b)]
    value = 0.0
    err = 0.0
    count = 0
    while stack:
        lo, hi = stack.pop()
        count += 1
        if count > max_intervals:
            raise ConvergenceError(
                f"quadrature tolerance {tol} not reached within {max_intervals} intervals"
            )
        coarse, fine = _gauss_pair(f, lo, hi)
        local_err = abs(fine - coarse)
        if local_err <= tol * (hi - lo) / total_len or (hi - lo) < 1e-14 * total_len:
            value = value + fine
            err += local_err
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid))
            stack.append((mid, hi))
    return QuadratureResult(value=value, error=err + 1e-16 * abs(value), intervals=count)


def _gauss_pair(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (lo + hi)
    coarse = half * sum(w * f(mid + half * x) for x, w in zip(_GL7_NODES, _GL7_WEIGHTS))
    fine = half * sum(w * f(mid + half * x) for x, w in zip(_GL15_NODES, _GL15_WEIGHTS))
    return coarse, fine


def _envelope_cut(envelope, start, tol):
    """Smallest x (by doubling then bisection) with envelope(x) < tol/10."""
    target = tol / 10.0
    x = start
    for _ in range(200):
        if envelope(x) < target:
            break
        x *= 2.0
    else:
        raise ConvergenceError("decay envelope never fell below the truncation target")
    lo = x / 2.0 if x > start else start
    for _ in range(60):
        mid = 0.5 * (lo + x)
        if envelope(mid) < target:
            x = mid
        else:
            lo = mid
    return x
