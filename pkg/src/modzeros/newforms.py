"""Fourier coefficient data of primitive forms.

Coefficients are kept in arithmetic normalization as exact integers
(c_1 = 1, multiplicative, Hecke recursion at prime powers) and converted
to the unit-normalized a_n = c_n * n^(-(k-1)/2) only on demand.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from . import qseries
from .errors import FormatError, InvariantError, WorkBudgetError
from .primes import primes_up_to, smallest_prime_factors

FILE_FORMAT_VERSION = 1

LEVEL_ONE_WEIGHTS = (12, 16, 18, 20, 22, 26)

# monomial in (E4, E6) multiplying the discriminant form, per weight
_LEVEL_ONE_FACTORS = {12: (0, 0), 16: (1, 0), 18: (0, 1), 20: (2, 0), 22: (1, 1), 26: (2, 1)}


@dataclass(frozen=True)
class NewformData:
    """Level, weight, sign and exact coefficients c_1..c_M of a primitive form."""

    level: int
    weight: int
    sign: int | None
    label: str
    coeffs: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.coeffs)

    def c(self, n: int) -> int:
        """Coefficient c_n (1-based)."""
        return self.coeffs[n - 1]

    def validate(self) -> None:
        validate_coefficients(self.coeffs, self.level, self.weight)
        if self.level < 1:
            raise InvariantError(f"level must be >= 1, got {self.level}")
        if self.weight < 2 or self.weight % 2 != 0:
            raise InvariantError(f"weight must be a positive even integer, got {self.weight}")
        if self.sign not in (1, -1, None):
            raise InvariantError(f"sign must be +1, -1 or None, got {self.sign!r}")


@dataclass(frozen=True)
class NormalizedCoefficients:
    """Unit-normalized a_n = c_n * n^(-(k-1)/2), as floats."""

    weight: int
    values: tuple[float, ...]

    def a(self, n: int) -> float:
        return self.values[n - 1]


@dataclass(frozen=True)
class Conductor:
    q: float
    log_q: float


def analytic_conductor(level: int, weight: int) -> Conductor:
    """q = N * ((k-1)/2 + 3) * ((k+1)/2 + 3)."""
    if level < 1 or weight < 2 or weight % 2 != 0:
        raise ValueError(f"invalid (level, weight) = ({level}, {weight})")
    q = level * ((weight - 1) / 2 + 3) * ((weight + 1) / 2 + 3)
    return Conductor(q=q, log_q=math.log(q))


def gen_delta(terms: int) -> NewformData:
    """The discriminant form: level 1, weight 12, coefficients tau(n).

    tau is read off the exact expansion of q * prod (1 - q^n)^24.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    eta24 = qseries.eta_power_24(terms)
    coeffs = tuple(eta24[:terms])  # c_n = [q^n] q*eta^24 = eta24[n-1]
    return NewformData(level=1, weight=12, sign=1, label="1.12.delta", coeffs=coeffs)


def gen_level1_eigenform(weight: int, terms: int) -> NewformData:
    """The unique normalized cusp eigenform of level 1 for the listed weights.

    Built as the discriminant form times a monomial in E4 and E6; the
    functional-equation sign is (-1)^(k/2).
    """
    if weight not in LEVEL_ONE_WEIGHTS:
        raise ValueError(
            f"unsupported weight {weight}; one-dimensional cusp spaces exist for {LEVEL_ONE_WEIGHTS}"
        )
    if terms < 1:
        raise ValueError("terms must be >= 1")
    e4_pow, e6_pow = _LEVEL_ONE_FACTORS[weight]
    series = list(qseries.eta_power_24(terms))
    for _ in range(e4_pow):
        series = qseries.multiply(series, qseries.eisenstein_series(4, terms), terms)
    for _ in range(e6_pow):
        series = qseries.multiply(series, qseries.eisenstein_series(6, terms), terms)
    sign = 1 if (weight // 2) % 2 == 0 else -1
    label = f"1.{weight}.a"
    return NewformData(level=1, weight=weight, sign=sign, label=label, coeffs=tuple(series[:terms]))


def gen_elliptic(
    a_invariants: tuple[int, int, int, int, int],
    level: int,
    terms: int,
    work_bound: int = 5_000_000,
) -> NewformData:
    """Weight-2 form attached to an elliptic curve given by a1,a2,a3,a4,a6.

    c_p = p + 1 - #E(F_p) for good p by exhaustive point counting; at bad
    primes c_p in {-1,0,+1} from the smooth-point count of the reduction.
    The stated level is trusted.  The sign is left unknown; it is detected
    numerically downstream.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if len(a_invariants) != 5:
        raise ValueError("expected five a-invariants a1,a2,a3,a4,a6")
    if terms > work_bound:
        raise WorkBudgetError(f"terms {terms} exceeds work bound {work_bound}")
    prime_coeffs = {}
    for p in primes_up_to(terms):
        if p > work_bound:
            raise WorkBudgetError(f"prime enumeration at p={p} exceeds work bound {work_bound}")
        if level % p == 0:
            prime_coeffs[p] = _trace_bad_prime(a_invariants, p)
        else:
            prime_coeffs[p] = _trace_good_prime(a_invariants, p)
    coeffs = extend_multiplicatively(prime_coeffs, level, 2, terms)
    label = f"{level}.2.curve"
    return NewformData(level=level, weight=2, sign=None, label=label, coeffs=tuple(coeffs))


def _curve_points_naive(a_inv, p):
    """All affine points of the reduction mod p, by full enumeration."""
    a1, a2, a3, a4, a6 = (a % p for a in a_inv)
    pts = []
    for x in range(p):
        rhs = (x * x % p * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y) % p == rhs:
                pts.append((x, y))
    return pts


def _is_singular_point(a_inv, p, x, y):
    a1, a2, a3, a4, a6 = (a % p for a in a_inv)
    # partial derivatives of y^2 + a1 x y + a3 y - x^3 - a2 x^2 - a4 x - a6
    dx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % p
    dy = (2 * y + a1 * x + a3) % p
    return dx == 0 and dy == 0


def _trace_good_prime(a_inv, p):
    """c_p = p + 1 - #E(F_p) at a prime of good reduction."""
    if p < 50:
        return p + 1 - (len(_curve_points_naive(a_inv, p)) + 1)
    # p odd: complete the square; #affine = p + sum_x chi(B(x)) with
    # B = 4*(x^3 + a2 x^2 + a4 x + a6) + (a1 x + a3)^2
    a1, a2, a3, a4, a6 = (a % p for a in a_inv)
    x = np.arange(p, dtype=np.int64)
    x2 = x * x % p
    x3 = x2 * x % p
    b = (4 * (x3 + a2 * x2 % p + a4 * x % p + a6) + ((a1 * x + a3) % p) ** 2) % p
    chi = _quadratic_character_table(p)
    return int(-chi[b].sum())


def _quadratic_character_table(p):
    """chi[r] = Legendre symbol (r|p) for odd p, as int8."""
    chi = -np.ones(p, dtype=np.int8)
    r = np.arange(p, dtype=np.int64)
    chi[r * r % p] = 1
    chi[0] = 0
    return chi


def _trace_bad_prime(a_inv, p):
    """c_p in {-1,0,+1} at p | N from #smooth(F_p) = p - c_p.

    Smooth points include the point at infinity; affine singular points of
    the reduced curve are excluded from the count.
    """
    if p < 50:
        pts = _curve_points_naive(a_inv, p)
        singular = [pt for pt in pts if _is_singular_point(a_inv, p, *pt)]
        if not singular:
            raise InvariantError(f"no singular point mod {p}; reduction is good, not bad")
        smooth = len(pts) - len(singular) + 1
    else:
        a1, a2, a3, a4, a6 = (a % p for a in a_inv)
        x = np.arange(p, dtype=np.int64)
        x2 = x * x % p
        x3 = x2 * x % p
        b = (4 * (x3 + a2 * x2 % p + a4 * x % p + a6) + ((a1 * x + a3) % p) ** 2) % p
        chi = _quadratic_character_table(p)
        affine = p + int(chi[b].sum())
        # singular points: y = -(a1 x + a3)/2 with B(x) = B'(x) = 0
        bp = (12 * x2 + 8 * a2 * x + 4 * a4 + 2 * a1 * (a1 * x + a3)) % p
        n_sing = int(((b == 0) & (bp == 0)).sum())
        if n_sing == 0:
            raise InvariantError(f"no singular point mod {p}; reduction is good, not bad")
        smooth = affine - n_sing + 1
    c = p - smooth
    if c not in (-1, 0, 1):
        raise InvariantError(f"inconsistent smooth-point count at p={p}: c_p = {c}")
    return c


def extend_multiplicatively(
    prime_coeffs: dict[int, int], level: int, weight: int, terms: int
) -> list[int]:
    """Full sequence c_1..c_terms from prime coefficients.

    Hecke recursion c_{p^(m+1)} = c_p c_{p^m} - p^(k-1) c_{p^(m-1)} at good
    primes, c_{p^m} = c_p^m at p | N, then coprime multiplicativity.
    """
    coeffs = [0] * (terms + 1)
    coeffs[1] = 1
    spf = smallest_prime_factors(terms)
    for p in primes_up_to(terms):
        if p not in prime_coeffs:
            raise InvariantError(f"missing prime coefficient c_{p}", index=p)
        cp = prime_coeffs[p]
        if level % p == 0:
            v, q = cp, p
            while q <= terms:
                coeffs[q] = v
                q *= p
                v *= cp
        else:
            pk = p ** (weight - 1)
            prev, cur, q = 1, cp, p
            while q <= terms:
                coeffs[q] = cur
                q *= p
                prev, cur = cur, cp * cur - pk * prev
    for n in range(2, terms + 1):
        p = int(spf[n])
        pe, rest = p, n // p
        while rest % p == 0:
            pe *= p
            rest //= p
        if rest > 1:
            coeffs[n] = coeffs[pe] * coeffs[rest]
    return coeffs[1:]


def validate_coefficients(coeffs, level, weight):
    """Check all structural invariants of an arithmetic coefficient sequence.

    Exact-integer checks: c_1 = 1, Hecke recursion at prime powers, coprime
    multiplicativity, and the coefficient bounds c_p^2 <= 4 p^(k-1) at good
    primes (|a_p| <= 2) and c_p^2 <= p^(k-1) at bad primes (|a_p| <= 1).
    """
    terms = len(coeffs)
    if terms < 1:
        raise InvariantError("empty coefficient sequence")
    if coeffs[0] != 1:
        raise InvariantError(f"c_1 must be 1, got {coeffs[0]}", index=1)

    def c(n):
        return coeffs[n - 1]

    for p in primes_up_to(terms):
        cp = c(p)
        if level % p == 0:
            if cp * cp > p ** (weight - 1):
                raise InvariantError(
                    f"|a_{p}| > 1 at ramified prime {p} (c_{p} = {cp})", index=p
                )
            v, q = cp, p
            while q <= terms:
                if c(q) != v:
                    raise InvariantError(
                        f"ramified power recursion fails at n = {q}", index=q
                    )
                q *= p
                v *= cp
        else:
            if cp * cp > 4 * p ** (weight - 1):
                raise InvariantError(
                    f"coefficient bound |a_{p}| <= 2 fails (c_{p} = {cp})", index=p
                )
            pk = p ** (weight - 1)
            prev, cur, q = 1, cp, p
            while q <= terms:
                if c(q) != cur:
                    raise InvariantError(f"Hecke recursion fails at n = {q}", index=q)
                q *= p
                prev, cur = cur, cp * cur - pk * prev
    spf = smallest_prime_factors(terms)
    for n in range(2, terms + 1):
        p = int(spf[n])
        pe, rest = p, n // p
        while rest % p == 0:
            pe *= p
            rest //= p
        if rest > 1 and c(n) != c(pe) * c(rest):
            raise InvariantError(f"multiplicativity fails at n = {n}", index=n)


def normalize(form: NewformData) -> NormalizedCoefficients:
    """a_n = c_n * n^(-(k-1)/2) in floating point."""
    u = (form.weight - 1) / 2
    values = tuple(float(c) * n ** (-u) for n, c in enumerate(form.coeffs, start=1))
    return NormalizedCoefficients(weight=form.weight, values=values)


def chebyshev_b(a_p: float, m: int, ramified: bool) -> float:
    """Power-sum coefficient at a prime power.

    Unramified: alpha^m + conj(alpha)^m where alpha + conj(alpha) = a_p and
    |alpha| = 1, via b_1 = a_p, b_2 = a_p^2 - 2, b_{m+1} = a_p b_m - b_{m-1}.
    Ramified: a_p^m.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    bound = 1.0 if ramified else 2.0
    if abs(a_p) > bound + 1e-9:
        raise ValueError(
            f"|a_p| = {abs(a_p)} outside the admissible range <= {bound} "
            f"({'ramified' if ramified else 'unramified'})"
        )
    if ramified:
        return a_p**m
    if m == 1:
        return a_p
    prev, cur = a_p, a_p * a_p - 2.0
    for _ in range(m - 2):
        prev, cur = cur, a_p * cur - prev
    return cur


_FILE_KEYS = {"format_version", "label", "level", "weight", "sign", "coeff_normalization", "an"}


def save_form(form: NewformData, path) -> None:
    """Write a newform file (UTF-8 JSON, arithmetic normalization)."""
    doc = {
        "format_version": FILE_FORMAT_VERSION,
        "label": form.label,
        "level": form.level,
        "weight": form.weight,
        "sign": form.sign,
        "coeff_normalization": "arithmetic",
        "an": list(form.coeffs),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_form(path) -> NewformData:
    """Read and fully re-validate a newform file."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError("top-level value must be an object")
    unknown = set(doc) - _FILE_KEYS
    if unknown:
        raise FormatError(f"unknown keys {sorted(unknown)}")
    missing = _FILE_KEYS - set(doc)
    if missing:
        raise FormatError(f"missing keys {sorted(missing)}")
    if doc["format_version"] != FILE_FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {doc['format_version']!r}")
    if doc["coeff_normalization"] != "arithmetic":
        raise FormatError(f"unsupported coeff_normalization {doc['coeff_normalization']!r}")
    level, weight, sign = doc["level"], doc["weight"], doc["sign"]
    if not isinstance(level, int) or level < 1:
        raise FormatError(f"level must be a positive integer, got {level!r}")
    if not isinstance(weight, int) or weight < 2 or weight % 2 != 0:
        raise FormatError(f"weight must be an even integer >= 2, got {weight!r}")
    if sign not in (1, -1, None):
        raise FormatError(f"sign must be 1, -1 or null, got {sign!r}")
    an = doc["an"]
    if not isinstance(an, list) or not an or not all(isinstance(c, int) for c in an):
        raise FormatError("'an' must be a non-empty list of integers")
    form = NewformData(
        level=level,
        weight=weight,
        sign=sign,
        label=str(doc["label"]),
        coeffs=tuple(an),
    )
    form.validate()
    return form
