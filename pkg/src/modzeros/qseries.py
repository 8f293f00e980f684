"""Exact integer arithmetic on truncated q-expansions.

Series are plain lists ``c`` with ``c[i]`` the coefficient of ``q^i``,
truncated to a fixed length.  Products are exact: coefficients are packed
into fixed-width byte slots of a single big integer (Kronecker
substitution) so the convolution rides on GMP's fast multiplication.
"""

import functools

from gmpy2 import mpz


def multiply(a: list[int], b: list[int], length: int) -> list[int]:
    """Exact truncated product of two integer series."""
    a_pos = [c if c > 0 else 0 for c in a]
    a_neg = [-c if c < 0 else 0 for c in a]
    b_pos = [c if c > 0 else 0 for c in b]
    b_neg = [-c if c < 0 else 0 for c in b]
    bits = (
        max(c.bit_length() for c in a_pos + a_neg)
        + max(c.bit_length() for c in b_pos + b_neg)
        + length.bit_length()
        + 2
    )
    slot = (bits + 7) // 8
    pp = _conv_nonneg(a_pos, b_pos, length, slot)
    nn = _conv_nonneg(a_neg, b_neg, length, slot)
    pn = _conv_nonneg(a_pos, b_neg, length, slot)
    np_ = _conv_nonneg(a_neg, b_pos, length, slot)
    return [pp[i] + nn[i] - pn[i] - np_[i] for i in range(length)]


def _conv_nonneg(a, b, length, slot):
    prod = int(_pack(a, slot) * _pack(b, slot))
    raw = prod.to_bytes((prod.bit_length() + 7) // 8 + slot, "little")
    return [
        int.from_bytes(raw[n * slot : (n + 1) * slot], "little")
        for n in range(length)
    ]


def _pack(coeffs, slot):
    buf = bytearray(len(coeffs) * slot)
    for i, c in enumerate(coeffs):
        if c:
            nbytes = (c.bit_length() + 7) // 8
            buf[i * slot : i * slot + nbytes] = c.to_bytes(nbytes, "little")
    return mpz(int.from_bytes(bytes(buf), "little"))


def dedekind_eta_product(length: int) -> list[int]:
    """Coefficients of prod_{n>=1} (1 - q^n) from the pentagonal expansion."""
    e = [0] * length
    e[0] = 1
    j = 1
    while True:
        g1 = j * (3 * j - 1) // 2
        g2 = j * (3 * j + 1) // 2
        if g1 >= length and g2 >= length:
            break
        sign = 1 if j % 2 == 0 else -1
        if g1 < length:
            e[g1] += sign
        if g2 < length:
            e[g2] += sign
        j += 1
    return e


@functools.lru_cache(maxsize=4)
def eta_power_24(length: int) -> tuple[int, ...]:
    """Expansion of prod (1 - q^n)^24, exact, cached.

    Built by one cube and three squarings of the pentagonal series.
    """
    e = dedekind_eta_product(length)
    e3 = multiply(multiply(e, e, length), e, length)
    e6 = multiply(e3, e3, length)
    e12 = multiply(e6, e6, length)
    e24 = multiply(e12, e12, length)
    return tuple(e24)


def divisor_power_sums(power: int, length: int) -> list[int]:
    """sigma_power(n) at index n for 1 <= n < length; index 0 is 0."""
    out = [0] * length
    for d in range(1, length):
        dp = d**power
        for n in range(d, length, d):
            out[n] += dp
    return out


def eisenstein_series(weight: int, length: int) -> list[int]:
    """Normalized Eisenstein series of weight 4 or 6, exact integers."""
    if weight == 4:
        mult, power = 240, 3
    elif weight == 6:
        mult, power = -504, 5
    else:
        raise ValueError(f"unsupported Eisenstein weight {weight}")
    sig = divisor_power_sums(power, length)
    series = [mult * sig[n] for n in range(length)]
    series[0] = 1
    return series
