"""Attainable effective lengths of p-power divisible codes.

For q = p^e and Delta = p^(a*e - b) (a >= 1, 0 <= b < e) the attainable
lengths are exactly the non-negative integer combinations of the base values

    s(0) = [a+1]_q,    s(i) = p^(i*e - b) * [a-i+1]_q   (1 <= i <= a),

and membership is decided by the sign of the leading digit of a mixed-radix
expansion over these values.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .gf import FieldError, prime_power


@dataclass(frozen=True)
class DivParams:
    q: int
    a: int
    b: int

    def __post_init__(self):
        p, e = prime_power(self.q)
        if self.a < 1:
            raise ValueError(f"a={self.a} must be >= 1")
        if not 0 <= self.b <= e - 1:
            raise ValueError(f"b={self.b} must lie in [0, {e - 1}] for q={self.q}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "e", e)

    @property
    def f(self) -> int:
        return self.a * self.e - self.b

    @property
    def delta(self) -> int:
        return self.p**self.f

    @classmethod
    def from_delta(cls, q: int, delta: int) -> "DivParams":
        """Parameters for Delta = p^f with f >= 1: a = ceil(f/e), b = a*e - f."""
        p, e = prime_power(q)
        if delta < 1:
            raise ValueError("Delta must be positive")
        f, r = 0, delta
        while r % p == 0:
            r //= p
            f += 1
        if r != 1 or f == 0:
            raise ValueError(f"Delta={delta} is not a positive power of p={p}")
        a = -(-f // e)
        return cls(q, a, a * e - f)


def gaussian(i: int, q: int) -> int:
    """[i]_q = (q^i - 1)/(q - 1), the number of points of an i-space."""
    if i < 0:
        raise ValueError("i must be non-negative")
    return (q**i - 1) // (q - 1)


def base_sequence(params: DivParams) -> tuple[int, ...]:
    q, a, b, p, e = params.q, params.a, params.b, params.p, params.e
    return (gaussian(a + 1, q),) + tuple(p ** (i * e - b) * gaussian(a - i + 1, q) for i in range(1, a + 1))


@dataclass(frozen=True)
class Expansion:
    n: int
    params: DivParams
    coefficients: tuple[int, ...]

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    @property
    def cross_sum(self) -> int:
        return cross_sum(self)

    @property
    def feasible(self) -> bool:
        return self.leading >= 0

    def to_dict(self) -> dict:
        P = self.params
        return {
            "n": self.n,
            "q": P.q,
            "a": P.a,
            "b": P.b,
            "delta": P.delta,
            "coefficients": list(self.coefficients),
            "leading": self.leading,
            "cross_sum": self.cross_sum,
            "feasible": self.feasible,
        }


def expand(n: int, params: DivParams) -> Expansion:
    """The unique expansion n = sum c_i s(i) with bounded non-leading digits.

    c_0 ranges over [0, p^(e-b)), c_1..c_{a-1} over [0, q), and the leading
    digit c_a is an arbitrary integer.  Negative n is allowed.
    """
    q, a, b, p, e = params.q, params.a, params.b, params.p, params.e
    s = base_sequence(params)
    m0 = p ** (e - b)
    c0 = n * pow(s[0], -1, m0) % m0 if m0 > 1 else 0
    coeffs = [c0]
    rest = n - c0 * s[0]
    for i in range(1, a):
        scale = p ** (i * e - b)
        assert rest % scale == 0
        ci = (rest // scale) * pow(gaussian(a - i + 1, q), -1, q) % q
        coeffs.append(ci)
        rest -= ci * s[i]
    assert rest % s[a] == 0
    coeffs.append(rest // s[a])
    return Expansion(n, params, tuple(coeffs))


def cross_sum(exp: Expansion) -> int:
    c = exp.coefficients
    return exp.params.p**exp.params.b * c[0] + sum(c[1:])


def feasible(n: int, params: DivParams) -> bool:
    """Whether a Delta-divisible code of effective length n exists over GF(q)."""
    if n < 0:
        raise ValueError("length must be non-negative")
    return expand(n, params).leading >= 0


def split_delta(q: int, delta: int) -> tuple[int, int]:
    """Delta = t * p^f with gcd(t, p) = 1; returns (t, f)."""
    if delta < 1:
        raise ValueError("Delta must be positive")
    p, _ = prime_power(q)
    f = 0
    while delta % p == 0:
        delta //= p
        f += 1
    return delta, f


def feasible_general(n: int, q: int, delta: int) -> bool:
    """Feasibility for arbitrary Delta via the t-fold repetition reduction."""
    if n < 0:
        raise ValueError("length must be non-negative")
    t, f = split_delta(q, delta)
    if n % t:
        return False
    if f == 0:
        return True
    p, e = prime_power(q)
    a = -(-f // e)
    return feasible(n // t, DivParams(q, a, a * e - f))


def frobenius_number(params: DivParams) -> int:
    """Largest length with no Delta-divisible code (closed form)."""
    p, e, a, b = params.p, params.e, params.a, params.b
    return a * p ** ((a + 1) * e - b) - gaussian(a + 1, params.q)


def sylvester(a1: int, a2: int) -> int:
    if a1 < 1 or a2 < 1:
        raise ValueError("arguments must be positive")
    if gcd(a1, a2) != 1:
        raise ValueError(f"{a1} and {a2} are not coprime")
    return a1 * a2 - a1 - a2


def coin_representable(n: int, coins) -> list[int] | None:
    """Non-negative combination of ``coins`` summing to n, by dynamic programming.

    Returns one coefficient per coin or None.  Independent of the expansion
    machinery; used as an oracle.
    """
    coins = [int(c) for c in coins]
    if not coins or any(c < 1 for c in coins):
        raise ValueError("coins must be positive integers")
    if n < 0:
        return None
    # last[m] = index of the coin used to reach m, -1 for 0, None if unreachable
    last: list[int | None] = [None] * (n + 1)
    last[0] = -1
    for m in range(1, n + 1):
        for j, c in enumerate(coins):
            if c <= m and last[m - c] is not None:
                last[m] = j
                break
    if last[n] is None:
        return None
    out = [0] * len(coins)
    m = n
    while m:
        j = last[m]
        out[j] += 1
        m -= coins[j]
    return out


def representable_table(limit: int, coins) -> list[bool]:
    """reach[m] for 0 <= m <= limit."""
    reach = [False] * (limit + 1)
    reach[0] = True
    for m in range(1, limit + 1):
        reach[m] = any(c <= m and reach[m - c] for c in coins)
    return reach


__all__ = [
    "DivParams",
    "Expansion",
    "FieldError",
    "base_sequence",
    "coin_representable",
    "cross_sum",
    "expand",
    "feasible",
    "feasible_general",
    "frobenius_number",
    "gaussian",
    "representable_table",
    "split_delta",
    "sylvester",
]
