"""Arithmetic in GF(p^e) with the compact integer encoding of field elements.

An element ``c_0 + c_1*alpha + ... + c_{e-1}*alpha^{e-1}`` is stored as the
integer ``c_0 + c_1*p + ... + c_{e-1}*p^{e-1}``, where ``alpha`` is a root of
the modulus polynomial.  For q <= 16 this is exactly the single digit used in
printed generator matrices.

All tables are numpy arrays so that callers can vectorize: ``F.add[x, y]``,
``F.mul[x, y]`` work elementwise on integer arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

# Conway polynomials C_{p,e}, coefficients low -> high degree (monic).
# Source: F. Luebeck's table of Conway polynomials; every entry is re-derived
# from the defining conditions in tests/test_gf.py.
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
}

MAX_TABLE_ORDER = 1 << 16


class FieldError(ValueError):
    """Invalid field parameters or an illegal field operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
        if p * p > q:
            p = q
            break
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1 or not is_prime(p):
        raise FieldError(f"{q} is not a prime power")
    return p, e


def _poly_mod(num: list[int], mod: Sequence[int], p: int) -> list[int]:
    num = list(num)
    d = len(mod) - 1
    lead_inv = pow(mod[-1], -1, p)
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i] * lead_inv % p
        if c:
            for k in range(d + 1):
                num[i - d + k] = (num[i - d + k] - c * mod[k]) % p
    return num[:d]


def _has_factor_of_degree(mod: Sequence[int], p: int, deg: int) -> bool:
    # exhaustive trial division by monic polynomials of the given degree
    for tail in range(p**deg):
        cand, t = [], tail
        for _ in range(deg):
            cand.append(t % p)
            t //= p
        cand.append(1)
        if not any(_poly_mod(mod, cand, p)):
            return True
    return False


def is_irreducible(mod: Sequence[int], p: int) -> bool:
    """Irreducibility over GF(p) by trial division up to half the degree."""
    d = len(mod) - 1
    if d < 1 or mod[-1] % p == 0:
        return False
    if d == 1:
        return True
    if mod[0] % p == 0:
        return False
    return not any(_has_factor_of_degree(mod, p, k) for k in range(1, d // 2 + 1))


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(p^e) defined by a monic irreducible modulus.

    Two specs compare equal when p and the modulus agree.  Build instances with
    :func:`field_new` (or :func:`GF`), which validates the parameters.
    """

    p: int
    e: int
    modulus: tuple[int, ...]
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    inv_table: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)
    exp: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.q}, modulus={self.poly_str()})"

    def poly_str(self, var: str = "a") -> str:
        terms = []
        for i in range(self.e, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            mono = "1" if i == 0 else (var if i == 1 else f"{var}^{i}")
            terms.append(mono if c == 1 and i else f"{c}*{mono}" if i else str(c))
        return " + ".join(terms)

    # scalar operations on integer encodings

    def _check(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise FieldError(f"{x} is not an element of GF({self.q})")
        return x

    def add_(self, x: int, y: int) -> int:
        return int(self.add[self._check(x), self._check(y)])

    def sub_(self, x: int, y: int) -> int:
        return int(self.add[self._check(x), self.neg[self._check(y)]])

    def mul_(self, x: int, y: int) -> int:
        return int(self.mul[self._check(x), self._check(y)])

    def inv(self, x: int) -> int:
        if self._check(x) == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return int(self.inv_table[x])

    def pow(self, x: int, n: int) -> int:
        self._check(x)
        if x == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of 0")
            return 1 if n == 0 else 0
        return int(self.exp[(int(self.log[x]) * n) % (self.q - 1)])

    def frobenius(self, x, times: int = 1):
        """x -> x^(p^times); works elementwise on arrays."""
        k = pow(self.p, times % self.e, self.q - 1) if self.e > 1 else 1
        x = np.asarray(x)
        out = self.exp[(self.log[x].astype(np.int64) * k) % (self.q - 1)]
        return np.where(x == 0, 0, out).astype(x.dtype if x.dtype.kind in "iu" else np.int64)

    # encoding

    def encode(self, coeffs: Sequence[int]) -> int:
        """Polynomial coefficients (low -> high) to the integer encoding."""
        if len(coeffs) > self.e:
            raise FieldError("too many coefficients")
        out = 0
        for c in reversed(coeffs):
            if not 0 <= c < self.p:
                raise FieldError(f"coefficient {c} outside GF({self.p})")
            out = out * self.p + c
        return out

    def decode(self, x: int) -> tuple[int, ...]:
        self._check(x)
        out = []
        for _ in range(self.e):
            out.append(x % self.p)
            x //= self.p
        return tuple(out)

    def subfield(self, f: int) -> np.ndarray:
        """Elements of the subfield GF(p^f), sorted by encoding."""
        if f < 1 or self.e % f:
            raise FieldError(f"GF({self.p}^{f}) is not a subfield of GF({self.q})")
        xs = np.arange(self.q)
        return xs[self.frobenius(xs, f) == xs]

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, self._check(int(value)))

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, x) for x in range(self.q)]


@dataclass(frozen=True)
class FieldElement:
    """An element of a specific field; supports ``+ - * / **``."""

    field: FieldSpec
    value: int

    def _other(self, y) -> int:
        if isinstance(y, FieldElement):
            if y.field != self.field:
                raise FieldError("operands belong to different fields")
            return y.value
        if isinstance(y, (int, np.integer)) and y in (0, 1):
            return int(y)
        return NotImplemented

    def __add__(self, y):
        v = self._other(y)
        return v if v is NotImplemented else FieldElement(self.field, self.field.add_(self.value, v))

    __radd__ = __add__

    def __sub__(self, y):
        v = self._other(y)
        return v if v is NotImplemented else FieldElement(self.field, self.field.sub_(self.value, v))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg[self.value]))

    def __mul__(self, y):
        v = self._other(y)
        return v if v is NotImplemented else FieldElement(self.field, self.field.mul_(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, y):
        v = self._other(y)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.mul_(self.value, self.field.inv(v)))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.value, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@GF({self.field.q})"


def _build_tables(p: int, e: int, modulus: tuple[int, ...]):
    q = p**e
    digits = np.array([[(x // p**i) % p for i in range(e)] for x in range(q)], dtype=np.int64)
    weights = p ** np.arange(e, dtype=np.int64)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    neg = ((-digits) % p) @ weights

    # multiplication by alpha: shift coefficients and reduce by the modulus
    def times_alpha(x: int) -> int:
        c = [0] + [(x // p**i) % p for i in range(e)]
        top = c[e]
        for k in range(e):
            c[k] = (c[k] - top * modulus[k]) % p
        return sum(c[k] * p**k for k in range(e))

    # find a primitive element by brute force; alpha itself for Conway moduli
    exp = None
    for g in ([p] if e > 1 else []) + list(range(2, q)) + [1]:
        powers = [1]
        seen = {1}
        cur = 1
        while True:
            cur = _mul_slow(cur, g, p, e, times_alpha, add)
            if cur in seen:
                break
            seen.add(cur)
            powers.append(cur)
        if len(powers) == q - 1:
            exp = np.array(powers, dtype=np.int64)
            break
    if exp is None:
        raise FieldError("no primitive element found")
    log = np.zeros(q, dtype=np.int64)
    log[exp] = np.arange(q - 1)
    idx = (log[:, None] + log[None, :]) % (q - 1)
    mul = exp[idx]
    mul[0, :] = 0
    mul[:, 0] = 0
    inv = np.zeros(q, dtype=np.int64)
    inv[1:] = exp[(-log[1:]) % (q - 1)]
    tables = [add, mul, neg, inv, log, exp]
    small = np.uint8 if q <= 256 else np.int32
    out = []
    for t in tables:
        t = t.astype(small if t is not log else np.int64)
        t.setflags(write=False)
        out.append(t)
    return out


def _mul_slow(x: int, y: int, p: int, e: int, times_alpha, add) -> int:
    # schoolbook: y * x = sum_i y_i * alpha^i * x
    acc = 0
    shifted = x
    for i in range(e):
        yi = (y // p**i) % p
        for _ in range(yi):
            acc = int(add[acc, shifted])
        shifted = times_alpha(shifted)
    return acc


def _least_primitive_root(p: int) -> int:
    order, x, factors, d = p - 1, p - 1, set(), 2
    while d * d <= x:
        while x % d == 0:
            factors.add(d)
            x //= d
        d += 1
    if x > 1:
        factors.add(x)
    return next(g for g in range(1, p) if all(pow(g, order // r, p) != 1 for r in factors))


@lru_cache(maxsize=None)
def _field_cached(p: int, e: int, modulus: tuple[int, ...]) -> FieldSpec:
    add, mul, neg, inv, log, exp = _build_tables(p, e, modulus)
    return FieldSpec(p, e, modulus, add, mul, neg, inv, log, exp)


def field_new(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Validated constructor for GF(p^e).

    ``modulus`` lists coefficients from the constant term up; it must be monic
    of degree ``e`` and irreducible over GF(p).  When omitted, the Conway
    polynomial is used.
    """
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if e < 1:
        raise FieldError(f"exponent e={e} must be positive")
    if p**e > MAX_TABLE_ORDER:
        raise FieldError(f"GF({p}^{e}) is too large for table arithmetic")
    if modulus is None and e == 1 and (p, 1) not in CONWAY:
        # degree-1 Conway polynomial: x - g for the least primitive root g
        modulus = ((-_least_primitive_root(p)) % p, 1)
    if modulus is None:
        try:
            modulus = CONWAY[(p, e)]
        except KeyError:
            raise FieldError(f"no built-in Conway polynomial for GF({p}^{e}); pass a modulus") from None
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != e + 1 or modulus[-1] != 1:
        raise FieldError(f"modulus must be monic of degree {e}")
    if not is_irreducible(modulus, p):
        raise FieldError(f"modulus {modulus} is reducible over GF({p})")
    return _field_cached(p, e, modulus)


def GF(q: int, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Shorthand: field by order."""
    p, e = prime_power(q)
    return field_new(p, e, modulus)


# --- serialization of elements as matrix digits -------------------------------

DIGITS = "0123456789abcdef"


def element_char(x: int) -> str:
    return DIGITS[x]


def char_element(c: str, q: int) -> int:
    if q > 16:
        raise FieldError("digit encoding only defined for q <= 16")
    v = DIGITS.find(c.lower())
    if v < 0 or v >= q:
        raise FieldError(f"digit {c!r} is not an element of GF({q})")
    return v


# --- linear algebra over GF(q) on integer-encoded lists ------------------------


def rref(F: FieldSpec, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    A = [list(map(int, r)) for r in rows]
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv_table
    pivots: list[int] = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        s = int(inv[A[r][c]])
        A[r] = [int(mul[s, x]) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = int(neg[A[i][c]])
                A[i] = [int(add[x, mul[f, y]]) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(F: FieldSpec, rows: Sequence[Sequence[int]]) -> int:
    if len(rows) == 0:
        return 0
    return len(rref(F, rows)[1])


def nullspace(F: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of {x : A x = 0}."""
    if len(rows) == 0:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    R, piv = rref(F, rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, pc in zip(R, piv):
            x[pc] = int(F.neg[row[f]])
        basis.append(x)
    return basis


def mat_inv(F: FieldSpec, A: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(A)
    aug = [list(map(int, A[i])) + [int(i == j) for j in range(n)] for i in range(n)]
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise FieldError("matrix is singular")
    return [row[n:] for row in R]


def mat_vec(F: FieldSpec, A: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    out = []
    for row in A:
        acc = 0
        for a, b in zip(row, x):
            acc = int(F.add[acc, F.mul[a, b]])
        out.append(acc)
    return out


def dot_rows(F: FieldSpec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """All pairwise dot products: X (a, v), Y (b, v) -> (a, b)."""
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    acc = np.zeros((X.shape[0], Y.shape[0]), dtype=F.add.dtype)
    for j in range(X.shape[1]):
        acc = F.add[acc, F.mul[X[:, j, None], Y[None, :, j]]]
    return acc


def mat_apply(F: FieldSpec, A: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Apply matrix A (v, v) to row vectors pts (m, v): returns (A @ p^T)^T."""
    return dot_rows(F, pts, np.asarray(A))


def normalize_rows(F: FieldSpec, pts: np.ndarray) -> np.ndarray:
    """Scale each nonzero row so that its first nonzero entry is 1."""
    pts = np.asarray(pts, dtype=np.int64)
    if pts.size == 0:
        return pts
    nz = pts != 0
    first = np.argmax(nz, axis=1)
    lead = pts[np.arange(len(pts)), first]
    scale = F.inv_table[lead]
    scale = np.where(lead == 0, 0, scale)
    return F.mul[scale[:, None], pts].astype(np.int64)
