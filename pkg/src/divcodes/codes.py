"""Linear codes over GF(q) and their correspondence with point multisets."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from math import gcd

import numpy as np

from . import gf
from .geometry import PointMultiset, as_field, normalize
from .gf import FieldSpec

MAX_CODEWORDS = 1 << 28
# codewords materialized per block during enumeration
_BLOCK = 1 << 22


@dataclass(frozen=True, eq=False)
class LinearCode:
    field: FieldSpec
    generator: np.ndarray

    def __post_init__(self):
        G = np.asarray(self.generator, dtype=np.int64)
        if G.ndim != 2:
            raise ValueError("generator must be a 2-d matrix")
        if G.size and (G.min() < 0 or G.max() >= self.field.q):
            raise ValueError(f"generator entries must lie in GF({self.field.q})")
        G.setflags(write=False)
        object.__setattr__(self, "generator", G)

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def effective_length(self) -> int:
        return int(np.count_nonzero(self.generator.any(axis=0)))

    def __eq__(self, other):
        if not isinstance(other, LinearCode):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.generator, other.generator)

    def __repr__(self):
        return f"LinearCode([{self.n},{self.k}]_{self.field.q})"


def code_from_multiset(M: PointMultiset) -> LinearCode:
    """Generator matrix with one column per point, repeated per multiplicity."""
    if not M.mults:
        raise ValueError("the empty multiset has no associated code")
    cols = [p for p, m in M.items() for _ in range(m)]
    return LinearCode(M.field, np.array(cols, dtype=np.int64).T)


def multiset_from_code(C: LinearCode) -> PointMultiset:
    F = C.field
    cols = [tuple(int(x) for x in c) for c in C.generator.T if any(c)]
    return PointMultiset(F, C.k, [(normalize(F, c), 1) for c in cols])


def weight_distribution(C: LinearCode) -> dict[int, int]:
    """{w: number of codewords of weight w}, by enumerating all q^k messages.

    Identical columns are merged first (their entries coincide in every
    codeword), then codewords are built row by row; the last rows are looped
    over in blocks so memory stays bounded.
    """
    F, k = C.field, C.k
    q = F.q
    if q**k > MAX_CODEWORDS:
        raise ValueError(f"q^k = {q}^{k} codewords is too many to enumerate")
    cols, counts = np.unique(C.generator.T, axis=0, return_counts=True)
    G = cols.T.astype(np.int64)  # k x m
    m = G.shape[1]
    # messages = (head, tail): head rows materialized, tail rows looped
    head = k
    while head > 0 and q**head * max(m, 1) > _BLOCK:
        head -= 1
    words = np.zeros((1, m), dtype=F.add.dtype)
    for i in range(head):
        scaled = F.mul[np.arange(q)[:, None], G[i][None, :]]  # q x m
        words = F.add[scaled[:, None, :], words[None, :, :]].reshape(-1, m)
    hist = np.zeros(int(counts.sum()) + 1, dtype=np.int64)
    tail_rows = G[head:]
    for r in range(q ** (k - head)):
        shift = np.zeros(m, dtype=np.int64)
        x = r
        for row in tail_rows:
            shift = F.add[shift, F.mul[x % q, row]]
            x //= q
        block = F.add[words, shift[None, :]] if k > head else words
        wts = (block != 0).astype(np.int64) @ counts
        hist += np.bincount(wts, minlength=len(hist))
    return {w: int(c) for w, c in enumerate(hist) if c}


def weight_divisibility(C: LinearCode) -> int:
    """gcd of all nonzero codeword weights (0 for the zero code)."""
    return reduce(gcd, (w for w in weight_distribution(C) if w), 0)


def is_projective(C: LinearCode) -> bool:
    return multiset_from_code(C).max_multiplicity <= 1


def is_spanning_code(C: LinearCode) -> bool:
    return gf.rank(C.field, C.generator.tolist()) == C.k


# --- text format ------------------------------------------------------------------

_HEADER = re.compile(r"^\s*q\s*=\s*(\d+)(?:\s+k\s*=\s*(\d+))?(?:\s+n\s*=\s*(\d+))?\s*$")


def parse_matrix(text: str, q=None) -> LinearCode:
    """Parse one row per line, one digit per entry (hex digits for q > 10).

    Whitespace, parentheses and brackets are ignored.  An optional header line
    ``q=<int> k=<int> n=<int>`` fixes the field and checks the shape.
    """
    k_hdr = n_hdr = None
    rows = []
    for line in text.splitlines():
        m = _HEADER.match(line)
        if m:
            if q is not None and as_field(q).q != int(m.group(1)):
                raise ValueError("header q disagrees with the requested field")
            q = int(m.group(1))
            k_hdr = int(m.group(2)) if m.group(2) else None
            n_hdr = int(m.group(3)) if m.group(3) else None
            continue
        body = re.sub(r"[\s()\[\]|]", "", line)
        if body:
            rows.append(body)
    if q is None:
        raise ValueError("field size not given (no header and no q)")
    F = as_field(q)
    if not rows:
        raise ValueError("matrix has no rows")
    if len({len(r) for r in rows}) != 1:
        raise ValueError("ragged rows")
    G = np.array([[gf.char_element(c, F.q) for c in r] for r in rows], dtype=np.int64)
    C = LinearCode(F, G)
    if (k_hdr is not None and k_hdr != C.k) or (n_hdr is not None and n_hdr != C.n):
        raise ValueError("matrix shape disagrees with the header")
    return C


def format_matrix(C: LinearCode, header: bool = False) -> str:
    if C.field.q > 16:
        raise ValueError("digit format only covers q <= 16")
    lines = [f"q={C.field.q} k={C.k} n={C.n}"] if header else []
    lines += ["".join(gf.element_char(int(x)) for x in row) for row in C.generator]
    return "\n".join(lines) + "\n"
