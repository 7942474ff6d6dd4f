"""Multisets of points in PG(v-1, q).

Points are tuples of integer-encoded field elements, normalized so that the
first nonzero coordinate is 1.  Hyperplanes are identified with normalized
dual vectors h; a point P lies on the hyperplane iff h . P = 0.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import gf
from .expansion import DivParams, expand, gaussian
from .gf import FieldSpec

# hyperplane sweeps are chunked to bound memory
_CHUNK = 1 << 15
MAX_ENUMERATED_POINTS = 5_000_000

Point = tuple[int, ...]


def as_field(F) -> FieldSpec:
    return F if isinstance(F, FieldSpec) else gf.GF(int(F))


def normalize(F: FieldSpec, vec: Sequence[int]) -> Point:
    vec = [int(x) for x in vec]
    for x in vec:
        if x:
            s = F.inv(x)
            return tuple(int(F.mul[s, y]) for y in vec)
    raise ValueError("the zero vector is not a projective point")


@lru_cache(maxsize=64)
def _points_array(F: FieldSpec, v: int) -> np.ndarray:
    q = F.q
    count = gaussian(v, q)
    if count > MAX_ENUMERATED_POINTS:
        raise ValueError(f"PG({v - 1},{q}) has too many points to enumerate ({count})")
    blocks = []
    for lead in range(v - 1, -1, -1):
        k = v - lead - 1
        tails = np.arange(q**k, dtype=np.int64)
        block = np.zeros((q**k, v), dtype=np.int64)
        block[:, lead] = 1
        for j in range(k):
            block[:, v - 1 - j] = (tails // q**j) % q
        blocks.append(block)
    pts = np.concatenate(blocks)
    order = np.lexsort(pts.T[::-1])
    pts = pts[order]
    pts.setflags(write=False)
    return pts


def enumerate_points(v: int, q) -> list[Point]:
    """All [v]_q points of PG(v-1, q) in lexicographic order."""
    if v < 1:
        raise ValueError("v must be >= 1")
    F = as_field(q)
    return [tuple(int(x) for x in row) for row in _points_array(F, v)]


@lru_cache(maxsize=64)
def point_index(F: FieldSpec, v: int) -> dict[Point, int]:
    return {p: i for i, p in enumerate(enumerate_points(v, F))}


class PointMultiset:
    """Non-negative multiplicities on the points of PG(v-1, q).

    Build from a mapping ``{point: multiplicity}``; keys are normalized and
    zero multiplicities dropped.  Instances are treated as immutable.
    """

    __slots__ = ("field", "v", "_mults")

    def __init__(self, field, v: int, mults: Mapping[Sequence[int], int] | Iterable | None = None):
        F = as_field(field)
        if v < 1:
            raise ValueError("v must be >= 1")
        self.field = F
        self.v = v
        acc: dict[Point, int] = {}
        items = mults.items() if isinstance(mults, Mapping) else (mults or ())
        for pt, m in items:
            if len(pt) != v:
                raise ValueError(f"point {tuple(pt)} does not have {v} coordinates")
            m = int(m)
            if m < 0:
                raise ValueError("multiplicities must be non-negative")
            if m:
                key = normalize(F, pt)
                acc[key] = acc.get(key, 0) + m
        self._mults = MappingProxyType(dict(sorted(acc.items())))

    @classmethod
    def from_points(cls, field, v: int, points: Iterable[Sequence[int]]) -> "PointMultiset":
        return cls(field, v, Counter(normalize(as_field(field), p) for p in points))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def mults(self) -> Mapping[Point, int]:
        return self._mults

    @property
    def cardinality(self) -> int:
        return sum(self._mults.values())

    def __len__(self):
        return self.cardinality

    def __getitem__(self, pt: Sequence[int]) -> int:
        return self._mults.get(normalize(self.field, pt), 0)

    def __iter__(self):
        return iter(self._mults.items())

    def items(self):
        return self._mults.items()

    @property
    def support(self) -> list[Point]:
        return list(self._mults)

    @property
    def max_multiplicity(self) -> int:
        return max(self._mults.values(), default=0)

    @property
    def is_set(self) -> bool:
        return self.max_multiplicity <= 1

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self._mults:
            return np.zeros((0, self.v), dtype=np.int64), np.zeros(0, dtype=np.int64)
        pts = np.array(list(self._mults), dtype=np.int64)
        w = np.array(list(self._mults.values()), dtype=np.int64)
        return pts, w

    def _compatible(self, other: "PointMultiset"):
        if other.field != self.field or other.v != self.v:
            raise ValueError("multisets live in different geometries")

    def __add__(self, other: "PointMultiset") -> "PointMultiset":
        return msum(self, other)

    def __mul__(self, c: int) -> "PointMultiset":
        return scale(self, c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PointMultiset):
            return NotImplemented
        return self.field == other.field and self.v == other.v and dict(self._mults) == dict(other._mults)

    def __hash__(self):
        return hash((self.field, self.v, tuple(self._mults.items())))

    def __repr__(self):
        return f"PointMultiset(q={self.q}, v={self.v}, n={self.cardinality}, support={len(self._mults)})"

    def to_dict(self) -> dict:
        return {
            "v": self.v,
            "q": self.q,
            "points": [{"coords": list(p), "mult": m} for p, m in self._mults.items()],
        }

    @classmethod
    def from_dict(cls, d: Mapping, field=None) -> "PointMultiset":
        F = field if field is not None else as_field(d["q"])
        if F.q != d["q"]:
            raise ValueError("field does not match the serialized q")
        return cls(F, int(d["v"]), [(tuple(p["coords"]), p["mult"]) for p in d["points"]])


@dataclass(frozen=True)
class Subspace:
    """Span of linearly independent vectors in GF(q)^v, stored in RREF."""

    field: FieldSpec
    v: int
    basis: tuple[Point, ...]

    def __post_init__(self):
        if not self.basis:
            raise ValueError("a subspace needs at least one basis vector")
        for b in self.basis:
            if len(b) != self.v:
                raise ValueError("basis vector has the wrong length")
        R, piv = gf.rref(self.field, self.basis)
        if len(piv) != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")
        object.__setattr__(self, "basis", tuple(tuple(r) for r in R))
        object.__setattr__(self, "_pivots", tuple(piv))

    @classmethod
    def span(cls, field, vectors: Sequence[Sequence[int]]) -> "Subspace":
        F = as_field(field)
        R, _ = gf.rref(F, vectors)
        return cls(F, len(vectors[0]), tuple(tuple(r) for r in R))

    @classmethod
    def hyperplane(cls, field, dual: Sequence[int]) -> "Subspace":
        """The hyperplane {x : dual . x = 0}."""
        F = as_field(field)
        return cls(F, len(dual), tuple(tuple(r) for r in gf.nullspace(F, [list(dual)], len(dual))))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def dual(self) -> list[Point]:
        """Normalized basis of the orthogonal complement."""
        return [normalize(self.field, h) for h in gf.nullspace(self.field, self.basis, self.v)]

    def coordinates(self, vec: Sequence[int]) -> Point | None:
        """Coordinates with respect to the basis, or None if vec is outside."""
        x = tuple(int(vec[c]) for c in self._pivots)
        back = [0] * self.v
        for xi, b in zip(x, self.basis):
            back = [int(self.field.add[u, self.field.mul[xi, w]]) for u, w in zip(back, b)]
        return x if back == [int(t) for t in vec] else None

    def __contains__(self, vec) -> bool:
        return self.coordinates(vec) is not None

    def points(self) -> list[Point]:
        F = self.field
        coeffs = _points_array(F, self.dim)
        B = np.array(self.basis, dtype=np.int64)
        # rows: sum_i c_i * B_i
        out = gf.dot_rows(F, coeffs, B.T)
        return sorted(normalize(F, r) for r in out)


# --- hyperplane sweep -------------------------------------------------------------


def hyperplane_multiplicities(M: PointMultiset) -> np.ndarray:
    """M(H) for every hyperplane H, indexed like enumerate_points(v, q) (duals)."""
    F = M.field
    q, v = F.q, M.v
    duals = _points_array(F, v)
    pts, w = M.arrays()
    out = np.zeros(len(duals), dtype=np.int64)
    if len(w) == 0:
        return out
    # h.P = h'.P' + h''.P'' over a split of the coordinates; tabulate both halves
    # for all vectors, then h.P = 0 iff left[h'] == -right[h'']
    v1 = v // 2
    left = gf.dot_rows(F, _all_vectors(q, v1), pts[:, :v1])
    right = F.neg[gf.dot_rows(F, _all_vectors(q, v - v1), pts[:, v1:])]
    i1 = duals[:, :v1] @ (q ** np.arange(v1, dtype=np.int64))
    i2 = duals[:, v1:] @ (q ** np.arange(v - v1, dtype=np.int64))
    wf = w.astype(np.float64)
    for s in range(0, len(duals), _CHUNK):
        zero = left[i1[s : s + _CHUNK]] == right[i2[s : s + _CHUNK]]
        out[s : s + _CHUNK] = np.rint(zero @ wf).astype(np.int64)
    return out


@lru_cache(maxsize=32)
def _all_vectors(q: int, k: int) -> np.ndarray:
    """Every vector of GF(q)^k; row r has coordinate j equal to digit j of r in base q."""
    r = np.arange(q**k, dtype=np.int64)
    return np.stack([(r // q**j) % q for j in range(k)], axis=1) if k else np.zeros((1, 0), dtype=np.int64)


def span_reduce(M: PointMultiset) -> PointMultiset:
    """Re-coordinatize M inside the span of its support (same code up to zero rows)."""
    if not M.mults:
        return M
    S = Subspace.span(M.field, M.support)
    if S.dim == M.v:
        return M
    return PointMultiset(M.field, S.dim, [(S.coordinates(p), m) for p, m in M.items()])


def is_divisible(M: PointMultiset, delta: int) -> bool:
    """#M = M(H) (mod delta) for every hyperplane H."""
    if delta < 1:
        raise ValueError("delta must be positive")
    if delta == 1 or not M.mults:
        return True
    R = span_reduce(M)
    return bool(np.all((R.cardinality - hyperplane_multiplicities(R)) % delta == 0))


def subspace_multiplicity(M: PointMultiset, S: Subspace) -> int:
    if S.field != M.field or S.v != M.v:
        raise ValueError("subspace and multiset live in different geometries")
    return sum(m for p, m in M.items() if p in S)


# --- basic constructions ----------------------------------------------------------


def chi_subspace(S: Subspace) -> PointMultiset:
    return PointMultiset(S.field, S.v, {p: 1 for p in S.points()})


def scale(M: PointMultiset, c: int) -> PointMultiset:
    if c < 0:
        raise ValueError("scale factor must be non-negative")
    return PointMultiset(M.field, M.v, {p: c * m for p, m in M.items()})


def msum(M1: PointMultiset, M2: PointMultiset) -> PointMultiset:
    M1._compatible(M2)
    acc = dict(M1.mults)
    for p, m in M2.items():
        acc[p] = acc.get(p, 0) + m
    return PointMultiset(M1.field, M1.v, acc)


def embed(M: PointMultiset, v_new: int, offset: int = 0) -> PointMultiset:
    """Pad coordinates with zeros: old coordinates land at [offset, offset + v)."""
    if v_new < M.v or offset < 0 or offset + M.v > v_new:
        raise ValueError("target dimension too small for the embedding")
    pad = (0,) * offset, (0,) * (v_new - M.v - offset)
    return PointMultiset(M.field, v_new, {pad[0] + p + pad[1]: m for p, m in M.items()})


def coordinate_subspace(field, v: int, coords: Sequence[int]) -> Subspace:
    """Span of the unit vectors e_i for i in coords."""
    return Subspace(as_field(field), v, tuple(tuple(int(j == i) for j in range(v)) for i in coords))


def construct_from_expansion(n: int, params: DivParams) -> PointMultiset:
    """A Delta-divisible multiset of cardinality n built from the expansion of n.

    Block i (an (a-i+1)-space, weighted p^(ie-b) for i >= 1) is used c_i times;
    the copies coincide, so block i contributes c_i * weight * chi_U.  Used blocks
    sit in a direct sum, making the ambient dimension the sum of their dims.
    """
    ex = expand(n, params)
    if ex.leading < 0:
        raise ValueError(f"no {params.delta}-divisible multiset of cardinality {n} over GF({params.q})")
    F = gf.GF(params.q)
    a, b, p, e = params.a, params.b, params.p, params.e
    blocks = []
    for i, c in enumerate(ex.coefficients):
        if c:
            dim = a + 1 if i == 0 else a - i + 1
            weight = 1 if i == 0 else p ** (i * e - b)
            blocks.append((dim, c * weight))
    v = sum(d for d, _ in blocks) or 1
    acc: dict[Point, int] = {}
    offset = 0
    for dim, w in blocks:
        for pt in coordinate_subspace(F, v, range(offset, offset + dim)).points():
            acc[pt] = acc.get(pt, 0) + w
        offset += dim
    return PointMultiset(F, v, acc)


def restrict_hyperplane(M: PointMultiset, H: Subspace) -> PointMultiset:
    """M restricted to H, in coordinates of H's basis (ambient dim v-1)."""
    if H.field != M.field or H.v != M.v:
        raise ValueError("hyperplane and multiset live in different geometries")
    if H.dim != M.v - 1:
        raise ValueError("restriction needs a hyperplane")
    acc = []
    for p, m in M.items():
        x = H.coordinates(p)
        if x is not None:
            acc.append((x, m))
    return PointMultiset(M.field, M.v - 1, acc)


def small_hyperplane(M: PointMultiset) -> Subspace:
    """A hyperplane H with M(H) < #M / q (the first minimizer in sweep order)."""
    if not M.mults:
        raise ValueError("multiset is empty")
    if M.v == 1:
        raise ValueError("PG(0,q) has no hyperplanes")
    mh = hyperplane_multiplicities(M)
    i = int(np.argmin(mh))
    if mh[i] * M.q >= M.cardinality:
        raise AssertionError("no small hyperplane found")
    return Subspace.hyperplane(M.field, _points_array(M.field, M.v)[i])


def project(M: PointMultiset, Q: Sequence[int]) -> PointMultiset:
    """Projection through Q into PG(v-2, q): M_Q(L/Q) = M(L) - M(Q)."""
    if M.v < 2:
        raise ValueError("cannot project from PG(0,q)")
    F = M.field
    Q = normalize(F, Q)
    j = next(i for i, x in enumerate(Q) if x)
    acc = []
    for p, m in M.items():
        if p == Q:
            continue
        c = p[j]
        img = [int(F.add[x, F.mul[F.neg[c], y]]) for x, y in zip(p, Q)]
        del img[j]
        acc.append((img, m))
    return PointMultiset(F, M.v - 1, acc)


def strip_multiples(M: PointMultiset, delta: int) -> tuple[PointMultiset, int]:
    """Remove delta-fold points while some multiplicity is >= delta."""
    if delta < 1:
        raise ValueError("delta must be positive")
    stripped = sum(m // delta for m in M.mults.values())
    return PointMultiset(M.field, M.v, {p: m % delta for p, m in M.items()}), stripped


def decompose_line_multiset(M: PointMultiset, delta: int) -> tuple[list[Point], int]:
    """M = sum delta * chi_{P_i} + s * chi_L on the projective line, 0 <= s < delta."""
    if M.v != 2:
        raise ValueError("decomposition needs a multiset on a projective line")
    if not is_divisible(M, delta):
        raise ValueError(f"multiset is not {delta}-divisible")
    points = [p for p, m in M.items() for _ in range(m // delta)]
    rest = {m % delta for m in (M[p] for p in enumerate_points(2, M.field))}
    if len(rest) != 1:
        raise AssertionError("residual multiplicities are not constant")
    s = rest.pop()
    assert (M.q * s) % delta == 0
    return points, s


# --- named constructions ----------------------------------------------------------


def two_lines_construction(q, e: int) -> PointMultiset:
    """p^e lines through P = (0:0:1) in PG(2,q), minus P: a p^e-divisible set."""
    F = as_field(q)
    if e < 1:
        raise ValueError("e must be >= 1")
    k = F.p**e
    if k > F.q + 1:
        raise ValueError(f"only {F.q + 1} lines pass through a point")
    # the lines through P correspond to the points of PG(1,q)
    directions = enumerate_points(2, F)[:k]
    pts = [(x, y, z) for x, y in directions for z in range(F.q)]
    return PointMultiset.from_points(F, 3, pts)


def baer_construction(u: int, p: int, e: int, f: int) -> PointMultiset:
    """Points of PG(u-1, p^e) with all coordinates in the subfield GF(p^f)."""
    if u < 3:
        raise ValueError("u must be at least 3")
    if f < 1 or f >= e or e % f:
        raise ValueError(f"GF({p}^{f}) is not a proper subfield of GF({p}^{e})")
    F = gf.field_new(p, e)
    sub = set(int(x) for x in F.subfield(f))
    pts = [P for P in enumerate_points(u, F) if all(x in sub for x in P)]
    return PointMultiset.from_points(F, u, pts)


def hyperoval(q) -> PointMultiset:
    """Conic {(1:t:t^2)} + (0:0:1) + nucleus (0:1:0) in PG(2,q), q even."""
    F = as_field(q)
    if F.p != 2:
        raise ValueError("hyperovals need even q")
    pts = [(1, t, F.mul_(t, t)) for t in range(F.q)] + [(0, 0, 1), (0, 1, 0)]
    return PointMultiset.from_points(F, 3, pts)


def line_profile(S: PointMultiset) -> dict[int, int]:
    """{k: number of lines of PG(2,q) meeting S in exactly k points}."""
    if S.v != 3:
        raise ValueError("line profiles are defined in PG(2,q)")
    if not S.is_set:
        raise ValueError("line profiles need a set of points")
    return dict(sorted(Counter(int(x) for x in hyperplane_multiplicities(S)).items()))


def is_km_arc(S: PointMultiset, t: int) -> bool:
    """KM-arc of type (0, 2, t): q + t points, every line meets S in 0, 2 or t."""
    return S.v == 3 and S.is_set and S.cardinality == S.q + t and set(line_profile(S)) <= {0, 2, t}


def is_line(S: PointMultiset) -> bool:
    return S.is_set and S.cardinality == S.q + 1 and gf.rank(S.field, S.support) == 2


def is_hyperoval(S: PointMultiset) -> bool:
    return S.v == 3 and S.is_set and S.cardinality == S.q + 2 and set(line_profile(S)) <= {0, 2}


def is_spanning(M: PointMultiset) -> bool:
    return bool(M.mults) and gf.rank(M.field, M.support) == M.v


def ball_bound(r: int, q: int, p: int) -> int:
    """Lower bound (r-1)q + (p-1)r on r-divisible sets whose size is divisible by r."""
    if not 1 < r < q:
        raise ValueError("need 1 < r < q")
    return (r - 1) * q + (p - 1) * r
