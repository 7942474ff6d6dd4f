"""Exhaustive search for Delta-divisible point (multi)sets in PG(v-1, q).

The search assigns multiplicities hyperplane by hyperplane: at each node the
hyperplane with the fewest admissible completions is filled in completely.
Pruning uses hyperplane residues (every hyperplane must end with
M(H) = n mod Delta) and pencils: the q+1 hyperplanes through a codimension-2
space X cover the points outside X disjointly, so the additions they still
need, plus whatever goes onto X, must fit into the remaining budget.  In
PG(2, q) the axis X is a single point, and pencils also force points in or
out.

Symmetry is broken soundly: a spanning solution contains a basis, which may be
moved to the unit vectors; then either some support point has no zero
coordinate (and may be moved to the all-ones vector) or the support avoids all
such points.  Classification in PG(2, q) forces the standard frame and
computes orbits exactly via the projectivities that send ordered frames of a
solution to the standard frame.
"""

from __future__ import annotations

import itertools
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import gf
from .expansion import feasible_general
from .geometry import (
    PointMultiset,
    _points_array,
    ball_bound,
    embed,
    hyperplane_multiplicities,
    is_divisible,
    is_hyperoval,
    is_km_arc,
    is_line,
    baer_construction,
    line_profile,
    point_index,
)
from .gf import FieldSpec

DEFAULT_NODE_BUDGET = 50_000_000
BUDGET_ENV = "DIVCODES_NODE_BUDGET"


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, DEFAULT_NODE_BUDGET))


@dataclass(frozen=True)
class SearchSpec:
    q: int
    v: int
    delta: int
    n: int
    max_mult: int = 1
    spanning: bool = False

    def __post_init__(self):
        gf.prime_power(self.q)
        if self.v < 1:
            raise ValueError("v must be >= 1")
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.max_mult < 1:
            raise ValueError("max multiplicity must be >= 1")
        if self.delta < 1:
            raise ValueError("delta must be >= 1")

    @property
    def projective(self) -> bool:
        return self.max_mult == 1

    def accepts(self, M: PointMultiset) -> bool:
        return (
            M.cardinality == self.n
            and M.max_multiplicity <= self.max_mult
            and M.q == self.q
            and M.v == self.v
            and (not self.spanning or gf.rank(M.field, M.support) == self.v)
            and is_divisible(M, self.delta)
        )


@dataclass
class SearchResult:
    status: str  # "exists" | "absent" | "inconclusive"
    witness: PointMultiset | None
    nodes: int
    seconds: float
    certificate: str = "search"

    def to_dict(self) -> dict:
        d = {"status": self.status, "nodes": self.nodes, "seconds": round(self.seconds, 3), "certificate": self.certificate}
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        return d


@dataclass
class ClassificationResult:
    spec: SearchSpec
    representatives: list[PointMultiset]
    nodes: int
    seconds: float
    status: str = "complete"  # or "inconclusive"
    labelled_solutions: int = 0

    @property
    def count(self) -> int:
        return len(self.representatives)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "q": self.spec.q,
            "v": self.spec.v,
            "delta": self.spec.delta,
            "n": self.spec.n,
            "count": self.count,
            "nodes": self.nodes,
            "seconds": round(self.seconds, 3),
            "representatives": [
                {"multiset": R.to_dict(), "line_profile": _profile_or_none(R)} for R in self.representatives
            ],
        }


def _profile_or_none(R: PointMultiset):
    if R.v == 3 and R.is_set:
        return {str(k): c for k, c in line_profile(R).items()}
    return None


class BudgetExceeded(Exception):
    pass


# --- incidence structure ---------------------------------------------------------


@dataclass
class Space:
    """Incidence tables for PG(v-1, q); hyperplanes are indexed like points."""

    field: FieldSpec
    v: int
    points: np.ndarray
    pt_hyps: np.ndarray  # (N, K): hyperplanes through each point
    hyp_pts: np.ndarray  # (N, K): points on each hyperplane
    pen_hyps: np.ndarray  # (P, q+1): hyperplanes through each codim-2 axis
    pen_axis: np.ndarray  # (P, A): points on each axis
    pt_pens: np.ndarray  # (N, B): axes through each point

    @property
    def N(self) -> int:
        return len(self.points)


@lru_cache(maxsize=16)
def space(F: FieldSpec, v: int) -> Space:
    if v < 2:
        raise ValueError("search spaces need v >= 2")
    pts = _points_array(F, v)
    N = len(pts)
    inc = gf.dot_rows(F, pts, pts) == 0  # inc[h, p]
    hyp_pts = np.array([np.flatnonzero(row) for row in inc], dtype=np.int64)
    pt_hyps = np.array([np.flatnonzero(col) for col in inc.T], dtype=np.int64)
    if v == 2:
        pen_hyps = np.arange(N, dtype=np.int64)[None, :]
        pen_axis = np.zeros((1, 0), dtype=np.int64)
        pt_pens = np.zeros((N, 0), dtype=np.int64)
    else:
        axes: dict[bytes, list[int]] = {}
        for h1 in range(N):
            for h2 in range(h1 + 1, N):
                key = (inc[h1] & inc[h2]).tobytes()
                if key not in axes:
                    axes[key] = [h1, h2]
        pen_axis_l, pen_hyps_l = [], []
        for key in axes:
            mask = np.frombuffer(key, dtype=bool)
            pen_axis_l.append(np.flatnonzero(mask))
            pen_hyps_l.append(np.flatnonzero(inc[:, mask].all(axis=1)))
        order = sorted(range(len(pen_axis_l)), key=lambda i: tuple(pen_axis_l[i]))
        pen_axis = np.array([pen_axis_l[i] for i in order], dtype=np.int64)
        pen_hyps = np.array([pen_hyps_l[i] for i in order], dtype=np.int64)
        pt_pens_l = [[] for _ in range(N)]
        for j, ax in enumerate(pen_axis):
            for p in ax:
                pt_pens_l[p].append(j)
        pt_pens = np.array(pt_pens_l, dtype=np.int64)
    return Space(F, v, pts, pt_hyps, hyp_pts, pen_hyps, pen_axis, pt_pens)


# --- the backtracking engine ------------------------------------------------------


class _Engine:
    def __init__(
        self,
        sp: Space,
        n: int,
        delta: int,
        max_mult: int,
        fixed: dict[int, int],
        allowed: np.ndarray | None,
        budget: int,
        find_all: bool,
        order: np.ndarray | None = None,
    ):
        self.sp = sp
        self.n = n
        self.delta = delta
        self.maxm = max_mult
        self.budget = budget
        self.find_all = find_all
        self.nodes = 0
        self.solutions: list[tuple[tuple[int, int], ...]] = []
        N = sp.N
        # tie-break rank of each hyperplane and point; identity unless permuted
        self.rank = np.arange(N) if order is None else np.argsort(np.asarray(order))
        self.mult = np.full(N, -1, dtype=np.int64)
        self.c = np.zeros(N, dtype=np.int64)
        self.u = np.full(N, sp.hyp_pts.shape[1], dtype=np.int64)
        self.uA = np.full(len(sp.pen_axis), sp.pen_axis.shape[1], dtype=np.int64)
        self.total = 0
        self.trail: list[int] = []
        K = sp.hyp_pts.shape[1]
        self.ways = _bounded_compositions(K, max(n, 1), max_mult)
        self.ok = True
        for p, m in fixed.items():
            self._set(p, m)
        if allowed is not None:
            for p in np.flatnonzero(~allowed):
                if self.mult[p] < 0:
                    self._set(int(p), 0)
                elif self.mult[p] > 0:
                    self.ok = False

    def _set(self, p: int, m: int):
        sp = self.sp
        self.mult[p] = m
        self.c[sp.pt_hyps[p]] += m
        self.u[sp.pt_hyps[p]] -= 1
        if sp.pt_pens.shape[1]:
            self.uA[sp.pt_pens[p]] -= 1
        self.total += m
        self.trail.append(p)

    def _undo(self, mark: int):
        sp = self.sp
        while len(self.trail) > mark:
            p = self.trail.pop()
            m = int(self.mult[p])
            self.mult[p] = -1
            self.c[sp.pt_hyps[p]] -= m
            self.u[sp.pt_hyps[p]] += 1
            if sp.pt_pens.shape[1]:
                self.uA[sp.pt_pens[p]] += 1
            self.total -= m

    def _propagate(self) -> bool:
        """Check feasibility; for sets, fix axis points forced by their pencil."""
        sp, n, D, mm = self.sp, self.n, self.delta, self.maxm
        while True:
            R = n - self.total
            if R < 0:
                return False
            r0 = (n - self.c) % D
            if np.any(r0 > np.minimum(mm * self.u, R)):
                return False
            if R > 0 and not np.any(self.u > 0):
                return False
            cH = self.c[sp.pen_hyps]
            uH = self.u[sp.pen_hyps] - self.uA[:, None]
            feas = []
            for a in range(D):
                rr = (n - cH - a) % D
                ok = (a <= mm * self.uA) & np.all(rr <= mm * uH, axis=1) & (a + rr.sum(axis=1) <= R)
                feas.append(ok)
            feas = np.array(feas)
            if not np.all(feas.any(axis=0)):
                return False
            if mm != 1 or not sp.pen_axis.shape[1]:
                return True
            # a single undecided axis point of a set: a in {0, 1}
            single = np.flatnonzero(self.uA == 1)
            if not len(single):
                return True
            f0 = feas[0, single]
            f1 = feas[1 % D, single] if D > 1 else f0
            forced = False
            for j in single[f0 != f1]:
                ax = sp.pen_axis[j]
                free = ax[self.mult[ax] < 0]
                # an earlier forcing in this pass may already have decided it
                if not len(free):
                    continue
                self._set(int(free[0]), 1 if feas[1 % D, j] else 0)
                forced = True
            if not forced:
                return True

    def run(self):
        if self.ok:
            self._node()
        return self

    def _record(self):
        m = np.where(self.mult > 0, self.mult, 0)
        nz = np.flatnonzero(m)
        self.solutions.append(tuple((int(p), int(m[p])) for p in nz))

    def _node(self) -> bool:
        """Returns True when the search should stop (a witness was found)."""
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded
        mark = len(self.trail)
        if not self._propagate():
            self._undo(mark)
            return False
        R = self.n - self.total
        if R == 0:
            self._record()
            self._undo(mark)
            return not self.find_all
        h = self._choose()
        stop = False
        for assign in self._completions(h, R):
            m2 = len(self.trail)
            for p, m in assign:
                self._set(p, m)
            stop = self._node()
            self._undo(m2)
            if stop:
                break
        self._undo(mark)
        return stop

    def _choose(self) -> int:
        sp, D = self.sp, self.delta
        R = self.n - self.total
        r0 = (self.n - self.c) % D
        cap = np.minimum(self.maxm * self.u, R)
        cnt = np.zeros(sp.N, dtype=np.float64)
        r = r0.copy()
        while True:
            live = r <= cap
            if not live.any():
                break
            cnt[live] += self.ways[self.u[live], r[live]]
            r = r + D
        cnt[self.u == 0] = np.inf
        # fewest completions, then tie-break rank
        return int(np.lexsort((self.rank, cnt))[0])

    def _completions(self, h: int, R: int):
        sp = self.sp
        pts = sp.hyp_pts[h]
        U = pts[self.mult[pts] < 0]
        U = U[np.argsort(self.rank[U], kind="stable")]
        r0 = (self.n - self.c[h]) % self.delta
        cap = min(self.maxm * len(U), R)
        for r in range(r0, cap + 1, self.delta):
            if self.maxm == 1:
                for chosen in itertools.combinations(range(len(U)), r):
                    sel = set(chosen)
                    yield [(int(U[i]), 1 if i in sel else 0) for i in range(len(U))]
            else:
                for vals in _bounded_tuples(len(U), r, self.maxm):
                    yield [(int(p), m) for p, m in zip(U, vals)]


def _bounded_compositions(K: int, n: int, maxm: int) -> np.ndarray:
    """ways[u, r]: assignments of values in [0, maxm] to u slots summing to r."""
    W = np.zeros((K + 1, n + K * maxm + 1), dtype=np.float64)
    W[0, 0] = 1
    for u in range(1, K + 1):
        for m in range(maxm + 1):
            W[u, m:] += W[u - 1, : W.shape[1] - m]
    return W


def _bounded_tuples(k: int, total: int, maxm: int):
    if k == 0:
        if total == 0:
            yield ()
        return
    for m in range(min(maxm, total), -1, -1):
        if total - m <= (k - 1) * maxm:
            for rest in _bounded_tuples(k - 1, total - m, maxm):
                yield (m,) + rest


# --- symmetry-broken drivers ------------------------------------------------------


def _unit(v: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(v))


def _branches(F: FieldSpec, r: int):
    """(forced points, allowed mask) pairs covering spanning solutions in PG(r-1,q) up to PGL."""
    idx = point_index(F, r)
    pts = _points_array(F, r)
    basis = [idx[_unit(r, i)] for i in range(r)]
    allnz = np.all(pts != 0, axis=1)
    yield basis + [idx[(1,) * r]], None
    yield basis, ~allnz


def _mult_choices(k: int, maxm: int, n: int):
    for vals in itertools.product(range(1, maxm + 1), repeat=k):
        if sum(vals) <= n:
            yield vals


def _run_tasks(tasks, threads: int):
    if threads <= 1 or len(tasks) <= 1:
        return [_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(_task, tasks))


def _task(t):
    (F, v, n, delta, maxm, fixed, allowed, budget, find_all, order) = t
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))
    eng = _Engine(space(F, v), n, delta, maxm, fixed, allowed, budget, find_all, order)
    try:
        eng.run()
    except BudgetExceeded:
        return None, eng.nodes
    return eng.solutions, eng.nodes


def _split_root(F, v, n, delta, maxm, fixed, allowed, budget, find_all, order):
    """Expand the root one level so that branches can run in parallel."""
    eng = _Engine(space(F, v), n, delta, maxm, fixed, allowed, budget, find_all, order)
    if not eng.ok or not eng._propagate():
        return [], 1
    if n - eng.total == 0:
        eng._record()
        return [("done", eng.solutions)], 1
    h = eng._choose()
    base = {int(p): int(eng.mult[p]) for p in np.flatnonzero(eng.mult >= 0)}
    out = []
    for assign in eng._completions(h, n - eng.total):
        fx = dict(base)
        fx.update(assign)
        out.append((F, v, n, delta, maxm, fx, None, budget, find_all, order))
    return out, 1


def _search(F, v, n, delta, maxm, fixed, allowed, budget, find_all, threads=1, order=None):
    """All (or one) solutions as tuples of (point index, multiplicity); None on budget."""
    if threads > 1:
        tasks, nodes = _split_root(F, v, n, delta, maxm, fixed, allowed, budget, find_all, order)
        sols = []
        if tasks and tasks[0][0] == "done":
            return tasks[0][1], nodes
        for res, k in _run_tasks(tasks, threads):
            nodes += k
            if res is None:
                return None, nodes
            sols.extend(res)
            if sols and not find_all:
                break
        return sorted(set(sols)), nodes
    res, nodes = _task((F, v, n, delta, maxm, fixed, allowed, budget, find_all, order))
    return res, nodes


def _to_multiset(F, v, sol) -> PointMultiset:
    pts = _points_array(F, v)
    return PointMultiset(F, v, [(tuple(int(x) for x in pts[p]), m) for p, m in sol])


def exists_divisible_set(
    spec: SearchSpec,
    node_budget: int | None = None,
    use_bounds: bool = True,
    threads: int = 1,
) -> SearchResult:
    """Find a witness or certify absence by full traversal.

    With ``use_bounds`` the numeric characterization, the q+1 lower bound for
    2-divisible sets (q even) and the Ball bound cut the search where their
    hypotheses hold; the certificate field names whichever answered.  A budget
    overrun is reported as "inconclusive", never as absence.
    """
    t0 = time.perf_counter()
    budget = default_budget() if node_budget is None else node_budget
    F = gf.GF(spec.q)
    n, D, mm = spec.n, spec.delta, spec.max_mult

    def done(status, witness=None, nodes=0, cert="search"):
        return SearchResult(status, witness, nodes, time.perf_counter() - t0, cert)

    if n == 0:
        if spec.spanning:
            return done("absent", cert="trivial")
        return done("exists", PointMultiset(F, spec.v))
    if use_bounds:
        cut = _bound_cutoff(spec)
        if cut:
            return done("absent", cert=cut)
    ranks = [spec.v] if spec.spanning else range(1, spec.v + 1)
    nodes = 0
    for r in ranks:
        if r == 1:
            nodes += 1
            if n <= mm and n % D == 0:
                W = PointMultiset(F, 1, {(1,): n})
                return done("exists", embed(W, spec.v), nodes)
            continue
        for forced, allowed in _branches(F, r):
            for mults in _mult_choices(len(forced), mm, n):
                fixed = dict(zip(forced, mults))
                sols, k = _search(F, r, n, D, mm, fixed, allowed, budget - nodes, False, threads)
                nodes += k
                if sols is None:
                    return done("inconclusive", nodes=nodes)
                if sols:
                    W = embed(_to_multiset(F, r, sols[0]), spec.v)
                    assert spec.accepts(W) or (not spec.spanning and is_divisible(W, D))
                    return done("exists", W, nodes)
    return done("absent", nodes=nodes)


def _bound_cutoff(spec: SearchSpec) -> str | None:
    F_p, _ = gf.prime_power(spec.q)
    n, D, q = spec.n, spec.delta, spec.q
    if not feasible_general(n, q, D):
        return "expansion"
    if not spec.projective:
        return None
    if D == 2 and q % 2 == 0 and 0 < n < q + 1:
        return "q+1 bound"
    if 1 < D < q and q % D == 0 and n % D == 0 and 0 < n < ball_bound(D, q, F_p):
        return "ball bound"
    return None


# --- group action in PG(2, q) -----------------------------------------------------


def _frobenius_rows(F: FieldSpec, pts: np.ndarray, j: int) -> np.ndarray:
    return F.frobenius(pts, j).astype(np.int64) if j else pts


def _keys_from_rows(F: FieldSpec, v: int, rows: np.ndarray, mults: np.ndarray) -> tuple:
    rows = gf.normalize_rows(F, rows)
    q = F.q
    codes = rows @ (q ** np.arange(v - 1, -1, -1, dtype=np.int64))
    idx = _code_to_index(F, v)[codes]
    order = np.argsort(idx)
    return tuple(zip(idx[order].tolist(), mults[order].tolist()))


@lru_cache(maxsize=16)
def _code_to_index(F: FieldSpec, v: int) -> np.ndarray:
    pts = _points_array(F, v)
    q = F.q
    codes = pts @ (q ** np.arange(v - 1, -1, -1, dtype=np.int64))
    table = np.full(q**v, -1, dtype=np.int64)
    table[codes] = np.arange(len(pts))
    return table


def frame_images(M: PointMultiset) -> set[tuple]:
    """Keys of all images g(M), g in PGammaL(v, q), that contain the standard frame.

    A frame is v+1 points any v of which are independent; PGL maps ordered
    frames to ordered frames sharply transitively and the field automorphisms
    fix the standard frame, so this is the full set of such images.
    """
    F, v = M.field, M.v
    pts0, w = M.arrays()
    out: set[tuple] = set()
    npts = len(pts0)
    if npts < v + 1:
        return out
    perms = np.array(list(itertools.permutations(range(v))), dtype=np.int64)
    codes_w = F.q ** np.arange(v - 1, -1, -1, dtype=np.int64)
    to_index = _code_to_index(F, v)
    for j in range(F.e):
        pts = _frobenius_rows(F, pts0, j)
        for basis in itertools.combinations(range(npts), v):
            try:
                Binv = np.array(gf.mat_inv(F, pts[list(basis)].T.tolist()), dtype=np.int64)
            except gf.FieldError:
                continue
            Y = gf.mat_apply(F, Binv, pts)  # coordinates in the basis, (npts, v)
            last = np.flatnonzero(np.all(Y != 0, axis=1))
            if not len(last):
                continue
            # every ordering of the basis and every choice of unit point at once
            lam_inv = F.inv_table[Y[last]].astype(np.int64)  # (L, v)
            Yp = Y[:, perms].transpose(1, 0, 2)  # (P, npts, v)
            Lp = lam_inv[:, perms].transpose(1, 0, 2)  # (P, L, v)
            rows = F.mul[Yp[:, None, :, :], Lp[:, :, None, :]].astype(np.int64)  # (P, L, npts, v)
            rows = gf.normalize_rows(F, rows.reshape(-1, v)).reshape(-1, npts, v)
            idx = to_index[rows @ codes_w]  # (P*L, npts)
            order = np.argsort(idx, axis=1)
            idx = np.take_along_axis(idx, order, axis=1)
            mm = w[order]
            for a, b in zip(idx.tolist(), mm.tolist()):
                out.add(tuple(zip(a, b)))
    return out


def has_frame(M: PointMultiset) -> bool:
    F, v = M.field, M.v
    pts, _ = M.arrays()
    for basis in itertools.combinations(range(len(pts)), v):
        if gf.rank(F, pts[list(basis)].tolist()) < v:
            continue
        Binv = np.array(gf.mat_inv(F, pts[list(basis)].T.tolist()), dtype=np.int64)
        if np.any(np.all(gf.mat_apply(F, Binv, pts) != 0, axis=1)):
            return True
    return False


def canonical_form(M: PointMultiset) -> tuple:
    """A complete invariant of M under PGammaL(3, q) (v <= 3).

    Sets containing a frame use the minimum over frame images; the rest lie
    on a line plus at most one point and are handled through the action of
    PGammaL(2, q) on that line.
    """
    if M.v > 3:
        raise NotImplementedError("canonical forms are implemented for v <= 3")
    F = M.field
    if not M.mults:
        return ("empty",)
    rk = gf.rank(F, M.support)
    if rk == 1:
        return ("point", M.max_multiplicity)
    if M.v == 3 and rk == 3:
        imgs = frame_images(M)
        if imgs:
            return ("frame", min(imgs))
        return _frame_free_key(M)
    # collinear: coordinatize the line
    from .geometry import Subspace

    S = Subspace.span(F, M.support)
    L = PointMultiset(F, 2, [(S.coordinates(p), m) for p, m in M.items()])
    return ("collinear", _line_key(L))


def _line_key(L: PointMultiset) -> tuple:
    """Canonical key of a multiset on PG(1, q) under PGammaL(2, q)."""
    F = L.field
    pts, w = L.arrays()
    if len(pts) <= 2:
        return ("few",) + tuple(sorted(w.tolist()))
    if len(pts) == F.q + 1 and len(set(w.tolist())) == 1:
        return ("full", int(w[0]))
    best = None
    for j in range(F.e):
        P = _frobenius_rows(F, pts, j)
        for a, b, c in itertools.permutations(range(len(P)), 3):
            # map P_a -> (0:1), P_b -> (1:0), P_c -> (1:1)
            B = np.array([P[b], P[a]]).T
            Binv = np.array(gf.mat_inv(F, B.tolist()), dtype=np.int64)
            Y = gf.mat_apply(F, Binv, P)
            lam_inv = F.inv_table[Y[c]].astype(np.int64)
            rows = F.mul[Y, lam_inv[None, :]].astype(np.int64)
            key = _keys_from_rows(F, 2, rows, w)
            if best is None or key < best:
                best = key
    return ("line", best)


def _frame_free_key(M: PointMultiset) -> tuple:
    """Spanning support without a frame: a collinear part T plus one point P."""
    F = M.field
    supp = M.support
    # find the line holding all but one support point
    for P in supp:
        rest = [x for x in supp if x != P]
        if gf.rank(F, rest) == 2:
            if len(rest) == 2:
                return ("triangle",) + tuple(sorted(M.mults.values()))
            from .geometry import Subspace

            S = Subspace.span(F, rest)
            L = PointMultiset(F, 2, [(S.coordinates(x), M[x]) for x in rest])
            return ("line+point", M[P], _line_key(L))
    raise AssertionError("support has no frame but is not a line plus a point")


def are_equivalent(M1: PointMultiset, M2: PointMultiset) -> bool:
    if M1.field != M2.field or M1.v != M2.v:
        return False
    if M1.cardinality != M2.cardinality or fingerprint(M1) != fingerprint(M2):
        return False
    return canonical_form(M1) == canonical_form(M2)


def fingerprint(M: PointMultiset) -> tuple:
    """Cheap invariant: hyperplane multiplicity profile plus per-point pencils."""
    mh = hyperplane_multiplicities(M) if M.v >= 2 else np.zeros(0, dtype=np.int64)
    if M.v < 2:
        return (M.cardinality,)
    sp = space(M.field, M.v)
    idx = point_index(M.field, M.v)
    per_point = sorted(
        (m, tuple(sorted(mh[sp.pt_hyps[idx[p]]].tolist()))) for p, m in M.items()
    )
    return (tuple(sorted(mh.tolist())), tuple(per_point))


# --- classification ---------------------------------------------------------------


def classify(
    spec: SearchSpec,
    node_budget: int | None = None,
    threads: int = 1,
    order: Sequence[int] | None = None,
) -> ClassificationResult:
    """Orbit representatives of Delta-divisible sets in PG(2, q) under PGammaL(3, q).

    ``order`` permutes the tie-break order of points and hyperplanes in the
    search; counts and canonical representatives do not depend on it.
    """
    if spec.v != 3:
        raise NotImplementedError("classification is implemented for v = 3")
    t0 = time.perf_counter()
    budget = default_budget() if node_budget is None else node_budget
    F = gf.GF(spec.q)
    v, n, D, mm = 3, spec.n, spec.delta, spec.max_mult
    order_arr = None if order is None else np.asarray(order)
    idx = point_index(F, v)
    nodes = 0
    keyed: list[tuple[tuple, PointMultiset]] = []
    labelled = 0

    def finish(status):
        keyed.sort(key=lambda kr: kr[0])
        reps = [R for _, R in keyed]
        return ClassificationResult(spec, reps, nodes, time.perf_counter() - t0, status, labelled)

    if n == 0:
        if not spec.spanning:
            keyed.append((("empty",), PointMultiset(F, v)))
        return finish("complete")

    # 1) supports containing a frame: force the standard frame
    frame = [idx[_unit(3, 0)], idx[_unit(3, 1)], idx[_unit(3, 2)], idx[(1, 1, 1)]]
    found: set[tuple] = set()
    for mults in _mult_choices(4, mm, n):
        sols, k = _search(F, v, n, D, mm, dict(zip(frame, mults)), None, budget - nodes, True, threads, order_arr)
        nodes += k
        if sols is None:
            return finish("inconclusive")
        found.update(sols)
    labelled += len(found)
    while found:
        images = frame_images(_to_multiset(F, v, min(found)))
        if not images <= found:
            # every image contains the standard frame and is itself a solution
            raise RuntimeError("search missed solutions: an orbit image was not found")
        found -= images
        best = min(images)
        keyed.append((("frame", best), _to_multiset(F, v, best)))

    # 2) frame-free supports: inside a line plus one point
    pts = _points_array(F, v)
    line_pt = np.array([p[2] == 0 or tuple(p) == (0, 0, 1) for p in pts.tolist()])
    sols, k = _search(F, v, n, D, mm, {}, line_pt, budget - nodes, True, 1, order_arr)
    nodes += k
    if sols is None:
        return finish("inconclusive")
    labelled += len(sols)
    seen = set()
    for s in sols:
        M = _to_multiset(F, v, s)
        if spec.spanning and gf.rank(F, M.support) < 3:
            continue
        key = canonical_form(M)
        if key[0] != "frame" and key not in seen:
            seen.add(key)
            keyed.append((key, M))
    return finish("complete")


def _baer_key(q: int):
    p, e = gf.prime_power(q)
    if e % 2:
        return None
    return canonical_form(baer_construction(3, p, e, e // 2))


PREDICATES: dict[str, Callable[[PointMultiset], bool]] = {
    "line": is_line,
    "hyperoval": is_hyperoval,
    "km_arc": lambda S: S.cardinality > S.q and is_km_arc(S, S.cardinality - S.q),
    "baer": lambda S: _baer_key(S.q) is not None and canonical_form(S) == _baer_key(S.q),
}


def uniqueness_check(spec: SearchSpec, prop, **kwargs) -> bool:
    """True iff every class found satisfies the structural predicate ``prop``.

    ``prop`` is a name from PREDICATES or a callable on representatives.
    """
    pred = PREDICATES[prop] if isinstance(prop, str) else prop
    res = classify(spec, **kwargs)
    if res.status != "complete":
        raise BudgetExceeded("classification did not finish")
    return all(pred(R) for R in res.representatives)
