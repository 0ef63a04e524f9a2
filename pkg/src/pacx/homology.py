"""Boundary matrices and Betti numbers over prime fields.

The sparse route (kernel-backed column elimination) is the production path;
a dense row-reduction oracle with no shared elimination code provides the
independent cross-check.  Deterministic per-realization inequalities from
discrete Morse theory and the link decomposition are implemented against
generated multigraphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .complexes import (SimpleGraph, SimplicialComplex, build_clique_complex,
                        clique_complex_on_subset, collapse,
                        is_octahedral_complex, link)
from .pagraph import MultiGraph

__all__ = [
    "FieldSpec",
    "BoundaryMatrix",
    "BettiVector",
    "boundary_matrices",
    "betti",
    "betti_dense_oracle",
    "betti_multi_field",
    "relative_betti",
    "b_ik_indicator",
    "euler_check",
    "EulerCheck",
    "morse_bounds_beta1",
    "MorseBounds",
    "link_betti_sum",
    "LinkBettiSum",
    "check_link_bound",
    "n_components",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Prime field GF(p); arithmetic is modulo p."""

    p: int = 2

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"field characteristic must be prime, got {self.p}")


GF2 = FieldSpec(2)


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse column-major signed boundary operator at dimension q.

    Rows index (q-1)-simplices, columns q-simplices, both in lexicographic
    order; the column of {x_0 < ... < x_q} holds (-1)^i mod p on the face
    omitting x_i.
    """

    q: int
    n_rows: int
    n_cols: int
    indptr: np.ndarray
    rows: np.ndarray
    vals: np.ndarray
    p: int

    def column(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[j], self.indptr[j + 1]
        return self.rows[lo:hi], self.vals[lo:hi]

    def rank(self) -> int:
        return int(kernels.rank_csc(self.indptr, self.rows, self.vals,
                                    self.n_rows, self.p))

    def compose_with(self, other: "BoundaryMatrix") -> bool:
        """True iff self @ other == 0 over GF(p), i.e. boundary-of-boundary
        vanishes (``other`` must be the operator one dimension up)."""
        if other.q != self.q + 1 or other.n_rows != self.n_cols:
            raise ValueError("dimension mismatch in boundary composition")
        p = self.p
        for j in range(other.n_cols):
            acc: dict[int, int] = {}
            crows, cvals = other.column(j)
            for r, v in zip(crows, cvals):
                irows, ivals = self.column(int(r))
                for rr, vv in zip(irows, ivals):
                    acc[int(rr)] = (acc.get(int(rr), 0) + int(v) * int(vv)) % p
            if any(x % p for x in acc.values()):
                return False
        return True


def boundary_matrices(c: SimplicialComplex, field: FieldSpec = GF2
                      ) -> list[BoundaryMatrix]:
    """Operators for q = 1..dim(c); raises on a downward-closure violation."""
    out = []
    for q in range(1, c.dim + 1):
        indptr, rows, vals = kernels.boundary_csc(c.dims[q], c.dims[q - 1],
                                                  field.p)
        out.append(BoundaryMatrix(q, c.dims[q - 1].shape[0],
                                  c.dims[q].shape[0], indptr, rows, vals,
                                  field.p))
    return out


@dataclass(frozen=True)
class BettiVector:
    """Betti numbers with their provenance: f-vector and boundary ranks.

    ``exact[q]`` is False when the complex was capped at dimension q, making
    beta_q only an upper bound (the missing rank of the next boundary).
    """

    field: int
    f_vector: tuple[int, ...]
    ranks: tuple[int, ...]          # rank of boundary_q for q = 1..len
    betti: tuple[int, ...]
    exact: tuple[bool, ...]

    def __getitem__(self, q: int) -> int:
        return self.betti[q]

    def to_json(self) -> str:
        return json.dumps({"field": self.field, "f_vector": list(self.f_vector),
                           "ranks": list(self.ranks), "betti": list(self.betti),
                           "exact_flags": list(self.exact)})

    @classmethod
    def from_json(cls, s: str) -> "BettiVector":
        d = json.loads(s)
        return cls(d["field"], tuple(d["f_vector"]), tuple(d["ranks"]),
                   tuple(d["betti"]), tuple(bool(x) for x in d["exact_flags"]))


def betti(c: SimplicialComplex, field: FieldSpec = GF2,
          q_max: int | None = None) -> BettiVector:
    """Betti numbers beta_0..beta_qmax as f_q - rank d_q - rank d_{q+1}.

    Ranks come from sparse elimination over GF(p).  beta_q is exact whenever
    the complex carries all (q+1)-simplices; a cap at dimension q leaves
    beta_q an upper bound, flagged in ``exact``.
    """
    top = c.dim
    if q_max is None:
        q_max = max(c.top_dim, 0)
    f = c.f_vector()
    ranks = [bm.rank() for bm in boundary_matrices(c, field)[:q_max + 1]]
    out, exact = [], []
    for q in range(q_max + 1):
        fq = f[q] if q <= top else 0
        rq = ranks[q - 1] if 1 <= q <= len(ranks) else 0
        rq1 = ranks[q] if q + 1 <= len(ranks) else 0
        out.append(fq - rq - rq1)
        exact.append(q < top or c.complete)
    return BettiVector(field.p, f, tuple(ranks), tuple(out), tuple(exact))


def _dense_rank_mod_p(mat: np.ndarray, p: int) -> int:
    """Row-echelon rank over GF(p); independent of the sparse elimination."""
    a = np.array(mat, dtype=np.int64) % p
    n_rows, n_cols = a.shape
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        a[row] = (a[row] * pow(int(a[row, col]), p - 2, p)) % p
        mask = a[:, col] != 0
        mask[row] = False
        if mask.any():
            a[mask] = (a[mask] - np.outer(a[mask, col], a[row])) % p
        row += 1
    return row


def betti_dense_oracle(c: SimplicialComplex, field: FieldSpec = GF2,
                       cap: int = 5000) -> BettiVector:
    """Same contract as :func:`betti`, by dense row reduction.

    Builds its own dense boundary matrices and reduces them with plain
    Gaussian elimination; the computation shares no elimination code with
    the sparse path.  Refuses complexes with more than ``cap`` simplices.
    """
    if c.n_simplices > cap:
        raise ValueError(f"dense oracle refuses {c.n_simplices} simplices "
                         f"(cap {cap})")
    p = field.p
    f = c.f_vector()
    ranks = []
    for q in range(1, c.dim + 1):
        faces = {s: i for i, s in enumerate(c.simplices(q - 1))}
        mat = np.zeros((f[q - 1], f[q]), dtype=np.int64)
        for j, s in enumerate(c.simplices(q)):
            for i in range(q + 1):
                mat[faces[s[:i] + s[i + 1:]], j] = (-1) ** i % p
        ranks.append(_dense_rank_mod_p(mat, p))
    out, exact = [], []
    for q in range(max(c.top_dim, 0) + 1):
        fq = f[q] if q <= c.dim else 0
        rq = ranks[q - 1] if 1 <= q <= len(ranks) else 0
        rq1 = ranks[q] if q + 1 <= len(ranks) else 0
        out.append(fq - rq - rq1)
        exact.append(q < c.dim or c.complete)
    return BettiVector(p, f, tuple(ranks), tuple(out), tuple(exact))


def betti_multi_field(c: SimplicialComplex, q_max: int | None = None,
                      ps: tuple[int, ...] = (2, 3, 5)
                      ) -> tuple[dict[int, BettiVector], bool]:
    """Betti vectors over several primes and whether they all agree.

    Disagreement signals torsion at the tested dimensions; callers must
    surface it rather than picking a field silently.
    """
    results = {p: betti(c, FieldSpec(p), q_max) for p in ps}
    first = next(iter(results.values())).betti
    agree = all(r.betti == first for r in results.values())
    return results, agree


def relative_betti(c: SimplicialComplex, s: SimplicialComplex,
                   field: FieldSpec, q: int) -> int:
    """Betti number of the quotient chain complex C(c)/C(s) at dimension q.

    Realized by dropping the rows and columns of simplices lying in s from
    the boundary operators.  ``s`` must be a subcomplex of ``c``.
    """
    if q < 0:
        raise ValueError("q must be >= 0")
    if not c.has_subcomplex(s):
        raise ValueError("s is not a subcomplex of c")
    p = field.p

    def kept(d: int) -> dict:
        in_s = s.index_map(d)
        return {simplex: i for i, simplex in
                enumerate(t for t in c.simplices(d) if t not in in_s)}

    kept_q = kept(q)
    if not kept_q:
        return 0

    def restricted_rank(cols_from: dict, rows_to: dict, d: int) -> int:
        indptr = [0]
        rows: list[int] = []
        vals: list[int] = []
        for simplex in cols_from:
            entries = []
            for i in range(d + 1):
                face = simplex[:i] + simplex[i + 1:]
                r = rows_to.get(face)
                if r is not None:
                    entries.append((r, (-1) ** i % p))
            entries.sort()
            rows.extend(e[0] for e in entries)
            vals.extend(e[1] for e in entries)
            indptr.append(len(rows))
        return int(kernels.rank_csc(np.array(indptr, dtype=np.int64),
                                    np.array(rows, dtype=np.int64),
                                    np.array(vals, dtype=np.int64),
                                    len(rows_to), p))

    rank_q = restricted_rank(kept_q, kept(q - 1), q) if q >= 1 else 0
    rank_q1 = restricted_rank(kept(q + 1), kept_q, q + 1) if q + 1 <= c.dim else 0
    return len(kept_q) - rank_q - rank_q1


def b_ik_indicator(complex_at_t: SimplicialComplex, s_complex: SimplicialComplex,
                   s: int, t: int, q: int, field: FieldSpec = GF2) -> int:
    """Indicator that an attached octahedral sphere fails to die in the link.

    Evaluates to 1 iff (a) ``s_complex`` is an octahedral sphere of dimension
    q-1 whose nodes are all adjacent to both s and t in ``complex_at_t``, and
    (b) the relative Betti number beta_q(L, s_complex) of the link L of t is
    positive.  Node order must satisfy max(s_complex) < s < t.
    """
    nodes = [int(v) for v in s_complex.vertices()]
    if not nodes or not (max(nodes) < s < t):
        raise ValueError("need all nodes of the sphere < s < t")
    if not is_octahedral_complex(s_complex, q):
        return 0
    edge_map = complex_at_t.index_map(1)
    for v in nodes:
        if tuple(sorted((v, s))) not in edge_map:
            return 0
        if tuple(sorted((v, t))) not in edge_map:
            return 0
    if complex_at_t.graph is not None:
        nbrs = [u for u in complex_at_t.graph.adj[t] if u < t]
        lk = clique_complex_on_subset(complex_at_t.graph, nbrs, dim_cap=q + 1)
    else:
        lk = link(complex_at_t, t)
    return 1 if relative_betti(lk, s_complex, field, q) > 0 else 0


@dataclass(frozen=True)
class EulerCheck:
    ok: bool
    chi_f: int
    chi_betti: int


def euler_check(c: SimplicialComplex, field: FieldSpec = GF2) -> EulerCheck:
    """Alternating f-sum against alternating Betti sum; exact equality.

    Only valid on fully built complexes, so capped ones are refused.
    """
    if not c.complete:
        raise ValueError("euler_check needs the full complex; this one was "
                         "capped during enumeration")
    f = c.f_vector()
    b = betti(c, field)
    chi_f = sum((-1) ** q * fq for q, fq in enumerate(f))
    chi_b = sum((-1) ** q * bq for q, bq in enumerate(b.betti))
    return EulerCheck(chi_f == chi_b, chi_f, chi_b)


@dataclass(frozen=True)
class MorseBounds:
    """Per-realization bracket on beta_1 of the clique complex.

    ``lower``/``upper`` bound beta_1 via |E| - |V| corrected by labeled
    triangles F (multiplicity products) and parallel-edge pairs B.
    """

    lower: int
    upper: int
    beta1: int
    holds: bool
    n_vertices: int
    n_edges: int
    triangles: int
    biangles: int


def morse_bounds_beta1(g: MultiGraph, field: FieldSpec = GF2) -> MorseBounds:
    """Check -(F + B) <= beta_1 - (|E| - |V|) <= 1 for one realization.

    F counts triangles with edge multiplicity (one per choice of parallel
    edges); B counts unordered parallel-edge pairs, i.e. C(mult, 2) per
    multi-edge node pair.
    """
    V = g.T
    E = g.n_edges
    mult = g.pair_multiplicities()
    B = sum(c * (c - 1) // 2 for c in mult.values())
    simple = collapse(g)
    cx = build_clique_complex(simple, dim_cap=2)
    F = 0
    if cx.dim >= 2:
        for (a, b, c) in cx.simplices(2):
            F += mult[(a, b)] * mult[(a, c)] * mult[(b, c)]
    beta1 = betti(cx, field, q_max=1).betti[1]
    lo = (E - V) - (F + B)
    hi = (E - V) + 1
    return MorseBounds(lo, hi, beta1, lo <= beta1 <= hi, V, E, F, B)


@dataclass(frozen=True)
class LinkBettiSum:
    q: int
    total: int
    per_t: tuple[int, ...]


def link_betti_sum(g: MultiGraph, q: int, field: FieldSpec = GF2
                   ) -> LinkBettiSum:
    """Sum over nodes t of beta_{q-1} of the link of t among nodes < t.

    The link of t is the clique complex on t's distinct targets with the
    adjacency they already have; summed, these bound beta_q of the whole
    complex from above (checked by :func:`check_link_bound`).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    simple = collapse(g)
    per_t = [0, 0]  # nodes 0 (unused) and 1 have empty links
    for t in range(2, g.T + 1):
        nbrs = sorted(set(int(v) for v in g.targets[t - 2]))
        lk = clique_complex_on_subset(simple, nbrs, dim_cap=q)
        if lk.dim < q - 1:
            per_t.append(0)
            continue
        per_t.append(betti(lk, field, q_max=q - 1).betti[q - 1])
    return LinkBettiSum(q, sum(per_t), tuple(per_t[1:]))


def check_link_bound(g: MultiGraph, q: int, field: FieldSpec = GF2
                     ) -> tuple[int, int, bool]:
    """(beta_q(X), link bound, beta_q <= bound) for one realization."""
    simple = collapse(g)
    cx = build_clique_complex(simple, dim_cap=q + 1)
    bq = betti(cx, field, q_max=q).betti[q]
    bound = link_betti_sum(g, q, field).total
    return bq, bound, bq <= bound


def n_components(g: SimpleGraph) -> int:
    """Connected components by union-find (for the beta_0 cross-check)."""
    parent = list(range(g.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(i) for i in range(1, g.n + 1)})
