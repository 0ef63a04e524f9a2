"""Simple graphs, clique complexes, octahedral spheres, and the
common-neighbor criterion for homotopy-connectedness."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .errors import BudgetError
from .pagraph import MultiGraph
from .rng import derive_rng

__all__ = [
    "SimpleGraph",
    "SimplicialComplex",
    "collapse",
    "build_clique_complex",
    "clique_complex_on_subset",
    "link",
    "octahedral_graph",
    "octahedral_sphere",
    "find_induced_sphere",
    "is_octahedral_set",
    "is_octahedral_complex",
    "common_neighbors",
    "barmak_check",
    "BarmakVerdict",
    "complete_graph",
    "cycle_graph",
    "write_complex",
    "read_complex",
]

DEFAULT_CLIQUE_BUDGET = 20_000_000


class SimpleGraph:
    """Undirected simple graph on nodes 1..n with adjacency sets.

    ``biangle_count`` is the number of node pairs that were joined by two or
    more parallel edges in the source multigraph (0 for fixture graphs).
    """

    __slots__ = ("n", "adj", "biangle_count", "_csr")

    def __init__(self, n: int, edges, biangle_count: int = 0):
        self.n = int(n)
        adj = [set() for _ in range(self.n + 1)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u},{v}) out of range 1..{self.n}")
            adj[u].add(v)
            adj[v].add(u)
        self.adj = adj
        self.biangle_count = int(biangle_count)
        self._csr = None

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self):
        for u in range(1, self.n + 1):
            for v in self.adj[u]:
                if v > u:
                    yield (u, v)

    def higher_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR of higher-numbered neighbors over 0-based vertices."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            chunks = []
            for u in range(1, self.n + 1):
                hi = sorted(v - 1 for v in self.adj[u] if v > u)
                chunks.append(hi)
                indptr[u] = indptr[u - 1] + len(hi)
            indices = np.fromiter((x for c in chunks for x in c), dtype=np.int64,
                                  count=int(indptr[-1]))
            self._csr = (indptr, indices)
        return self._csr


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return SimpleGraph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def octahedral_graph(q: int) -> SimpleGraph:
    """Cross-polytope skeleton: nodes 1..2q, i ~ j iff i - j is nonzero mod q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    edges = [(i, j) for i in range(1, 2 * q + 1) for j in range(i + 1, 2 * q + 1)
             if (i - j) % q != 0]
    return SimpleGraph(2 * q, edges)


def collapse(g: MultiGraph) -> SimpleGraph:
    """Replace repeated edges by single edges; count multi-edge pairs."""
    mult = g.pair_multiplicities()
    biangles = sum(1 for c in mult.values() if c >= 2)
    return SimpleGraph(g.T, mult.keys(), biangle_count=biangles)


class SimplicialComplex:
    """Simplices grouped by dimension, vertices totally ordered by index.

    ``dims[d]`` is an int32 array of shape (f_d, d+1); each row is strictly
    increasing and rows are in lexicographic order.  ``complete`` is False
    when the complex was enumerated under a dimension cap that may have
    truncated higher simplices.
    """

    __slots__ = ("dims", "complete", "graph", "_index_maps")

    def __init__(self, dims: list[np.ndarray], complete: bool = True,
                 graph: SimpleGraph | None = None, presorted: bool = False):
        self.dims = []
        for d, arr in enumerate(dims):
            a = np.asarray(arr, dtype=np.int32).reshape(-1, d + 1)
            if a.shape[0] and not presorted:
                order = np.lexsort(a.T[::-1])
                a = a[order]
            if a.shape[0] and (np.diff(a, axis=1) <= 0).any():
                raise ValueError(f"dimension-{d} rows must be strictly increasing")
            a.flags.writeable = False
            self.dims.append(a)
        self.complete = bool(complete)
        self.graph = graph
        self._index_maps: list[dict | None] = [None] * len(self.dims)

    @classmethod
    def from_simplices(cls, simplices, close: bool = True,
                       complete: bool = True) -> "SimplicialComplex":
        """Build from an iterable of vertex tuples, optionally adding all faces."""
        by_dim: list[set] = []
        stack = [tuple(sorted(set(map(int, s)))) for s in simplices]
        for s in stack:
            if len(s) == 0:
                raise ValueError("empty simplex")
        seen = set(stack)
        while stack:
            s = stack.pop()
            d = len(s) - 1
            while len(by_dim) <= d:
                by_dim.append(set())
            by_dim[d].add(s)
            if close and d > 0:
                for face in combinations(s, d):
                    if face not in seen:
                        seen.add(face)
                        stack.append(face)
        dims = [np.array(sorted(by_dim[d]), dtype=np.int32).reshape(-1, d + 1)
                for d in range(len(by_dim))]
        return cls(dims, complete=complete, presorted=True)

    @property
    def dim(self) -> int:
        return len(self.dims) - 1

    @property
    def top_dim(self) -> int:
        """Largest dimension that actually has simplices (-1 when empty)."""
        for d in range(len(self.dims) - 1, -1, -1):
            if self.dims[d].shape[0]:
                return d
        return -1

    def f_vector(self) -> tuple[int, ...]:
        return tuple(a.shape[0] for a in self.dims)

    @property
    def n_simplices(self) -> int:
        return sum(a.shape[0] for a in self.dims)

    def vertices(self) -> np.ndarray:
        return self.dims[0][:, 0] if self.dims else np.empty(0, dtype=np.int32)

    def simplices(self, d: int):
        """Tuples of dimension d, in lexicographic order."""
        if d < 0 or d > self.dim:
            return []
        return [tuple(int(x) for x in row) for row in self.dims[d]]

    def index_map(self, d: int) -> dict:
        if d < 0 or d > self.dim:
            return {}
        if self._index_maps[d] is None:
            self._index_maps[d] = {tuple(int(x) for x in row): i
                                   for i, row in enumerate(self.dims[d])}
        return self._index_maps[d]

    def contains(self, simplex) -> bool:
        s = tuple(sorted(map(int, simplex)))
        d = len(s) - 1
        return d <= self.dim and s in self.index_map(d)

    def has_subcomplex(self, other: "SimplicialComplex") -> bool:
        if other.dim > self.dim:
            return False
        for d in range(other.dim + 1):
            idx = self.index_map(d)
            if any(s not in idx for s in other.simplices(d)):
                return False
        return True

    def trimmed(self) -> "SimplicialComplex":
        """Copy without trailing empty dimensions (f-vector cut at the top
        nonempty dimension)."""
        dims = list(self.dims)
        while dims and dims[-1].shape[0] == 0:
            dims.pop()
        out = SimplicialComplex(dims, complete=self.complete, graph=self.graph,
                                presorted=True)
        return out

    def check_closure(self) -> None:
        """Raise if some face of a stored simplex is missing."""
        for d in range(1, self.dim + 1):
            below = self.index_map(d - 1)
            for s in self.simplices(d):
                for i in range(d + 1):
                    if s[:i] + s[i + 1:] not in below:
                        raise ValueError(f"missing face {s[:i] + s[i + 1:]} "
                                         f"of simplex {s}")

    def __repr__(self):
        return (f"SimplicialComplex(f={self.f_vector()}, "
                f"complete={self.complete})")


def build_clique_complex(g: SimpleGraph, dim_cap: int,
                         budget: int = DEFAULT_CLIQUE_BUDGET) -> SimplicialComplex:
    """Enumerate all cliques of size <= dim_cap + 1 by ordered extension.

    Each clique is extended only by higher-indexed common neighbors, so each
    is emitted exactly once.  Raises BudgetError past ``budget`` cliques.
    """
    if dim_cap < 1:
        raise ValueError("dim_cap must be >= 1")
    indptr, indices = g.higher_csr()
    arrays = kernels.enumerate_cliques(indptr, indices, g.n, dim_cap + 1, budget)
    dims = [a + 1 for a in arrays]  # back to 1-based labels
    top = max((d for d, a in enumerate(dims) if a.shape[0]), default=0)
    complete = top < dim_cap or dim_cap >= g.n - 1
    return SimplicialComplex(dims, complete=complete, graph=g, presorted=True)


def clique_complex_on_subset(g: SimpleGraph, vertices, dim_cap: int,
                             budget: int = DEFAULT_CLIQUE_BUDGET
                             ) -> SimplicialComplex:
    """Clique complex of the induced subgraph, keeping original labels."""
    verts = np.array(sorted(set(map(int, vertices))), dtype=np.int32)
    k = len(verts)
    if k == 0:
        return SimplicialComplex([], complete=True)
    pos = {int(v): i for i, v in enumerate(verts)}
    sub = SimpleGraph(k, ((pos[u] + 1, pos[v] + 1)
                          for i, u in enumerate(verts) for v in g.adj[u]
                          if v in pos and pos[v] > i))
    cap = max(1, min(dim_cap, k - 1))
    indptr, indices = sub.higher_csr()
    arrays = kernels.enumerate_cliques(indptr, indices, k, cap + 1, budget)
    dims = [verts[a] for a in arrays]
    top = max((d for d, a in enumerate(dims) if a.shape[0]), default=0)
    complete = top < dim_cap or dim_cap >= k - 1
    return SimplicialComplex(dims, complete=complete, presorted=True)


def link(c: SimplicialComplex, v: int, star_instead: bool = False
         ) -> SimplicialComplex:
    """Link (default) or star of a vertex.

    The star is every simplex containing v plus their faces; the link is the
    star minus the simplices containing v.  Both equal {s : s + {v} in c},
    filtered by membership of v.  For a capped complex the result is reliable
    one dimension below the cap and is marked incomplete accordingly.
    """
    if not c.contains((v,)):
        raise KeyError(f"vertex {v} not in complex")
    out: list[list[tuple]] = [[] for _ in range(c.dim + 1)]
    for d in range(c.dim + 1):
        above = c.index_map(d + 1)
        for s in c.simplices(d):
            if v in s:
                if star_instead:
                    out[d].append(s)
            elif tuple(sorted(s + (v,))) in above:
                out[d].append(s)
    dims = [np.array(rows, dtype=np.int32).reshape(-1, d + 1)
            for d, rows in enumerate(out)]
    return SimplicialComplex(dims, complete=c.complete, presorted=True)


def octahedral_sphere(q: int) -> SimplicialComplex:
    """Boundary complex of the q-dimensional cross-polytope on 2q vertices.

    Vertices i and j are adjacent iff i - j is nonzero mod q; the clique
    complex of this graph is the minimal triangulation of the sphere of
    dimension q - 1.
    """
    return build_clique_complex(octahedral_graph(q), dim_cap=max(1, q)).trimmed()


def is_octahedral_set(g: SimpleGraph, vs) -> bool:
    """True iff the induced subgraph on vs matches the cross-polytope pattern:
    the complement restricted to vs is a perfect matching."""
    vs = sorted(set(map(int, vs)))
    if len(vs) % 2 or not vs:
        return False
    for u in vs:
        non = [w for w in vs if w != u and w not in g.adj[u]]
        if len(non) != 1:
            return False
    return True


def is_octahedral_complex(s: SimplicialComplex, q: int) -> bool:
    """True iff s is (isomorphic to) the octahedral sphere of dimension q-1."""
    if q < 1:
        return False
    verts = [int(x) for x in s.vertices()]
    if len(verts) != 2 * q:
        return False
    if q == 1:
        return s.dim == 0
    edges = set(s.simplices(1))
    non_deg = {v: 0 for v in verts}
    for u, v in combinations(verts, 2):
        if (u, v) not in edges:
            non_deg[u] += 1
            non_deg[v] += 1
    if any(d != 1 for d in non_deg.values()):
        return False
    want = tuple(2 ** (d + 1) * _binom(q, d + 1) for d in range(q))
    return s.f_vector() == want


def _binom(n: int, k: int) -> int:
    from math import comb
    return comb(n, k)


def find_induced_sphere(g: SimpleGraph, q: int,
                        budget: int = 2_000_000) -> list[int] | None:
    """Lexicographically first 2(q+1)-vertex set inducing an octahedral
    sphere of dimension q, or None.

    Depth-first search over increasing vertex tuples; a partial set stays
    viable only while each member has at most one chosen non-neighbor (the
    complement must finish as a perfect matching).  Raises BudgetError after
    ``budget`` search nodes.
    """
    if q < 0:
        raise ValueError("q must be >= 0")
    size = 2 * (q + 1)
    n = g.n
    visited = 0

    def extend(chosen: list[int], open_count: int, partner_ok: list[bool]):
        nonlocal visited
        if len(chosen) == size:
            return list(chosen) if open_count == 0 else None
        start = chosen[-1] + 1 if chosen else 1
        slots_left = size - len(chosen)
        for w in range(start, n + 1):
            visited += 1
            if visited > budget:
                raise BudgetError(f"induced-sphere search exceeded {budget} nodes")
            non = [i for i, u in enumerate(chosen) if w not in g.adj[u]]
            if len(non) > 1:
                continue
            if len(non) == 1 and not partner_ok[non[0]]:
                continue
            new_open = open_count + 1 if not non else open_count - 1
            if new_open > slots_left - 1:
                continue
            chosen.append(w)
            ok = partner_ok + [len(non) == 0]
            if non:
                ok[non[0]] = False
            res = extend(chosen, new_open, ok)
            if res is not None:
                return res
            chosen.pop()
        return None

    found = extend([], 0, [])
    if found is not None:
        assert is_octahedral_set(g, found)
    return found


def common_neighbors(g: SimpleGraph, vs, after: int = 0
                     ) -> tuple[int, list[int]]:
    """Nodes greater than ``after`` adjacent to every node in vs."""
    vs = list(dict.fromkeys(int(v) for v in vs))
    if not vs:
        raise ValueError("vs must be nonempty")
    common = set(g.adj[vs[0]])
    for v in vs[1:]:
        common &= g.adj[v]
    out = sorted(u for u in common if u > after)
    return len(out), out


@dataclass(frozen=True)
class BarmakVerdict:
    """Result of the star-covering criterion scan."""

    status: str                       # certified | criterion-fails | inconclusive
    q: int
    witness: tuple[int, ...] | None = None
    subsets_checked: int = 0
    exhaustive: bool = True

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def _span_in_some_star_literal(c: SimplicialComplex, subset) -> bool:
    """Literal criterion: is the subcomplex spanned by ``subset`` contained
    in the star of some vertex of c?"""
    subset = set(subset)
    span = [s for d in range(c.dim + 1) for s in c.simplices(d)
            if subset.issuperset(s)]
    for v in (int(x) for x in c.vertices()):
        if all(c.contains(tuple(sorted(set(s) | {v}))) for s in span):
            return True
    return False


def _subset_covered_clique(g: SimpleGraph, subset: tuple[int, ...]) -> bool:
    """Clique-complex reduction: the span of ``subset`` lies in some star iff
    a member is adjacent to all other members, or an outside vertex is
    adjacent to the whole subset."""
    ss = set(subset)
    for v in subset:
        if ss - {v} <= g.adj[v]:
            return True
    for v in g.adj[subset[0]]:
        if v not in ss and ss <= g.adj[v]:
            return True
    return False


def barmak_check(c: SimplicialComplex, q: int, subset_budget: int = 200_000,
                 rng: np.random.Generator | None = None) -> BarmakVerdict:
    """Scan vertex subsets of size <= 2(q+1) for the star-covering criterion.

    Certification is downward-closed in the subset order (a star covering a
    set covers its subsets), so only subsets of size exactly min(2(q+1), n)
    need scanning.  Exhaustive when their count fits the budget; otherwise a
    uniform sample is scanned and certification degrades to 'inconclusive'.
    The criterion is sufficient, not necessary: a failure witnesses only that
    this test cannot certify q-homotopy-connectedness.
    """
    if q < 0:
        raise ValueError("q must be >= 0")
    verts = [int(x) for x in c.vertices()]
    n = len(verts)
    k = min(2 * (q + 1), n)
    use_clique = c.graph is not None
    total = _binom(n, k)

    def covered(subset: tuple[int, ...]) -> bool:
        if use_clique:
            return _subset_covered_clique(c.graph, subset)
        return _span_in_some_star_literal(c, subset)

    checked = 0
    if total <= subset_budget:
        for subset in combinations(verts, k):
            checked += 1
            if not covered(subset):
                return BarmakVerdict("criterion-fails", q, subset, checked, True)
        return BarmakVerdict("certified", q, None, checked, True)
    if rng is None:
        rng = derive_rng(0, "barmak-sample")
    arr = np.array(verts)
    for _ in range(subset_budget):
        checked += 1
        subset = tuple(sorted(int(x) for x in
                              rng.choice(arr, size=k, replace=False)))
        if not covered(subset):
            return BarmakVerdict("criterion-fails", q, subset, checked, False)
    return BarmakVerdict("inconclusive", q, None, checked, False)


# -- complex dump format -----------------------------------------------------
#
# Grouped by dimension with "# dim d" headers; one simplex per line as
# space-separated ascending vertex indices.


def write_complex(c: SimplicialComplex, path_or_file) -> None:
    own = isinstance(path_or_file, (str, os.PathLike))
    f = open(path_or_file, "w", encoding="utf-8") if own else path_or_file
    try:
        for d in range(c.dim + 1):
            f.write(f"# dim {d}\n")
            for s in c.simplices(d):
                f.write(" ".join(map(str, s)) + "\n")
    finally:
        if own:
            f.close()


def read_complex(path_or_file) -> SimplicialComplex:
    own = isinstance(path_or_file, (str, os.PathLike))
    f = open(path_or_file, "r", encoding="utf-8") if own else path_or_file
    try:
        simplices = []
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            simplices.append(tuple(map(int, line.split())))
        c = SimplicialComplex.from_simplices(simplices, close=False)
        c.check_closure()
        return c
    finally:
        if own:
            f.close()
