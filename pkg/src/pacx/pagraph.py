"""Preferential attachment multigraphs.

Two equivalent samplers are provided: the sequential edge-by-edge growth
rule, and the static urn construction driven by independent Beta variables
(identical in distribution for finite node counts).  The urn form also
exposes exact conditional edge probabilities, which the experiment layer
relies on.  A brute-force distribution oracle over small instances supports
equivalence testing.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import BudgetError
from .rng import derive_rng

__all__ = [
    "PAParams",
    "MultiGraph",
    "PolyaWeights",
    "compute_x",
    "generate_sequential",
    "generate_polya",
    "sample_polya_weights",
    "conditional_edge_prob",
    "exact_distribution",
    "s_deviation",
    "psi_beta_params",
    "write_graph",
    "read_graph",
]


def compute_x(delta: float, m: int) -> float:
    """Attachment-strength exponent 1 - 1/(2 + delta/m).

    Monotone increasing in delta/m, with values in [0, 1) over the valid
    parameter range delta > -m.
    """
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if delta <= -m:
        raise ValueError(f"delta must exceed -m = {-m}, got {delta}")
    return 1.0 - 1.0 / (2.0 + delta / m)


@dataclass(frozen=True)
class PAParams:
    """Model parameters: T nodes, m edges per node, strength delta, seed."""

    T: int
    m: int
    delta: float
    seed: int = 0

    def __post_init__(self):
        if self.T < 2:
            raise ValueError(f"T must be >= 2, got {self.T}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not self.delta > -self.m:
            raise ValueError(f"delta must lie in (-m, inf) = ({-self.m}, inf), "
                             f"got {self.delta}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def x(self) -> float:
        return compute_x(self.delta, self.m)


@dataclass(frozen=True)
class MultiGraph:
    """A realized attachment multigraph.

    ``targets[i, a]`` is the node that slot a+1 of node i+2 attached to, so
    row 0 belongs to node 2 (all slots deterministically 1) and row T-2 to
    node T.  Targets always precede their source, hence no self-loops.
    """

    params: PAParams
    targets: np.ndarray
    gen: str = "polya"

    def __post_init__(self):
        T, m = self.params.T, self.params.m
        t = np.asarray(self.targets, dtype=np.int32)
        if t.shape != (T - 1, m):
            raise ValueError(f"targets must have shape {(T - 1, m)}, got {t.shape}")
        sources = np.arange(2, T + 1, dtype=np.int32)[:, None]
        if (t < 1).any() or (t >= sources).any():
            raise ValueError("every target must lie in [1, source - 1]")
        if (t[0] != 1).any():
            raise ValueError("node 2 must attach all slots to node 1")
        if self.gen not in ("seq", "polya"):
            raise ValueError(f"unknown generator label {self.gen!r}")
        t.flags.writeable = False
        object.__setattr__(self, "targets", t)

    @property
    def T(self) -> int:
        return self.params.T

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def n_edges(self) -> int:
        return self.params.m * (self.params.T - 1)

    def degrees(self) -> np.ndarray:
        """Degree of each node (index 1..T; entry 0 unused)."""
        deg = np.bincount(self.targets.ravel(), minlength=self.T + 1)
        deg[2:] += self.m
        deg[0] = 0
        return deg

    def pair_multiplicities(self) -> dict[tuple[int, int], int]:
        """Edge multiplicity per unordered node pair, keyed (low, high)."""
        mult: dict[tuple[int, int], int] = {}
        for i, row in enumerate(self.targets):
            t = i + 2
            for v in row:
                key = (int(v), t)
                mult[key] = mult.get(key, 0) + 1
        return mult

    def attachment_key(self) -> tuple[int, ...]:
        """Free attachment choices (nodes 3..T) as a flat tuple, (t, alpha) order."""
        return tuple(int(v) for v in self.targets[1:].ravel())


@dataclass(frozen=True)
class PolyaWeights:
    """Urn weights: psi[t] for t = 1..T (psi[0] unused) and the prefix
    masses S[v] for v = 0..T, with S strictly increasing from 0 to 1."""

    params: PAParams
    psi: np.ndarray
    S: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        T = self.params.T
        psi = np.asarray(self.psi, dtype=np.float64)
        S = np.asarray(self.S, dtype=np.float64)
        if psi.shape != (T + 1,) or S.shape != (T + 1,):
            raise ValueError(f"psi and S must have shape {(T + 1,)}")
        if self.validate:
            if psi[1] != 1.0:
                raise ValueError("psi_1 must equal 1")
            if ((psi[2:] <= 0) | (psi[2:] >= 1)).any():
                raise ValueError("psi_t must lie in (0, 1) for t >= 2")
            if S[0] != 0.0 or S[T] != 1.0:
                raise ValueError("S_0 must be 0 and S_T must be 1")
            if (np.diff(S) <= 0).any():
                raise ValueError("S must be strictly increasing")
        for a in (psi, S):
            a.flags.writeable = False
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "S", S)

    @property
    def T(self) -> int:
        return self.params.T

    def phi(self) -> np.ndarray:
        """Interval lengths phi_v = S_v - S_{v-1}, index 1..T."""
        return np.diff(self.S)


def psi_beta_params(m: int, delta: float, ts: np.ndarray) -> tuple[float, np.ndarray]:
    """Beta(a, b_t) parameters of psi_t for the given node indices t >= 2."""
    a = m + delta
    b = (2 * m + delta) * np.asarray(ts, dtype=np.float64) - (3 * m + delta)
    if a <= 0 or (b <= 0).any():
        raise AssertionError("Beta parameters must be positive; "
                             "impossible for delta > -m and t >= 2")
    return a, b


def sample_polya_weights(params: PAParams,
                         rng: np.random.Generator | None = None) -> PolyaWeights:
    """Draw the urn weights: psi_1 = 1, psi_t ~ Beta(m+d, (2m+d)t - (3m+d)).

    Each Beta variable is realized as a ratio of two Gamma draws, which stays
    well-behaved when the first parameter m+delta is close to zero.
    """
    if rng is None:
        rng = derive_rng(params.seed, "polya-weights")
    T, m, delta = params.T, params.m, params.delta
    a, b = psi_beta_params(m, delta, np.arange(2, T + 1))
    ga = rng.standard_gamma(a, size=T - 1)
    gb = rng.standard_gamma(b)
    psi = np.empty(T + 1)
    psi[0] = np.nan
    psi[1] = 1.0
    psi[2:] = ga / (ga + gb)
    S = np.empty(T + 1)
    S[T] = 1.0
    # S_v = prod_{v < t <= T} (1 - psi_t), accumulated backwards
    S[1:T] = np.cumprod((1.0 - psi[2:])[::-1])[::-1]
    S[0] = 0.0
    return PolyaWeights(params, psi, S)


def conditional_edge_prob(w: PolyaWeights, v: int, t: int) -> float:
    """P(slot alpha of node t attaches to v | weights) = psi_v S_v / S_{t-1}.

    The value does not depend on the slot index alpha.
    """
    if not (1 <= v < t <= w.T):
        raise IndexError(f"need 1 <= v < t <= T = {w.T}, got v={v}, t={t}")
    return float(w.psi[v] * w.S[v] / w.S[t - 1])


def generate_polya(params: PAParams,
                   rng: np.random.Generator | None = None,
                   return_weights: bool = False):
    """Sample a graph by the urn construction.

    Draws the weights, then for each slot a uniform on [0, S_{t-1}) and the
    target as the index of the containing interval [S_{v-1}, S_v), located
    by binary search over the S prefix array.
    """
    if rng is None:
        rng = derive_rng(params.seed, "polya-gen")
    T, m = params.T, params.m
    w = sample_polya_weights(params, rng)
    targets = np.ones((T - 1, m), dtype=np.int32)
    if T > 2:
        tt = np.repeat(np.arange(3, T + 1), m)
        u = rng.random((T - 2) * m) * w.S[tt - 1]
        targets[1:] = np.searchsorted(w.S, u, side="right").reshape(T - 2, m)
    g = MultiGraph(params, targets, gen="polya")
    return (g, w) if return_weights else g


class _Fenwick:
    """Prefix-sum tree over positive float weights, for categorical draws."""

    def __init__(self, n: int):
        self.n = n
        self.tree = np.zeros(n + 1)
        self.total = 0.0

    def add(self, i: int, w: float) -> None:
        self.total += w
        while i <= self.n:
            self.tree[i] += w
            i += i & (-i)

    def search(self, u: float) -> int:
        """Smallest index i with prefix_sum(i) > u (u in [0, total))."""
        idx = 0
        bit = 1 << (self.n.bit_length())
        tree = self.tree
        while bit:
            nxt = idx + bit
            if nxt <= self.n and tree[nxt] <= u:
                u -= tree[nxt]
                idx = nxt
            bit >>= 1
        return idx + 1


def generate_sequential(params: PAParams,
                        rng: np.random.Generator | None = None) -> MultiGraph:
    """Sample a graph by the edge-by-edge growth rule.

    Slot alpha of node t picks v < t with probability (d(v) + delta) / C,
    where d(v) is v's degree in the intermediate graph including t's
    already-placed edges, and C = 2(t-2)m + alpha - 1 + (t-1)delta.
    """
    if rng is None:
        rng = derive_rng(params.seed, "seq-gen")
    T, m, delta = params.T, params.m, params.delta
    targets = np.ones((T - 1, m), dtype=np.int32)
    tree = _Fenwick(T)
    tree.add(1, m + delta)   # degrees after the deterministic start
    tree.add(2, m + delta)
    for t in range(3, T + 1):
        expected = 2 * (t - 2) * m + (t - 1) * delta
        if abs(tree.total - expected) > 1e-9 * max(1.0, abs(expected)):
            raise AssertionError("normalization drifted from 2(t-2)m + (t-1)d")
        for a in range(m):
            v = tree.search(rng.random() * tree.total)
            targets[t - 2, a] = v
            tree.add(v, 1.0)
        tree.add(t, m + delta)
    return MultiGraph(params, targets, gen="seq")


def exact_distribution(params: PAParams, budget: int = 1_000_000
                       ) -> dict[tuple[int, ...], float]:
    """Exact law of the free attachment choices, by full enumeration.

    Keys match :meth:`MultiGraph.attachment_key`: the targets of nodes 3..T
    flattened in (t, alpha) order.  Probabilities multiply the sequential
    conditional probabilities along each sequence and sum to 1.  Refuses
    instances whose sequence count exceeds ``budget``.
    """
    T, m, delta = params.T, params.m, params.delta
    n_seq = 1
    for t in range(3, T + 1):
        n_seq *= (t - 1) ** m
        if n_seq > budget:
            raise BudgetError(
                f"{n_seq}+ attachment sequences exceed the budget of {budget}")
    slots = [(t, a) for t in range(3, T + 1) for a in range(1, m + 1)]
    dist: dict[tuple[int, ...], float] = {}
    base_deg = [0] * (T + 1)
    base_deg[1] = base_deg[2] = m
    for combo in product(*(range(1, t) for (t, _a) in slots)):
        deg = base_deg.copy()
        p = 1.0
        for (t, a), v in zip(slots, combo):
            c = 2 * (t - 2) * m + (a - 1) + (t - 1) * delta
            p *= (deg[v] + delta) / c
            deg[v] += 1
            deg[t] += 1
        dist[combo] = p
    total = math.fsum(dist.values())
    if abs(total - 1.0) > 1e-10:
        raise AssertionError(f"enumerated probabilities sum to {total}, not 1")
    return dist


def s_deviation(w: PolyaWeights, x: float) -> float:
    """max over 1 <= v <= T of |log S_v - x log(v/T)|."""
    v = np.arange(1, w.T + 1)
    return float(np.max(np.abs(np.log(w.S[1:]) - x * np.log(v / w.T))))


# -- graph file format -------------------------------------------------------
#
# Header:  pa T=<int> m=<int> delta=<float> seed=<u64> gen=<seq|polya>
# Body:    one line per edge, "t alpha v", in lexicographic (t, alpha) order.


def write_graph(g: MultiGraph, path_or_file) -> None:
    """Write the text format; round-trips bit-exactly through read_graph."""
    own = isinstance(path_or_file, (str, os.PathLike))
    f = open(path_or_file, "w", encoding="utf-8") if own else path_or_file
    try:
        p = g.params
        f.write(f"pa T={p.T} m={p.m} delta={float(p.delta)!r} "
                f"seed={p.seed} gen={g.gen}\n")
        for i, row in enumerate(g.targets):
            t = i + 2
            for a, v in enumerate(row, start=1):
                f.write(f"{t} {a} {int(v)}\n")
    finally:
        if own:
            f.close()


def read_graph(path_or_file) -> MultiGraph:
    """Parse a graph file written by :func:`write_graph`."""
    own = isinstance(path_or_file, (str, os.PathLike))
    f = open(path_or_file, "r", encoding="utf-8") if own else path_or_file
    try:
        header = f.readline().split()
        if not header or header[0] != "pa":
            raise ValueError("not a pa graph file (missing 'pa' header)")
        fields = dict(part.split("=", 1) for part in header[1:])
        params = PAParams(T=int(fields["T"]), m=int(fields["m"]),
                          delta=float(fields["delta"]), seed=int(fields["seed"]))
        targets = np.ones((params.T - 1, params.m), dtype=np.int32)
        seen = np.zeros((params.T - 1, params.m), dtype=bool)
        for line in f:
            if not line.strip():
                continue
            t, a, v = map(int, line.split())
            targets[t - 2, a - 1] = v
            seen[t - 2, a - 1] = True
        if not seen.all():
            raise ValueError("graph file is missing edges")
        return MultiGraph(params, targets, gen=fields["gen"])
    finally:
        if own:
            f.close()


def graph_to_string(g: MultiGraph) -> str:
    buf = io.StringIO()
    write_graph(g, buf)
    return buf.getvalue()
