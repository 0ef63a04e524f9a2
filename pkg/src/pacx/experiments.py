"""Monte Carlo harness and statistics for the scaling experiments.

Trials are independent, seeded units of work; every statistic downstream
(CCDF tails, KS evolution, scaling regressions) is a pure function over the
completed trial records, so reruns and partial reruns are cheap and
reproducible.
"""

from __future__ import annotations

import ast
import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .complexes import build_clique_complex, collapse
from .errors import BudgetError
from .homology import FieldSpec, betti, link_betti_sum, morse_bounds_beta1
from .pagraph import (MultiGraph, PAParams, compute_x, generate_polya,
                      generate_sequential, psi_beta_params)
from .rng import derive_rng

__all__ = [
    "SweepSpec",
    "TrialRecord",
    "FitResult",
    "TailPolicy",
    "InsufficientPointsError",
    "run_sweep",
    "ccdf",
    "fit_loglog_tail",
    "ks_two_sample",
    "ks_evolution",
    "KsEvolution",
    "scaling_regression",
    "ScalingResult",
    "common_neighbor_growth",
    "GrowthResult",
    "attachment_prob_estimate",
    "AttachmentResult",
    "phase_classify",
    "PhaseRegion",
    "write_records",
    "read_records",
    "summarize_csv",
    "parse_config",
]


class InsufficientPointsError(ValueError):
    """A regression was asked for with fewer than 3 usable points."""


# ---------------------------------------------------------------------------
# sweep specification and trial records


@dataclass(frozen=True)
class SweepSpec:
    """One Monte Carlo campaign: parameter points, trials, dimensions."""

    points: tuple[tuple[int, int, float], ...]
    trials: int
    q_dims: tuple[int, ...] = (1,)
    field: int = 2
    seed: int = 0
    snapshot_times: tuple[int, ...] | None = None
    generator: str = "polya"
    max_cliques: int = 20_000_000
    check_invariants: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.points:
            raise ValueError("at least one (T, m, delta) point is required")
        pts = tuple((int(T), int(m), float(d)) for (T, m, d) in self.points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "q_dims", tuple(sorted(set(self.q_dims))))
        if any(q < 0 for q in self.q_dims):
            raise ValueError("q_dims must be nonnegative")
        if self.generator not in ("polya", "seq"):
            raise ValueError("generator must be 'polya' or 'seq'")
        if self.snapshot_times is not None:
            st = tuple(int(t) for t in self.snapshot_times)
            if any(b <= a for a, b in zip(st, st[1:])):
                raise ValueError("snapshot times must be strictly ascending")
            if st and st[-1] > max(T for (T, _m, _d) in pts):
                raise ValueError("snapshot times must not exceed T")
            object.__setattr__(self, "snapshot_times", st)
        FieldSpec(self.field)

    @property
    def dim_cap(self) -> int:
        return max(max(self.q_dims), 1) + 1

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        known = {f: d[f] for f in cls.__dataclass_fields__ if f in d}
        unknown = set(d) - set(known)
        if unknown:
            raise ValueError(f"unknown sweep config keys: {sorted(unknown)}")
        known["points"] = tuple(tuple(p) for p in known["points"])
        return cls(**known)


@dataclass(frozen=True)
class TrialRecord:
    """One realization's statistics.  Identical inputs (master seed, params,
    trial index) reproduce every field except wall_time byte-for-byte."""

    T: int
    m: int
    delta: float
    trial: int
    master_seed: int
    stream_tag: str
    status: str = "ok"
    field_p: int = 2
    f_vector: tuple[int, ...] = ()
    ranks: tuple[int, ...] = ()
    betti: tuple[int, ...] = ()
    exact: tuple[bool, ...] = ()
    biangles: int = 0
    morse_holds: bool | None = None
    link_bound_holds: dict | None = None
    snapshots: dict | None = None      # {time: {q: beta_q}}
    wall_time: float = 0.0

    def beta(self, q: int) -> int:
        return self.betti[q]

    def to_json(self) -> str:
        d = dict(self.__dict__)
        for k in ("f_vector", "ranks", "betti"):
            d[k] = list(d[k])
        d["exact"] = [bool(x) for x in d["exact"]]
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "TrialRecord":
        d = json.loads(line)
        for k in ("f_vector", "ranks", "betti"):
            d[k] = tuple(d[k])
        d["exact"] = tuple(bool(x) for x in d["exact"])
        if d.get("snapshots") is not None:
            d["snapshots"] = {int(t): {int(q): int(b) for q, b in qs.items()}
                              for t, qs in d["snapshots"].items()}
        if d.get("link_bound_holds") is not None:
            d["link_bound_holds"] = {int(q): bool(v) for q, v in
                                     d["link_bound_holds"].items()}
        return cls(**d)


def _graph_betti(graph: MultiGraph, q_max: int, dim_cap: int, p: int,
                 max_cliques: int):
    simple = collapse(graph)
    cx = build_clique_complex(simple, dim_cap, budget=max_cliques)
    return simple, betti(cx, FieldSpec(p), q_max=q_max)


def _run_trial(spec: SweepSpec, point_idx: int, trial: int) -> TrialRecord:
    T, m, delta = spec.points[point_idx]
    tag = f"sweep:T={T}:m={m}:delta={delta!r}:trial={trial}"
    rng = derive_rng(spec.seed, tag)
    params = PAParams(T, m, delta, seed=spec.seed)
    gen = generate_polya if spec.generator == "polya" else generate_sequential
    t0 = time.perf_counter()
    q_max = max(spec.q_dims)
    try:
        graph = gen(params, rng)
        simple, bv = _graph_betti(graph, q_max, spec.dim_cap, spec.field,
                                  spec.max_cliques)
        snapshots = None
        if spec.snapshot_times:
            snapshots = {}
            times = sorted({t for t in spec.snapshot_times if t <= T} | {T})
            for t in times:
                if t == T:
                    sub_bv = bv
                else:
                    sub = MultiGraph(PAParams(t, m, delta, seed=spec.seed),
                                     graph.targets[:t - 1], gen=graph.gen)
                    _s, sub_bv = _graph_betti(sub, q_max, spec.dim_cap,
                                              spec.field, spec.max_cliques)
                snapshots[t] = {q: sub_bv.betti[q] for q in spec.q_dims}
        morse_holds = None
        link_holds = None
        if spec.check_invariants:
            morse_holds = morse_bounds_beta1(graph, FieldSpec(spec.field)).holds
            qs2 = [q for q in spec.q_dims if q >= 2]
            if qs2:
                link_holds = {}
                for q in qs2:
                    bound = link_betti_sum(graph, q, FieldSpec(spec.field)).total
                    link_holds[q] = bool(bv.betti[q] <= bound)
        return TrialRecord(
            T=T, m=m, delta=delta, trial=trial, master_seed=spec.seed,
            stream_tag=tag, status="ok", field_p=spec.field,
            f_vector=bv.f_vector, ranks=bv.ranks, betti=bv.betti,
            exact=bv.exact, biangles=simple.biangle_count,
            morse_holds=morse_holds, link_bound_holds=link_holds,
            snapshots=snapshots, wall_time=time.perf_counter() - t0)
    except BudgetError as exc:
        return TrialRecord(T=T, m=m, delta=delta, trial=trial,
                           master_seed=spec.seed, stream_tag=tag,
                           status=f"budget-exhausted: {exc}",
                           field_p=spec.field,
                           wall_time=time.perf_counter() - t0)


def _run_trial_packed(args):
    return _run_trial(*args)


def run_sweep(spec: SweepSpec, n_workers: int = 1, sink=None
              ) -> list[TrialRecord]:
    """Execute every (point, trial) unit and return records in point/trial
    order.

    ``sink`` is called with each record as it completes (streaming
    persistence); the returned ordering is deterministic regardless of
    worker count.  Budget blow-ups mark single trials failed, never the
    sweep.
    """
    tasks = [(spec, pi, tr) for pi in range(len(spec.points))
             for tr in range(spec.trials)]
    records: list[TrialRecord] = []
    if n_workers <= 1:
        for task in tasks:
            rec = _run_trial_packed(task)
            if sink is not None:
                sink(rec)
            records.append(rec)
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            for rec in pool.map(_run_trial_packed, tasks, chunksize=1):
                if sink is not None:
                    sink(rec)
                records.append(rec)
    records.sort(key=lambda r: (spec.points.index((r.T, r.m, r.delta)), r.trial))
    return records


def write_records(records, path_or_file) -> None:
    own = isinstance(path_or_file, (str, os.PathLike))
    f = open(path_or_file, "w", encoding="utf-8") if own else path_or_file
    try:
        for r in records:
            f.write(r.to_json() + "\n")
    finally:
        if own:
            f.close()


def read_records(path_or_file) -> list[TrialRecord]:
    own = isinstance(path_or_file, (str, os.PathLike))
    f = open(path_or_file, "r", encoding="utf-8") if own else path_or_file
    try:
        return [TrialRecord.from_json(line) for line in f if line.strip()]
    finally:
        if own:
            f.close()


def summarize_csv(records: list[TrialRecord], path_or_file) -> None:
    """One row per (T, m, delta): trial counts, Betti means and standard
    errors per computed dimension, mean biangles."""
    groups: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        groups.setdefault((r.T, r.m, r.delta), []).append(r)
    qs = sorted({q for r in records if r.status == "ok"
                 for q in range(len(r.betti))})
    own = isinstance(path_or_file, (str, os.PathLike))
    f = open(path_or_file, "w", newline="", encoding="utf-8") if own \
        else path_or_file
    try:
        w = csv.writer(f)
        header = ["T", "m", "delta", "n_trials", "n_ok"]
        for q in qs:
            header += [f"beta{q}_mean", f"beta{q}_se"]
        header += ["biangles_mean", "wall_time_mean"]
        w.writerow(header)
        for key in sorted(groups):
            rs = groups[key]
            ok = [r for r in rs if r.status == "ok"]
            row = [key[0], key[1], repr(key[2]), len(rs), len(ok)]
            for q in qs:
                vals = np.array([r.betti[q] for r in ok if q < len(r.betti)],
                                dtype=float)
                if len(vals):
                    se = vals.std(ddof=1) / math.sqrt(len(vals)) \
                        if len(vals) > 1 else 0.0
                    row += [f"{vals.mean():.17g}", f"{se:.17g}"]
                else:
                    row += ["", ""]
            if ok:
                row += [f"{np.mean([r.biangles for r in ok]):.17g}",
                        f"{np.mean([r.wall_time for r in ok]):.17g}"]
            else:
                row += ["", ""]
            w.writerow(row)
    finally:
        if own:
            f.close()


def parse_config(path) -> dict:
    """Read a declarative ``key = value`` config; values are Python literals.

    Lines starting with '#' (and blank lines) are ignored.  Mirrors the
    SweepSpec fields, e.g.::

        points = [(1000, 7, -5.0), (2000, 7, -5.0)]
        trials = 50
        q_dims = [1, 2]
        seed = 42
    """
    out = {}
    with open(path, "r", encoding="utf-8") as f:
        for ln, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{ln}: expected 'key = value'")
            key, val = line.split("=", 1)
            key = key.strip()
            val = val.strip()
            try:
                out[key] = ast.literal_eval(val)
            except (ValueError, SyntaxError):
                out[key] = val
    return out


# ---------------------------------------------------------------------------
# distribution statistics


def ccdf(samples, normalize_by_mean: bool = False) -> np.ndarray:
    """Empirical complementary CDF at each distinct sample value.

    Returns an array of (w, P(X > w)) rows with w ascending; counting is
    strictly greater, so the largest value maps to 0.  With
    ``normalize_by_mean`` the samples are divided by their sample mean
    first (error on zero mean).
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("samples must be nonempty")
    if normalize_by_mean:
        mean = x.mean()
        if mean == 0:
            raise ValueError("cannot mean-normalize samples with zero mean")
        x = x / mean
    xs = np.sort(x)
    w, first = np.unique(xs, return_index=True)
    # P(X > w_i): count of samples strictly beyond the last occurrence of w_i
    counts_le = np.append(first[1:], len(xs))
    return np.column_stack([w, 1.0 - counts_le / len(xs)])


@dataclass(frozen=True)
class TailPolicy:
    """Which CCDF points enter the tail fit: w strictly above ``w_min``
    (None keeps all) and CCDF strictly positive."""

    w_min: float | None = 1.0

    def describe(self) -> str:
        return f"w>{self.w_min!r}, ccdf>0" if self.w_min is not None else "ccdf>0"


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual_se: float
    n_points: int
    policy: str = ""

    def to_json(self) -> str:
        return json.dumps({"slope": self.slope, "intercept": self.intercept,
                           "residual_se": self.residual_se,
                           "n_points": self.n_points, "policy": self.policy},
                          sort_keys=True)


def _least_squares_loglog(x: np.ndarray, y: np.ndarray, policy: str
                          ) -> FitResult:
    if len(x) < 3:
        raise InsufficientPointsError(
            f"{len(x)} points after filtering; need >= 3")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    dof = max(len(x) - 2, 1)
    return FitResult(float(slope), float(intercept),
                     float(np.sqrt(np.sum(resid ** 2) / dof)), len(x), policy)


def fit_loglog_tail(points: np.ndarray, tail_policy: TailPolicy = TailPolicy()
                    ) -> FitResult:
    """Least-squares line on (log w, log ccdf) over the tail-policy points."""
    pts = np.asarray(points, dtype=float)
    keep = pts[:, 1] > 0
    if tail_policy.w_min is not None:
        keep &= pts[:, 0] > tail_policy.w_min
    sel = pts[keep]
    return _least_squares_loglog(sel[:, 0], sel[:, 1], tail_policy.describe())


def ks_two_sample(a, b) -> float:
    """Sup distance between the empirical CDFs of two samples."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    grid = np.concatenate([a, b])
    ca = np.searchsorted(a, grid, side="right") / len(a)
    cb = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.max(np.abs(ca - cb)))


@dataclass(frozen=True)
class KsEvolution:
    points: tuple[tuple[int, float], ...]   # (snapshot time, KS vs final)
    fit: FitResult | None
    reference_time: int
    degenerate: tuple[int, ...] = ()

    def to_json(self) -> str:
        return json.dumps({
            "reference_time": self.reference_time,
            "points": [[t, k] for t, k in self.points],
            "degenerate": list(self.degenerate),
            "fit": None if self.fit is None else json.loads(self.fit.to_json()),
        }, sort_keys=True)


def ks_evolution(records: list[TrialRecord], q: int) -> KsEvolution:
    """KS norm between mean-normalized beta_q at each snapshot time and at
    the final time, with a log-log fit of KS against time.

    Zero-mean or zero-variance snapshots cannot be normalized meaningfully;
    they are reported in ``degenerate`` and excluded from the fit, as is the
    reference snapshot itself (KS identically 0).
    """
    ok = [r for r in records if r.status == "ok" and r.snapshots]
    if not ok:
        raise ValueError("no completed records with snapshots")
    times = sorted({t for r in ok for t in r.snapshots})
    if len(times) < 2:
        raise ValueError("need at least 2 snapshot times")
    ref_t = times[-1]

    def samples_at(t: int) -> np.ndarray:
        return np.array([r.snapshots[t][q] for r in ok if t in r.snapshots],
                        dtype=float)

    ref = samples_at(ref_t)
    if ref.mean() == 0:
        raise ValueError("reference snapshot has zero mean")
    ref_n = ref / ref.mean()
    pts = []
    degenerate = []
    for t in times[:-1]:
        x = samples_at(t)
        if x.size == 0 or x.mean() == 0 or x.std() == 0:
            degenerate.append(t)
            continue
        pts.append((t, ks_two_sample(x / x.mean(), ref_n)))
    fit = None
    usable = [(t, k) for t, k in pts if k > 0]
    if len(usable) >= 3:
        arr = np.array(usable, dtype=float)
        fit = _least_squares_loglog(arr[:, 0], arr[:, 1], "ks>0, t<final")
    return KsEvolution(tuple(pts), fit, ref_t, tuple(degenerate))


# ---------------------------------------------------------------------------
# scaling laws


@dataclass(frozen=True)
class ScalingResult:
    q: int
    x: float
    theory_slope: float | None      # None for the q = 1 linear law
    theory_ratio: float | None      # m - 1 for q = 1
    points: tuple[tuple[int, float], ...]
    fit: FitResult | None
    mean_ratio: float | None        # mean over T of mean beta_1 / T
    dropped: tuple[int, ...] = ()


def scaling_regression(records: list[TrialRecord], q: int) -> ScalingResult:
    """Compare Betti growth against the theoretical exponent.

    For q >= 2: regress log(mean beta_q) on log T; theory slope is
    1 - 2 q x when positive (growth regime) and 0 otherwise (bounded
    regime).  For q = 1: report mean beta_1 / T against the coefficient
    m - 1 of the linear law.  T values with zero mean Betti are dropped
    and reported.
    """
    ok = [r for r in records if r.status == "ok"]
    if not ok:
        raise ValueError("no completed records")
    ms = {(r.m, r.delta) for r in ok}
    if len(ms) != 1:
        raise ValueError("records must share (m, delta) for a T-regression")
    (m, delta), = ms
    x = compute_x(delta, m)
    by_T: dict[int, list[int]] = {}
    for r in ok:
        by_T.setdefault(r.T, []).append(r.betti[q])
    points, dropped = [], []
    for T in sorted(by_T):
        mean = float(np.mean(by_T[T]))
        if mean > 0:
            points.append((T, mean))
        else:
            dropped.append(T)
    if q == 1:
        ratios = [mean / T for T, mean in points]
        return ScalingResult(q, x, None, float(m - 1), tuple(points), None,
                             float(np.mean(ratios)) if ratios else None,
                             tuple(dropped))
    theory = max(0.0, 1.0 - 2 * q * x)
    arr = np.array(points, dtype=float)
    fit = _least_squares_loglog(arr[:, 0], arr[:, 1], "mean beta_q > 0")
    return ScalingResult(q, x, theory, None, tuple(points), fit, None,
                         tuple(dropped))


@dataclass(frozen=True)
class GrowthResult:
    k: int
    x: float
    theory_slope: float
    log_regime: bool                # x == 1/k: logarithmic growth expected
    points: tuple[tuple[int, float], ...]
    fit: FitResult


def common_neighbor_growth(m: int, delta: float, k: int, T_grid,
                           trials: int, seed: int = 0,
                           nodes=None) -> GrowthResult:
    """Mean number of common neighbors of ``nodes`` (default 1..k) past the
    last of them, per T, regressed log-log against T.

    Theory: the count grows like T^(1 - k x) for x < 1/k, like log T at
    x = 1/k.
    """
    if nodes is None:
        nodes = list(range(1, k + 1))
    nodes = sorted(set(int(v) for v in nodes))
    if len(nodes) != k:
        raise ValueError("need k distinct nodes")
    x = compute_x(delta, m)
    if m < k:
        raise ValueError("need m >= k")
    after = max(nodes)
    points = []
    for T in sorted(int(t) for t in T_grid):
        counts = []
        for trial in range(trials):
            rng = derive_rng(seed, f"cng:T={T}:m={m}:delta={delta!r}", trial)
            g = generate_polya(PAParams(T, m, delta, seed=seed), rng)
            hit = np.ones(T + 1, dtype=bool)
            for v in nodes:
                hv = np.zeros(T + 1, dtype=bool)
                rows = np.nonzero((g.targets == v).any(axis=1))[0]
                hv[rows + 2] = True
                hv[v] = False
                hit &= hv
            counts.append(int(hit[after + 1:].sum()))
        points.append((T, float(np.mean(counts))))
    arr = np.array(points, dtype=float)
    fit = _least_squares_loglog(arr[:, 0], arr[:, 1], "all points")
    log_regime = abs(x - 1.0 / k) <= 1e-12
    return GrowthResult(k, x, 1.0 - k * x, log_regime, tuple(points), fit)


@dataclass(frozen=True)
class AttachmentResult:
    v: int
    x: float
    theory_slope: float
    points: tuple[tuple[int, float], ...]
    fit: FitResult | None
    estimator: str
    dropped: tuple[int, ...] = ()


def _attach_chunk(args) -> np.ndarray:
    """Accumulate attachment counts for one chunk of weight samples."""
    (m, delta, v, grid, nb, seed, estimator, chunk_idx) = args
    t_max = grid[-1]
    rng = derive_rng(seed, f"attach:m={m}:delta={delta!r}:v={v}", chunk_idx)
    # cum[:, i] = sum_{s=2}^{i+2} log(1 - psi_s)
    a, b = psi_beta_params(m, delta, np.arange(2, t_max + 1))
    ga = rng.standard_gamma(a, size=(nb, t_max - 1))
    gb = rng.standard_gamma(b, size=(nb, t_max - 1))
    with np.errstate(divide="ignore"):
        logq = np.log1p(-(ga / (ga + gb)))
    cum = np.cumsum(logq, axis=1)
    if v == 1:
        log_psi_sv = np.zeros(nb)
    else:
        psi_v = ga[:, v - 2] / (ga[:, v - 2] + gb[:, v - 2])
        log_psi_sv = np.log(psi_v) - cum[:, v - 2]
    xi = rng.random((nb, m))
    acc = np.zeros(len(grid))
    for i, T in enumerate(grid):
        # p_slot = psi_v S_v / S_{T-1} = psi_v prod_{s=v+1}^{T-1}(1 - psi_s)
        log_p = log_psi_sv + (cum[:, T - 3] if T >= 3 else 0.0)
        p_slot = np.exp(log_p)
        if estimator == "indicator":
            acc[i] += (xi < p_slot[:, None]).any(axis=1).sum()
        else:
            acc[i] += (1.0 - (1.0 - p_slot) ** m).sum()
    return acc


def attachment_prob_estimate(m: int, delta: float, v: int, T_grid,
                             n_samples: int, seed: int = 0,
                             estimator: str = "indicator",
                             chunk: int = 64,
                             n_workers: int = 1) -> AttachmentResult:
    """Monte Carlo frequency that node T attaches to node v by >= 1 edge,
    regressed log-log against T; theory slope is -x.

    One urn-weight sequence per sample serves every T in the grid (the Beta
    parameters do not involve the horizon), and the slot uniforms are shared
    across the grid as common random numbers, which cancels most of the
    between-T noise in the slope.  ``estimator="conditional"`` averages the
    exact conditional probability 1 - (1 - p_slot)^m instead of drawing
    indicator samples (same mean, smaller variance).  Results depend on the
    chunk size (it shapes the derived streams) but not on ``n_workers``.
    """
    if v < 1:
        raise ValueError("v must be >= 1")
    if estimator not in ("indicator", "conditional"):
        raise ValueError("estimator must be 'indicator' or 'conditional'")
    x = compute_x(delta, m)
    grid = tuple(sorted(int(t) for t in T_grid))
    if grid[0] <= v:
        raise ValueError("every T in the grid must exceed v")
    tasks = []
    done = 0
    while done < n_samples:
        nb = min(chunk, n_samples - done)
        tasks.append((m, delta, v, grid, nb, seed, estimator, len(tasks)))
        done += nb
    if n_workers <= 1:
        parts = [_attach_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(_attach_chunk, tasks))
    freqs = np.sum(parts, axis=0) / n_samples
    points, dropped = [], []
    for T, fr in zip(grid, freqs):
        if fr > 0:
            points.append((T, float(fr)))
        else:
            dropped.append(T)
    fit = None
    if len(points) >= 3:
        arr = np.array(points, dtype=float)
        fit = _least_squares_loglog(arr[:, 0], arr[:, 1], "freq > 0")
    return AttachmentResult(v, x, -x, tuple(points), fit, estimator,
                            tuple(dropped))


# ---------------------------------------------------------------------------
# phase diagram


@dataclass(frozen=True)
class PhaseRegion:
    label: str
    q: int
    x: float
    x_exact: Fraction | None
    lower: Fraction                 # 1/(2q+2): connectivity threshold
    upper: Fraction                 # 1/(2q): finiteness threshold
    m_required: int

    def describe(self) -> str:
        ex = f" = {self.x_exact}" if self.x_exact is not None else ""
        return (f"{self.label} [x = {self.x:.6g}{ex}; thresholds "
                f"x <= {self.lower} (connected), x <= {self.upper} "
                f"(infinite); m >= {self.m_required} required]")


_FLOAT_TOL = 1e-12


def phase_classify(delta, m: int, q: int) -> PhaseRegion:
    """Classify (delta, m) at dimension q by the phase thresholds on x.

    x <= 1/(2q+2) with m >= 2(q+1) gives q-homotopy-connectedness;
    1/(2q+2) < x <= 1/(2q) with m >= 2q gives infinite beta_q;
    x > 1/(2q) gives finite beta_q for q >= 2.  Pure formula evaluation.
    Comparisons are exact when delta is rational (int/Fraction), within
    1e-12 otherwise.  The regions tile the valid parameter space: exactly
    one label per (delta, m, q).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    exact = isinstance(delta, (int, Fraction)) and not isinstance(delta, bool)
    if exact:
        dq = Fraction(delta)
        if dq <= -m:
            raise ValueError(f"delta must exceed -m = {-m}")
        x_exact = 1 - Fraction(1, 1) / (2 + dq / m)
        x = float(x_exact)

        def le(val, thr):
            return x_exact <= thr
    else:
        x_exact = None
        x = compute_x(float(delta), m)

        def le(val, thr):
            return val <= float(thr) + _FLOAT_TOL
    lo = Fraction(1, 2 * q + 2)
    hi = Fraction(1, 2 * q)
    if le(x, lo):
        if m >= 2 * (q + 1):
            label = f"{q}-homotopy-connected"
        else:
            label = "insufficient m"
        m_req = 2 * (q + 1)
    elif le(x, hi):
        label = f"beta_{q} infinite" if m >= 2 * q else "insufficient m"
        m_req = 2 * q
    else:
        if q >= 2:
            label = f"beta_{q} finite" if m >= 2 * q else "insufficient m"
        else:
            label = "unclassified"
        m_req = 2 * q
    return PhaseRegion(label, q, x, x_exact, lo, hi, m_req)
