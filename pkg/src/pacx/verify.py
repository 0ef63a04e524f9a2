"""Cross-validation suites: every oracle the package trusts, runnable as one
battery from the CLI (``pacx verify``) and from the acceptance tests."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .complexes import (SimpleGraph, build_clique_complex, collapse,
                        complete_graph, cycle_graph, octahedral_sphere)
from .homology import (FieldSpec, betti, betti_dense_oracle, betti_multi_field,
                       boundary_matrices, check_link_bound, euler_check,
                       morse_bounds_beta1, n_components)
from .pagraph import PAParams, exact_distribution, generate_polya
from .rng import derive_rng


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def random_simple_graph(n: int, p: float, rng: np.random.Generator
                        ) -> SimpleGraph:
    edges = [(u, v) for u, v in combinations(range(1, n + 1), 2)
             if rng.random() < p]
    return SimpleGraph(n, edges)


def _random_complexes(count: int, seed: int, max_vertices: int = 12):
    """Seeded random clique complexes, built to their full dimension."""
    rng = derive_rng(seed, "verify-random-complexes")
    out = []
    for _ in range(count):
        n = int(rng.integers(4, max_vertices + 1))
        p = float(rng.uniform(0.25, 0.75))
        g = random_simple_graph(n, p, rng)
        out.append(build_clique_complex(g, dim_cap=n))
    return out


def _fixture_complexes():
    return [octahedral_sphere(2), octahedral_sphere(3),
            build_clique_complex(complete_graph(5), 5),
            build_clique_complex(cycle_graph(4), 2)]


def check_boundary_composition(n_random: int = 20, seed: int = 42
                               ) -> CheckResult:
    """d_q d_{q+1} = 0 over GF(2), GF(3), GF(5) on fixtures and random
    complexes."""
    bad = 0
    total = 0
    for cx in _fixture_complexes() + _random_complexes(n_random, seed):
        for p in (2, 3, 5):
            mats = boundary_matrices(cx, FieldSpec(p))
            for lo, hi in zip(mats, mats[1:]):
                total += 1
                if not lo.compose_with(hi):
                    bad += 1
    return CheckResult("boundary-composition", bad == 0,
                       f"{total - bad}/{total} compositions vanish")


def check_euler(n_random: int = 30, seed: int = 43) -> CheckResult:
    """Alternating f-sum equals alternating Betti sum on full complexes."""
    bad = []
    cxs = _fixture_complexes() + _random_complexes(n_random, seed)
    for i, cx in enumerate(cxs):
        r = euler_check(cx)
        if not r.ok:
            bad.append((i, r.chi_f, r.chi_betti))
    return CheckResult("euler-identity", not bad,
                       f"{len(cxs) - len(bad)}/{len(cxs)} complexes pass"
                       + (f"; failures: {bad}" if bad else ""))


def check_dense_vs_sparse(n_random: int = 40, seed: int = 44,
                          fields: tuple[int, ...] = (2, 3)) -> CheckResult:
    """Sparse elimination agrees with the dense oracle exactly."""
    bad = 0
    cxs = _random_complexes(n_random, seed)
    for cx in cxs:
        for p in fields:
            a = betti(cx, FieldSpec(p))
            b = betti_dense_oracle(cx, FieldSpec(p))
            if a.betti != b.betti:
                bad += 1
    return CheckResult("dense-vs-sparse", bad == 0,
                       f"{len(cxs) * len(fields) - bad}/{len(cxs) * len(fields)}"
                       " complex/field pairs agree")


def check_polya_vs_sequential(n_samples: int = 20_000, tol: float = 0.03,
                              seed: int = 45) -> CheckResult:
    """Total-variation distance between the urn sampler's empirical law and
    the exact sequential distribution on enumerable instances."""
    worst = 0.0
    details = []
    for (T, m, delta) in ((5, 1, 0.0), (4, 2, 1.0)):
        params = PAParams(T, m, delta, seed=seed)
        dist = exact_distribution(params)
        rng = derive_rng(seed, f"verify-tv:T={T}:m={m}:delta={delta!r}")
        counts = Counter()
        for _ in range(n_samples):
            counts[generate_polya(params, rng).attachment_key()] += 1
        tv = 0.5 * sum(abs(counts.get(k, 0) / n_samples - p)
                       for k, p in dist.items())
        tv += 0.5 * sum(c / n_samples for k, c in counts.items()
                        if k not in dist)
        details.append(f"(T={T},m={m},delta={delta}): TV={tv:.4f}")
        worst = max(worst, tv)
    return CheckResult("polya-vs-sequential", worst <= tol,
                       "; ".join(details) + f" (tol {tol})")


def check_morse_bounds(trials: int = 20, T: int = 300, m: int = 7,
                       delta: float = -5.0, seed: int = 46) -> CheckResult:
    holds = 0
    for trial in range(trials):
        rng = derive_rng(seed, f"verify-morse:T={T}", trial)
        g = generate_polya(PAParams(T, m, delta, seed=seed), rng)
        if morse_bounds_beta1(g).holds:
            holds += 1
    return CheckResult("morse-bounds", holds == trials,
                       f"{holds}/{trials} realizations within bounds")


def check_link_bounds(trials: int = 10, T: int = 200, m: int = 5,
                      delta: float = -4.0, q: int = 2, seed: int = 47
                      ) -> CheckResult:
    holds = 0
    for trial in range(trials):
        rng = derive_rng(seed, f"verify-link:T={T}", trial)
        g = generate_polya(PAParams(T, m, delta, seed=seed), rng)
        _bq, _bound, ok = check_link_bound(g, q)
        holds += ok
    return CheckResult("link-betti-bound", holds == trials,
                       f"{holds}/{trials} realizations within the bound")


def check_beta0_components(n_random: int = 25, seed: int = 48) -> CheckResult:
    rng = derive_rng(seed, "verify-beta0")
    bad = 0
    for _ in range(n_random):
        n = int(rng.integers(3, 14))
        g = random_simple_graph(n, float(rng.uniform(0.05, 0.5)), rng)
        cx = build_clique_complex(g, dim_cap=2)
        if betti(cx, q_max=0).betti[0] != n_components(g):
            bad += 1
    return CheckResult("beta0-components", bad == 0,
                       f"{n_random - bad}/{n_random} graphs agree")


def check_field_independence(n_random: int = 15, seed: int = 49) -> CheckResult:
    """Betti over GF(2), GF(3), GF(5); disagreements (torsion) are reported."""
    disagree = []
    cxs = _random_complexes(n_random, seed)
    for i, cx in enumerate(cxs):
        _results, agree = betti_multi_field(cx)
        if not agree:
            disagree.append(i)
    detail = (f"all {len(cxs)} complexes agree across GF(2)/GF(3)/GF(5)"
              if not disagree else
              f"torsion reported on complexes {disagree} (not a failure)")
    return CheckResult("field-independence", True, detail)


def run_verify(quick: bool = True, seed: int = 42) -> list[CheckResult]:
    """The full oracle battery; ``quick`` trims sample counts."""
    if quick:
        return [
            check_boundary_composition(8, seed),
            check_euler(10, seed + 1),
            check_dense_vs_sparse(12, seed + 2),
            check_polya_vs_sequential(20_000, 0.03, seed + 3),
            check_morse_bounds(10, 200, seed=seed + 4),
            check_link_bounds(5, 150, seed=seed + 5),
            check_beta0_components(10, seed + 6),
            check_field_independence(8, seed + 7),
        ]
    return [
        check_boundary_composition(30, seed),
        check_euler(40, seed + 1),
        check_dense_vs_sparse(60, seed + 2),
        check_polya_vs_sequential(100_000, 0.02, seed + 3),
        check_morse_bounds(40, 400, seed=seed + 4),
        check_link_bounds(15, 250, seed=seed + 5),
        check_beta0_components(30, seed + 6),
        check_field_independence(20, seed + 7),
    ]
