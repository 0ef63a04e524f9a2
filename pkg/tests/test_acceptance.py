"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines.  Criterion 6 is marked ``slow`` and criterion 11 ``extended``; both
are excluded from the default run (see pyproject) and selected with
``pytest -m slow`` / ``pytest -m extended``.
"""

import math
from collections import Counter
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from pacx import (FieldSpec, PAParams, SweepSpec, TailPolicy, barmak_check,
                  betti, betti_dense_oracle, build_clique_complex, ccdf,
                  check_link_bound, collapse, common_neighbor_growth,
                  complete_graph, compute_x, derive_rng, exact_distribution,
                  fit_loglog_tail, generate_polya, ks_evolution,
                  morse_bounds_beta1, octahedral_sphere, phase_classify,
                  run_sweep, attachment_prob_estimate)
from pacx.verify import (check_boundary_composition, check_euler,
                         random_simple_graph)

GF2, GF3 = FieldSpec(2), FieldSpec(3)


def report(num: int, ok: bool, detail: str) -> None:
    print(f"\n[criterion {num:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_1_oracle_equivalence():
    """Sparse Betti equals the dense oracle on 200 seeded random clique
    complexes with <= 12 vertices, over GF(2) and GF(3)."""
    rng = derive_rng(1001, "acceptance-oracle-equivalence")
    mismatches = 0
    for i in range(200):
        n = int(rng.integers(4, 13))
        p = float(rng.uniform(0.2, 0.7))
        g = random_simple_graph(n, p, rng)
        cx = build_clique_complex(g, n)
        for f in (GF2, GF3):
            if betti(cx, f).betti != betti_dense_oracle(cx, f).betti:
                mismatches += 1
    report(1, mismatches == 0,
           f"200 random complexes, GF(2)+GF(3): {mismatches} mismatches")


def test_criterion_2_chain_complex_invariants():
    """Boundary-of-boundary vanishes and the Euler identity holds on every
    fixture and generated complex of the verify battery."""
    r1 = check_boundary_composition(30, seed=2001)
    r2 = check_euler(40, seed=2002)
    report(2, r1.ok and r2.ok, f"{r1.detail}; {r2.detail}")


def test_criterion_3_model_equivalence():
    """TV distance between 1e5 urn-sampled graphs and the exact sequential
    law at (T=5, m=1, d=0) and (T=4, m=2, d=1) stays within 0.02."""
    n = 100_000
    details = []
    worst = 0.0
    for (T, m, delta) in ((5, 1, 0.0), (4, 2, 1.0)):
        params = PAParams(T, m, delta, seed=3001)
        dist = exact_distribution(params)
        rng = derive_rng(3001, f"acceptance-tv:T={T}:m={m}")
        counts = Counter(generate_polya(params, rng).attachment_key()
                         for _ in range(n))
        tv = 0.5 * sum(abs(counts.get(k, 0) / n - p) for k, p in dist.items())
        tv += 0.5 * sum(c / n for k, c in counts.items() if k not in dist)
        worst = max(worst, tv)
        details.append(f"(T={T},m={m},delta={delta}) TV={tv:.4f}")
    report(3, worst <= 0.02, "; ".join(details) + " (tol 0.02)")


def test_criterion_4_deterministic_inequalities():
    """Morse bracket for beta_1 and the link upper bound for beta_2 hold in
    100/100 trials at (m=7, d=-5, T=500) and (m=5, d=-4, T=300)."""
    configs = ((7, -5.0, 500), (5, -4.0, 300))
    all_ok = True
    details = []
    for (m, delta, T) in configs:
        morse_ok = link_ok = 0
        for trial in range(100):
            rng = derive_rng(4001, f"acceptance-ineq:{m}:{delta}:{T}", trial)
            g = generate_polya(PAParams(T, m, delta, seed=4001), rng)
            morse_ok += morse_bounds_beta1(g).holds
            link_ok += check_link_bound(g, 2)[2]
        details.append(f"(m={m},d={delta},T={T}): morse {morse_ok}/100, "
                       f"link {link_ok}/100")
        all_ok &= morse_ok == 100 and link_ok == 100
    report(4, all_ok, "; ".join(details))


def test_criterion_5_beta1_linear_law():
    """Mean |beta_1/T - (m-1)| <= 0.05 at (m=7, d=-5, T=5000), 20 trials."""
    spec = SweepSpec(points=((5000, 7, -5.0),), trials=20, q_dims=(1,),
                     seed=5001, check_invariants=False)
    records = run_sweep(spec, n_workers=2)
    devs = [abs(r.betti[1] / r.T - 6.0) for r in records]
    mean_dev = float(np.mean(devs))
    mean_ratio = float(np.mean([r.betti[1] / r.T for r in records]))
    report(5, mean_dev <= 0.05,
           f"mean |beta_1/T - 6| = {mean_dev:.3f} (tol 0.05; "
           f"mean beta_1/T = {mean_ratio:.3f}; the multigraph collapse "
           f"loses ~T^(5/9) edges and triangles fill ~T^0.9 cycles at this "
           f"scale, so beta_1/T sits far below m-1 = 6)")


@pytest.mark.slow
def test_criterion_6_beta2_growth_exponent():
    """Regression of log mean beta_2 on log T over T in {500..8000}, 30
    trials each, against the theoretical exponent 1 - 4x = 7/11 at
    (m=5, d=-4.5)."""
    grid = (500, 1000, 2000, 4000, 8000)
    spec = SweepSpec(points=tuple((T, 5, -4.5) for T in grid), trials=30,
                     q_dims=(2,), seed=6001, check_invariants=False)
    records = run_sweep(spec, n_workers=2)
    by_T = {}
    for r in records:
        by_T.setdefault(r.T, []).append(r.betti[2])
    means = {T: float(np.mean(v)) for T, v in by_T.items()}
    xs = np.log(sorted(means))
    ys = np.log([max(means[T], 1e-12) for T in sorted(means)])
    slope = float(np.polyfit(xs, ys, 1)[0])
    theory = 1 - 4 * compute_x(-4.5, 5)
    report(6, abs(slope - theory) <= 0.15,
           f"fitted slope {slope:.3f} vs theory {theory:.3f} +- 0.15 "
           f"(means per T: { {T: round(m, 2) for T, m in sorted(means.items())} }; "
           f"at these sizes sphere creation still outpaces filling, so the "
           f"finite-scale slope exceeds the asymptotic exponent)")


def test_criterion_7_common_neighbor_rate():
    """Common-neighbor growth for k=2 at (m=7, d=-5): fitted slope within
    0.1 of 1 - 2x = 5/9, measured over one and a half decades of T."""
    res = common_neighbor_growth(7, -5.0, 2, [8000, 16000, 32000, 64000,
                                              128000], trials=40, seed=7001)
    ok = abs(res.fit.slope - 5 / 9) <= 0.1
    report(7, ok, f"fitted slope {res.fit.slope:.3f} vs 5/9 = {5 / 9:.3f} "
                  f"+- 0.1 (points: {[(t, round(c, 1)) for t, c in res.points]})")


def test_criterion_8_attachment_probability_rate():
    """P(T attaches to node 1) at (m=7, d=-5): log-log slope within 0.05 of
    -x = -2/9 with 1e4 samples per T over the decade [1e5, 1e6]."""
    res = attachment_prob_estimate(
        7, -5.0, 1, [100_000, 178_000, 316_000, 562_000, 1_000_000],
        n_samples=10_000, seed=8001, n_workers=2)
    ok = abs(res.fit.slope - (-2 / 9)) <= 0.05
    report(8, ok, f"fitted slope {res.fit.slope:.4f} vs -2/9 = {-2 / 9:.4f} "
                  f"+- 0.05 (freqs: {[(t, round(f, 4)) for t, f in res.points]})")


def test_criterion_9_power_law_fitter_calibration():
    """Synthetic checks of the tail fitter: exact line to machine precision,
    Pareto(2.5) tail recovered within 0.1 at n = 1e5."""
    w = np.array([1.5, 3.0, 6.0, 12.0, 24.0, 48.0])
    exact = fit_loglog_tail(np.column_stack([w, np.exp(-2 * np.log(w) + 1)]),
                            TailPolicy(w_min=None))
    rng = derive_rng(9001, "acceptance-pareto")
    samples = 1.0 + rng.pareto(2.5, size=100_000)
    pareto = fit_loglog_tail(ccdf(samples, normalize_by_mean=True))
    ok = abs(exact.slope + 2.0) < 1e-12 and abs(pareto.slope + 2.5) <= 0.1
    report(9, ok, f"exact-line slope {exact.slope:.15f}; Pareto(2.5) tail "
                  f"slope {pareto.slope:.3f} (tol 0.1)")


def test_criterion_10_phase_classifier():
    """Boundary pairs (-d/m, x) from the phase table and the region labels."""
    pairs_ok = True
    for ratio, want in ((Fraction(0), Fraction(1, 2)),
                        (Fraction(2, 3), Fraction(1, 4)),
                        (Fraction(4, 5), Fraction(1, 6)),
                        (Fraction(6, 7), Fraction(1, 8))):
        m = 2 * ratio.denominator
        r = phase_classify(-ratio * m, m, 1)
        pairs_ok &= r.x_exact == want
    h = Fraction(1, 10 ** 12)  # x -> 0 as -delta/m -> 1
    r = phase_classify((h - 1) * 8, 8, 1)
    pairs_ok &= r.x_exact == h / (1 + h)

    labels_ok = (
        phase_classify(0, 8, 1).label == "beta_1 infinite"
        and phase_classify(-4, 6, 1).label == "1-homotopy-connected"
        and phase_classify(Fraction(-32, 5), 8, 2).label
        == "2-homotopy-connected"
        and phase_classify(0, 8, 2).label == "beta_2 finite"
        and phase_classify(Fraction(-9, 2), 5, 2).label == "insufficient m"
        and phase_classify(Fraction(-2, 3) * 6, 6, 2).label
        == "beta_2 infinite"
    )
    report(10, pairs_ok and labels_ok,
           f"boundary pairs exact: {pairs_ok}; region labels: {labels_ok}")


@pytest.mark.extended
def test_criterion_11_full_scale_reproduction():
    """Full-scale run (T=1e4, m=7, d=-5, 500 trials, dimension 2): CCDF tail
    slope within 0.3 of -2.51 and KS-evolution slope within 0.2 of -0.651,
    with tail-cutoff sensitivity reported."""
    snaps = (1000, 1585, 2512, 3981, 6310, 10000)
    spec = SweepSpec(points=((10_000, 7, -5.0),), trials=500, q_dims=(2,),
                     seed=11001, snapshot_times=snaps,
                     check_invariants=False)
    records = run_sweep(spec, n_workers=2)
    samples = [r.betti[2] for r in records if r.status == "ok"]
    pts = ccdf(samples, normalize_by_mean=True)
    sensitivity = {}
    for wmin in (0.5, 1.0, 2.0):
        try:
            sensitivity[wmin] = fit_loglog_tail(pts, TailPolicy(wmin)).slope
        except Exception as exc:
            sensitivity[wmin] = f"unavailable ({exc})"
    tail = sensitivity[1.0]
    evo = ks_evolution(records, 2)
    ks_slope = evo.fit.slope if evo.fit else float("nan")
    ok = (isinstance(tail, float) and abs(tail - (-2.51)) <= 0.3
          and abs(ks_slope - (-0.651)) <= 0.2)
    report(11, ok,
           f"tail slope {tail if isinstance(tail, str) else round(tail, 3)} "
           f"vs -2.51 +- 0.3; KS slope {ks_slope:.3f} vs -0.651 +- 0.2; "
           f"tail-cutoff sensitivity (w_min -> slope): "
           f"{ {k: (round(v, 3) if isinstance(v, float) else v) for k, v in sensitivity.items()} }")


def test_criterion_12_barmak_checker():
    """Cone complexes certify at every feasible q; octahedral spheres yield
    the full-vertex witness at dimension q-1 for q in {2, 3}."""
    cones_ok = True
    for n in (4, 6, 8, 10):
        cx = build_clique_complex(complete_graph(n), n)
        for q in range(0, n // 2):
            if 2 * (q + 1) <= n:
                cones_ok &= barmak_check(cx, q).certified
    witnesses_ok = True
    for q in (2, 3):
        v = barmak_check(octahedral_sphere(q), q - 1)
        witnesses_ok &= (v.status == "criterion-fails"
                         and v.witness == tuple(range(1, 2 * q + 1)))
    report(12, cones_ok and witnesses_ok,
           f"cones certified: {cones_ok}; sphere witnesses at q-1: "
           f"{witnesses_ok}")
