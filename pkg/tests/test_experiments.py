import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pacx import (SweepSpec, TailPolicy, TrialRecord, attachment_prob_estimate,
                  ccdf, common_neighbor_growth, derive_rng, fit_loglog_tail,
                  ks_evolution, ks_two_sample, phase_classify, read_records,
                  run_sweep, scaling_regression, write_records)
from pacx.experiments import InsufficientPointsError, parse_config, summarize_csv


class TestCcdf:
    def test_constant_sample_normalized(self):
        pts = ccdf([1, 1, 1], normalize_by_mean=True)
        assert pts.shape == (1, 2)
        assert pts[0, 0] == 1.0 and pts[0, 1] == 0.0

    def test_direct_counting(self):
        pts = ccdf([1, 2, 3, 4])
        assert np.allclose(pts[:, 0], [1, 2, 3, 4])
        assert np.allclose(pts[:, 1], [0.75, 0.5, 0.25, 0.0])

    def test_ties(self):
        pts = ccdf([2, 2, 5])
        assert np.allclose(pts[:, 0], [2, 5])
        assert np.allclose(pts[:, 1], [1 / 3, 0.0])

    def test_zero_mean_error(self):
        with pytest.raises(ValueError):
            ccdf([0, 0], normalize_by_mean=True)


class TestFitLogLog:
    def test_exact_line_machine_precision(self):
        w = np.array([2.0, 4.0, 8.0, 16.0, 32.0])
        y = np.exp(-2.0 * np.log(w) + 0.7)
        fit = fit_loglog_tail(np.column_stack([w, y]),
                              TailPolicy(w_min=None))
        assert fit.slope == pytest.approx(-2.0, abs=1e-12)
        assert fit.intercept == pytest.approx(0.7, abs=1e-12)
        assert fit.residual_se == pytest.approx(0.0, abs=1e-12)

    def test_pareto_quick(self):
        rng = derive_rng(99, "test-pareto")
        samples = 1.0 + rng.pareto(2.5, size=30_000)
        fit = fit_loglog_tail(ccdf(samples, normalize_by_mean=True))
        assert fit.slope == pytest.approx(-2.5, abs=0.15)

    def test_policy_filters_and_errors(self):
        pts = np.array([[0.5, 0.9], [1.5, 0.5], [2.0, 0.0]])
        with pytest.raises(InsufficientPointsError):
            fit_loglog_tail(pts)


class TestKsTwoSample:
    def test_identical(self):
        assert ks_two_sample([1, 2, 3], [1, 2, 3]) == 0.0

    def test_disjoint(self):
        assert ks_two_sample([1, 2], [5, 6]) == 1.0

    def test_hand_value(self):
        assert ks_two_sample([1, 2], [1.5, 2.5]) == 0.5

    @given(st.lists(st.floats(-5, 5), min_size=1, max_size=30),
           st.lists(st.floats(-5, 5), min_size=1, max_size=30))
    @settings(max_examples=60, deadline=None)
    def test_symmetric_and_bounded(self, a, b):
        d1 = ks_two_sample(a, b)
        d2 = ks_two_sample(b, a)
        assert d1 == d2
        assert 0.0 <= d1 <= 1.0

    def test_scipy_oracle(self, rng):
        from scipy.stats import ks_2samp
        for _ in range(10):
            a = rng.normal(size=40)
            b = rng.normal(0.3, size=55)
            assert ks_two_sample(a, b) == pytest.approx(
                ks_2samp(a, b).statistic, abs=1e-12)


def _fake_record(T, trial, betti2, snapshots=None):
    return TrialRecord(T=T, m=7, delta=-5.0, trial=trial, master_seed=0,
                       stream_tag=f"fake:{T}:{trial}", field_p=2,
                       f_vector=(T,), ranks=(), betti=(1, 0, betti2),
                       exact=(True, True, True), snapshots=snapshots)


class TestKsEvolution:
    def test_final_excluded_and_fit(self):
        rng = derive_rng(1, "test-ks-evo")
        times = [100, 200, 400, 800]
        records = []
        for trial in range(120):
            snaps = {t: {2: int(rng.poisson(5 + t / 100))} for t in times}
            records.append(_fake_record(800, trial, snaps[800][2], snaps))
        evo = ks_evolution(records, 2)
        assert evo.reference_time == 800
        assert [t for t, _ in evo.points] == [100, 200, 400]
        assert all(0 <= k <= 1 for _, k in evo.points)

    def test_degenerate_snapshot_reported(self):
        records = []
        rng = derive_rng(2, "test-ks-degenerate")
        for trial in range(40):
            snaps = {10: {2: 0}, 20: {2: 3},
                     40: {2: int(rng.integers(1, 10))}}
            records.append(_fake_record(40, trial, 1, snaps))
        evo = ks_evolution(records, 2)
        assert 10 in evo.degenerate
        assert 20 in evo.degenerate  # zero variance
        assert evo.fit is None

    def test_same_law_small_ks(self):
        rng = derive_rng(3, "test-ks-same")
        times = [50, 100]
        records = []
        n = 400
        for trial in range(n):
            snaps = {t: {2: float(rng.normal(10, 2))} for t in times}
            records.append(_fake_record(100, trial, 1, snaps))
        evo = ks_evolution(records, 2)
        (t, k), = evo.points
        assert k < 4.0 / math.sqrt(n)


class TestSweep:
    def test_determinism_and_worker_independence(self, tmp_path):
        spec = SweepSpec(points=((40, 2, 0.5),), trials=4, q_dims=(1,),
                         seed=303)
        r1 = run_sweep(spec, n_workers=1)
        r2 = run_sweep(spec, n_workers=2)
        norm = lambda recs: [replace(r, wall_time=0.0).to_json() for r in recs]
        assert norm(r1) == norm(r2)
        p = tmp_path / "records.jsonl"
        write_records(r1, p)
        back = read_records(p)
        assert norm(back) == norm(r1)

    def test_trees_have_no_beta1(self):
        spec = SweepSpec(points=((60, 1, 0.0),), trials=3, q_dims=(1,),
                         seed=5)
        for rec in run_sweep(spec):
            assert rec.betti[1] == 0
            assert rec.morse_holds

    def test_distinct_trials_distinct_graphs(self):
        spec = SweepSpec(points=((50, 2, -1.0),), trials=2, q_dims=(1,),
                         seed=6)
        a, b = run_sweep(spec)
        assert a.stream_tag != b.stream_tag
        assert a.f_vector != b.f_vector or a.betti != b.betti \
            or a.ranks != b.ranks

    def test_budget_failure_recorded(self):
        spec = SweepSpec(points=((80, 4, 0.0),), trials=2, q_dims=(1,),
                         seed=7, max_cliques=10)
        recs = run_sweep(spec)
        assert len(recs) == 2
        assert all(r.status.startswith("budget-exhausted") for r in recs)

    def test_snapshots_nested(self):
        spec = SweepSpec(points=((60, 2, 0.0),), trials=2, q_dims=(1,),
                         seed=8, snapshot_times=(20, 40, 60))
        for rec in run_sweep(spec):
            assert sorted(rec.snapshots) == [20, 40, 60]
            assert rec.snapshots[60][1] == rec.betti[1]

    def test_invariants_checked(self):
        spec = SweepSpec(points=((80, 3, -2.0),), trials=2, q_dims=(1, 2),
                         seed=9)
        for rec in run_sweep(spec):
            assert rec.morse_holds
            assert rec.link_bound_holds == {2: True}

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SweepSpec(points=(), trials=1)
        with pytest.raises(ValueError):
            SweepSpec(points=((10, 1, 0.0),), trials=0)
        with pytest.raises(ValueError):
            SweepSpec(points=((10, 1, 0.0),), trials=1,
                      snapshot_times=(5, 5))
        with pytest.raises(ValueError):
            SweepSpec(points=((10, 1, 0.0),), trials=1,
                      snapshot_times=(5, 20))


class TestScalingRegression:
    def test_power_law_recovered(self):
        records = []
        for T in (100, 200, 400, 800):
            for trial in range(3):
                records.append(_fake_record(T, trial, int(round(T ** 0.7))))
        res = scaling_regression(records, 2)
        assert res.fit.slope == pytest.approx(0.7, abs=0.01)
        assert res.theory_slope == pytest.approx(1 - 4 * (2 / 9))

    def test_q1_ratio_mode(self):
        records = [_fake_record(T, i, 0) for T in (100, 200) for i in range(2)]
        records = [replace(r, betti=(1, 6 * r.T, 0)) for r in records]
        res = scaling_regression(records, 1)
        assert res.fit is None
        assert res.mean_ratio == pytest.approx(6.0)
        assert res.theory_ratio == 6.0

    def test_zero_mean_dropped(self):
        records = [_fake_record(100, 0, 0), _fake_record(200, 0, 4),
                   _fake_record(400, 0, 8), _fake_record(800, 0, 16)]
        res = scaling_regression(records, 2)
        assert res.dropped == (100,)


class TestCommonNeighborGrowth:
    def test_runs_and_reports(self):
        res = common_neighbor_growth(7, -5.0, 2, [500, 1000, 2000],
                                     trials=6, seed=40)
        assert res.theory_slope == pytest.approx(1 - 2 * (2 / 9))
        assert len(res.points) == 3
        assert res.points[0][1] < res.points[-1][1]  # growth

    def test_k1_is_node_degree_law(self):
        res = common_neighbor_growth(3, 0.0, 1, [200, 400, 800], trials=6,
                                     seed=41)
        assert res.theory_slope == pytest.approx(0.5)
        assert res.fit.slope == pytest.approx(0.5, abs=0.3)


class TestAttachmentProb:
    def test_deterministic_start(self):
        res = attachment_prob_estimate(1, 0.0, 1, [2, 3, 4], n_samples=300,
                                       seed=42)
        assert res.points[0] == (2, 1.0)

    def test_monotone_in_v(self):
        n = 4000
        r2 = attachment_prob_estimate(7, -5.0, 2, [64], n_samples=n, seed=43)
        r4 = attachment_prob_estimate(7, -5.0, 4, [64], n_samples=n, seed=44)
        f2, f4 = r2.points[0][1], r4.points[0][1]
        se = math.sqrt(f2 * (1 - f2) / n) + math.sqrt(f4 * (1 - f4) / n)
        assert f4 < f2 - 3 * se

    def test_conditional_estimator_agrees(self):
        kw = dict(T_grid=[32, 64], n_samples=3000, seed=45)
        a = attachment_prob_estimate(5, -3.0, 1, estimator="indicator", **kw)
        b = attachment_prob_estimate(5, -3.0, 1, estimator="conditional", **kw)
        for (t1, f1), (t2, f2) in zip(a.points, b.points):
            assert abs(f1 - f2) < 0.05

    def test_worker_independence(self):
        kw = dict(T_grid=[16, 32, 64], n_samples=512, seed=46, chunk=64)
        a = attachment_prob_estimate(4, -2.0, 1, n_workers=1, **kw)
        b = attachment_prob_estimate(4, -2.0, 1, n_workers=2, **kw)
        assert a.points == b.points


class TestPhaseClassify:
    def test_spec_examples(self):
        assert phase_classify(0, 8, 1).label == "beta_1 infinite"
        assert phase_classify(-4, 6, 1).label == "1-homotopy-connected"
        r = phase_classify(Fraction(-32, 5), 8, 2)
        assert r.label == "2-homotopy-connected"
        assert r.x_exact == Fraction(1, 6)

    def test_boundary_pairs_exact(self):
        # (-delta/m, x) boundary table: (0,1/2), (2/3,1/4), (4/5,1/6),
        # (6/7,1/8); and x -> 0 as -delta/m -> 1
        cases = [(Fraction(0), 8, Fraction(1, 2)),
                 (Fraction(-2, 3), 6, Fraction(1, 4)),
                 (Fraction(-4, 5), 10, Fraction(1, 6)),
                 (Fraction(-6, 7), 14, Fraction(1, 8))]
        for ratio, m, want in cases:
            r = phase_classify(ratio * m, m, 1)
            assert r.x_exact == want
        h = Fraction(1, 10 ** 9)
        r = phase_classify((h - 1) * 8, 8, 3)
        assert r.x_exact == h / (1 + h)

    def test_finite_region(self):
        assert phase_classify(0, 8, 2).label == "beta_2 finite"

    def test_insufficient_m(self):
        assert phase_classify(-4, 5, 2).label == "insufficient m"
        assert phase_classify(Fraction(-9, 2), 5, 2).label == "insufficient m"

    def test_q1_positive_delta_unclassified(self):
        assert phase_classify(3, 8, 1).label == "unclassified"

    def test_float_vs_exact_agree_off_boundary(self):
        for delta, m, q in ((-5.0, 7, 1), (-4.5, 5, 2), (1.25, 9, 2)):
            exact = phase_classify(Fraction(delta).limit_denominator(10 ** 6),
                                   m, q)
            approx = phase_classify(delta, m, q)
            assert exact.label == approx.label

    @given(st.integers(-40, 40), st.integers(1, 12), st.integers(1, 4))
    @settings(max_examples=150, deadline=None)
    def test_exactly_one_label(self, dnum, m, q):
        delta = Fraction(dnum, 10)
        if delta <= -m:
            with pytest.raises(ValueError):
                phase_classify(delta, m, q)
            return
        label = phase_classify(delta, m, q).label
        assert label in (f"{q}-homotopy-connected", f"beta_{q} infinite",
                         f"beta_{q} finite", "insufficient m", "unclassified")

    def test_domain_error(self):
        with pytest.raises(ValueError):
            phase_classify(-8, 8, 1)


class TestPersistence:
    def test_config_parsing(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("# comment\npoints = [(100, 7, -5.0)]\n"
                       "trials = 4\nq_dims = [1, 2]\nseed = 11\n"
                       "generator = 'polya'\n")
        d = parse_config(cfg)
        spec = SweepSpec.from_dict(d)
        assert spec.points == ((100, 7, -5.0),)
        assert spec.trials == 4 and spec.seed == 11

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("points = [(10, 1, 0.0)]\ntrials = 1\nbogus = 3\n")
        with pytest.raises(ValueError, match="bogus"):
            SweepSpec.from_dict(parse_config(cfg))

    def test_csv_summary(self, tmp_path):
        spec = SweepSpec(points=((40, 2, 0.0), (60, 2, 0.0)), trials=3,
                         q_dims=(1,), seed=12)
        recs = run_sweep(spec)
        out = tmp_path / "summary.csv"
        summarize_csv(recs, out)
        lines = out.read_text().splitlines()
        assert lines[0].startswith("T,m,delta,n_trials,n_ok,beta0_mean")
        assert len(lines) == 3
