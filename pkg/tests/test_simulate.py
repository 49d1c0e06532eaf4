import math

import numpy as np
import pytest

from cometforensics.dataset import (
    CategoryCounts,
    Dataset,
    DatasetValidationError,
    DuplicatePoint,
    validate_dataset,
)
from cometforensics.simulate import (
    PERMUTATION,
    PopulationSpec,
    SimulationConfig,
    WITH_REPLACEMENT,
    build_population,
    draw_slide,
    population_from_counts,
    simulate_dataset,
    simulation_battery,
    slide_generator,
)

SHAM_POP = PopulationSpec((8992, 776, 202, 18, 12), 10_000)


class TestPopulation:
    def test_fixture_pool_matches_published_population(self, sham_dataset):
        pop = build_population(sham_dataset, 10_000)
        assert pop.counts == (8992, 776, 202, 18, 12)
        assert pop.size == 10_000

    def test_degenerate_pool(self):
        slide = CategoryCounts((500, 0, 0, 0, 0))
        d = Dataset(tuple(DuplicatePoint(f"p{i}", slide, slide) for i in range(3)))
        assert build_population(d, 10_000).counts == (10_000, 0, 0, 0, 0)

    def test_exact_proportional_scaling(self):
        a = CategoryCounts((125, 63, 37, 15, 10))
        b = CategoryCounts((125, 62, 38, 15, 10))
        d = Dataset((DuplicatePoint("p", a, b),))
        pop = build_population(d, 1000)
        assert pop.counts == (500, 250, 150, 60, 40)

    def test_largest_remainder_conserves_total(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            pooled = rng.integers(0, 4000, size=5)
            if pooled.sum() == 0:
                continue
            pop = population_from_counts(pooled.tolist(), 10_000)
            assert sum(pop.counts) == 10_000

    def test_tie_break_is_deterministic(self):
        # quotas 2500.5 for two categories, one leftover seat: lower index wins
        pop = population_from_counts([1, 1, 2, 0, 0], 10)
        assert pop.counts == (3, 2, 5, 0, 0)

    def test_empty_dataset(self):
        with pytest.raises(DatasetValidationError):
            build_population(Dataset(()), 10_000)

    def test_target_too_small(self, sham_dataset):
        with pytest.raises(ValueError):
            build_population(sham_dataset, 999)


class TestDrawSlide:
    def test_single_category_population(self):
        pop = PopulationSpec((10_000, 0, 0, 0, 0), 10_000)
        c = draw_slide(pop, 500, slide_generator(1, 0, 0, 0))
        assert c.counts == (500, 0, 0, 0, 0)

    def test_exhaustive_draw_returns_population(self):
        c = draw_slide(SHAM_POP, 10_000, slide_generator(1, 0, 0, 0))
        assert c.counts == SHAM_POP.counts

    def test_draw_larger_than_population(self):
        with pytest.raises(ValueError):
            draw_slide(SHAM_POP, 10_001, slide_generator(1, 0, 0, 0))

    def test_mean_counts_match_expectation(self):
        # E[count_i] = n * N_i / N  (Monte Carlo oracle, 3 standard errors)
        n_draws = 20_000
        w = np.array([2.5, 12.5, 30.0, 67.5, 97.5])
        totals = np.zeros(5)
        sq = np.zeros(5)
        tfs = np.empty(n_draws)
        for k in range(n_draws):
            c = np.array(draw_slide(SHAM_POP, 500, slide_generator(123, 0, k, 0)).counts)
            totals += c
            sq += c * c
            tfs[k] = c @ w / 500.0
        means = totals / n_draws
        sds = np.sqrt(sq / n_draws - means**2)
        expected = 500 * np.array(SHAM_POP.counts) / SHAM_POP.size
        for c in range(5):
            se = sds[c] / math.sqrt(n_draws)
            assert abs(means[c] - expected[c]) <= 3 * max(se, 1e-9)
        # the sampled tail-factor sd carries the finite-population correction:
        # 0.2794 * sqrt(9500/9999) = 0.2723
        assert tfs.std(ddof=1) == pytest.approx(0.2723, abs=0.006)

    def test_sum_conservation(self):
        for k in range(50):
            c = draw_slide(SHAM_POP, 500, slide_generator(5, 0, k, 0))
            assert sum(c.counts) == 500
            assert all(x >= 0 for x in c.counts)

    def test_category_exchangeability(self):
        # permuting population categories and un-permuting the draws leaves
        # the sampled means unchanged (within Monte Carlo error)
        perm = [2, 0, 4, 1, 3]
        permuted_pop = PopulationSpec(tuple(SHAM_POP.counts[i] for i in perm), 10_000)
        n_draws = 8000
        direct = np.zeros(5)
        via_perm = np.zeros(5)
        for k in range(n_draws):
            direct += draw_slide(SHAM_POP, 500, slide_generator(21, 0, k, 0)).counts
            drawn = draw_slide(permuted_pop, 500, slide_generator(22, 0, k, 0)).counts
            unpermuted = [0] * 5
            for j, i in enumerate(perm):
                unpermuted[i] = drawn[j]
            via_perm += unpermuted
        # counts are bounded by 500; 3-sigma band on the mean difference
        for c in range(5):
            se = 3.0 * math.sqrt(2 * 500) / math.sqrt(n_draws)
            assert abs(direct[c] - via_perm[c]) / n_draws <= max(se, 0.5)

    def test_with_replacement_mode(self):
        c = draw_slide(SHAM_POP, 500, slide_generator(9, 0, 0, 0), WITH_REPLACEMENT)
        assert sum(c.counts) == 500


class TestSimulateDataset:
    def test_seed_determinism(self):
        cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=77, replicates=1)
        d1 = simulate_dataset(SHAM_POP, cfg)
        d2 = simulate_dataset(SHAM_POP, cfg)
        assert d1 == d2

    def test_replicate_streams_differ(self):
        cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=77, replicates=1)
        d1 = simulate_dataset(SHAM_POP, cfg, replicate_index=0)
        d2 = simulate_dataset(SHAM_POP, cfg, replicate_index=1)
        assert d1 != d2

    def test_simulated_datasets_validate(self):
        cfg = SimulationConfig(n_points=6, cells_per_slide=500, seed=5, replicates=1)
        for rep in range(5):
            d = simulate_dataset(SHAM_POP, cfg, replicate_index=rep)
            assert validate_dataset(d) == []
            assert len(d.points) == 6

    def test_zero_points_is_invalid_config(self):
        with pytest.raises(ValueError):
            SimulationConfig(n_points=0, cells_per_slide=500, seed=1, replicates=1)

    def test_grand_mean_near_expectation(self):
        cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=303, replicates=1)
        from cometforensics.tailfactor import dataset_tail_factors

        grands = []
        for rep in range(40):
            d = simulate_dataset(SHAM_POP, cfg, replicate_index=rep)
            s = dataset_tail_factors(d)
            grands.append(sum(x.mean for x in s) / len(s))
        assert np.mean(grands) == pytest.approx(4.0625, abs=0.02)


class TestSimulationConfig:
    def test_rejects_negative_seed(self):
        with pytest.raises(ValueError):
            SimulationConfig(n_points=1, cells_per_slide=500, seed=-1, replicates=1)

    def test_rejects_oversized_draw(self):
        with pytest.raises(ValueError):
            SimulationConfig(
                n_points=1, cells_per_slide=20_000, seed=1, replicates=1, population_size=10_000
            )

    def test_rejects_unknown_sampling(self):
        with pytest.raises(ValueError):
            SimulationConfig(n_points=1, cells_per_slide=500, seed=1, replicates=1, sampling="bootstrap")


class TestBattery:
    def test_bit_identical_for_same_seed(self, sham_dataset):
        cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=42, replicates=3)
        a = simulation_battery(sham_dataset, cfg)
        b = simulation_battery(sham_dataset, cfg)
        assert a == b

    def test_self_comparison_is_unremarkable(self):
        # data cloned from the simulation itself: variance tests spread out
        cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=1234, replicates=5)
        honest = simulate_dataset(SHAM_POP, cfg, replicate_index=999)
        comp = simulation_battery(honest, cfg)
        assert all(t.p_value > 0.01 for t in comp.per_category_variance_tests)
        assert all(t.p_value > 0.01 for t in comp.per_category_mean_tests)

    def test_fixture_comparison_hits_published_pattern(self, sham_dataset):
        cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=42, replicates=5)
        comp = simulation_battery(sham_dataset, cfg)
        assert 0.030 <= comp.sim_intra_cv <= 0.075
        assert 0.020 <= comp.sim_inter_cv <= 0.080
        assert comp.sim_tf_mean == pytest.approx(4.06, abs=0.05)
        for c in range(3):  # A, B, C
            assert comp.per_category_variance_tests[c].p_value < 1e-3
            assert comp.fig2_data.reported[c] < comp.fig2_data.simulated[c]
        assert all(t.p_value > 0.05 for t in comp.per_category_mean_tests)

    def test_variance_dominance_across_seeds(self, sham_dataset):
        # median simulated variance strictly exceeds the reported variance
        # for categories A, B and C over many seeds
        real = np.array(
            [p.slide_a.counts for p in sham_dataset.points]
            + [p.slide_b.counts for p in sham_dataset.points],
            dtype=float,
        )
        real_var = real.var(axis=0, ddof=1)
        sim_vars = []
        for seed in range(100):
            cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=seed, replicates=1)
            sim = simulate_dataset(SHAM_POP, cfg)
            m = np.array(
                [p.slide_a.counts for p in sim.points] + [p.slide_b.counts for p in sim.points],
                dtype=float,
            )
            sim_vars.append(m.var(axis=0, ddof=1))
        med = np.median(sim_vars, axis=0)
        for c in range(3):
            assert med[c] > real_var[c]

    def test_shape_mismatch_rejected(self, sham_dataset):
        cfg = SimulationConfig(n_points=5, cells_per_slide=500, seed=1, replicates=1)
        with pytest.raises(ValueError, match="n_points"):
            simulation_battery(sham_dataset, cfg)
        cfg = SimulationConfig(n_points=12, cells_per_slide=400, seed=1, replicates=1)
        with pytest.raises(ValueError, match="cells_per_slide"):
            simulation_battery(sham_dataset, cfg)

    def test_permutation_variance_switch(self, sham_dataset):
        cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=8, replicates=2)
        comp = simulation_battery(sham_dataset, cfg, variance_test=PERMUTATION)
        for c in range(3):
            assert comp.per_category_variance_tests[c].p_value < 0.01
        assert comp.per_category_variance_tests[0].test_name == "variance-A"

    def test_fig_payload_shapes(self, sham_dataset):
        cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=3, replicates=2)
        comp = simulation_battery(sham_dataset, cfg)
        assert len(comp.fig1_data.labels) == 12
        assert len(comp.fig1_data.simulated_b) == 12
        assert len(comp.per_category_variance_tests) == 5
        assert len(comp.per_category_mean_tests) == 5
        assert comp.fig2_data.categories == ("A", "B", "C", "D", "E")
