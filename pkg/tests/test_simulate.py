import numpy as np
import pytest

from idcep import (ArmModel, CensoringConfig, DomainError, FrailtyConfig,
                   ScenarioSpec, build_six_corr, draw_frailties, scenario_arms,
                   simulate_arm, simulate_trial, transition_counts)
from idcep.data import DataError, TrialData
from idcep.simulate import CONTROL_SCALES, SCENARIO_TREATED_SCALES


def _rng(seed=0):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


class TestScenarioPresets:
    def test_table_values(self):
        assert CONTROL_SCALES == (1.0, 0.5, 1.0)
        assert SCENARIO_TREATED_SCALES[2] == (0.61, 0.5, 1.0)
        assert SCENARIO_TREATED_SCALES[5] == (0.61, 0.31, 0.61)
        assert SCENARIO_TREATED_SCALES[8] == (1.0, 0.31, 1.0)
        control, treated = scenario_arms(1)
        assert control == treated  # null case: identical arms

    def test_unknown_scenario(self):
        with pytest.raises(DomainError):
            scenario_arms(9)


class TestDrawFrailties:
    def test_independent_pairs(self):
        draws = draw_frailties(FrailtyConfig(rho_s=0.0, sigma_omega=0.4), 1_000_000, _rng(1))
        corr = np.corrcoef(draws.omega12[:, 0], draws.omega12[:, 1])[0, 1]
        assert abs(corr) < 0.005

    def test_perfect_correlation_exact(self):
        draws = draw_frailties(FrailtyConfig(rho_s=1.0), 1000, _rng(2))
        np.testing.assert_array_equal(draws.omega12[:, 0], draws.omega12[:, 1])

    def test_moments(self):
        draws = draw_frailties(FrailtyConfig(rho_s=0.5, sigma_omega=0.4), 1_000_000, _rng(3))
        corr = np.corrcoef(draws.omega12[:, 0], draws.omega12[:, 1])[0, 1]
        assert corr == pytest.approx(0.5, abs=0.005)
        assert draws.omega12[:, 0].std() == pytest.approx(0.4, abs=0.002)
        assert draws.omega12[:, 1].std() == pytest.approx(0.4, abs=0.002)

    def test_equal_structure_aliases_death_frailty(self):
        draws = draw_frailties(FrailtyConfig(), 100, _rng(4))
        np.testing.assert_array_equal(draws.omega23, draws.omega13)

    def test_independent_three_has_own_pair(self):
        draws = draw_frailties(FrailtyConfig(structure="independent_three"), 50_000, _rng(5))
        corr = np.corrcoef(draws.omega13[:, 0], draws.omega23[:, 0])[0, 1]
        assert abs(corr) < 0.02

    def test_full_six_respects_matrix(self):
        C = build_six_corr()
        draws = draw_frailties(FrailtyConfig(structure="full_six", full_corr=C), 200_000, _rng(6))
        got = np.corrcoef(draws.omega13[:, 0], draws.omega23[:, 0])[0, 1]
        assert got == pytest.approx(0.95, abs=0.01)


class TestSimulateArm:
    def test_dominant_illness_hazard(self):
        arm = ArmModel.from_scales(1e6, 0.5, 1.0)
        cols = simulate_arm(arm, np.zeros(2000), np.zeros(2000), np.zeros(2000),
                            CensoringConfig(admin_time=10.0), _rng(7))
        assert cols["s_event"].mean() > 0.999

    def test_competing_exponentials_fraction(self):
        # scenario-1 rates: P(illness first) = 1 / (1 + 0.5)
        arm = ArmModel.from_scales(*CONTROL_SCALES)
        n = 100_000
        cols = simulate_arm(arm, np.zeros(n), np.zeros(n), np.zeros(n),
                            CensoringConfig(admin_time=1e9), _rng(8))
        assert cols["s_event"].mean() == pytest.approx(2 / 3, abs=0.005)

    def test_first_event_time_is_exponential(self):
        # no frailty, no censoring: min latent time ~ Exp(gamma12 + gamma13)
        arm = ArmModel.from_scales(*CONTROL_SCALES)
        n = 100_000
        cols = simulate_arm(arm, np.zeros(n), np.zeros(n), np.zeros(n),
                            CensoringConfig(admin_time=1e9), _rng(9))
        first = np.minimum(cols["latent_t12"], cols["latent_t13"])
        for t in (0.5, 1.0, 2.0):
            p = np.exp(-1.5 * t)
            se = np.sqrt(p * (1 - p) / n)
            assert abs((first > t).mean() - p) < 3 * se

    def test_latent_subdistribution(self):
        # P(T12* < T13*, T12* <= t) for competing exponentials
        arm = ArmModel.from_scales(*CONTROL_SCALES)
        n = 200_000
        cols = simulate_arm(arm, np.zeros(n), np.zeros(n), np.zeros(n),
                            CensoringConfig(admin_time=1e9), _rng(10))
        g12, g13 = 1.0, 0.5
        for t in (0.3, 1.0, 2.5):
            want = g12 / (g12 + g13) * (1 - np.exp(-(g12 + g13) * t))
            got = ((cols["latent_t12"] < cols["latent_t13"]) & (cols["latent_t12"] <= t)).mean()
            se = np.sqrt(want * (1 - want) / n)
            assert abs(got - want) < 3.5 * se

    def test_variant_b_matches_variant_a_when_links_coincide(self):
        # theta=0 + equal death frailties: kappa13*=1 reproduces the A-model law
        n = 5000
        w12, w13 = np.full(n, 0.2), np.full(n, -0.1)
        cens = CensoringConfig(admin_time=10.0)
        arm_a = ArmModel.from_scales(1.0, 0.5, 1.0, theta=0.0)
        arm_b = ArmModel.from_scales(1.0, 0.5, 1.0, variant="B",
                                     kappa12_star=0.0, kappa13_star=1.0)
        cols_a = simulate_arm(arm_a, w12, w13, w13, cens, _rng(20))
        cols_b = simulate_arm(arm_b, w12, w13, w13, cens, _rng(20))
        for k in ("s_time", "t_time", "s_event", "t_event"):
            np.testing.assert_array_equal(cols_a[k], cols_b[k])

    def test_entry_time_link_shifts_gap(self):
        # positive theta shortens gaps for later illness entry
        arm = ArmModel.from_scales(1.0, 1e-9, 1.0, theta=2.0)
        n = 200_000
        cols = simulate_arm(arm, np.zeros(n), np.zeros(n), np.zeros(n),
                            CensoringConfig(admin_time=1e9), _rng(11))
        t12, gap = cols["latent_t12"], cols["latent_gap"]
        early = gap[t12 < 0.2].mean()
        late = gap[t12 > 1.0].mean()
        assert late < early / 3


class TestSimulateTrial:
    def test_arm_sizes(self):
        data = simulate_trial(ScenarioSpec(scenario_id=2, n=600, seed=0))
        assert len(data.arm(0)) == 300 and len(data.arm(1)) == 300

    def test_censored_rows_share_time(self):
        data = simulate_trial(ScenarioSpec(scenario_id=2, n=400, seed=1))
        no_s = data.s_event == 0
        np.testing.assert_array_equal(data.s_time[no_s], data.t_time[no_s])

    def test_four_observable_cases_partition(self):
        data = simulate_trial(ScenarioSpec(scenario_id=3, n=2000, seed=2,
                                           censoring=CensoringConfig(admin_time=2.0)))
        cases = {(int(a), int(b)) for a, b in zip(data.s_event, data.t_event)}
        assert cases == {(0, 0), (0, 1), (1, 0), (1, 1)}
        assert len(data) == sum(((data.s_event == a) & (data.t_event == b)).sum()
                                for a, b in cases)

    def test_byte_identical_csv(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        simulate_trial(ScenarioSpec(scenario_id=2, n=600, seed=7)).write_csv(p1)
        simulate_trial(ScenarioSpec(scenario_id=2, n=600, seed=7)).write_csv(p2)
        assert p1.read_bytes() == p2.read_bytes()
        simulate_trial(ScenarioSpec(scenario_id=2, n=600, seed=8)).write_csv(p2)
        assert p1.read_bytes() != p2.read_bytes()

    def test_csv_round_trip(self, tmp_path):
        data = simulate_trial(ScenarioSpec(scenario_id=4, n=100, seed=3), complete=True)
        p = tmp_path / "d.csv"
        data.write_csv(p, include_extra=True)
        back = TrialData.read_csv(p)
        np.testing.assert_array_equal(back.z, data.z)
        np.testing.assert_allclose(back.t_time, data.t_time, rtol=0, atol=0)
        np.testing.assert_allclose(back.extra["omega_12_0"], data.extra["omega_12_0"])

    def test_transition_counts_tally(self):
        data = simulate_trial(ScenarioSpec(scenario_id=2, n=600, seed=4))
        counts = transition_counts(data)
        arm0 = data.arm(0)
        assert counts[(0, "12")] == int(arm0.s_event.sum())
        assert counts[(0, "13")] == int(((arm0.s_event == 0) & (arm0.t_event == 1)).sum())
        assert counts[(0, "23")] == int(((arm0.s_event == 1) & (arm0.t_event == 1)).sum())

    def test_complete_export_consistency(self):
        data = simulate_trial(ScenarioSpec(scenario_id=2, n=500, seed=5), complete=True)
        ill = data.extra["latent_t12"] < data.extra["latent_t13"]
        observed_s = data.s_event == 1
        assert np.all(ill[observed_s])
        np.testing.assert_allclose(data.s_time[observed_s],
                                   data.extra["latent_t12"][observed_s])


class TestCensoringConfig:
    def test_at_least_one_mechanism(self):
        with pytest.raises(DomainError):
            CensoringConfig(admin_time=None, random_rate=0.0)

    def test_random_censoring_rate(self):
        arm = ArmModel.from_scales(1e-9, 1e-9, 1.0)
        n = 100_000
        cols = simulate_arm(arm, np.zeros(n), np.zeros(n), np.zeros(n),
                            CensoringConfig(admin_time=None, random_rate=2.0), _rng(12))
        # everyone censored; censor times ~ Exp(2)
        assert cols["t_event"].sum() == 0
        assert cols["t_time"].mean() == pytest.approx(0.5, abs=0.01)


class TestDataValidation:
    def test_invariant_violations_rejected(self):
        with pytest.raises(DataError):
            TrialData([0], [0], [2.0], [0], [1.0], [1])  # s_event=0 but s != t
        with pytest.raises(DataError):
            TrialData([0], [2], [1.0], [1], [2.0], [1])  # z not binary
        with pytest.raises(DataError):
            TrialData([0], [0], [3.0], [1], [2.0], [1])  # s after t
