import numpy as np
import pytest

from tempcert.errors import NotAViolation, ShapeMismatch
from tempcert.inequality import eval_IT_scenario
from tempcert.robustness import (
    SWEEP_CSV_HEADER,
    Depolarizing,
    ObservableTilt,
    UnitaryJitter,
    apply_noise,
    check_robustness_bounds,
    fit_loglog_slope,
    sweep,
    sweep_csv,
    sweep_report,
)
from tempcert.scenario import Observable, canonical_scenario

from conftest import rng_from


class TestApplyNoise:
    def test_zero_depolarizing_is_identity(self, canonical):
        assert apply_noise(canonical, Depolarizing(0.0)) is canonical

    def test_zero_tilt_is_identity(self, canonical):
        assert apply_noise(canonical, ObservableTilt(5, 0.0)) is canonical

    def test_depolarizing_closed_form(self, canonical):
        for p in np.geomspace(1e-6, 1e-2, 9):
            noisy = apply_noise(canonical, Depolarizing(p))
            v = eval_IT_scenario(noisy).value
            assert abs(v - (5 - 3 * p)) <= 1e-12

    def test_tilt_preserves_involutions(self, canonical):
        noisy = apply_noise(canonical, ObservableTilt(5,
0.37))
        assert noisy.observable(5).involution_residual <= 1e-12

    def test_jitter_seeded(self, canonical):
        a = apply_noise(canonical, UnitaryJitter(1e-2, rng_seed=3))
        b = apply_noise(canonical, UnitaryJitter(1e-2, rng_seed=3))
        for x, y in zip(a.observables, b.observables):
            assert np.array_equal(x.matrix, y.matrix)

    def test_tilt_requires_dim4(self, canonical):
        from conftest import conjugated_embedding
        s = conjugated_embedding(canonical, 8, rng_from(60))
        with pytest.raises(ShapeMismatch):
            apply_noise(s, ObservableTilt(5, 0.1))

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            Depolarizing(1.5)
        with pytest.raises(ValueError):
            ObservableTilt(7, 0.1)


class TestRobustnessBounds:
    def test_ideal_point_all_hold(self, canonical):
        checks = check_robustness_bounds(canonical)
        assert len(checks) == 28
        assert all(c.holds for c in checks)

    def test_depolarized_all_hold(self, canonical):
        checks = check_robustness_bounds(apply_noise(canonical, Depolarizing(0.005)))
        assert all(c.holds for c in checks)

    def test_jittered_family_all_hold(self, canonical):
        rng = rng_from(61)
        for k in range(100):
            strength = float(rng.uniform(1e-5, 3e-2))
            noisy = apply_noise(canonical, UnitaryJitter(strength, rng_seed=7000 + k))
            eps = 5 - eval_IT_scenario(noisy).value
            assert eps <= 0.01
            assert all(c.holds for c in check_robustness_bounds(noisy))

    def test_check_names_cover_families(self, canonical):
        names = {c.name for c in check_robustness_bounds(canonical)}
        assert "triple_123>=1-2eps" in names
        assert "-pair_36>=1-eps" in names
        assert "norm(A1-A2A3)<=4sqrt(eps)" in names
        assert "norm(A3+A6)<=2sqrt(eps)" in names
        assert "norm({A1,A5})<=14sqrt(eps)" in names

    def test_not_a_violation(self, canonical):
        # flipping the sign of A3 collapses the value to 1, deficit 4 > 2
        flipped = canonical.with_observable(
            3, Observable(-canonical.observable(3).matrix)
        )
        assert eval_IT_scenario(flipped).value <= 1 + 1e-12
        with pytest.raises(NotAViolation):
            check_robustness_bounds(flipped)


class TestSweep:
    def test_depolarizing_sweep(self, canonical):
        grid = list(np.geomspace(1e-5, 1e-2, 7))
        rows = sweep(canonical, lambda p: Depolarizing(p), grid)
        assert [r.param for r in rows] == sorted(grid)
        for r in rows:
            assert not r.failed
            assert abs(r.epsilon - 3 * r.param) <= 1e-12
            assert r.bounds_all_hold

    def test_csv_format(self, canonical):
        rows = sweep(canonical, lambda p: Depolarizing(p), [1e-4, 1e-3])
        text = sweep_csv(rows)
        lines = text.splitlines()
        assert lines[0] == SWEEP_CSV_HEADER
        assert len(lines) == 3
        assert text.endswith("\n")
        assert lines[1].endswith(",true")

    def test_csv_deterministic(self, canonical):
        grid = [1e-4, 1e-3]
        a = sweep_csv(sweep(canonical, lambda p: Depolarizing(p), grid))
        b = sweep_csv(sweep(canonical, lambda p: Depolarizing(p), grid))
        assert a == b

    def test_row_failure_does_not_stop_sweep(self, canonical):
        from conftest import conjugated_embedding
        s8 = conjugated_embedding(canonical, 8, rng_from(62))
        rows = sweep(s8, lambda t: ObservableTilt(5, t), [0.0, 0.01])
        assert rows[0].failed is False  # zero tilt short-circuits to identity
        assert rows[1].failed is True
        assert "ShapeMismatch" in rows[1].error

    def test_report_sidecar(self, canonical):
        rows = sweep(canonical, lambda p: Depolarizing(p), [1e-3])
        doc = sweep_report(rows)
        assert doc["rows"][0]["bounds"]
        assert all(b["holds"] for b in doc["rows"][0]["bounds"])

    def test_empty_grid_rejected(self, canonical):
        with pytest.raises(ValueError):
            sweep(canonical, lambda p: Depolarizing(p), [])


class TestSlopeFits:
    def test_pure_power_law(self):
        xs = np.geomspace(1e-6, 1e-2, 20)
        assert abs(fit_loglog_slope(xs, xs ** 0.5) - 0.5) <= 1e-12
        assert abs(fit_loglog_slope(xs, 3 * xs) - 1.0) <= 1e-12

    def test_window_excludes_floor_and_ceiling(self):
        # corrupt the extreme decades; the middle-two-decade fit should hold
        xs = np.geomspace(1e-8, 1e-0, 33)
        ys = xs ** 0.5
        ys[xs < 1e-7] = 1e-4      # machine floor
        ys[xs > 1e-1] = 0.3       # saturation
        assert abs(fit_loglog_slope(xs, ys) - 0.5) <= 0.05

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            fit_loglog_slope([1.0], [1.0])

    def test_tilt_distance_slope_slot5(self, canonical):
        thetas = np.geomspace(5e-4, 5e-2, 9)
        rows = sweep(canonical, lambda t: ObservableTilt(5, t), list(thetas))
        eps = [r.epsilon for r in rows]
        dist = [r.max_operator_distance for r in rows]
        slope = fit_loglog_slope(eps, dist)
        assert 0.25 <= slope <= 0.75

    def test_tilt_fidelity_deficit_slope_slot1(self, canonical):
        thetas = np.geomspace(5e-4, 5e-2, 9)
        rows = sweep(canonical, lambda t: ObservableTilt(1, t), list(thetas))
        eps = [r.epsilon for r in rows]
        deficit = [1 - r.fidelity for r in rows]
        slope = fit_loglog_slope(eps, deficit)
        assert 0.4 <= slope <= 1.1

    def test_fidelity_sandwich(self, canonical):
        # deficit >= 0 and <= 20 sqrt(eps) on every tested family at eps <= 1e-3
        rng = rng_from(63)
        cases = [Depolarizing(1e-4), Depolarizing(3e-4),
                 ObservableTilt(1, 5e-3), ObservableTilt(2, 5e-3),
                 ObservableTilt(5, 5e-3),
                 UnitaryJitter(3e-3, rng_seed=11), UnitaryJitter(1e-2, rng_seed=12)]
        from tempcert.certify import certify
        for noise in cases:
            report = certify(apply_noise(canonical, noise))
            eps = report.violation.deficit
            assert eps <= 1e-3
            deficit = 1 - report.fidelity
            assert -1e-12 <= deficit <= 20 * np.sqrt(max(eps, 0.0))
