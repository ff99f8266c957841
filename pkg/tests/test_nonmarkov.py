import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsl_disturb.calibration import OnsetTarget, calibrate_ta, onset_by_bisection, target_onset
from qsl_disturb.dynamics import ModelConfig, QubitState, Trajectory, coherence_trajectory
from qsl_disturb.nonmarkov import (
    SWEEP_COLUMNS,
    measure,
    measure_from_trajectory,
    onset,
    sweep,
    with_axis,
    write_sweep_csv,
)
from qsl_disturb.spectral import DisturbanceConfig, Lorentzian, Ohmic


def _traj(c):
    c = np.asarray(c, dtype=float)
    t = np.arange(len(c), dtype=float)
    return Trajectory(t, c.astype(complex), np.zeros_like(c), np.zeros_like(c), c)


class TestMeasureFromTrajectory:
    def test_example(self):
        r = measure_from_trajectory(_traj([1, 0.5, 0.7, 0.3]))
        assert r.n_value == pytest.approx(0.2)
        assert r.revival_intervals == ((1.0, 2.0),)

    def test_monotone(self):
        r = measure_from_trajectory(_traj(np.linspace(1, 0, 50)))
        assert r.n_value == 0.0 and r.revival_intervals == ()
        assert not r.is_non_markovian

    def test_merges_consecutive_rises(self):
        r = measure_from_trajectory(_traj([1, 0.2, 0.3, 0.4, 0.1, 0.2, 0.0]))
        assert r.revival_intervals == ((1.0, 3.0), (4.0, 5.0))
        assert r.n_value == pytest.approx(0.3)

    def test_noise_floor(self):
        r = measure_from_trajectory(_traj([1.0, 0.5, 0.5 + 1e-14, 0.4]))
        assert r.n_value == 0.0

    def test_too_short(self):
        with pytest.raises(ValueError):
            measure_from_trajectory(_traj([1.0, 0.5]))

    @given(st.lists(st.floats(0.0, 1.0), min_size=3, max_size=60))
    def test_invariants(self, c):
        r = measure_from_trajectory(_traj(c))
        assert r.n_value >= 0
        assert (r.n_value == 0) == (r.revival_intervals == ())
        flat = [x for iv in r.revival_intervals for x in iv]
        assert flat == sorted(flat)
        assert all(a < b for a, b in r.revival_intervals)
        assert all(0 <= x <= r.t_max_used for x in flat)

    @given(st.lists(st.floats(0.0, 1.0), min_size=3, max_size=60))
    def test_zero_for_non_increasing(self, c):
        c = sorted(c, reverse=True)
        assert measure_from_trajectory(_traj(c)).n_value == 0.0


class TestMeasure:
    def test_s1_undisturbed_is_markovian(self):
        assert measure(ModelConfig(Ohmic(1.0, 1.0))).n_value == 0.0

    def test_s3_undisturbed_is_non_markovian(self):
        assert measure(ModelConfig(Ohmic(1.0, 3.0))).n_value > 0

    def test_lorentzian_undisturbed_at_unit_detuning(self):
        assert measure(ModelConfig(Lorentzian(10.0, 1.0, 1.0))).n_value <= 1e-6

    def test_subohmic_disturbed_strong_coupling(self):
        cfg = ModelConfig(Ohmic(6.0, 0.5), DisturbanceConfig(True, 0.5, 0.05))
        assert measure(cfg).n_value > 1e-6

    def test_independent_of_input_phase(self):
        cfg = ModelConfig(Ohmic(5.0, 0.5), DisturbanceConfig(True, 0.5, 0.05))
        ref = measure(cfg, 10.0, 1000).n_value
        for phase in (0.0, 1.0, 2.5):
            tr = coherence_trajectory(cfg, QubitState.maximally_coherent(phase), 10.0, 1000)
            assert measure_from_trajectory(tr).n_value == pytest.approx(ref, rel=1e-13)

    @pytest.mark.parametrize("sz", [0.05, 0.3, 0.8])
    def test_sign_symmetry(self, sz):
        bath = Ohmic(5.0, 1.0)
        a = measure(ModelConfig(bath, DisturbanceConfig(True, 0.5, sz)), 10.0, 1000).n_value
        b = measure(ModelConfig(bath, DisturbanceConfig(True, 0.5, -sz)), 10.0, 1000).n_value
        assert a == pytest.approx(b, rel=1e-12, abs=1e-15)

    @pytest.mark.parametrize("bath", [Ohmic(1.0, 3.0), Ohmic(5.0, 0.5), Lorentzian(10.0, 1.0, 5.0)])
    @pytest.mark.parametrize("sz", [1.0, -1.0])
    def test_polarized_ancilla_matches_undisturbed(self, bath, sz):
        a = measure(ModelConfig(bath, DisturbanceConfig(True, 2.0, sz)), 10.0, 1000).n_value
        b = measure(ModelConfig(bath), 10.0, 1000).n_value
        assert a == pytest.approx(b, rel=1e-10, abs=1e-12)

    @pytest.mark.parametrize(
        "cfg",
        [
            ModelConfig(Ohmic(1.0, 3.0)),
            ModelConfig(Lorentzian(10.0, 1.0, 5.0)),
            ModelConfig(Ohmic(5.0, 0.5), DisturbanceConfig(True, 0.5, 0.05)),
        ],
    )
    def test_grid_refinement(self, cfg):
        coarse = measure(cfg, 20.0, 4000).n_value
        fine = measure(cfg, 20.0, 8000).n_value
        assert coarse > 0
        assert abs(fine - coarse) / coarse < 0.01


class TestSweep:
    def test_eta_zero(self):
        [(v, r)] = sweep(ModelConfig(Ohmic(1.0), DisturbanceConfig(True, 1.0, 0.0)), "eta", [0.0])
        assert v == 0.0 and r.n_value == 0.0

    def test_order_and_parallel_equivalence(self):
        cfg = ModelConfig(Ohmic(1.0, 1.0), DisturbanceConfig(True, 0.5, 0.05))
        values = [5.0, 0.0, 3.0, 4.5]
        serial = sweep(cfg, "eta", values, 10.0, 500)
        parallel = sweep(cfg, "eta", values, 10.0, 500, jobs=2)
        assert [v for v, _ in serial] == values
        assert serial == parallel

    def test_sz_axis_polarized(self):
        cfg = ModelConfig(Ohmic(1.0, 3.0))
        [(_, r)] = sweep(cfg, "sz_a", [1.0], 10.0, 1000)
        assert r.n_value == pytest.approx(measure(cfg, 10.0, 1000).n_value, rel=1e-10)

    def test_onset_pattern_s1(self):
        cfg = ModelConfig(Ohmic(0.0, 1.0), DisturbanceConfig(True, 0.5, 0.05))
        values = np.round(np.arange(0, 6.0001, 0.25), 10)
        res = sweep(cfg, "eta", values)
        flags = [r.n_value > 1e-6 for _, r in res]
        first = flags.index(True)
        assert not any(flags[:first]) and all(flags[first:])
        assert onset(res) == values[first]

    def test_onset_none(self):
        assert onset(sweep(ModelConfig(Ohmic(1.0)), "eta", [0.0, 1.0], 5.0, 100)) is None

    def test_with_axis(self):
        cfg = ModelConfig(Lorentzian(10.0, 2.0, 0.0))
        assert with_axis(cfg, "delta_over_lambda", 1.5).bath.delta == 3.0
        d = with_axis(cfg, "t_a", 2.0).dist
        assert d.enabled and d.t_a == 2.0

    @pytest.mark.parametrize(
        "cfg,axis,value",
        [
            (ModelConfig(Ohmic(1.0)), "gamma", 1.0),
            (ModelConfig(Lorentzian(1.0)), "eta", 1.0),
            (ModelConfig(Ohmic(1.0)), "omega_c", 2.0),
            (ModelConfig(Ohmic(1.0)), "eta", -1.0),
            (ModelConfig(Ohmic(1.0)), "sz_a", 2.0),
        ],
    )
    def test_invalid_axis_or_value(self, cfg, axis, value):
        with pytest.raises(ValueError):
            sweep(cfg, axis, [value])

    def test_non_finite(self):
        with pytest.raises(ValueError):
            sweep(ModelConfig(Ohmic(1.0)), "eta", [float("nan")])

    def test_csv(self, tmp_path):
        res = sweep(ModelConfig(Ohmic(1.0, 3.0)), "eta", [0.0, 1.0], 10.0, 500)
        path = tmp_path / "n.csv"
        write_sweep_csv(res, path)
        lines = path.read_text().splitlines()
        assert tuple(lines[0].split(",")) == SWEEP_COLUMNS
        assert lines[1] == "0,0,0,0"
        assert lines[2].endswith(",1")


class TestCalibration:
    def test_bisection(self):
        assert onset_by_bisection(lambda x: x > 2.345, 6.0, resolution=1e-4) == pytest.approx(2.345, abs=1e-4)
        assert onset_by_bisection(lambda x: False, 6.0) is None
        assert onset_by_bisection(lambda x: True, 6.0) == 0.0

    def test_target_onset_matches_grid_sweep(self):
        tgt = OnsetTarget("s=1", ModelConfig(Ohmic(0.0, 1.0)), "eta", 4.0, 6.0)
        found = target_onset(tgt, 0.5, resolution=1e-3)
        cfg = ModelConfig(Ohmic(0.0, 1.0), DisturbanceConfig(True, 0.5, 0.05))
        below = measure(with_axis(cfg, "eta", found - 2e-3)).n_value
        above = measure(with_axis(cfg, "eta", found)).n_value
        assert below <= 1e-6 < above

    def test_small_scan(self):
        res = calibrate_ta([0.5, 1.0], tolerance=0.5, resolution=5e-2)
        assert res.onsets.shape == (2, 4)
        ta, worst = res.best([0, 1, 2])
        assert ta == 0.5 and worst <= 0.5
        assert "t_a" in res.summary()
