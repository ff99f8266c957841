import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsl_disturb.dynamics import (
    TRAJECTORY_COLUMNS,
    ModelConfig,
    QubitState,
    Trajectory,
    coherence_l1,
    coherence_trajectory,
    dephasing_factor,
    dephasing_factor_rate,
    evolve_state,
    read_trajectory_csv,
    time_grid,
)
from qsl_disturb.spectral import DisturbanceConfig, Lorentzian, Ohmic

ohmic_baths = st.builds(Ohmic, eta=st.floats(0.0, 6.0), s=st.floats(0.2, 2.0), omega_c=st.floats(0.2, 5.0))
lorentz_baths = st.builds(
    Lorentzian, gamma=st.floats(0.0, 20.0), lam=st.floats(0.2, 5.0), delta=st.floats(0.0, 10.0)
)
disturbances = st.builds(
    DisturbanceConfig, enabled=st.booleans(), t_a=st.floats(0.0, 5.0), sz_a=st.floats(-1.0, 1.0)
)
configs = st.builds(
    ModelConfig, bath=st.one_of(ohmic_baths, lorentz_baths), dist=disturbances, omega_s=st.floats(0.0, 3.0)
)


@st.composite
def states(draw):
    r = draw(st.floats(0.0, 1.0))
    theta = draw(st.floats(0.0, math.pi))
    phi = draw(st.floats(0.0, 2 * math.pi))
    return QubitState.from_bloch(
        r * math.sin(theta) * math.cos(phi), r * math.sin(theta) * math.sin(phi), r * math.cos(theta)
    )


S1 = Ohmic(1.0, 1.0, 1.0)
DIST1 = DisturbanceConfig(True, 1.0, 0.0)


class TestQubitState:
    def test_bloch_round_trip(self):
        st_ = QubitState.from_bloch(0.3, -0.4, 0.5)
        assert st_.bloch == pytest.approx((0.3, -0.4, 0.5))

    def test_maximally_coherent(self):
        st_ = QubitState.maximally_coherent()
        assert abs(st_.rho_eg) == pytest.approx(0.5)
        assert coherence_l1(st_) == pytest.approx(1.0)

    def test_bloch_coherence(self):
        r = 1 / math.sqrt(2)
        assert coherence_l1(QubitState.from_bloch(r, r, 0.0)) == pytest.approx(1.0, abs=1e-15)

    def test_diagonal_has_no_coherence(self):
        assert coherence_l1(QubitState(0.3)) == 0.0

    @pytest.mark.parametrize("args", [(1.2, 0j), (-0.1, 0j), (0.5, 0.6 + 0j)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            QubitState(*args)

    def test_long_bloch_vector(self):
        with pytest.raises(ValueError):
            QubitState.from_bloch(1.0, 0.5, 0.0)

    @given(states())
    def test_coherence_is_transverse_bloch_length(self, s):
        r1, r2, _ = s.bloch
        assert coherence_l1(s) == pytest.approx(math.hypot(r1, r2), abs=1e-15)


class TestDephasingFactor:
    def test_example(self):
        f = dephasing_factor(ModelConfig(S1, DIST1), 1.0)
        assert f == pytest.approx(2 / math.sqrt(10), rel=1e-14)
        assert f.imag == 0.0
        assert abs(f) == pytest.approx(0.63246, abs=1e-5)

    @given(configs)
    def test_unity_at_zero(self, cfg):
        assert dephasing_factor(cfg, 0.0) == 1.0

    @given(configs, st.floats(0.0, 20.0))
    def test_contractive(self, cfg, t):
        assert abs(dephasing_factor(cfg, t)) <= 1.0 + 1e-15

    @given(st.one_of(ohmic_baths, lorentz_baths), st.floats(0.01, 5.0), st.sampled_from([1.0, -1.0]))
    def test_polarized_ancilla_leaves_modulus(self, bath, ta, sz):
        t = np.linspace(0, 10, 41)
        f = dephasing_factor(ModelConfig(bath, DisturbanceConfig(True, ta, sz)), t)
        np.testing.assert_allclose(np.abs(f), np.exp(-bath.g_real(t)), rtol=1e-13, atol=1e-300)

    def test_disabled_matches_undisturbed_formula(self):
        cfg = ModelConfig(Ohmic(2.0, 0.5), DisturbanceConfig(False, 1.0, 0.0), omega_s=1.3)
        t = np.linspace(0, 5, 11)
        np.testing.assert_allclose(dephasing_factor(cfg, t), np.exp(1.3j * t - cfg.bath.g_real(t)), rtol=1e-15)

    def test_zero_ta_equivalent_to_disabled(self):
        bath = Lorentzian(10.0, 1.0, 1.0)
        t = np.linspace(0, 5, 11)
        a = dephasing_factor(ModelConfig(bath, DisturbanceConfig(True, 0.0, 0.2)), t)
        b = dephasing_factor(ModelConfig(bath), t)
        np.testing.assert_array_equal(a, b)

    @given(
        st.one_of(ohmic_baths, lorentz_baths),
        st.floats(0.01, 5.0),
        st.floats(0.0, 15.0),
        st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
    )
    def test_monotone_in_ancilla_polarization(self, bath, ta, t, a, b):
        lo, hi = sorted((a, b))
        f_lo = abs(dephasing_factor(ModelConfig(bath, DisturbanceConfig(True, ta, lo)), t))
        f_hi = abs(dephasing_factor(ModelConfig(bath, DisturbanceConfig(True, ta, hi)), t))
        assert f_hi >= f_lo * (1 - 1e-14)

    @given(configs, st.floats(0.05, 15.0))
    def test_rate_matches_central_difference(self, cfg, t):
        h = 1e-5 * max(1.0, t)
        fd = (dephasing_factor(cfg, t + h) - dephasing_factor(cfg, t - h)) / (2 * h)
        an = dephasing_factor_rate(cfg, t)
        assert abs(an - fd) <= 1e-6 * max(1.0, abs(an))

    def test_negative_time(self):
        with pytest.raises(ValueError):
            dephasing_factor(ModelConfig(S1), -1.0)

    def test_negative_omega_s(self):
        with pytest.raises(ValueError):
            ModelConfig(S1, omega_s=-1.0)


class TestEvolveState:
    def test_example(self):
        out = evolve_state(ModelConfig(S1, DIST1), QubitState(0.5, 0.5), 1.0)
        assert out.rho_eg == pytest.approx(0.31623, abs=1e-5)

    @given(configs, states())
    def test_identity_at_zero(self, cfg, s):
        assert evolve_state(cfg, s, 0.0) == s

    @given(configs, st.floats(0.0, 20.0), st.floats(0.0, 1.0))
    def test_diagonal_fixed(self, cfg, t, p):
        assert evolve_state(cfg, QubitState(p), t) == QubitState(p)

    @given(configs, states(), st.floats(0.0, 20.0))
    def test_populations_and_factorization(self, cfg, s, t):
        out = evolve_state(cfg, s, t)
        assert out.rho_ee == s.rho_ee
        assert coherence_l1(out) == pytest.approx(coherence_l1(s) * abs(dephasing_factor(cfg, t)), rel=1e-14, abs=1e-300)


def test_evolved_states_are_hermitian_and_positive():
    rng = np.random.default_rng(20240611)
    for _ in range(1000):
        if rng.random() < 0.5:
            bath = Ohmic(rng.uniform(0, 6), rng.uniform(0.2, 2.0), rng.uniform(0.2, 5))
        else:
            bath = Lorentzian(rng.uniform(0, 20), rng.uniform(0.2, 5), rng.uniform(0, 10))
        dist = DisturbanceConfig(bool(rng.integers(2)), rng.uniform(0, 5), rng.uniform(-1, 1))
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) / np.linalg.norm(v)
        out = evolve_state(ModelConfig(bath, dist), QubitState.from_bloch(*v), rng.uniform(0, 20))
        m = out.matrix
        assert np.allclose(m, m.conj().T, atol=0)
        assert np.real(np.trace(m)) == pytest.approx(1.0, abs=1e-15)
        assert np.linalg.eigvalsh(m).min() >= -1e-12


class TestTrajectory:
    def test_time_grid(self):
        t = time_grid(20.0, 4000)
        assert len(t) == 4001 and t[0] == 0.0 and t[-1] == 20.0

    @pytest.mark.parametrize("args", [(20.0, 1), (0.0, 10), (-1.0, 10)])
    def test_bad_grid(self, args):
        with pytest.raises(ValueError):
            time_grid(*args)

    def test_initial_values(self):
        s = QubitState.from_bloch(0.6, 0.0, 0.0)
        tr = coherence_trajectory(ModelConfig(Ohmic(1.0, 0.5), DIST1), s, 5.0, 100)
        assert tr.f[0] == 1.0
        assert tr.c_l1[0] == pytest.approx(0.6)
        assert np.all(np.abs(tr.f) <= 1.0)

    def test_pointwise_identity_with_evolve_state(self):
        cfg = ModelConfig(Lorentzian(10.0, 1.0, 1.0), DisturbanceConfig(True, 2.0, 0.3))
        s = QubitState.maximally_coherent(0.3)
        tr = coherence_trajectory(cfg, s, 4.0, 40)
        for t, c in zip(tr.t, tr.c_l1):
            assert c == pytest.approx(coherence_l1(evolve_state(cfg, s, t)), rel=1e-14, abs=1e-300)

    def test_diagonal_initial_state(self):
        tr = coherence_trajectory(ModelConfig(S1, DIST1), QubitState(0.2), 5.0, 10)
        assert np.all(tr.c_l1 == 0)

    @pytest.mark.parametrize("sz", [1.0, -1.0])
    def test_polarized_ancilla_matches_undisturbed(self, sz):
        s = QubitState.maximally_coherent()
        cfg = ModelConfig(Ohmic(3.0, 0.5), DisturbanceConfig(True, 1.0, sz))
        a = coherence_trajectory(cfg, s, 10.0, 200)
        b = coherence_trajectory(cfg.undisturbed(), s, 10.0, 200)
        np.testing.assert_allclose(a.c_l1, b.c_l1, rtol=1e-13)

    def test_unpolarized_ancilla_formula(self):
        s = QubitState.maximally_coherent()
        cfg = ModelConfig(Ohmic(3.0, 0.5), DisturbanceConfig(True, 1.0, 0.0))
        tr = coherence_trajectory(cfg, s, 10.0, 200)
        np.testing.assert_allclose(tr.c_l1, np.abs(np.cos(tr.g_i)) * np.exp(-tr.g_r), rtol=1e-13)

    def test_rejects_non_uniform_grid(self):
        t = np.array([0.0, 1.0, 3.0])
        z = np.zeros(3)
        with pytest.raises(ValueError):
            Trajectory(t, z.astype(complex), z, z, z)

    def test_rejects_decreasing_grid(self):
        t = np.array([0.0, -1.0, -2.0])
        z = np.zeros(3)
        with pytest.raises(ValueError):
            Trajectory(t, z.astype(complex), z, z, z)

    def test_immutable(self):
        tr = coherence_trajectory(ModelConfig(S1), QubitState.maximally_coherent(), 1.0, 4)
        with pytest.raises(ValueError):
            tr.c_l1[0] = 2.0

    def test_csv_round_trip(self, tmp_path):
        cfg = ModelConfig(Ohmic(1.3, 0.7), DisturbanceConfig(True, 0.4, 0.05))
        tr = coherence_trajectory(cfg, QubitState.maximally_coherent(), 3.0, 30)
        path = tmp_path / "t.csv"
        tr.to_csv(path)
        header = path.read_text().splitlines()[0]
        assert tuple(header.split(",")) == TRAJECTORY_COLUMNS
        back = read_trajectory_csv(path)
        for name in ("t", "f", "g_r", "g_i", "c_l1"):
            np.testing.assert_array_equal(getattr(back, name), getattr(tr, name))

    def test_csv_is_deterministic(self):
        cfg = ModelConfig(Ohmic(1.3, 0.7), DisturbanceConfig(True, 0.4, 0.05))
        out = []
        for _ in range(2):
            buf = io.StringIO()
            coherence_trajectory(cfg, QubitState.maximally_coherent(), 3.0, 30).write_csv(buf)
            out.append(buf.getvalue())
        assert out[0] == out[1]
