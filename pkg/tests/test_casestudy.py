import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_force_reduced_state, rng_from
from subkraus.casestudy import (
    DampingRates,
    ModelParams,
    bose_occupation,
    closed_form_b,
    closed_form_subsystem_map,
    composite_hamiltonian,
    composite_kraus,
    damping_rates,
    ohmic_spectral_density,
    qubit_state,
    to_schrodinger,
)
from subkraus.channels import (
    apply_map,
    channel_distance,
    completeness_defect,
    maximally_mixed,
    pure_state,
)
from subkraus.linalg import evolution_unitary
from subkraus.reduction import Bipartition, reduce_subsystem

seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestDampingRates:
    def test_symmetric_coupling_gives_equal_rates(self):
        params = ModelParams(omega=1.0, beta=0.0, temperature=5.0, alpha=0.02, nu_c=4.0)
        rates = damping_rates(params)
        assert rates.gamma1 == pytest.approx(rates.gamma2, abs=0.0)

    def test_regression_constants(self):
        # frozen from an independent 40-digit evaluation of the rate formula
        params = ModelParams(
            omega=1.0, beta=0.2, temperature=10.0, alpha=0.01, nu_c=5.0, nu_max=50.0
        )
        rates = damping_rates(params)
        assert rates.gamma1 == pytest.approx(0.95402542030734614, rel=1e-14)
        assert rates.gamma2 == pytest.approx(1.00310649192999490, rel=1e-14)

    def test_low_temperature_limit(self):
        params = ModelParams(omega=1.0, beta=0.2, temperature=1e-3, alpha=0.01, nu_c=5.0)
        rates = damping_rates(params)
        assert rates.gamma1 < 1e-10
        assert rates.gamma2 < 1e-10

    def test_printed_occupation_sign_rejected(self):
        params = ModelParams(omega=1.0, beta=0.2, temperature=10.0, alpha=0.01, nu_c=5.0)
        assert bose_occupation(1.1, 10.0, "printed") < 0
        with pytest.raises(ValueError, match="negative rates"):
            damping_rates(params, convention="printed")

    def test_nonpositive_frequency_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            ModelParams(omega=0.5, beta=1.2, temperature=10.0, alpha=0.01, nu_c=5.0)

    def test_negative_rates_rejected(self):
        with pytest.raises(ValueError):
            DampingRates(-0.1, 0.5)

    def test_tau_and_asymmetry(self):
        rates = DampingRates(0.3, 1.0)
        assert rates.tau(2.0) == pytest.approx(2.6)
        assert rates.asymmetry == pytest.approx(-0.7 / 1.3)
        with pytest.raises(ValueError):
            _ = DampingRates(0.0, 0.0).asymmetry

    def test_ohmic_density(self):
        assert ohmic_spectral_density(1.1, 0.01, 5.0) == pytest.approx(
            0.011 * math.exp(-0.22), rel=1e-15
        )

    def test_unknown_convention_rejected(self):
        with pytest.raises(ValueError, match="convention"):
            bose_occupation(1.0, 1.0, "bogus")


class TestCompositeKraus:
    def test_initial_time_is_identity(self):
        kmap = composite_kraus(0.0, DampingRates(0.3, 1.0))
        for op in kmap.operators[:7]:
            assert np.abs(op).max() == 0.0
        np.testing.assert_allclose(kmap.operators[7], -np.eye(4), atol=1e-15)

    def test_frozen_when_rates_vanish(self):
        kmap = composite_kraus(5.0, DampingRates(0.0, 0.0))
        np.testing.assert_allclose(kmap.operators[7], -np.eye(4), atol=1e-15)

    def test_k5_matrix_entries(self):
        rates = DampingRates(0.3, 1.0)
        t = 0.07
        k5 = composite_kraus(t, rates).operators[4]
        value = (1 - math.exp(-16 * t * rates.gamma2)) / 2
        assert k5[1, 1] == pytest.approx(-value, abs=1e-15)
        assert k5[3, 3] == pytest.approx(value, abs=1e-15)
        assert np.abs(np.diag([0.0, -value, 0.0, value]) - k5).max() < 1e-15

    def test_k1_matrix_entries(self):
        rates = DampingRates(0.3, 1.0)
        t = 0.07
        k1 = composite_kraus(t, rates).operators[0]
        value = 1j * math.sqrt(1 - math.exp(-32 * t * rates.gamma2)) / 2
        assert k1[1, 3] == pytest.approx(value, abs=1e-15)
        assert k1[3, 1] == pytest.approx(np.conj(value), abs=1e-15)

    def test_k6_k3_use_gamma1(self):
        rates = DampingRates(0.3, 1.0)
        t = 0.07
        kmap = composite_kraus(t, rates)
        assert kmap.operators[5][0, 0] == pytest.approx(
            (1 - math.exp(-16 * t * rates.gamma1)) / 2, abs=1e-15
        )
        assert kmap.operators[2][0, 2] == pytest.approx(
            math.sqrt(1 - math.exp(-32 * t * rates.gamma1)) / 2, abs=1e-15
        )

    @given(seeds)
    @settings(max_examples=30)
    def test_hermitian_and_complete(self, seed):
        rng = rng_from(seed)
        rates = DampingRates(float(rng.uniform(0.05, 2.0)), float(rng.uniform(0.05, 2.0)))
        t = float(rng.uniform(0.0, 8.0 / (rates.gamma1 + rates.gamma2)))
        kmap = composite_kraus(t, rates)
        for op in kmap.operators:
            assert np.abs(op - op.conj().T).max() < 1e-12
        assert completeness_defect(kmap) < 1e-8

    def test_completeness_on_grid_with_logged_maximum(self):
        rates = DampingRates(0.7, 0.4)
        total = rates.gamma1 + rates.gamma2
        worst = 0.0
        for tau in np.linspace(0.0, 1.0, 100):
            worst = max(worst, completeness_defect(composite_kraus(tau / total, rates)))
        print(f"measured composite completeness maximum over grid: {worst:.3e}")
        assert worst < 1e-8

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            composite_kraus(-0.1, DampingRates(0.3, 1.0))


class TestClosedForms:
    def test_initial_values(self):
        b = closed_form_b(0.0, DampingRates(0.3, 1.0), 0.3)
        np.testing.assert_allclose(b, (2.0, 0.0, 0.0, 0.0), atol=1e-15)

    def test_long_time_limit(self):
        b = closed_form_b(1e4, DampingRates(0.3, 1.0), 0.3)
        np.testing.assert_allclose(b, (0.5, 0.5, 0.5, 0.5), atol=1e-12)

    @given(seeds)
    def test_weights_sum_to_two(self, seed):
        rng = rng_from(seed)
        rates = DampingRates(float(rng.uniform(0, 2)), float(rng.uniform(0, 2)))
        b = closed_form_b(float(rng.uniform(0, 5)), rates, float(rng.uniform(0, 1)))
        assert sum(b) == pytest.approx(2.0, abs=1e-10)
        assert b[1] == b[2]

    def test_monotone_landmarks(self):
        rates = DampingRates(0.3, 1.0)
        ts = np.linspace(0.0, 2.0, 80)
        values = [closed_form_b(t, rates, 0.4) for t in ts]
        b0 = [v[0] for v in values]
        b1 = [v[1] for v in values]
        assert all(x >= y - 1e-12 for x, y in zip(b0, b0[1:]))  # nonincreasing
        assert all(x <= y + 1e-12 for x, y in zip(b1, b1[1:]))  # nondecreasing
        assert b0[0] == pytest.approx(2.0) and b1[0] == pytest.approx(0.0)

    def test_subsystem_map_completeness_is_exact(self):
        kmap = closed_form_subsystem_map(0.23, DampingRates(0.3, 1.0), 0.7)
        assert completeness_defect(kmap) < 1e-12

    def test_unital_on_maximally_mixed(self):
        kmap = closed_form_subsystem_map(0.23, DampingRates(0.3, 1.0), 0.7)
        out = apply_map(kmap, maximally_mixed(2))
        np.testing.assert_allclose(out.matrix, np.eye(2) / 2, atol=1e-14)

    @given(seeds)
    @settings(max_examples=20)
    def test_algorithm_agrees_with_closed_form(self, seed):
        rng = rng_from(seed)
        rates = DampingRates(float(rng.uniform(0.1, 2)), float(rng.uniform(0.1, 2)))
        t = float(rng.uniform(0, 2))
        a = float(rng.uniform(0, 1))
        result = reduce_subsystem(
            composite_kraus(t, rates), Bipartition(2, 2), qubit_state(a)
        )
        closed = closed_form_subsystem_map(t, rates, a)
        assert channel_distance(result.subsystem_map, closed) < 1e-10

    def test_population_swap_symmetry(self):
        # a <-> 1 - a with the rates exchanged gives the same channel
        t = 0.31
        one = closed_form_b(t, DampingRates(0.3, 1.0), 0.8)
        two = closed_form_b(t, DampingRates(1.0, 0.3), 0.2)
        np.testing.assert_allclose(one, two, atol=1e-14)

    def test_end_to_end_populations(self):
        rates = DampingRates(0.3, 1.0)
        split = Bipartition(2, 2)
        for t in (0.05, 0.4, 1.1):
            for a in (0.0, 0.55, 1.0):
                b = closed_form_b(t, rates, a)
                evolved = apply_map(
                    closed_form_subsystem_map(t, rates, a), pure_state([1.0, 0.0])
                )
                np.testing.assert_allclose(
                    np.diag(evolved.matrix).real,
                    [(b[0] + b[3]) / 2, b[1]],
                    atol=1e-12,
                )
                brute = brute_force_reduced_state(
                    composite_kraus(t, rates), split, pure_state([1.0, 0.0]), qubit_state(a)
                )
                np.testing.assert_allclose(evolved.matrix, brute, atol=1e-10)

    def test_invalid_population_parameter(self):
        with pytest.raises(ValueError):
            qubit_state(1.2)
        with pytest.raises(ValueError):
            closed_form_b(0.1, DampingRates(0.3, 1.0), -0.1)


class TestPictureTransforms:
    def test_free_hamiltonian_spectrum(self):
        omega, beta = 1.3, 0.4
        h = composite_hamiltonian(omega, beta)
        expected = np.diag(
            [omega + beta / 4, -beta / 4, -beta / 4, -omega + beta / 4]
        ).astype(complex)
        np.testing.assert_allclose(h, expected, atol=1e-15)
        u = evolution_unitary(h, 0.7)
        np.testing.assert_allclose(
            np.diag(u), np.exp(-1j * 0.7 * np.diag(expected)), atol=1e-13
        )

    def test_trivial_hamiltonian_leaves_map_unchanged(self):
        kmap = composite_kraus(0.2, DampingRates(0.3, 1.0))
        out = to_schrodinger(kmap, 0.9, omega=0.0, beta=0.0)
        for a, b in zip(kmap.operators, out.operators):
            np.testing.assert_allclose(a, b, atol=1e-14)

    @given(seeds)
    @settings(max_examples=15)
    def test_completeness_invariant(self, seed):
        rng = rng_from(seed)
        kmap = composite_kraus(float(rng.uniform(0, 1)), DampingRates(0.3, 1.0))
        out = to_schrodinger(kmap, float(rng.uniform(0, 3)), omega=1.0, beta=0.4)
        assert abs(completeness_defect(out) - completeness_defect(kmap)) < 1e-12

    def test_states_are_rotated(self):
        from subkraus.channels import apply_matrix

        rates = DampingRates(0.3, 1.0)
        t, omega, beta = 0.4, 1.1, 0.3
        kmap = composite_kraus(t, rates)
        rotated = to_schrodinger(kmap, t, omega, beta)
        u = evolution_unitary(composite_hamiltonian(omega, beta), t)
        rng = rng_from(9)
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        rho = (m @ m.conj().T) / np.trace(m @ m.conj().T).real
        direct = u @ apply_matrix(kmap, rho) @ u.conj().T
        np.testing.assert_allclose(apply_matrix(rotated, rho), direct, atol=1e-12)

    def test_single_qubit_transform_requires_zero_coupling(self):
        kmap = closed_form_subsystem_map(0.2, DampingRates(0.3, 1.0), 0.5)
        with pytest.raises(ValueError, match="beta"):
            to_schrodinger(kmap, 0.2, omega=1.0, beta=0.1, subsystem="qubit1")
        out = to_schrodinger(kmap, 0.2, omega=1.0, beta=0.0, subsystem="qubit1")
        assert completeness_defect(out) < 1e-12

    def test_dimension_checked(self):
        kmap = closed_form_subsystem_map(0.2, DampingRates(0.3, 1.0), 0.5)
        with pytest.raises(ValueError, match="4-dimensional"):
            to_schrodinger(kmap, 0.2, omega=1.0, beta=0.0, subsystem="composite")

    def test_unknown_subsystem_rejected(self):
        kmap = composite_kraus(0.2, DampingRates(0.3, 1.0))
        with pytest.raises(ValueError, match="subsystem"):
            to_schrodinger(kmap, 0.2, omega=1.0, beta=0.0, subsystem="qubit2")


class TestReducedChoiSpectrum:
    def test_reduced_map_choi_psd_on_grid(self):
        from subkraus.channels import choi_matrix, cp_verdict

        rates = DampingRates(0.7, 0.4)
        total = rates.gamma1 + rates.gamma2
        worst = 0.0
        for tau in np.linspace(0.0, 1.0, 20):
            result = reduce_subsystem(
                composite_kraus(tau / total, rates), Bipartition(2, 2), qubit_state(0.3)
            )
            verdict = cp_verdict(choi_matrix(result.subsystem_map))
            assert verdict.is_cp
            worst = min(worst, verdict.min_eigenvalue)
        assert worst >= -1e-10
