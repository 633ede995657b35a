import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rspsim.errors import DegenerateBranchError, DomainError
from rspsim.qcore import (
    CNOT, H, I2, OVERLAP, PROBABILITY, X, Z, DensityMatrix, Gate, PovmElement, PureState,
    TargetQubit, apply_gate, apply_povm_element, basis_state, equivalent_up_to_phase, fidelity,
    make_target_state, measure_enumerate, partial_trace, tensor,
)

import bruteforce as bf

angles = st.floats(0, math.pi / 2)
phases = st.floats(0, 2 * math.pi, exclude_max=True)


def random_state(rng, n):
    return PureState(rng.normal(size=2**n) + 1j * rng.normal(size=2**n))


class TestTargetState:
    def test_theta_zero_is_ket0(self):
        np.testing.assert_allclose(make_target_state(0, 1.3).amplitudes, [1, 0], atol=1e-15)

    def test_theta_half_pi_is_ket1(self):
        np.testing.assert_allclose(make_target_state(math.pi / 2, 0).amplitudes, [0, 1], atol=1e-15)

    def test_symmetry_point_and_partner(self):
        s = make_target_state(math.pi / 4, math.pi / 2)
        p = make_target_state(math.pi / 4, math.pi / 2, partner=True)
        np.testing.assert_allclose(s.amplitudes, np.array([1, 1j]) / math.sqrt(2), atol=1e-15)
        np.testing.assert_allclose(p.amplitudes, np.array([1, -1j]) / math.sqrt(2), atol=1e-15)

    @given(angles, phases)
    def test_partner_is_orthonormal(self, theta, phi):
        t = TargetQubit(theta, phi)
        assert abs(np.vdot(t.state.amplitudes, t.partner.amplitudes)) < 1e-12

    @pytest.mark.parametrize("theta, phi, name", [(-0.1, 0, "theta"), (1.6, 0, "theta"),
                                                   (0.3, 2 * math.pi, "phi"), (0.3, -1, "phi")])
    def test_domain_errors_name_parameter(self, theta, phi, name):
        with pytest.raises(DomainError, match=name):
            make_target_state(theta, phi)

    def test_constructor_normalizes(self):
        s = PureState([1, 0, 0, 3])
        assert math.isclose(np.linalg.norm(s.amplitudes), 1, abs_tol=1e-12)
        assert s.num_qubits == 2

    def test_states_are_immutable(self):
        s = basis_state("0")
        with pytest.raises(ValueError):
            s.amplitudes[0] = 2


class TestGates:
    def test_identity(self):
        rng = np.random.default_rng(0)
        s = random_state(rng, 2)
        np.testing.assert_allclose(apply_gate(s, I2, 1).amplitudes, s.amplitudes, atol=1e-15)

    def test_cnot_truth_table(self):
        out = apply_gate(basis_state("10"), CNOT, (0, 1))
        np.testing.assert_allclose(out.amplitudes, basis_state("11").amplitudes)

    def test_cnot_reversed_control(self):
        out = apply_gate(basis_state("01"), CNOT, (1, 0))
        np.testing.assert_allclose(out.amplitudes, basis_state("11").amplitudes)

    def test_z_involution(self):
        rng = np.random.default_rng(1)
        s = random_state(rng, 3)
        back = apply_gate(apply_gate(s, Z, 2), Z, 2)
        np.testing.assert_allclose(back.amplitudes, s.amplitudes, atol=1e-12)

    def test_matches_kron_on_three_qubits(self):
        rng = np.random.default_rng(2)
        s = random_state(rng, 3)
        got = apply_gate(s, H, 1).amplitudes
        np.testing.assert_allclose(got, bf.kron(bf.I, bf.H, bf.I) @ s.amplitudes, atol=1e-14)
        got = apply_gate(s, CNOT, (2, 0)).amplitudes
        cnot20 = bf.kron(bf.I, bf.I, bf.P0) + bf.kron(bf.X, bf.I, bf.P1)
        np.testing.assert_allclose(got, cnot20 @ s.amplitudes, atol=1e-14)

    def test_arity_mismatch(self):
        with pytest.raises(DomainError):
            apply_gate(basis_state("00"), CNOT, (0,))
        with pytest.raises(DomainError):
            apply_gate(basis_state("00"), X, 2)
        with pytest.raises(DomainError):
            apply_gate(basis_state("00"), CNOT, (1, 1))

    def test_non_unitary_rejected(self):
        with pytest.raises(DomainError):
            Gate([[1, 1], [0, 1]])

    @settings(max_examples=50)
    @given(st.integers(0, 2**32 - 1))
    def test_norm_preserved(self, seed):
        rng = np.random.default_rng(seed)
        s = random_state(rng, 3)
        m = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
        out = apply_gate(s, Gate(m), (2, 0))
        # PureState renormalizes, so compare against the raw product
        raw = np.moveaxis(s.amplitudes.reshape(2, 2, 2), [2, 0], [0, 1]).reshape(4, 2)
        assert math.isclose(np.linalg.norm(m @ raw), 1, abs_tol=1e-12)
        assert math.isclose(np.linalg.norm(out.amplitudes), 1, abs_tol=1e-12)


class TestMeasurement:
    def test_bell(self):
        bell = PureState([1, 0, 0, 1])
        (b0, b1) = measure_enumerate(bell, 0)
        assert (b0.outcome, b1.outcome) == (0, 1)
        assert math.isclose(b0.probability, 0.5) and math.isclose(b1.probability, 0.5)
        np.testing.assert_allclose(b0.state.amplitudes, basis_state("00").amplitudes)
        np.testing.assert_allclose(b1.state.amplitudes, basis_state("11").amplitudes)

    def test_eigenstate_has_null_branch(self):
        b0, b1 = measure_enumerate(basis_state("0"), 0)
        assert b0.probability == 1 and b1.probability == 0 and b1.state is None

    def test_channel_after_alice_unitary_is_balanced(self):
        # oracle: branch a has Bob's vector U[a,0]|0> + t U[a,1]|1>, norm^2 = (1+t^2)/2
        t, phi = 0.3230, 0.77
        e = np.exp(1j * phi)
        U = np.array([[1, e], [np.conj(e), -1]]) / math.sqrt(2)
        expected = [(abs(U[a, 0]) ** 2 + t * t * abs(U[a, 1]) ** 2) / (1 + t * t) for a in (0, 1)]
        assert expected == pytest.approx([0.5, 0.5], abs=1e-15)
        s = apply_gate(PureState([1, 0, 0, t]), Gate(U), 0)
        probs = [b.probability for b in measure_enumerate(s, 0)]
        np.testing.assert_allclose(probs, expected, atol=1e-12)

    def test_completeness_on_random_states(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = int(rng.integers(1, 4))
            s = random_state(rng, n)
            for q in range(n):
                assert math.isclose(sum(b.probability for b in measure_enumerate(s, q)), 1, abs_tol=1e-12)

    def test_index_check(self):
        with pytest.raises(DomainError):
            measure_enumerate(basis_state("0"), 1)


class TestPovm:
    def test_identity_at_quarter_pi(self):
        theta = math.pi / 4
        m0 = PovmElement(np.diag([1, math.tan(theta) ** 2]))
        s = make_target_state(0.4, 1.0)
        p, out = apply_povm_element(s, m0)
        assert math.isclose(p, 1, abs_tol=1e-12)
        assert equivalent_up_to_phase(out, s)

    def test_partner_filtered_to_target(self):
        theta, phi = 0.7, 2.2
        partner = PureState([math.sin(theta), math.cos(theta) * np.exp(1j * phi)])
        p, out = apply_povm_element(partner, PovmElement(np.diag([1, math.tan(theta) ** 2])))
        assert math.isclose(p, math.tan(theta) ** 2, abs_tol=1e-12)
        assert equivalent_up_to_phase(out, make_target_state(theta, phi))

    def test_section_filter_on_two_qubits(self):
        B, C, P = 0.8, 0.7, 0.9  # C above the floor sqrt(P B^2 + P - 1) = 0.69
        scale = math.sqrt((B * B + 1) / (C * C + 1)) * math.sqrt(P)
        m = PovmElement(np.diag([scale, scale * C / B]))
        p, out = apply_povm_element(PureState([1, 0, 0, B]), m, 0)
        assert math.isclose(p, P, abs_tol=1e-12)
        assert equivalent_up_to_phase(out, PureState([1, 0, 0, C]))

    def test_rejects_non_contraction(self):
        with pytest.raises(DomainError):
            PovmElement(np.diag([1.1, 0.5]))

    def test_degenerate_branch(self):
        with pytest.raises(DegenerateBranchError):
            apply_povm_element(basis_state("0"), PovmElement(np.diag([0, 1])))


class TestPartialTrace:
    def test_product_state(self):
        rho = partial_trace(tensor(basis_state("0"), basis_state("1")), 0)
        np.testing.assert_allclose(rho.entries, [[1, 0], [0, 0]], atol=1e-15)

    @pytest.mark.parametrize("keep", [0, 1])
    def test_bell_is_maximally_mixed(self, keep):
        rho = partial_trace(PureState([1, 0, 0, 1]), keep)
        np.testing.assert_allclose(rho.entries, np.eye(2) / 2, atol=1e-15)

    def test_density_input_matches_pure_input(self):
        rng = np.random.default_rng(4)
        s = random_state(rng, 3)
        for keep in ([0], [1], [2], [0, 2], [1, 2]):
            np.testing.assert_allclose(partial_trace(s.density(), keep).entries,
                                       partial_trace(s, keep).entries, atol=1e-14)

    def test_post_cnot_offdiagonal_vanishes(self):
        # theta = 0.3 lies in lower region n = 1 at q = 0.95
        theta, phi, q, n = 0.3, 0.0, 0.95, 1
        t = math.tan(math.pi / 4 - bf.A(q, n + 1))
        y = bf.explicit_y(theta, q, n)
        reg = tensor(PureState([1, 0, 0, t]), PureState([1, y]))
        e = np.exp(1j * phi)
        reg = apply_gate(reg, Gate(np.array([[1, e], [np.conj(e), -1]]) / math.sqrt(2)), 0)
        rho = np.zeros((2, 2), complex)
        for br in measure_enumerate(reg, 0):
            s = apply_gate(br.state, Z, 1) if br.outcome else br.state
            rho += br.probability * partial_trace(apply_gate(s, CNOT, (1, 2)), 1).entries
        np.testing.assert_allclose(rho, bf.explicit_rho(theta, phi, t, y), atol=1e-13)
        basis = np.column_stack([bf.target(theta, phi), bf.partner(theta, phi)])
        c = basis.conj().T @ rho @ basis
        assert abs(c[0, 1]) <= 1e-12 and abs(c[1, 0]) <= 1e-12

    def test_product_state_reduces_to_pure(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            s = tensor(random_state(rng, 1), random_state(rng, 2))
            assert math.isclose(partial_trace(s, 0).purity(), 1, abs_tol=1e-10)

    @pytest.mark.parametrize("keep", [[], [0, 1]])
    def test_keep_must_be_proper(self, keep):
        with pytest.raises(DomainError):
            partial_trace(PureState([1, 0, 0, 1]), keep)


class TestFidelity:
    def test_self(self):
        s = make_target_state(0.9, 4.0)
        f = fidelity(s, s.density())
        assert math.isclose(f.value, 1, abs_tol=1e-12) and f.convention == PROBABILITY

    def test_maximally_mixed(self):
        f = fidelity(make_target_state(0.2, 1.0), DensityMatrix(np.eye(2)))
        assert math.isclose(f.value, 0.5, abs_tol=1e-12)

    @given(angles, phases)
    def test_partner_overlap_is_sin_2theta(self, theta, phi):
        prime = PureState([math.sin(theta), math.cos(theta) * np.exp(1j * phi)])
        f = fidelity(make_target_state(theta, phi), prime)
        assert f.convention == OVERLAP
        assert math.isclose(f.value, math.sin(2 * theta), abs_tol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            fidelity(make_target_state(0.1, 0), PureState([1, 0, 0, 1]))

    def test_density_validation(self):
        with pytest.raises(DomainError):
            DensityMatrix([[1, 1], [0, 1]])
        with pytest.raises(DomainError):
            DensityMatrix(np.diag([1.5, -0.5]))
