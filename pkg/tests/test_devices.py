"""Device Hamiltonians and the displaced cavity coupling."""

import numpy as np
import pytest

from drsim.devices import (
    QubitLinearCoupling,
    SystemModel,
    TlsParams,
    TransmonParams,
    build_tls,
    build_transmon,
    displaced_coupling,
    transmon_charge_operator,
    transmon_hamiltonian,
)
from drsim.fock import TruncationSpec, cavity_lowering, displacement_matrix
from helpers import make_tls, make_transmon


class TestParams:
    def test_tls_defaults_match_reference_point(self):
        p = TlsParams()
        assert p.omega_q == 0.75
        assert p.g == 3.0e-2

    def test_transmon_defaults_match_reference_point(self):
        p = TransmonParams()
        assert (p.e_c, p.e_j, p.g, p.n_g, p.charge_cutoff) == (
            5.0e-2,
            1.6,
            3.0e-2,
            0.0,
            10,
        )

    @pytest.mark.parametrize(
        "cls,kwargs",
        [
            (TlsParams, {"omega_q": 0.0}),
            (TlsParams, {"g": -1.0}),
            (TransmonParams, {"e_c": 0.0}),
            (TransmonParams, {"e_j": -1.0}),
            (TransmonParams, {"charge_cutoff": 0}),
        ],
    )
    def test_invalid_parameters_rejected(self, cls, kwargs):
        with pytest.raises(ValueError):
            cls(**kwargs)


class TestModelConstruction:
    def test_tls_qubit_hamiltonian_is_half_omega_z(self):
        m = make_tls(n_max=3)
        assert np.allclose(m.h_q, np.diag([0.375, -0.375]))

    def test_tls_requires_two_level_truncation(self):
        with pytest.raises(ValueError, match="q_dim=2"):
            build_tls(TlsParams(), TruncationSpec(n_max=3, q_dim=3), kappa=1e-3)

    def test_transmon_requires_matching_charge_dimension(self):
        with pytest.raises(ValueError, match="q_dim=21"):
            build_transmon(TransmonParams(), TruncationSpec(n_max=3, q_dim=5), kappa=1e-3)

    def test_kappa_must_be_positive(self):
        with pytest.raises(ValueError, match="kappa"):
            build_tls(TlsParams(), TruncationSpec(n_max=3, q_dim=2), kappa=0.0)

    def test_nonhermitian_qubit_hamiltonian_rejected(self):
        coupling = QubitLinearCoupling(a_q=np.eye(2), u=1.0)
        with pytest.raises(ValueError, match="Hermitian"):
            SystemModel(
                h_q=np.array([[0.0, 1.0], [0.0, 0.0]]),
                coupling=coupling,
                kappa=1e-3,
                trunc=TruncationSpec(n_max=2, q_dim=2),
            )

    def test_nonhermitian_coupling_operator_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            QubitLinearCoupling(a_q=np.array([[0.0, 1.0], [0.0, 0.0]]), u=1.0)


class TestTransmonHamiltonian:
    def test_zero_josephson_energy_is_diagonal_charging(self):
        p = TransmonParams(e_j=0.0, charge_cutoff=4)
        h = transmon_hamiltonian(p)
        n = np.arange(-4, 5, dtype=float)
        assert np.allclose(h, np.diag(4.0 * p.e_c * n**2))

    def test_gate_offset_shifts_charge_operator(self):
        p = TransmonParams(n_g=0.25, charge_cutoff=2)
        op = transmon_charge_operator(p)
        assert np.allclose(np.diag(op), np.arange(-2, 3) - 0.25)

    def test_tunneling_band_structure(self):
        p = TransmonParams(charge_cutoff=3)
        h = transmon_hamiltonian(p)
        off = np.diag(h, k=1)
        assert np.allclose(off, -0.5 * p.e_j)
        assert np.abs(np.diag(h, k=2)).max() == 0.0


class TestJointHamiltonian:
    def test_joint_hamiltonian_hermitian(self):
        for m in (make_tls(n_max=4), make_transmon(n_max=3, charge_cutoff=3)):
            h = m.joint_hamiltonian().matrix
            assert np.abs(h - h.conj().T).max() <= 1e-12

    def test_uncoupled_tls_energies_are_sums(self):
        m = make_tls(n_max=6, g=0.0)
        energies = np.linalg.eigvalsh(m.joint_hamiltonian().matrix)
        expected = np.sort(
            np.concatenate(
                [np.arange(7) + 0.375, np.arange(7) - 0.375]
            )
        )
        assert np.abs(energies - expected).max() <= 1e-12

    def test_coupling_composite_matches_kron_form(self):
        m = make_transmon(n_max=3, charge_cutoff=2)
        c = cavity_lowering(4)
        u = m.coupling.u
        expected = np.kron(m.coupling.a_q, u * c.conj().T + np.conj(u) * c)
        assert np.abs(m.coupling_composite().matrix - expected).max() <= 1e-14


class TestDisplacedCoupling:
    @pytest.mark.parametrize("alpha", [0.3, 1.0 + 1.0j, -2.0j, 3.0, -1.5 + 2.0j])
    @pytest.mark.parametrize("device", ["tls", "transmon"])
    def test_matches_matrix_exponential_oracle(self, alpha, device):
        """Conjugating H_g with the exponentiated displacement on a large
        guard-banded space must reproduce the analytic shifted form."""
        n_max = 8
        if device == "tls":
            small = make_tls(n_max=n_max)
            big = make_tls(n_max=80)
        else:
            small = make_transmon(n_max=n_max, charge_cutoff=2)
            big = make_transmon(n_max=80, charge_cutoff=2)
        d = displacement_matrix(
            alpha, TruncationSpec(n_max=80, q_dim=big.trunc.q_dim, pad=60)
        ).matrix
        h_g = big.coupling_composite().matrix
        conj = d.conj().T @ h_g @ d
        # restrict the oracle to the retained cavity block
        q_dim = big.trunc.q_dim
        conj4 = conj.reshape(q_dim, 81, q_dim, 81)
        block = conj4[:, : n_max + 1, :, : n_max + 1].reshape(
            small.trunc.dim, small.trunc.dim
        )
        analytic = displaced_coupling(small, alpha).matrix
        assert np.abs(block - analytic).max() <= 1e-9

    def test_zero_displacement_is_identity_shift(self):
        m = make_tls(n_max=4)
        assert np.abs(
            displaced_coupling(m, 0.0).matrix - m.coupling_composite().matrix
        ).max() == 0.0

    def test_displaced_coupling_stays_hermitian(self):
        m = make_transmon(n_max=4, charge_cutoff=2)
        op = displaced_coupling(m, 1.3 - 0.7j)
        assert op.hermitian
        assert np.abs(op.matrix - op.matrix.conj().T).max() <= 1e-12

    def test_shift_is_linear_in_real_part_of_u_conj_alpha(self):
        m = make_transmon(n_max=3, charge_cutoff=2)
        alpha = 0.8 + 0.4j
        shift = 2.0 * np.real(np.conj(m.coupling.u) * alpha)
        expected = m.coupling_composite().matrix + shift * np.kron(
            m.coupling.a_q, np.eye(4)
        )
        assert np.abs(displaced_coupling(m, alpha).matrix - expected).max() <= 1e-14
