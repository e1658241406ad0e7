"""Device Hamiltonians (two-level system and transmon) and their cavity coupling.

Energies are stored in units of hbar*omega_c and rates in units of omega_c;
the cavity frequency is the unit (omega_c = 1).  The coupling is restricted
to the form H_g = a_q (x) (u c^dag + u^* c) with a_q Hermitian, which covers
both devices and makes the displaced coupling D^dag(alpha) H_g D(alpha)
analytic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import (
    HERMITICITY_TOL,
    CompositeOperator,
    TruncationSpec,
    cavity_lowering,
)

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class TlsParams:
    """Two-level system: qubit frequency and cavity coupling (units of omega_c)."""

    omega_q: float = 0.75
    g: float = 3.0e-2

    def __post_init__(self):
        if self.omega_q <= 0:
            raise ValueError(f"omega_q must be positive, got {self.omega_q}")
        if self.g < 0:
            raise ValueError(f"g must be non-negative, got {self.g}")


@dataclass(frozen=True)
class TransmonParams:
    """Transmon in the charge basis |n>, n in [-charge_cutoff, charge_cutoff]."""

    e_c: float = 5.0e-2
    e_j: float = 1.6
    g: float = 3.0e-2
    n_g: float = 0.0
    charge_cutoff: int = 10

    def __post_init__(self):
        if self.e_c <= 0:
            raise ValueError(f"e_c must be positive, got {self.e_c}")
        if self.e_j < 0:
            raise ValueError(f"e_j must be non-negative, got {self.e_j}")
        if self.charge_cutoff < 1:
            raise ValueError(f"charge_cutoff must be >= 1, got {self.charge_cutoff}")


@dataclass(frozen=True)
class QubitLinearCoupling:
    """H_g = a_q (x) (u c^dag + u^* c) with a_q Hermitian."""

    a_q: np.ndarray
    u: complex

    def __post_init__(self):
        a_q = np.asarray(self.a_q, dtype=complex)
        if np.abs(a_q - a_q.conj().T).max() > HERMITICITY_TOL * max(np.abs(a_q).max(), 1.0):
            raise ValueError("coupling qubit operator must be Hermitian")
        object.__setattr__(self, "a_q", a_q)
        object.__setattr__(self, "u", complex(self.u))


@dataclass(frozen=True)
class SystemModel:
    """Qubit Hamiltonian, cavity coupling, cavity decay and truncation sizes."""

    h_q: np.ndarray
    coupling: QubitLinearCoupling
    kappa: float
    trunc: TruncationSpec
    omega_c: float = 1.0

    def __post_init__(self):
        h_q = np.asarray(self.h_q, dtype=complex)
        if h_q.shape != (self.trunc.q_dim, self.trunc.q_dim):
            raise ValueError(
                f"h_q shape {h_q.shape} does not match q_dim {self.trunc.q_dim}"
            )
        if np.abs(h_q - h_q.conj().T).max() > HERMITICITY_TOL * max(np.abs(h_q).max(), 1.0):
            raise ValueError("h_q must be Hermitian")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        object.__setattr__(self, "h_q", h_q)

    def coupling_composite(self) -> CompositeOperator:
        """H_g on the composite space."""
        u = self.coupling.u
        c = cavity_lowering(self.trunc.cavity_dim)
        lin = u * c.conj().T + np.conj(u) * c
        return CompositeOperator(
            np.kron(self.coupling.a_q, lin), self.trunc, hermitian=True
        )

    def joint_hamiltonian(self) -> CompositeOperator:
        """H_qc = H_q + H_g + omega_c c^dag c on the composite space."""
        n_cav = np.diag(np.arange(self.trunc.cavity_dim, dtype=float))
        mat = (
            np.kron(self.h_q, np.eye(self.trunc.cavity_dim))
            + self.coupling_composite().matrix
            + self.omega_c * np.kron(np.eye(self.trunc.q_dim), n_cav)
        )
        return CompositeOperator(mat, self.trunc, hermitian=True)


def build_tls(params: TlsParams, trunc: TruncationSpec, kappa: float) -> SystemModel:
    """Two-level model: h_q = (omega_q/2) Z, H_g = g X (c^dag + c)."""
    if trunc.q_dim != 2:
        raise ValueError(f"TLS model needs q_dim=2, got {trunc.q_dim}")
    h_q = 0.5 * params.omega_q * PAULI_Z
    coupling = QubitLinearCoupling(a_q=PAULI_X, u=params.g)
    return SystemModel(h_q=h_q, coupling=coupling, kappa=kappa, trunc=trunc)


def transmon_hamiltonian(params: TransmonParams) -> np.ndarray:
    """Charge-basis matrix 4E_C(n-N_g)^2 - (E_J/2)(|n><n+1| + h.c.)."""
    n = np.arange(-params.charge_cutoff, params.charge_cutoff + 1, dtype=float)
    h_q = np.diag(4.0 * params.e_c * (n - params.n_g) ** 2).astype(complex)
    off = -0.5 * params.e_j * np.ones(n.size - 1)
    h_q += np.diag(off, k=1) + np.diag(off, k=-1)
    return h_q


def transmon_charge_operator(params: TransmonParams) -> np.ndarray:
    """Diagonal charge operator sum_n (n - N_g)|n><n|."""
    n = np.arange(-params.charge_cutoff, params.charge_cutoff + 1, dtype=float)
    return np.diag(n - params.n_g).astype(complex)


def build_transmon(params: TransmonParams, trunc: TruncationSpec, kappa: float) -> SystemModel:
    """Transmon model with coupling H_g = i g (c^dag - c) sum_n (n-N_g)|n><n|."""
    q_dim = 2 * params.charge_cutoff + 1
    if trunc.q_dim != q_dim:
        raise ValueError(
            f"transmon with charge_cutoff={params.charge_cutoff} needs q_dim={q_dim}, "
            f"got {trunc.q_dim}"
        )
    coupling = QubitLinearCoupling(
        a_q=transmon_charge_operator(params), u=1j * params.g
    )
    return SystemModel(
        h_q=transmon_hamiltonian(params), coupling=coupling, kappa=kappa, trunc=trunc
    )


def displaced_coupling(model: SystemModel, alpha: complex) -> CompositeOperator:
    """D^dag(alpha) H_g D(alpha) = H_g + 2 Re(u^* alpha) (a_q (x) I).

    Uses the exact identity D^dag(alpha) c D(alpha) = c + alpha; no matrix
    exponential is involved.
    """
    shift = 2.0 * np.real(np.conj(model.coupling.u) * alpha)
    mat = model.coupling_composite().matrix + shift * np.kron(
        model.coupling.a_q, np.eye(model.trunc.cavity_dim)
    )
    return CompositeOperator(mat, model.trunc, hermitian=True)
