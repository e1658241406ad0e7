"""Classical drive fields, displacement frames and lab-frame conversions.

Three frame choices for the displacement alpha(t):

* lab      -- alpha = 0, the drive acts directly on the cavity;
* p_frame  -- alpha follows the closed-form displacement that cancels the
              direct cavity drive (qubit backaction not compensated);
* q_frame  -- alpha follows the self-consistent condition that pins the
              transformed-frame amplitude <c>_U at its initial value.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

import numpy as np

from .devices import SystemModel
from .fock import cavity_lowering


class FrameMode(enum.Enum):
    LAB = "lab"
    P_FRAME = "p_frame"
    Q_FRAME = "q_frame"


@dataclass(frozen=True)
class DriveSpec:
    """Monochromatic classical field E e^{i phase} e^{-i omega_d t} (units omega_c)."""

    amplitude: float
    omega_d: float
    phase: float = 0.0
    kind: str = "monochromatic"

    def __post_init__(self):
        if self.kind != "monochromatic":
            raise ValueError(f"unsupported drive kind {self.kind!r}")
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.omega_d <= 0:
            raise ValueError(f"omega_d must be positive, got {self.omega_d}")


def field_at(drive: DriveSpec, t: float) -> complex:
    """Classical field value E e^{i phase} e^{-i omega_d t}."""
    return drive.amplitude * cmath.exp(1j * drive.phase - 1j * drive.omega_d * t)


def p_displacement(drive: DriveSpec, omega_c: float, kappa: float, t) -> complex:
    """Closed-form displacement cancelling the direct cavity drive.

    Solves d alpha/dt = -(i omega_c + kappa/2) alpha - i E(t) with alpha(0)=0
    for the monochromatic field.
    """
    delta = drive.omega_d - omega_c
    denom = 0.25 * kappa**2 + delta**2
    coeff = (
        1j
        * drive.amplitude
        * cmath.exp(1j * drive.phase)
        * (0.5 * kappa + 1j * delta)
        / denom
    )
    return coeff * (
        np.exp(-(1j * omega_c + 0.5 * kappa) * np.asarray(t))
        - np.exp(-1j * drive.omega_d * np.asarray(t))
    )


def p_displacement_derivative(
    drive: DriveSpec, omega_c: float, kappa: float, t: float
) -> complex:
    """d P/dt, from the defining linear ODE."""
    alpha = p_displacement(drive, omega_c, kappa, t)
    return -(1j * omega_c + 0.5 * kappa) * alpha - 1j * field_at(drive, t)


def coupling_commutator_expectation(model: SystemModel, rho_u: np.ndarray) -> complex:
    """Tr(rho_U [D^dag H_g D, c]), evaluated analytically.

    The displacement shift commutes with c and [H_g, c] = -u a_q (x) I, so the
    expectation reduces to -u <a_q>_U.
    """
    q_dim = model.trunc.q_dim
    cav_dim = model.trunc.cavity_dim
    rho4 = rho_u.reshape(q_dim, cav_dim, q_dim, cav_dim)
    a_expect = np.einsum("aibi,ba->", rho4, model.coupling.a_q)
    return -model.coupling.u * complex(a_expect)


def cavity_amplitude(model: SystemModel, rho_u: np.ndarray) -> complex:
    """<c>_U = Tr(rho_U c)."""
    cav_dim = model.trunc.cavity_dim
    rho4 = rho_u.reshape(model.trunc.q_dim, cav_dim, model.trunc.q_dim, cav_dim)
    i = np.arange(1, cav_dim)
    # Tr(rho c) = sum_{a,i>=1} sqrt(i) rho[a, i, a, i-1]
    diag = np.einsum("aiaj->aij", rho4)
    return complex(np.sum(np.sqrt(i) * diag[:, i, i - 1]))


def q_alpha_rhs(
    alpha: complex,
    rho_u: np.ndarray,
    model: SystemModel,
    drive: DriveSpec,
    t: float,
) -> complex:
    """d alpha/dt for the self-consistent (pinning) displacement."""
    comm = coupling_commutator_expectation(model, rho_u)
    c_u = cavity_amplitude(model, rho_u)
    return (
        1j * comm
        - (1j * model.omega_c + 0.5 * model.kappa) * (c_u + alpha)
        - 1j * field_at(drive, t)
    )


def to_lab(obs_kind: str, rho_u: np.ndarray, alpha: complex, t: float, omega_d: float,
           model: SystemModel):
    """Convert a transformed-frame state to a lab-frame observable.

    Supported kinds: 'c' (cavity amplitude), 'photon_number',
    'real_quadrature' (2 Re(<c> e^{i omega_d t}), rotating-frame convention).
    """
    c_u = cavity_amplitude(model, rho_u)
    c_lab = c_u + alpha
    if obs_kind == "c":
        return c_lab
    if obs_kind == "photon_number":
        cav_dim = model.trunc.cavity_dim
        rho4 = rho_u.reshape(model.trunc.q_dim, cav_dim, model.trunc.q_dim, cav_dim)
        diag = np.einsum("aiai->ai", rho4)
        n_u = float(np.real(np.sum(np.arange(cav_dim) * diag)))
        return n_u + 2.0 * np.real(np.conj(alpha) * c_u) + abs(alpha) ** 2
    if obs_kind == "real_quadrature":
        return 2.0 * np.real(c_lab * cmath.exp(1j * omega_d * t))
    raise ValueError(f"unknown observable kind {obs_kind!r}")
