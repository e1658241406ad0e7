"""Dense operator algebra on the truncated qubit (x) cavity space.

Basis ordering is qubit-major throughout: composite index = m * (n_max + 1) + i
for qubit level m and cavity Fock index i.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

HERMITICITY_TOL = 1e-12


class DimensionMismatchError(ValueError):
    """Operator or state dimensions do not match the truncation."""


@dataclass(frozen=True)
class TruncationSpec:
    """Truncation sizes for the composite Hilbert space.

    n_max is the highest retained cavity Fock index (cavity dimension
    n_max + 1), q_dim the qubit-component dimension, and pad the guard-band
    size used when exponentiating truncated cavity operators.
    """

    n_max: int
    q_dim: int
    pad: int = 0

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.q_dim < 1:
            raise ValueError(f"q_dim must be >= 1, got {self.q_dim}")
        if self.pad < 0:
            raise ValueError(f"pad must be >= 0, got {self.pad}")

    @property
    def cavity_dim(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return self.q_dim * (self.n_max + 1)


@dataclass(frozen=True)
class CompositeOperator:
    """A D x D complex matrix over the composite qubit-major basis."""

    matrix: np.ndarray
    trunc: TruncationSpec
    hermitian: bool = False

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (self.trunc.dim, self.trunc.dim):
            raise DimensionMismatchError(
                f"matrix shape {mat.shape} does not match composite dimension "
                f"{self.trunc.dim}"
            )
        object.__setattr__(self, "matrix", mat)
        if self.hermitian:
            scale = max(np.abs(mat).max(), 1.0)
            defect = np.abs(mat - mat.conj().T).max()
            if defect > HERMITICITY_TOL * scale:
                raise ValueError(
                    f"operator flagged Hermitian has defect {defect:.3e} "
                    f"(tolerance {HERMITICITY_TOL * scale:.3e})"
                )

    def dagger(self) -> "CompositeOperator":
        return CompositeOperator(self.matrix.conj().T, self.trunc, self.hermitian)


def cavity_lowering(cavity_dim: int) -> np.ndarray:
    """Cavity annihilation matrix: <i|c|i+1> = sqrt(i+1)."""
    c = np.zeros((cavity_dim, cavity_dim), dtype=complex)
    idx = np.arange(cavity_dim - 1)
    c[idx, idx + 1] = np.sqrt(idx + 1.0)
    return c


def annihilation(trunc: TruncationSpec) -> CompositeOperator:
    """Identity on the qubit factor tensored with the cavity lowering operator."""
    mat = np.kron(np.eye(trunc.q_dim), cavity_lowering(trunc.cavity_dim))
    return CompositeOperator(mat, trunc)


def embed(qubit_op: np.ndarray, cavity_op: np.ndarray, trunc: TruncationSpec) -> CompositeOperator:
    """Kronecker product qubit_op (x) cavity_op in the qubit-major ordering."""
    qubit_op = np.asarray(qubit_op, dtype=complex)
    cavity_op = np.asarray(cavity_op, dtype=complex)
    if qubit_op.shape != (trunc.q_dim, trunc.q_dim):
        raise DimensionMismatchError(
            f"qubit factor shape {qubit_op.shape}, expected ({trunc.q_dim}, {trunc.q_dim})"
        )
    if cavity_op.shape != (trunc.cavity_dim, trunc.cavity_dim):
        raise DimensionMismatchError(
            f"cavity factor shape {cavity_op.shape}, expected "
            f"({trunc.cavity_dim}, {trunc.cavity_dim})"
        )
    mat = np.kron(qubit_op, cavity_op)
    herm = bool(
        np.abs(qubit_op - qubit_op.conj().T).max() <= HERMITICITY_TOL
        and np.abs(cavity_op - cavity_op.conj().T).max() <= HERMITICITY_TOL
    )
    return CompositeOperator(mat, trunc, hermitian=herm)


def default_pad(amp: complex) -> int:
    return max(20, 4 * math.ceil(abs(amp) ** 2))


def displacement_matrix(amp: complex, trunc: TruncationSpec) -> CompositeOperator:
    """exp(amp c^dag - amp^* c), exponentiated on a guard-banded cavity space.

    The exponential is evaluated on dimension n_max + 1 + pad and truncated
    back to n_max + 1, so the retained block is accurate; it acts as the
    identity on the qubit factor.
    """
    if not np.isfinite(amp):
        raise ValueError(f"displacement amplitude must be finite, got {amp}")
    pad = trunc.pad
    if abs(amp) ** 2 > pad:
        warnings.warn(
            f"guard band pad={pad} is smaller than |amp|^2={abs(amp)**2:.3g}; "
            "displacement accuracy degrades near the truncation edge",
            stacklevel=2,
        )
    big = trunc.cavity_dim + pad
    c = cavity_lowering(big)
    d_big = expm(amp * c.conj().T - np.conj(amp) * c)
    d_cav = d_big[: trunc.cavity_dim, : trunc.cavity_dim]
    mat = np.kron(np.eye(trunc.q_dim), d_cav)
    return CompositeOperator(mat, trunc)


def expect(op: CompositeOperator | np.ndarray, rho: np.ndarray) -> complex:
    """Tr(rho op)."""
    mat = op.matrix if isinstance(op, CompositeOperator) else np.asarray(op)
    rho = np.asarray(rho)
    if mat.shape != rho.shape:
        raise DimensionMismatchError(
            f"operator shape {mat.shape} vs state shape {rho.shape}"
        )
    return complex(np.einsum("ij,ji->", rho, mat))
