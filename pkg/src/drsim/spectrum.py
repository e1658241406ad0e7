"""Joint-spectrum diagonalization, branch labeling and dispersive quantities.

Eigenstates of H_qc are assigned labels (p, n): the n = 0 state of branch p
has the largest overlap with the product state |p>_q |0>_c, and the state at
n + 1 has the largest overlap with c^dag applied to the branch state at n.
Each eigenvector is consumed at most once; overlaps <= 0.5 end a branch.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .devices import SystemModel, TlsParams, TransmonParams
from .fock import cavity_lowering

DEFAULT_DENSE_CEILING = 6000

SEED_AMBIGUITY_TOL = 1e-6
OVERLAP_THRESHOLD = 0.5

BRANCH_NAMES = {0: "g", 1: "e", 2: "f"}


class DiagonalizationError(RuntimeError):
    pass


class LabelingError(RuntimeError):
    pass


def branch_name(p: int) -> str:
    return BRANCH_NAMES.get(p, f"p{p}")


@dataclass
class LabeledSpectrum:
    """Joint eigenpairs organized into labeled branches.

    energies[p] is the per-branch array of eigenenergies for n = 0..n_reliable[p];
    states[p] the matching eigenvectors (columns); label_overlaps[p] the overlap
    magnitude used at each labeling step.
    """

    energies: dict[int, np.ndarray]
    states: dict[int, np.ndarray]
    label_overlaps: dict[int, np.ndarray]
    n_reliable: dict[int, int]
    qubit_energies: np.ndarray
    qubit_states: np.ndarray
    trunc_dim: int

    def branch(self, p: int) -> np.ndarray:
        if p not in self.energies:
            raise LabelingError(f"branch {p} ({branch_name(p)}) was not labeled")
        return self.energies[p]

    def state(self, p: int, n: int) -> np.ndarray:
        return self.states[p][:, n]


def diagonalize_joint(model: SystemModel, ceiling: int = DEFAULT_DENSE_CEILING):
    """Full Hermitian eigendecomposition of H_qc, ascending energies."""
    dim = model.trunc.dim
    if dim > ceiling:
        raise DiagonalizationError(
            f"composite dimension {dim} exceeds the dense-solver ceiling {ceiling}"
        )
    h = model.joint_hamiltonian().matrix
    try:
        energies, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationError(f"dense eigensolver failed: {exc}") from exc
    return energies, vectors


def qubit_eigenbasis(model: SystemModel):
    """Eigenpairs of h_q, ascending."""
    return np.linalg.eigh(model.h_q)


def label_branches(
    eigenpairs,
    model: SystemModel,
    branches=(0, 1),
) -> LabeledSpectrum:
    """Assign (p, n) labels by recursive largest overlap.

    Branches are processed in order of seed energy, each walked greedily in
    n-order; an eigenvector is consumed at most once.  A branch ends when the
    best overlap drops to <= 0.5 or the spectrum is exhausted.
    """
    energies, vectors = eigenpairs
    dim = vectors.shape[0]
    cav_dim = model.trunc.cavity_dim

    q_energies, q_states = qubit_eigenbasis(model)
    gap = q_energies[1] - q_energies[0]
    detuning = model.omega_c - gap
    g_scale = abs(model.coupling.u)
    if detuning == 0 or abs(g_scale / detuning) >= 0.5:
        warnings.warn(
            f"|g/(omega_c - omega_q)| = "
            f"{abs(g_scale / detuning) if detuning else math.inf:.3g} "
            "is outside the dispersive regime; branch labels may be unreliable",
            stacklevel=2,
        )

    c_dag = np.kron(np.eye(model.trunc.q_dim), cavity_lowering(cav_dim)).conj().T

    consumed = np.zeros(dim, dtype=bool)

    # Seed each requested branch, then process branches by seed energy.
    seeds = {}
    for p in branches:
        vac = np.zeros(cav_dim)
        vac[0] = 1.0
        product = np.kron(q_states[:, p], vac)
        overlaps = np.abs(vectors.conj().T @ product)
        order = np.argsort(overlaps)[::-1]
        best, second = order[0], order[1]
        if overlaps[best] - overlaps[second] < SEED_AMBIGUITY_TOL:
            raise LabelingError(
                f"ambiguous seed for branch {branch_name(p)}: eigenstates "
                f"{best} (overlap {overlaps[best]:.6f}, energy {energies[best]:.6f}) and "
                f"{second} (overlap {overlaps[second]:.6f}, energy {energies[second]:.6f})"
            )
        seeds[p] = (int(best), float(overlaps[best]))

    out_energies: dict[int, np.ndarray] = {}
    out_states: dict[int, np.ndarray] = {}
    out_overlaps: dict[int, np.ndarray] = {}
    n_reliable: dict[int, int] = {}

    for p in sorted(branches, key=lambda p: energies[seeds[p][0]]):
        idx, ovl = seeds[p]
        if consumed[idx] or ovl <= OVERLAP_THRESHOLD:
            raise LabelingError(
                f"seed for branch {branch_name(p)} unavailable "
                f"(consumed={bool(consumed[idx])}, overlap={ovl:.3f})"
            )
        consumed[idx] = True
        branch_idx = [idx]
        branch_ovl = [ovl]
        while len(branch_idx) <= model.trunc.n_max:
            target = c_dag @ vectors[:, branch_idx[-1]]
            norm = np.linalg.norm(target)
            if norm == 0.0:
                break
            overlaps = np.abs(vectors.conj().T @ (target / norm))
            overlaps[consumed] = -1.0
            # argmax returns the first (lowest-energy) candidate on exact ties
            best = int(np.argmax(overlaps))
            if overlaps[best] <= OVERLAP_THRESHOLD:
                break
            if energies[best] <= energies[branch_idx[-1]]:
                # truncation-edge wandering: labels are no longer trustworthy
                break
            consumed[best] = True
            branch_idx.append(best)
            branch_ovl.append(float(overlaps[best]))

        e_branch = energies[branch_idx]
        out_energies[p] = e_branch
        out_states[p] = vectors[:, branch_idx]
        out_overlaps[p] = np.array(branch_ovl)
        n_reliable[p] = len(branch_idx) - 1

    return LabeledSpectrum(
        energies=out_energies,
        states=out_states,
        label_overlaps=out_overlaps,
        n_reliable=n_reliable,
        qubit_energies=q_energies,
        qubit_states=q_states,
        trunc_dim=dim,
    )


def cavity_frequency_curve(spec: LabeledSpectrum, p: int) -> np.ndarray:
    """Per-photon cavity frequency eps_{p,n+1} - eps_{p,n} (units omega_c)."""
    energies = spec.branch(p)
    if spec.n_reliable[p] < 2:
        raise LabelingError(
            f"branch {branch_name(p)} labeled only to n={spec.n_reliable[p]}"
        )
    return np.diff(energies)


def dispersive_quantities(spec: LabeledSpectrum) -> tuple[float, float]:
    """(omega_c', chi) from the single-photon gaps of the g and e branches.

    eps_{g,1} - eps_{g,0} = omega_c' + chi and eps_{e,1} - eps_{e,0} =
    omega_c' - chi.
    """
    for p in (0, 1):
        if p not in spec.energies or spec.n_reliable[p] < 1:
            raise LabelingError(
                f"dispersive quantities need branches g and e labeled to n >= 1"
            )
    gap_g = spec.energies[0][1] - spec.energies[0][0]
    gap_e = spec.energies[1][1] - spec.energies[1][0]
    return 0.5 * (gap_g + gap_e), 0.5 * (gap_g - gap_e)


@dataclass(frozen=True)
class DispersiveSummary:
    """Exact and perturbative dispersive quantities (units of omega_c)."""

    omega_c_ren: float
    chi: float
    omega_c_ren_pert: float
    chi_pert: float
    n_crit: float


def perturbative_estimates(params: TlsParams | TransmonParams, omega_c: float = 1.0):
    """Perturbation-theory dispersive shift and critical photon number.

    For the transmon the qubit frequency entering the formulas is the
    asymptotic estimate sqrt(8 E_C E_J) - E_C.  Returns
    (omega_c_ren_pert, chi_pert, n_crit); n_crit is math.inf at g = 0.
    """
    if isinstance(params, TlsParams):
        delta = params.omega_q - omega_c
        if delta == 0:
            raise ZeroDivisionError("resonant qubit: omega_q == omega_c")
        if params.g == 0:
            return omega_c, 0.0, math.inf
        chi_p = params.g**2 / (omega_c - params.omega_q)
        n_c = delta**2 / (4.0 * params.g**2)
        # the branch-averaged cavity frequency is unshifted at this order
        return omega_c, chi_p, n_c
    if isinstance(params, TransmonParams):
        omega_q = math.sqrt(8.0 * params.e_c * params.e_j) - params.e_c
        d1 = omega_c - omega_q
        d2 = omega_c - omega_q + params.e_c
        if d1 == 0 or d2 == 0:
            raise ZeroDivisionError(
                f"resonant denominator: omega_c - omega_q = {d1}, "
                f"omega_c - omega_q + E_C = {d2}"
            )
        if params.g == 0:
            return omega_c, 0.0, math.inf
        omega_ren = omega_c + params.g**2 / d2
        chi_p = params.g**2 * params.e_c / (d1 * d2)
        n_c = (abs(d2) ** 2 / (4.0 * params.g**2) - 1.0) / 3.0
        return omega_ren, chi_p, n_c
    raise TypeError(f"unsupported parameter type {type(params)!r}")


def dispersive_summary(
    spec: LabeledSpectrum, params: TlsParams | TransmonParams
) -> DispersiveSummary:
    omega_ren, chi = dispersive_quantities(spec)
    omega_ren_p, chi_p, n_c = perturbative_estimates(params)
    return DispersiveSummary(
        omega_c_ren=omega_ren,
        chi=chi,
        omega_c_ren_pert=omega_ren_p,
        chi_pert=chi_p,
        n_crit=n_c,
    )


def transmon_occupation_curve(spec: LabeledSpectrum, p: int) -> np.ndarray:
    """<N_t> in each labeled state of branch p, N_t = sum_{l>=1} l |l>_q<l|_q."""
    states = spec.states[p]
    q_dim = spec.qubit_states.shape[0]
    cav_dim = spec.trunc_dim // q_dim
    # amplitudes in the qubit eigenbasis: (q_dim, cav_dim, n_labels)
    amps = np.einsum(
        "qm,qcn->mcn",
        spec.qubit_states.conj(),
        states.reshape(q_dim, cav_dim, states.shape[1]),
    )
    weights = np.arange(q_dim, dtype=float)
    return np.einsum("m,mcn->n", weights, np.abs(amps) ** 2).real


def export_csv(spec: LabeledSpectrum, path) -> None:
    """Spectrum table: branch, n, energy, gap_to_next, label_overlap, transmon_occupation."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["branch", "n", "energy", "gap_to_next", "label_overlap", "transmon_occupation"]
        )
        for p in sorted(spec.energies):
            energies = spec.energies[p]
            occ = transmon_occupation_curve(spec, p)
            for n, energy in enumerate(energies):
                gap = f"{energies[n + 1] - energy:.17g}" if n + 1 < len(energies) else ""
                writer.writerow(
                    [
                        branch_name(p),
                        n,
                        f"{energy:.17g}",
                        gap,
                        f"{spec.label_overlaps[p][n]:.17g}",
                        f"{occ[n]:.17g}",
                    ]
                )
