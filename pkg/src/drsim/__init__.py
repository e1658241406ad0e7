"""Displaced-frame simulator for high-power dispersive readout in circuit QED."""

from .devices import (
    QubitLinearCoupling,
    SystemModel,
    TlsParams,
    TransmonParams,
    build_tls,
    build_transmon,
    displaced_coupling,
)
from .drives import DriveSpec, FrameMode, field_at, p_displacement, q_alpha_rhs, to_lab
from .engine import (
    FrameState,
    IntegratorConfig,
    IntegrationAbort,
    Trajectory,
    integrate,
    observables_at,
    prepare_initial,
    rhs,
)
from .fock import (
    CompositeOperator,
    TruncationSpec,
    annihilation,
    displacement_matrix,
    embed,
    expect,
)
from .spectrum import (
    DispersiveSummary,
    LabeledSpectrum,
    cavity_frequency_curve,
    diagonalize_joint,
    dispersive_quantities,
    dispersive_summary,
    label_branches,
    perturbative_estimates,
)

__version__ = "0.1.0"
