"""Quantum Fisher information and QFI-based quantum correlation of two-mode Gaussian states."""

from .correlation import (
    KAPPA,
    CorrelationReport,
    correlation_report,
    p2_closed,
    p2_numeric,
    q2_closed,
    q2_numeric,
    q2_sts,
)
from .metrology import (
    MetrologyPoint,
    interference_closed,
    interference_term,
    qcr_interval,
    ratio_profile,
    schwarz_check,
    total_qfi,
)
from .qfi import (
    GeneratorSpec,
    build_generator,
    gamma_dot,
    lqfi,
    qfi_general,
    qfi_isotropic,
)
from .states import (
    GaussianState,
    STSParams,
    SymmetricCMParams,
    apply_local_symplectic,
    apply_pure_loss,
    is_entangled,
    log_negativity,
    make_sts,
    make_two_mode_symmetric,
    pt_min_symplectic_eigenvalue,
    purity,
)
from .symplectic import (
    NU_MIN,
    NonPhysicalError,
    mode_permutation,
    partial_transpose,
    solve_phi,
    symplectic_eigenvalues,
    symplectic_form,
    symplectic_invariants,
)

__version__ = "0.1.0"
