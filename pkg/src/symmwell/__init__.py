"""symmwell: symmetrisation analysis of non-Hermitian few-well Hamiltonians.

Subpackages
-----------
linalg       eigendecomposition with left/right vectors, characteristic
             polynomials, conjugate-pair classification
model        tight-binding well chains with gain and loss, symmetry
             predicates, per-state balance
symmetriser  symmetrisation operators (spectral and Pauli-basis), closed-form
             admissibility conditions for two and three wells
explorer     parameter sweeps, region maps, exceptional-point location
cli          command-line front end with CSV/JSON emission
"""

from .linalg import (
    BiorthogonalizationError,
    EigenPair,
    EigenSolveError,
    PairingClassification,
    Spectrum,
    biorthonormalize,
    char_poly,
    classify_pairing,
    discriminant,
    eig,
    is_complex_symmetric,
)
from .model import (
    StateVector,
    WellParameters,
    anti_pt_anticommutator_norm,
    build_hamiltonian,
    is_anti_pt_potential,
    is_pt_symmetric,
    parity_matrix,
    shift_energy,
    state_balance,
)
from .symmetriser import (
    DeltaEpsilonBranches,
    Gamma3Solutions,
    PauliSolution,
    Symmetriser,
    SymmetriserError,
    anti_pt_parameters,
    antilinear_symmetry_residual,
    antilinear_T_residual,
    build_antilinear_T,
    build_spectral_symmetriser,
    charpoly_reality_residual,
    delta_epsilon_2mode,
    eigen2_closed,
    induced_antilinear_symmetry,
    pauli_coefficient_matrix,
    pauli_determinant,
    pauli_matrix,
    quasi_commutator_residual,
    semi_inverse_residual,
    semi_symmetrised_parameters,
    solve_3mode_gammas,
    solve_pauli_2mode,
    symmetrisation_residual,
)
from .explorer import (
    EPResult,
    Parametrisation,
    PlaneSpec,
    Region2Sample,
    Region3Sample,
    RealityPreconditionError,
    Sweep3Row,
    SweepRow,
    anti_pt_triple_path,
    find_ep,
    map_2mode_region,
    map_3mode_region,
    pt_dimer_path,
    sweep_2mode,
    sweep_3mode_antipt,
)

__version__ = "0.1.0"
