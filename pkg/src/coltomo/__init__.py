"""Tomography of N-qubit states from collective (permutation-invariant) measurements."""
from .binary_pauli import (
    BinaryTuple,
    HammingTriple,
    PauliMonomial,
    enumerate_triples,
    r_mnk,
)
from .collective_recon import (
    CollectiveExpectations,
    ParamState2Q,
    ParamState3Q,
    ProjectedQTable,
    avg_fidelity_3q,
    build_F,
    collective_expectations,
    fidelity,
    kernel_symmetric,
    lift_q,
    project_q,
    reconstruct_collective,
)
from .dicke_tomo import (
    DickeVector,
    OmegaMatrix,
    PovmElementTable,
    SymmetricDensity,
    build_A,
    build_K,
    build_omega,
    build_povm,
    build_psi,
    measure_probabilities,
    reconstruct_symmetric,
)
from .errors import (
    CapacityError,
    ConsistencyError,
    DimensionError,
    DomainError,
    IncompleteDataError,
    SingularFiducialError,
    TomographyError,
    UnsupportedFiducialError,
    ValidationError,
)
from .io import MatrixFile
from .phase_space import (
    DEFAULT_XI,
    FiducialState,
    PhaseSpaceSymbol,
    coherent_state,
    kernel,
    p_symbol,
    q_symbol,
    reconstruct_full,
)
from .special_fn import (
    f_bruteforce,
    f_closedform,
    g_bruteforce,
    g_closedform,
    psi_bruteforce,
    psi_closedform,
)

__version__ = "0.1.0"
