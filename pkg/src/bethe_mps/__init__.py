"""Exact two-fermion eigenstates of a periodic chain as matrix product states.

The eigenstates of two interacting spinless fermions on a ring are built
from coordinate Bethe ansatz solutions, factored into a pairing form with a
real skew-symmetric decomposition, and compiled into nearest-neighbour mode
rotations that grow the state from a simple reference inside a canonical
matrix product state.
"""

from .bethe import (
    BetheSolution,
    ChainParams,
    MomentumClass,
    bethe_polynomial,
    energy_gap,
    enumerate_spectrum,
    ground_and_gap,
    ground_state,
    heuristic_classes,
)
from .circuits import (
    GivensGate,
    GivensSchedule,
    PairRotation,
    fold_schedule,
    givens_angle,
    pair_cascade,
    unfold_sequence,
)
from .errors import (
    BetheMpsError,
    CapacityError,
    ComplexStateError,
    ConvergenceError,
    DegenerateGroundState,
    NumericalError,
    PreconditionError,
    StructuralError,
    UnsupportedConfiguration,
)
from .measures import EntropyReport, single_body_invariance_check, two_body_entropy, von_neumann
from .mps import (
    CanonicalMps,
    TwoSiteGate,
    apply_four_site,
    apply_two_site,
    block_entropy_profile,
    contract_to_vector,
    gate_from_givens,
    reduced_state_mps,
    unfold_to_eigenstate,
)
from .pipeline import Decomposition, decompose, eigenstate_mps
from .skewspec import YoulaFactors, youla
from .wavefunction import AntisymMatrix, UpperAmplitudes, amplitudes, antisymmetrize

__version__ = "0.1.0"
