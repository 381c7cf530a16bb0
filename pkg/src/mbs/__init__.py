"""Combinatorial calculus of multibranched surfaces.

Validation and invariants, integer homology via Smith normal form, the
IX/XI/IH move calculus with maximal-spreading normalization, canonical
forms and isomorphism certificates, bounded move-equivalence search, and
the minor partial order with obstruction screens.
"""

from .algebra import (
    ChainComplex,
    DecompositionSummary,
    HomologyProfile,
    IntegerMatrix,
    SmithDecomposition,
    boundary_euler,
    build_chain_complex,
    decomposition_summary,
    homology_profile,
    smith_normal_form,
)
from .errors import (
    FixtureError,
    IneligibleMoveError,
    MbsError,
    ModeError,
    ReplayError,
    SchemaError,
    TheoremViolationError,
    UnknownIdError,
)
from .fixtures import (
    build_fixture,
    closed_surface,
    disjoint_union,
    moebius_annulus,
    quasi_pure,
    random_surface,
    theta,
)
from .io import load, parse, serialize
from .isomorphism import (
    CanonicalForm,
    IsoCertificate,
    SymmetryMode,
    are_isomorphic,
    canonical_form,
    canonical_hash,
)
from .minors import (
    ContractRegion,
    MinorOutcome,
    ObstructionFlags,
    RemoveRegion,
    contract_region,
    enumerate_reductions,
    is_minor,
    less_than,
    obstruction_screen,
    remove_region,
    tilde_equivalent,
)
from .model import (
    ANNULUS,
    MOEBIUS,
    BranchLocus,
    LocusProfile,
    MultibranchedSurface,
    Region,
    RegionClass,
    RegionTopology,
    ValidityMode,
    classify_region,
    connected_components,
    euler_characteristic,
    locus_profile,
    validate,
)
from .moves import (
    IXSite,
    MoebiusSplit,
    MoveRecord,
    MoveStep,
    NormalSplit,
    QuasiSplit,
    apply_ih,
    apply_ix,
    apply_move,
    apply_xi,
    enumerate_ix,
    enumerate_xi,
    is_maximally_spread_region,
    is_maximally_spread_surface,
    maximally_spread,
    replay,
    spread_potential,
)
from .search import (
    ExhaustedWithinBudget,
    Found,
    InvariantMismatch,
    SearchBudget,
    neighbors,
    random_walk,
    search_equivalence,
)

__version__ = "0.1.0"
