"""Finite-truncation workbench for classifying spaces of simplicial groups."""

from .errors import (
    BudgetExceeded,
    CapExceeded,
    CompositionError,
    FactorizationFailure,
    InsufficientTruncation,
    NotSimplicial,
    VerificationFailure,
)
from .ordinal import (
    EMPTY,
    OrdinalMap,
    coface,
    codegeneracy,
    compose,
    enumerate_maps,
    epi_mono_factor,
    identity_map,
    monoidal_sum,
)
from .groups import (
    FiniteGroup,
    FpPresentation,
    TauDescriptor,
    builtin_group,
    count_admissible,
    cyclic,
    dihedral,
    enumerate_admissible,
    extraspecial_32,
    hom_enumeration,
    quaternion,
    subgroup_closure,
    symmetric,
    tuple_admissible,
    verbal_stage,
)
from .simplicial import (
    Decalage0,
    KanSuspension,
    SimplexRef,
    SimplicialMap,
    SimplicialSet,
    StandardSimplex,
    TruncatedComplex,
    check_simplicial_map,
    circle_complex,
    truncate,
    verify_simplicial_map,
)
from .simplicial_groups import (
    AbelianNerveGroup,
    DiscreteSimplicialGroup,
    LoopGroup,
    LoopVsPi1Dec,
    MilnorFK,
    Pi1DecSimplex,
    UnderlyingPointedSet,
    pi1_presentation,
)
from .wbar import (
    BarConstruction,
    BarTupleHom,
    TauBarConstruction,
    TotalBarConstruction,
    bar_tau_membership,
    decode_hom,
    encode_hom,
    kappa,
    kappa_tau,
    unit_map,
    verify_splitting_composite,
)
from .bisimplicial import (
    Diagonal,
    FatResolution,
    GrothendieckNerve,
    NerveBisimplicial,
    TauGrothendieckNerve,
    TauNerveBisimplicial,
    TotalComplex,
    TotalShift,
    Transpose,
    bousfield_kan_map,
    bar_to_total_nerve,
    category_nerve_to_total,
    cegarra_remedios_map,
    grothendieck_membership,
    total_nerve_to_bar,
    total_to_category_nerve,
)
from .homology import (
    ChainComplex,
    HomologyGroup,
    homology,
    homology_of_complex,
    homology_report,
    normalized_chains,
    smith_normal_form,
)
from .bundles import (
    PrincipalBundle,
    TransitionAssignment,
    bundle_from_classifying_map,
    canonical_pseudo_section,
    classifying_map_r_hat,
    random_classifying_map,
    random_complex,
    tau_atlas_check,
    transition_element,
    transition_functor_check,
)
