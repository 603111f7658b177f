"""Finite poset algebra: Hasse diagrams, gluings, and replayable growth scripts."""

from .core import Chain, NodeId, Poset, build, is_chain_in
from .errors import (
    BrokenEmbedding,
    CycleDetected,
    DanglingNode,
    EmptyPoset,
    EmptySet,
    InputError,
    InternalInvariantError,
    NotACover,
    NotAntichainCollection,
    NotASubcollection,
    NotCompatible,
    NotComplete,
    NotEmbedding,
    NotHeightOne,
    NotHeightZero,
    NotMinimal,
    NotPosetMap,
    NotUniqueCover,
    OverlappingCollection,
    ParseError,
    PosetError,
    StepMismatch,
    UnknownNode,
    VerificationFailure,
    ZeroDimensional,
)
from .morphism import (
    PosetMap,
    compose,
    embedding_violation,
    find_isomorphism,
    identity_map,
    inclusion_map,
    is_embedding,
    is_isomorphism,
    is_poset_map,
    is_saturated_embedding,
    is_saturated_subset,
    poset_map_violation,
    saturated_subset_violation,
    saturation_violation,
)
from .gluing import (
    CSequence,
    GluingReport,
    GluingWitness,
    PreservationReport,
    check_dim_min_preservation,
    compatibility_violation,
    fiber_collection,
    find_c_sequence,
    glue_along_collection,
    glue_along_complete,
    induced_map,
    is_c_sequence,
    is_height_zero_gluing,
    lift_cover,
    normalize_collection,
    verify_gluing,
)
from .chains import (
    ChainDecomposition,
    SplitResult,
    chain_decomposition,
    glue_D_along_subcollection,
    split_for_cover,
    verify_min_max_lifting,
)
from .gext import (
    ConstructionScript,
    ElevateStep,
    ElevationWitness,
    GExtension,
    GlueStep,
    ReplayReport,
    WrapOptions,
    decompose_to_point,
    elevate,
    gextension_step,
    m_count,
    reduce_dimension,
    replay,
    retract,
    wrap,
)
from .documents import (
    PosetDocument,
    emit_dot,
    emit_map,
    emit_poset,
    emit_poset_document,
    emit_script,
    parse_map,
    parse_poset,
    parse_poset_document,
    parse_script,
)
from .generate import all_posets_upto_iso, random_poset

__all__ = [name for name in dir() if not name.startswith("_")]
