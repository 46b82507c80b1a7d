"""Scattered trees as finite terms: end-space ranks, the structure every
self-embedding preserves, and equimorphy twins, with exhaustive oracles on
small finite trees."""

from .ordinals import (
    NotASuccessorError,
    Ordinal,
    OMEGA,
    ONE,
    ZERO,
    format_ordinal,
    parse_ordinal,
)
from .finite_trees import (
    EndoClassification,
    FiniteTree,
    RootedFiniteTree,
    TreeError,
    automorphisms,
    canonical_code,
    center,
    classify_automorphism,
    is_isomorphic,
    iter_automorphisms,
    path_tree,
    rooted_embeds,
    star_tree,
    unrooted_code,
)
from .terms import (
    BOX,
    Box,
    ComponentSeq,
    Context,
    Generated,
    NO,
    Patched,
    Periodic,
    Succ,
    Sup,
    SupSeq,
    Term,
    TermError,
    Truncation,
    UNKNOWN,
    WSum,
    YES,
    address_distance,
    builtins,
    embeds,
    equimorphic,
    expand_finite,
    format_term,
    height,
    is_rayless,
    join_address,
    level,
    parse_term,
    resolve,
    resolve_name,
    shift_seq,
    spine_address,
    stage,
    truncate,
    truncation_dot,
    truncation_json,
    vertex_count,
)
from .ranks import (
    MANY,
    RankSummary,
    RankUndecided,
    build_rank_witness,
    lim_member,
    rank_of_end_space,
    rank_summary,
)
from .ends import (
    OriginUndefined,
    ShiftReport,
    almost_rigid_path_aligned,
    origin_vertex,
    regular_components,
    shift_report,
)
from .stability import StabilityCertificate, classify, twin_cardinality
from .twins import (
    LabelledPath,
    Poset,
    almost_disjoint_family,
    analyze_lpath,
    displacements,
    enumerate_lpath_twins,
    format_lpath,
    least_shift_period,
    lpath_embeds,
    lpath_equimorphic,
    lpath_twin_count,
    parse_lpath,
    same_labelling,
    shift_feasible,
    twin_from_subset,
    twin_n,
    twin_prune_top,
    verify_twins,
)
from .oracle import (
    FREE_COUNTS,
    ROOTED_COUNTS,
    OracleError,
    cayley_identity,
    center_fixed_check,
    embed_cross_check,
    endo_classification_sweep,
    equimorphy_is_isomorphy,
    free_trees,
    naive_automorphisms,
    naive_rooted_embeds,
    prufer_cross_check,
    prufer_tree,
    rooted_trees,
    run_oracle,
    unrooted_embeds,
)

__version__ = "0.1.0"
