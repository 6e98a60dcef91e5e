"""Grothendieck topologies, sheaves and site classification on finite
categories, by exhaustive computation."""

from .category import (
    FiniteCategory,
    Subcategory,
    connected_components,
    full_subcategory,
    has_right_ore,
    intersect_subcategories,
    is_cartesian,
    is_cauchy_complete,
    opposite,
    slice_category,
    subcategory,
    validate_category,
    whole_subcategory,
)
from .classify import (
    ComparisonFunctors,
    classify_report,
    comparison_functors,
    is_atomic_site,
    is_coherent_site,
    is_locally_connected_site,
    is_regular_site,
    is_rigid,
    j_irreducible_objects,
    presheaf_type_test,
    right_kan_extension,
    separating_set_check,
)
from .density import DensityVerdict, is_dense, topologies_with_dense
from .errors import (
    CategoryLawError,
    EmptyFamily,
    FinsiteError,
    InvalidSubcategory,
    NotASheaf,
    NotDense,
    ParseError,
    PresheafLawError,
    RightOreFails,
    SizeBoundExceeded,
    TopologyAxiomViolation,
    UnknownName,
    UnknownObject,
    WrongTopology,
)
from .objects import (
    is_atom,
    is_compact_object,
    is_indecomposable,
    is_indecomposable_projective,
    is_supercompact_object,
    rep_is_coherent,
    rep_is_compact,
    rep_is_irreducible,
    rep_is_regular,
    rep_is_supercompact,
    subobjects,
)
from .presheaf import (
    NatTransformation,
    Presheaf,
    are_isomorphic,
    presheaf_homs,
    presheaf_isos,
    random_presheaf,
    yoneda,
)
from .sheaf import (
    canonical_topology,
    classify_map,
    is_sheaf,
    is_subcanonical,
    matching_families,
    plus_construction,
    representable_sheaf,
    sheafify,
)
from .sieves import (
    Sieve,
    generate_sieve,
    is_right_closed,
    is_sieve_connected,
    pullback_sieve,
    sieves_on,
)
from .siteio import SiteFile, load_site, parse_site, save_site, serialize_site
from .topology import (
    GrothendieckTopology,
    TopologyLattice,
    atomic_topology,
    enumerate_topologies,
    generated_topology,
    induced_topology,
    is_topology,
    maximal_topology,
    topology,
    trivial_topology,
)

__version__ = "0.1.0"

__all__ = [
    "CategoryLawError",
    "ComparisonFunctors",
    "DensityVerdict",
    "EmptyFamily",
    "FiniteCategory",
    "FinsiteError",
    "GrothendieckTopology",
    "InvalidSubcategory",
    "NatTransformation",
    "NotASheaf",
    "NotDense",
    "ParseError",
    "Presheaf",
    "PresheafLawError",
    "RightOreFails",
    "Sieve",
    "SiteFile",
    "SizeBoundExceeded",
    "Subcategory",
    "TopologyAxiomViolation",
    "TopologyLattice",
    "UnknownName",
    "UnknownObject",
    "WrongTopology",
    "are_isomorphic",
    "atomic_topology",
    "canonical_topology",
    "classify_map",
    "classify_report",
    "comparison_functors",
    "connected_components",
    "enumerate_topologies",
    "full_subcategory",
    "generate_sieve",
    "generated_topology",
    "has_right_ore",
    "induced_topology",
    "intersect_subcategories",
    "is_atom",
    "is_atomic_site",
    "is_cartesian",
    "is_cauchy_complete",
    "is_coherent_site",
    "is_compact_object",
    "is_dense",
    "is_indecomposable",
    "is_indecomposable_projective",
    "is_locally_connected_site",
    "is_regular_site",
    "is_right_closed",
    "is_rigid",
    "is_sheaf",
    "is_sieve_connected",
    "is_subcanonical",
    "is_supercompact_object",
    "is_topology",
    "j_irreducible_objects",
    "load_site",
    "matching_families",
    "maximal_topology",
    "opposite",
    "parse_site",
    "plus_construction",
    "presheaf_homs",
    "presheaf_isos",
    "presheaf_type_test",
    "pullback_sieve",
    "random_presheaf",
    "rep_is_coherent",
    "rep_is_compact",
    "rep_is_irreducible",
    "rep_is_regular",
    "rep_is_supercompact",
    "representable_sheaf",
    "right_kan_extension",
    "save_site",
    "separating_set_check",
    "serialize_site",
    "sheafify",
    "sieves_on",
    "slice_category",
    "subcategory",
    "subobjects",
    "topologies_with_dense",
    "topology",
    "trivial_topology",
    "validate_category",
    "whole_subcategory",
    "yoneda",
]
