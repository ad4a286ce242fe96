"""Model structures, factorization systems and replacement pairs on finite posets."""

__version__ = "0.1.0"

from .brackets import (
    BracketPair,
    FactorizationBracket,
    ModelStructure,
    associated_pair,
    classify,
    enumerate_brackets,
    enumerate_brackets_naive,
    enumerate_model_structures,
    exists_ms_with_objects,
    exists_strong_ms_with_objects,
    is_bracket,
    is_bracket_pair,
    is_localization,
)
from .closure import (
    ClosureOperator,
    InteriorOperator,
    MooreFamily,
    closure_from_family,
    dual_interior,
    enumerate_moore_families,
    family_from_closure,
    inverted_class,
    is_geometry,
    is_matroid,
    is_topology,
)
from .constructions import (
    ConstructionResult,
    dz_model_structure,
    factor_with_classes,
    main_construction,
    semistatus,
    stanculescu_model_structure,
    strong_from_orthogonal,
)
from .errors import (
    BudgetExceededError,
    InternalConsistencyError,
    PosetModelError,
    PreconditionError,
    SizeLimitError,
    UnsupportedStructureError,
    ValidationError,
)
from .pairs import (
    ReplacementPair,
    enumerate_orthogonal_pairs,
    fs_to_comonad,
    fs_to_monad,
    is_center,
    is_compatible,
    is_orthogonal,
    is_strongly_compatible,
    monad_to_fs,
    powerset_strong_conditions,
)
from .poset import (
    FinitePoset,
    MorphismClass,
    RelPair,
    boolean_algebra,
    class_predicates,
    has_lifting,
    inj,
    proj,
    skeletonize,
)
from .quiver import (
    BousfieldQuiver,
    build_quiver,
    fs_distance_histogram,
    is_bousfield_colocalization,
    is_bousfield_localization,
    ms_distance_histogram,
    quiver_radius,
    transitive_reduction,
)
