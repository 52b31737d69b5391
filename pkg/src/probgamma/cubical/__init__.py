"""Cubical sets with connections, nerves of finite categories, Euler characteristics."""
from .cset import (
    EulerReport,
    TruncatedCubicalSet,
    TruncationWarning,
    boundary,
    circle,
    degenerate_mask,
    discrete,
    euler_report,
    from_cells,
    generated_subcomplex,
    is_subcomplex,
    nondegenerate_count,
    quotient,
    reduced_euler,
    restrict,
    smash_cubical,
    sphere,
    standard_cube,
    truncate,
    validate_cubical,
)
from .cube import RelationInstance, relation_instances, word_vertex_map
from .export import export_complex, import_complex
from .nerve import (
    DEFAULT_BOUND,
    CubeFunctor,
    FiniteCategorySpec,
    FunctorSpec,
    brute_force_level_size,
    commutes_with_structure,
    cubical_nerve,
    discrete_category,
    nerve_levels,
    nerve_map,
    one_object_group,
    trivial_category,
)
from .prob import ProbCubicalSet, prob_cubical_ops
