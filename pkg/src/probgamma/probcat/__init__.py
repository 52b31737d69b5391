"""Probabilistic pointed sets and the generic convex-combination category."""
from .pointed import (
    POINT,
    PointedMap,
    PointedSet,
    all_pointed_maps,
    compose_maps,
    constant_map,
    identity_map,
    smash,
    smash_maps,
    wedge,
    wedge_copair,
    wedge_inclusions,
    wedge_maps,
)
from .ps import (
    PSCoproduct,
    ProbMorphism,
    ProbPointedSet,
    canonical_family,
    compose_prob,
    copair_ps,
    copair_weight_table,
    coproduct_object,
    coproduct_ps,
    deterministic,
    embed_fp,
    forget,
    forget_morphism,
    from_zero,
    identity_prob,
    make_morphism,
    reaggregate,
    smash_ps,
    to_zero,
    zero_object,
)
from .wreath import (
    CategoryInterface,
    PCMorphism,
    PCObject,
    PointedSetCategory,
    TrivialCategory,
    WreathCategory,
    check_interface,
    pc_morphism_from_fp,
    pc_morphism_from_ps,
    pc_object_from_ps,
    wreath_pc,
)
